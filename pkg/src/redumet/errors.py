"""Exception types raised by redumet."""


class RedumetError(Exception):
    """Base class for all errors raised by this package."""


class LineCountMismatch(RedumetError):
    def __init__(self, counts):
        self.counts = dict(counts)
        detail = ", ".join(f"{path}: {n}" for path, n in self.counts.items())
        super().__init__(f"parallel files differ in line count ({detail})")


class ParseError(RedumetError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class FormatError(ParseError):
    """Malformed embedding file."""


class InvariantViolation(RedumetError):
    pass


class DuplicateToken(RedumetError):
    def __init__(self, token, line=None):
        self.token = token
        self.line = line
        at = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate token {token!r}{at}")


class NoEligibleSite(RedumetError):
    pass


class UnknownSentenceId(RedumetError):
    def __init__(self, sentence_id):
        self.sentence_id = sentence_id
        super().__init__(f"gold annotation references unknown sentence id {sentence_id}")


class EmptyUniverse(RedumetError):
    pass
