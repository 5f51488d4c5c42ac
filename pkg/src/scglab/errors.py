"""Exception hierarchy shared by the whole package."""


class ScgLabError(Exception):
    """Base class for every error raised by scglab."""


class ParseError(ScgLabError, ValueError):
    """A text format could not be parsed."""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UndeclaredFeature(ParseError):
    def __init__(self, name, line=0):
        self.name = name
        super().__init__(line, f"undeclared feature {name!r}")


class EmptyCohort(ParseError):
    def __init__(self, line, reason="empty reading or cohort"):
        super().__init__(line, reason)


class UnknownToken(ScgLabError, LookupError):
    def __init__(self, token, position):
        self.token = token
        self.position = position
        super().__init__(f"no lexicon entry for {token!r} at position {position}")


class BoundExceededError(ScgLabError):
    """A derivation step would break one of the resource bounds."""

    def __init__(self, bound, site, detail=""):
        self.bound = bound
        self.site = site
        msg = f"{bound} bound exceeded at {site}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class InvalidMachine(ScgLabError, ValueError):
    """A Turing machine violates the tape contract statically."""


class CapacityExceeded(ScgLabError):
    """An automaton construction ran out of its state budget."""
