"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class ScvError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(ScvError, ValueError):
    pass


class UnsupportedError(ScvError):
    """No closed form is available for the requested (domain, point) configuration."""


class DivergentError(ScvError):
    """An integral that should be finite diverges (e.g. monomial moments on unbounded models)."""


class OutsideDomainError(ScvError, ValueError):
    pass


class ParseError(ScvError, ValueError):
    """Malformed CLI input; ``position`` is the 0-based offset of the offending character."""

    def __init__(self, message: str, text: str | None = None, position: int = 0):
        self.text = text
        self.position = position
        if text is not None:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)
