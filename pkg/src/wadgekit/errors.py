"""
Exception hierarchy shared by every wadgekit module
"""

from typing import Optional


class WadgeKitError(ValueError):
    """Base class for all input and validation errors raised by wadgekit"""


class ParseError(WadgeKitError):
    """Malformed automaton, acceptor or poset text"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidationError(WadgeKitError):
    """A structural invariant does not hold"""


class LabelingError(ValidationError):
    """Acceptor labeling does not match the cycle set"""


class SizeLimitError(WadgeKitError):
    """A configured size guard was exceeded"""
