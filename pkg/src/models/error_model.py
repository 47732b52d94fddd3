from dataclasses import dataclass
from typing import Optional, Dict, Any


class MoebiusError(ValueError):
    """Base class for every domain error raised by the services."""

    code = "MOEBIUS_ERROR"

    def __init__(self, message: str, details: Optional[str] = None):
        super().__init__(message)
        self.details = details


class ZeroCurve(MoebiusError):
    code = "ZERO_CURVE"


class NotReduced(MoebiusError):
    code = "NOT_REDUCED"


class NotOneSidedSlope(MoebiusError):
    code = "NOT_ONE_SIDED_SLOPE"


class NotTreeVertex(MoebiusError):
    code = "NOT_TREE_VERTEX"


class NoParents(MoebiusError):
    code = "NO_PARENTS"


class RootHasNoParent(MoebiusError):
    code = "ROOT_HAS_NO_PARENT"


class BoundaryIncompressible(MoebiusError):
    code = "BOUNDARY_INCOMPRESSIBLE"


class NotZ2Compatible(MoebiusError):
    code = "NOT_Z2_COMPATIBLE"


class NotPrimitive(MoebiusError):
    code = "NOT_PRIMITIVE"


class NotUnimodular(MoebiusError):
    code = "NOT_UNIMODULAR"


class InvalidBounds(MoebiusError):
    code = "INVALID_BOUNDS"


class BoundsTooLarge(MoebiusError):
    code = "BOUNDS_TOO_LARGE"


class IntegerOverflow(MoebiusError):
    code = "INTEGER_OVERFLOW"


class CycleLimitExceeded(MoebiusError):
    code = "CYCLE_LIMIT_EXCEEDED"


class ParseError(MoebiusError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(message, details=f"{text!r} at position {position}")
        self.text = text
        self.position = position


class ConfigError(MoebiusError):
    code = "CONFIG_ERROR"


@dataclass
class ErrorResponse:
    error: str
    code: str
    details: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'error': self.error,
            'code': self.code,
            'details': self.details
        }

    @classmethod
    def from_exception(cls, exception: Exception):
        return cls(
            error=str(exception),
            code=getattr(exception, 'code', exception.__class__.__name__),
            details=getattr(exception, 'details', None)
        )
