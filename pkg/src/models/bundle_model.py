from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Dict, Any, Optional, Tuple

from src.models.slope_model import Curve, UnimodularMatrix


@dataclass(frozen=True)
class Monodromy(UnimodularMatrix):
    """Action of the bundle monodromy on the first homology of the fibre."""

    @classmethod
    def from_matrix(cls, matrix: UnimodularMatrix) -> 'Monodromy':
        return cls(*matrix.entries)


class MonodromyType(Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


class VerdictKind(Enum):
    EXISTS = "Exists"
    NOT_EXISTS = "NotExists"
    UNKNOWN = "Unknown"


class DecisionMethod(Enum):
    BRUTE_FORCE = "BruteForce"
    EIGENVECTOR = "Eigenvector"
    PARITY = "Parity"
    DEFINITE_ENUMERATION = "DefiniteEnumeration"
    RIVER_CYCLE = "RiverCycle"


def canonical_pair(x: int, y: int) -> Curve:
    """Representative of +-(x, y) with y > 0, or y = 0 and x > 0."""
    if y < 0 or (y == 0 and x < 0):
        return -x, -y
    return x, y


def witness_key(pair: Curve) -> Tuple[int, int, int]:
    """Order on canonical witnesses: height first, then (y, x)."""
    x, y = pair
    return max(abs(x), abs(y)), y, x


@dataclass(frozen=True)
class DiscForm:
    """Binary quadratic form A x^2 + B xy + C y^2 with discriminant disc."""
    A: int
    B: int
    C: int
    disc: int

    def __post_init__(self):
        if self.disc != self.B * self.B - 4 * self.A * self.C:
            raise ValueError(f"Inconsistent discriminant {self.disc}")

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    @property
    def is_zero(self) -> bool:
        return self.A == 0 and self.B == 0 and self.C == 0

    def __str__(self) -> str:
        return f"{self.A}x^2 + {self.B}xy + {self.C}y^2"

    def to_dict(self) -> Dict[str, Any]:
        return {'A': self.A, 'B': self.B, 'C': self.C, 'disc': self.disc}


@dataclass(frozen=True)
class DiscVerdict:
    kind: VerdictKind
    method: DecisionMethod
    witness: Optional[Curve] = None
    value: Optional[int] = None
    search_height: Optional[int] = None

    def __post_init__(self):
        if self.kind == VerdictKind.EXISTS:
            if self.witness is None or self.value not in (-1, 0, 1):
                raise ValueError("An Exists verdict needs a witness with value in {-1, 0, 1}")
            x, y = self.witness
            if gcd(x, y) != 1 or canonical_pair(x, y) != (x, y):
                raise ValueError(f"Witness {self.witness} is not a canonical primitive pair")
        elif self.witness is not None:
            raise ValueError(f"{self.kind.value} verdicts carry no witness")
        if self.kind == VerdictKind.UNKNOWN and self.search_height is None:
            raise ValueError("An Unknown verdict records the search height")

    @property
    def exists(self) -> bool:
        return self.kind == VerdictKind.EXISTS

    def __str__(self) -> str:
        if self.kind == VerdictKind.EXISTS:
            x, y = self.witness
            return f"{self.kind.value} ({self.method.value}): witness ({x},{y}), value {self.value}"
        if self.kind == VerdictKind.UNKNOWN:
            return f"{self.kind.value} ({self.method.value}): nothing up to height {self.search_height}"
        return f"{self.kind.value} ({self.method.value})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'method': self.method.value,
            'witness': list(self.witness) if self.witness else None,
            'value': self.value,
            'search_height': self.search_height
        }


@dataclass(frozen=True)
class ScanReport:
    entry_bound: int
    total: int
    exists_count: int
    not_exists_count: int
    criterion_count: int
    disagreements: Tuple[Monodromy, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'entry_bound': self.entry_bound,
            'total': self.total,
            'exists_count': self.exists_count,
            'not_exists_count': self.not_exists_count,
            'criterion_count': self.criterion_count,
            'disagreements': [str(m) for m in self.disagreements]
        }
