from dataclasses import dataclass
from math import gcd
from typing import Dict, Any, Tuple

from src.models.error_model import (
    NotReduced, NotOneSidedSlope, NotTreeVertex, NotUnimodular, ZeroCurve
)

Curve = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class FareyVertex:
    """Reduced fraction p/q of the Farey graph, 1/0 included.

    The sign lives in the numerator; the only vertex with q = 0 is 1/0.
    Equality and hashing only look at (p, q), so a TreeVertex compares
    equal to the FareyVertex with the same coordinates.
    """
    p: int
    q: int

    def __post_init__(self):
        if self.p == 0 and self.q == 0:
            raise ZeroCurve("(0,0) is not a vertex")
        if gcd(self.p, self.q) != 1:
            raise NotReduced(f"{self.p}/{self.q} is not reduced")
        if self.q < 0 or (self.q == 0 and self.p != 1):
            raise NotReduced(f"{self.p}/{self.q} is not sign-normalized")

    @classmethod
    def of(cls, p: int, q: int):
        """Sign-normalize (p, q) ~ (-p, -q); anything non-coprime is rejected."""
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @property
    def coords(self) -> Curve:
        return self.p, self.q

    def sort_key(self) -> Tuple[int, int]:
        return self.q, self.p

    def mirror(self) -> 'FareyVertex':
        return type(self).of(-self.p, self.q)

    def __eq__(self, other):
        if not isinstance(other, FareyVertex):
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def to_dict(self) -> Dict[str, Any]:
        return {'p': self.p, 'q': self.q}


@dataclass(frozen=True, eq=False)
class TreeVertex(FareyVertex):
    """Vertex of the Moebius band tree: q odd and positive."""

    def __post_init__(self):
        super().__post_init__()
        if self.q % 2 == 0:
            raise NotTreeVertex(f"{self.p}/{self.q} has even denominator")

    @classmethod
    def from_farey(cls, vertex: FareyVertex) -> 'TreeVertex':
        if isinstance(vertex, TreeVertex):
            return vertex
        return cls(vertex.p, vertex.q)


ROOT = TreeVertex(0, 1)


@dataclass(frozen=True)
class BoundarySlope:
    """Slope (u, v) = (2p, q) of the boundary of a one-sided surface."""
    u: int
    v: int

    def __post_init__(self):
        if self.u == 0 and self.v == 0:
            raise ZeroCurve("(0,0) is not a slope")
        if gcd(self.u, self.v) != 1 or self.v <= 0:
            raise NotReduced(f"({self.u},{self.v}) is not a reduced slope")
        if self.u % 2 != 0:
            raise NotOneSidedSlope(
                f"({self.u},{self.v}) bounds an orientable surface",
                details="first coordinate must be even"
            )

    @property
    def coords(self) -> Curve:
        return self.u, self.v

    def __str__(self) -> str:
        return f"{self.u}/{self.v}"

    def to_dict(self) -> Dict[str, Any]:
        return {'u': self.u, 'v': self.v}


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer matrix [[a, b], [c, d]] with ad - bc = 1."""
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise NotUnimodular(
                f"[[{self.a},{self.b}],[{self.c},{self.d}]] has determinant "
                f"{self.a * self.d - self.b * self.c}"
            )

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @property
    def entries(self) -> Tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    @property
    def trace(self) -> int:
        return self.a + self.d

    def inverse(self):
        return type(self)(self.d, -self.b, -self.c, self.a)

    def __str__(self) -> str:
        return f"{self.a},{self.b};{self.c},{self.d}"

    def to_dict(self) -> Dict[str, Any]:
        return {'a': self.a, 'b': self.b, 'c': self.c, 'd': self.d}
