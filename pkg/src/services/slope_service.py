import logging
from math import gcd
from typing import Optional, Tuple

from src.models.error_model import (
    IntegerOverflow, NoParents, NotOneSidedSlope, NotReduced, NotTreeVertex,
    ParseError, ZeroCurve
)
from src.models.slope_model import (
    BoundarySlope, Curve, FareyVertex, TreeVertex, UnimodularMatrix
)
from src.utils.config import Config


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def mod_inverse(a: int, m: int) -> int:
    g, x, _ = xgcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return x % m


class SlopeService:
    """Exact integer primitives on slopes, Farey vertices and SL(2,Z)."""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.logger = self._setup_logger()
        self._limit = 1 << (self.config.INT_WIDTH - 1) if self.config.is_checked_backend() else None

    def _setup_logger(self):
        logger = logging.getLogger('SlopeService')
        return logger

    def checked(self, value: int) -> int:
        if self._limit is not None and not -self._limit <= value < self._limit:
            raise IntegerOverflow(
                f"{value} does not fit in a signed {self.config.INT_WIDTH}-bit integer"
            )
        return value

    def _require_curve(self, curve: Curve) -> Curve:
        x, y = curve
        if x == 0 and y == 0:
            raise ZeroCurve("(0,0) is not a curve")
        if gcd(x, y) != 1:
            raise NotReduced(f"({x},{y}) is not primitive")
        return x, y

    def reduce_slope(self, u: int, v: int) -> BoundarySlope:
        if u == 0 and v == 0:
            raise ZeroCurve("(0,0) is not a slope")
        g = gcd(u, v)
        u, v = u // g, v // g
        if v < 0 or (v == 0 and u < 0):
            u, v = -u, -v
        if u % 2 != 0:
            raise NotOneSidedSlope(
                f"({u},{v}) bounds a two-sided surface",
                details="reduced first coordinate is odd"
            )
        return BoundarySlope(u, v)

    def vertex_of_slope(self, slope: BoundarySlope) -> TreeVertex:
        return TreeVertex(slope.u // 2, slope.v)

    def slope_of_vertex(self, vertex: FareyVertex) -> BoundarySlope:
        vertex = self.as_tree_vertex(vertex)
        return BoundarySlope(self.checked(2 * vertex.p), vertex.q)

    def as_tree_vertex(self, vertex: FareyVertex) -> TreeVertex:
        if not self.is_tree_vertex(vertex.p, vertex.q):
            raise NotTreeVertex(f"{vertex} is not a vertex of the Moebius band tree")
        return TreeVertex.from_farey(vertex)

    def det(self, x: FareyVertex, y: FareyVertex) -> int:
        return self.checked(self.checked(x.p * y.q) - self.checked(y.p * x.q))

    def intersection_number(self, s1: BoundarySlope, s2: BoundarySlope) -> int:
        return abs(self.checked(self.checked(s1.u * s2.v) - self.checked(s2.u * s1.v)))

    def is_tree_vertex(self, p: int, q: int) -> bool:
        if q < 0:
            p, q = -p, -q
        return q % 2 == 1 and gcd(p, q) == 1

    def farey_parents(self, vertex: FareyVertex) -> Tuple[FareyVertex, FareyVertex]:
        """Vertices of the largest ideal triangle containing the vertex, left one first."""
        p, q = vertex.p, vertex.q
        if q == 0 or p == 0:
            raise NoParents(f"{vertex} is a Stern-Brocot root and has no parents")
        if p < 0:
            left, right = self.farey_parents(FareyVertex(-p, q))
            return left.mirror(), right.mirror()
        if q == 1:
            return FareyVertex(p - 1, 1), FareyVertex(1, 0)
        b = mod_inverse(p, q)
        a = (p * b - 1) // q
        return FareyVertex(a, b), FareyVertex(p - a, q - b)

    def apply_matrix(self, matrix: UnimodularMatrix, curve: Curve) -> Curve:
        x, y = self._require_curve(curve)
        return (
            self.checked(self.checked(matrix.a * x) + self.checked(matrix.b * y)),
            self.checked(self.checked(matrix.c * x) + self.checked(matrix.d * y)),
        )

    def compose(self, first: UnimodularMatrix, second: UnimodularMatrix) -> UnimodularMatrix:
        """Matrix product first * second."""
        a, b, c, d = first.entries
        e, f, g, h = second.entries
        return type(first)(
            self.checked(a * e + b * g), self.checked(a * f + b * h),
            self.checked(c * e + d * g), self.checked(c * f + d * h),
        )

    def matrix_sending_to_meridian(self, curve: Curve) -> UnimodularMatrix:
        """M with det 1 and M * curve = (0, 1); second row chosen with -|x| < d <= 0."""
        x, y = self._require_curve(curve)
        if x == 0:
            return UnimodularMatrix(y, 0, 0, y)
        m = abs(x)
        d = mod_inverse(y, m) - m if m > 1 else 0
        c = (1 - d * y) // x
        return UnimodularMatrix(y, -x, c, d)

    def vertex_from_word(self, word: str) -> FareyVertex:
        """Stern-Brocot descent from 1/1 along a word over {L, R}."""
        left, right = (0, 1), (1, 0)
        node = (1, 1)
        for position, step in enumerate(word.strip().upper()):
            if step == 'L':
                right = node
            elif step == 'R':
                left = node
            else:
                raise ParseError(f"Unexpected step {step!r} in Stern-Brocot word", word, position)
            node = (left[0] + right[0], left[1] + right[1])
        return FareyVertex(*node)

    def stern_brocot_word(self, vertex: FareyVertex) -> str:
        p, q = vertex.p, vertex.q
        if p <= 0 or q <= 0:
            raise NotReduced(f"{vertex} is not a positive fraction")
        runs = []
        while p != q:
            if p < q:
                k = (q - 1) // p
                runs.append('L' * k)
                q -= k * p
            else:
                k = (p - 1) // q
                runs.append('R' * k)
                p -= k * q
        return ''.join(runs)
