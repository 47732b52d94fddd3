import logging
from concurrent.futures import ProcessPoolExecutor
from math import gcd, isqrt
from typing import Dict, Any, Iterator, List, Optional, Tuple

from src.models.bundle_model import (
    DecisionMethod, DiscForm, DiscVerdict, Monodromy, MonodromyType, ScanReport,
    VerdictKind, canonical_pair, witness_key
)
from src.models.error_model import (
    BoundsTooLarge, CycleLimitExceeded, InvalidBounds, NotPrimitive, NotUnimodular
)
from src.models.slope_model import Curve, UnimodularMatrix
from src.services.slope_service import SlopeService
from src.utils.config import Config

Witness = Tuple[Curve, int]


def _rho(form: Tuple[int, int, int], disc: int, root: int) -> Tuple[Tuple[int, int, int], int]:
    """One reduction step (a, b, c) -> (c, b', (b'^2 - disc) / 4c) of an indefinite form.

    b' = -b + 2ct is the representative of -b mod 2|c| in (-|c|, |c|] when
    |c| > sqrt(disc) and in (sqrt(disc) - 2|c|, sqrt(disc)) otherwise.
    Returns the new form and t; the step is the substitution [[0, -1], [1, t]].
    """
    a, b, c = form
    modulus = 2 * abs(c)
    if c * c > disc:
        low = -abs(c)
    else:
        low = root - modulus
    # smallest value > low congruent to -b
    new_b = low + 1 + (-b - low - 1) % modulus
    t = (new_b + b) // (2 * c)
    return (c, new_b, (new_b * new_b - disc) // (4 * c)), t


def _is_reduced(form: Tuple[int, int, int], root: int) -> bool:
    """|sqrt(disc) - 2|a|| < b < sqrt(disc), in integers with root = isqrt(disc)."""
    a, b, _ = form
    return 0 < b <= root and root + 1 - b <= 2 * abs(a) <= root + b


def _scan_partition(a_values: List[int], entry_bound: int, config_values: Dict[str, Any]) -> Tuple[int, int, int, int, List[Monodromy]]:
    service = BundleDiscService(Config(overrides=config_values))
    return service._scan_counts(a_values, entry_bound)


class BundleDiscService:
    """Quadrilateral discs for fibres of once-punctured torus bundles."""

    def __init__(self, config: Optional[Config] = None, slope_service: Optional[SlopeService] = None):
        self.config = config or Config()
        self.slope_service = slope_service or SlopeService(self.config)
        self.logger = self._setup_logger()

    def _setup_logger(self):
        logger = logging.getLogger('BundleDiscService')
        return logger

    def _as_monodromy(self, matrix: UnimodularMatrix) -> Monodromy:
        if matrix.a * matrix.d - matrix.b * matrix.c != 1:
            raise NotUnimodular(f"{matrix} is not in SL(2,Z)")
        if isinstance(matrix, Monodromy):
            return matrix
        return Monodromy.from_matrix(matrix)

    def disc_value(self, monodromy: UnimodularMatrix, x: int, y: int) -> int:
        if (x == 0 and y == 0) or gcd(x, y) != 1:
            raise NotPrimitive(f"({x},{y}) is not a primitive class")
        checked = self.slope_service.checked
        image_x, image_y = self.slope_service.apply_matrix(monodromy, (x, y))
        return checked(checked(image_x * y) - checked(image_y * x))

    def form_of(self, monodromy: UnimodularMatrix) -> DiscForm:
        m = self._as_monodromy(monodromy)
        A, B, C = -m.c, m.a - m.d, m.b
        return DiscForm(A=A, B=B, C=C, disc=B * B - 4 * A * C)

    def classify_monodromy(self, monodromy: UnimodularMatrix) -> MonodromyType:
        trace = abs(self._as_monodromy(monodromy).trace)
        if trace < 2:
            return MonodromyType.ELLIPTIC
        if trace == 2:
            return MonodromyType.PARABOLIC
        return MonodromyType.HYPERBOLIC

    def no_disc_criterion(self, monodromy: UnimodularMatrix) -> bool:
        """
        Parity criterion: A = I mod 2 and |trace| != 2 leave no disc
        """
        m = self._as_monodromy(monodromy)
        congruent_to_identity = m.a % 2 == 1 and m.d % 2 == 1 and m.b % 2 == 0 and m.c % 2 == 0
        return congruent_to_identity and abs(m.trace) != 2

    def brute_search(self, monodromy: UnimodularMatrix, height: int) -> Optional[Witness]:
        """Smallest canonical witness with max(|x|, |y|) <= height, by (height, y, x).

        Each row y is solved exactly: A x^2 + (B y) x + (C y^2 - k) = 0 for
        k in {-1, 0, 1}, instead of evaluating every pair in the row.
        """
        if height < 1:
            raise InvalidBounds(f"Search height must be positive, got {height}")
        form = self.form_of(monodromy)
        A, B, C = form.A, form.B, form.C
        # y = 0 leaves only (1, 0), which has the smallest key of all
        if A in (-1, 0, 1):
            return (1, 0), A

        candidates = []
        for y in range(1, height + 1):
            for k in (-1, 0, 1):
                linear, constant = B * y, C * y * y - k
                discriminant = linear * linear - 4 * A * constant
                if discriminant < 0:
                    continue
                root = isqrt(discriminant)
                if root * root != discriminant:
                    continue
                for numerator in {-linear + root, -linear - root}:
                    if numerator % (2 * A):
                        continue
                    x = numerator // (2 * A)
                    if abs(x) <= height and gcd(x, y) == 1:
                        candidates.append(((x, y), k))
        if not candidates:
            return None
        return min(candidates, key=lambda c: witness_key(c[0]))

    def decide(self, monodromy: UnimodularMatrix) -> DiscVerdict:
        """
        Exact decision of the quadrilateral disc for a monodromy, with the method that settled it
        """
        m = self._as_monodromy(monodromy)
        trace = m.trace

        if abs(trace) == 2:
            witness = self._eigenvector(m)
            return self._exists(m, witness, DecisionMethod.EIGENVECTOR)

        if abs(trace) <= 1:
            witness = self._definite_witness(m)
            if witness is None:
                return DiscVerdict(kind=VerdictKind.NOT_EXISTS, method=DecisionMethod.DEFINITE_ENUMERATION)
            return self._exists(m, witness, DecisionMethod.DEFINITE_ENUMERATION)

        # |trace| >= 3: disc = t^2 - 4 is positive and not a square, so 0 is never a value
        if self.no_disc_criterion(m):
            return DiscVerdict(kind=VerdictKind.NOT_EXISTS, method=DecisionMethod.PARITY)
        witness = self._river_witness(m)
        if witness is None:
            return DiscVerdict(kind=VerdictKind.NOT_EXISTS, method=DecisionMethod.RIVER_CYCLE)
        return self._exists(m, witness, DecisionMethod.RIVER_CYCLE)

    def decide_by_search(self, monodromy: UnimodularMatrix, height: int) -> DiscVerdict:
        """Height-limited verdict: Exists from a brute-force witness, Unknown otherwise."""
        found = self.brute_search(monodromy, height)
        if found is None:
            return DiscVerdict(kind=VerdictKind.UNKNOWN, method=DecisionMethod.BRUTE_FORCE,
                               search_height=height)
        (x, y), value = found
        return DiscVerdict(kind=VerdictKind.EXISTS, method=DecisionMethod.BRUTE_FORCE,
                           witness=(x, y), value=value, search_height=height)

    def _exists(self, m: Monodromy, witness: Curve, method: DecisionMethod) -> DiscVerdict:
        x, y = canonical_pair(*witness)
        value = self.disc_value(m, x, y)
        self.logger.debug(f"✅ {m}: witness ({x},{y}) with value {value} via {method.value}")
        return DiscVerdict(kind=VerdictKind.EXISTS, method=method, witness=(x, y), value=value)

    def _eigenvector(self, m: Monodromy) -> Curve:
        """Primitive eigenvector for the eigenvalue t/2 = +-1."""
        if m.b == 0 and m.c == 0 and m.a == m.d:
            # +-identity: every vector is an eigenvector
            return 1, 0
        eigenvalue = m.trace // 2
        rows = [(m.a - eigenvalue, m.b), (m.c, m.d - eigenvalue)]
        r1, r2 = next(row for row in rows if row != (0, 0))
        g = gcd(r1, r2)
        return r2 // g, -r1 // g

    def _definite_witness(self, m: Monodromy) -> Optional[Curve]:
        """Canonical pair of smallest key with |form| = 1; the region |form| <= 1 is bounded.

        From 4A f = (2Ax + By)^2 - disc y^2: |f| <= 1 forces |disc| y^2 <= 4|A|,
        and symmetrically |disc| x^2 <= 4|C|.
        """
        form = self.form_of(m)
        size = -form.disc
        y_max = isqrt(4 * abs(form.A) // size)
        x_max = isqrt(4 * abs(form.C) // size)
        candidates = []
        for y in range(0, y_max + 1):
            for x in range(-x_max, x_max + 1):
                if (x, y) == (0, 0) or gcd(x, y) != 1 or canonical_pair(x, y) != (x, y):
                    continue
                if abs(form(x, y)) <= 1:
                    candidates.append((x, y))
        if not candidates:
            return None
        return min(candidates, key=witness_key)

    def river_cycle(self, monodromy: UnimodularMatrix) -> Iterator[Tuple[Tuple[int, int, int], UnimodularMatrix]]:
        """Walk of equivalent forms: reduction first, then one full period of the reduced cycle.

        Yields (form, T) with form = f o T; the walk stops when the first
        reduced form comes round again.
        """
        form = self.form_of(monodromy)
        disc = form.disc
        if disc <= 0 or isqrt(disc) ** 2 == disc:
            raise ValueError(f"The river needs a positive non-square discriminant, got {disc}")
        root = isqrt(disc)
        limit = self.config.RIVER_STEP_LIMIT
        current = (form.A, form.B, form.C)
        transform = UnimodularMatrix.identity()
        start = None
        for step in range(limit):
            yield current, transform
            if start is None and _is_reduced(current, root):
                start = current
            current, t = _rho(current, disc, root)
            transform = self.slope_service.compose(transform, UnimodularMatrix(0, -1, 1, t))
            if current == start:
                self.logger.debug(f"🌊 River of {form} closed after {step + 1} steps")
                return
        raise CycleLimitExceeded(f"River of {form} did not close within {limit} steps")

    def _river_witness(self, m: Monodromy) -> Optional[Curve]:
        """Values +-1 of an indefinite form with disc > 4 show up as leading coefficients on the cycle."""
        for (a, _, c), transform in self.river_cycle(m):
            if a in (-1, 1):
                return transform.a, transform.c
            if c in (-1, 1):
                return transform.b, transform.d
        return None

    def conjugate(self, monodromy: UnimodularMatrix, conjugator: UnimodularMatrix) -> Monodromy:
        m = self._as_monodromy(monodromy)
        if conjugator.a * conjugator.d - conjugator.b * conjugator.c != 1:
            raise NotUnimodular(f"{conjugator} is not in SL(2,Z)")
        compose = self.slope_service.compose
        return Monodromy.from_matrix(compose(compose(conjugator, m), conjugator.inverse()))

    def enumerate_matrices(self, entry_bound: int, a_values: Optional[List[int]] = None) -> Iterator[Monodromy]:
        """All det-1 matrices with entries in [-bound, bound], in (a, b, c, d) order."""
        if a_values is None:
            a_values = list(range(-entry_bound, entry_bound + 1))
        span = range(-entry_bound, entry_bound + 1)
        for a in a_values:
            for b in span:
                for c in span:
                    if a == 0:
                        if b * c == -1:
                            for d in span:
                                yield Monodromy(a, b, c, d)
                        continue
                    if (1 + b * c) % a == 0 and abs((1 + b * c) // a) <= entry_bound:
                        yield Monodromy(a, b, c, (1 + b * c) // a)

    def _scan_counts(self, a_values: List[int], entry_bound: int) -> Tuple[int, int, int, int, List[Monodromy]]:
        total = exists = not_exists = criterion = 0
        disagreements = []
        for m in self.enumerate_matrices(entry_bound, a_values):
            verdict = self.decide(m)
            flagged = self.no_disc_criterion(m)
            total += 1
            if verdict.kind == VerdictKind.EXISTS:
                exists += 1
            else:
                not_exists += 1
            if flagged:
                criterion += 1
                if verdict.kind != VerdictKind.NOT_EXISTS:
                    disagreements.append(m)
        return total, exists, not_exists, criterion, disagreements

    def scan_matrices(self, entry_bound: int) -> ScanReport:
        """
        Decides every det-1 matrix up to the entry bound and compares with the parity criterion
        """
        if entry_bound < 1:
            raise InvalidBounds(f"Entry bound must be positive, got {entry_bound}")
        if entry_bound > self.config.MAX_SCAN_ENTRY_BOUND:
            raise BoundsTooLarge(
                f"Entry bound {entry_bound} exceeds {self.config.MAX_SCAN_ENTRY_BOUND}"
            )
        a_values = list(range(-entry_bound, entry_bound + 1))
        workers = min(self.config.SCAN_WORKERS, len(a_values))
        self.logger.info(f"📦 Scanning det-1 matrices with entries up to {entry_bound} ({workers} worker(s))")

        if workers == 1:
            parts = [self._scan_counts(a_values, entry_bound)]
        else:
            chunks = [a_values[i::workers] for i in range(workers)]
            overrides = {'LOG_LEVEL': self.config.LOG_LEVEL, 'INT_WIDTH': self.config.INT_WIDTH,
                         'RIVER_STEP_LIMIT': self.config.RIVER_STEP_LIMIT}
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_scan_partition, chunks,
                                      [entry_bound] * workers, [overrides] * workers))

        disagreements = sorted((m for part in parts for m in part[4]), key=lambda m: m.entries)
        report = ScanReport(
            entry_bound=entry_bound,
            total=sum(part[0] for part in parts),
            exists_count=sum(part[1] for part in parts),
            not_exists_count=sum(part[2] for part in parts),
            criterion_count=sum(part[3] for part in parts),
            disagreements=tuple(disagreements)
        )
        if report.disagreements:
            self.logger.warning(f"⚠️ Criterion disagrees with the decision on {len(disagreements)} matrices")
        self.logger.info(f"🎯 Scan finished: {report.total} matrices, {report.exists_count} with discs")
        return report
