import pytest
from hypothesis import given, settings, strategies as st

from src.models.bundle_model import (
    DecisionMethod, DiscForm, DiscVerdict, Monodromy, MonodromyType, VerdictKind
)
from src.models.error_model import (
    BoundsTooLarge, CycleLimitExceeded, InvalidBounds, NotPrimitive
)
from src.models.slope_model import UnimodularMatrix
from src.services.bundle_service import BundleDiscService
from src.utils.config import Config

_BUNDLE = BundleDiscService(Config(overrides={'LOG_LEVEL': 'WARNING'}))
_UP_TO_TEN = list(_BUNDLE.enumerate_matrices(10))


def _level_two_matrices(max_length):
    """Products of reduced words in the generators of the level-2 congruence subgroup, with both signs."""
    generators = {'a': Monodromy(1, 2, 0, 1), 'A': Monodromy(1, -2, 0, 1),
                  'b': Monodromy(1, 0, 2, 1), 'B': Monodromy(1, 0, -2, 1)}
    frontier = [('', Monodromy(1, 0, 0, 1))]
    found = []
    for _ in range(max_length):
        frontier = [
            (word + letter, _BUNDLE.slope_service.compose(matrix, generators[letter]))
            for word, matrix in frontier for letter in generators
            if not word or word[-1] != letter.swapcase()
        ]
        found.extend(matrix for _, matrix in frontier)
    return found + [Monodromy(*(-e for e in matrix.entries)) for matrix in found]


_LEVEL_TWO = _level_two_matrices(6)


def m(a, b, c, d):
    return Monodromy(a, b, c, d)


def test_disc_value_examples(bundle_service):
    assert bundle_service.disc_value(m(2, 1, 1, 1), 1, 0) == -1
    assert bundle_service.disc_value(m(3, 2, 4, 3), 1, 1) == -2
    for x, y in [(1, 0), (0, 1), (3, -7), (-5, 2)]:
        assert bundle_service.disc_value(m(1, 0, 0, 1), x, y) == 0
    with pytest.raises(NotPrimitive):
        bundle_service.disc_value(m(1, 0, 0, 1), 2, 4)
    with pytest.raises(NotPrimitive):
        bundle_service.disc_value(m(1, 0, 0, 1), 0, 0)


def test_form_of(bundle_service):
    assert bundle_service.form_of(m(3, 2, 4, 3)) == DiscForm(-4, 0, 2, 32)
    assert bundle_service.form_of(m(1, 0, 0, 1)).is_zero
    assert bundle_service.form_of(m(2, 1, 1, 1)) == DiscForm(-1, 1, 1, 5)


@pytest.mark.parametrize("matrix", [m(2, 1, 1, 1), m(3, 2, 4, 3), m(0, -1, 1, 0), m(5, 3, 3, 2)])
def test_form_matches_disc_value(bundle_service, matrix):
    form = bundle_service.form_of(matrix)
    assert form.disc == matrix.trace ** 2 - 4
    for x, y in [(1, 0), (0, 1), (2, 3), (-3, 5), (7, -4)]:
        assert form(x, y) == bundle_service.disc_value(matrix, x, y)
        assert bundle_service.disc_value(matrix, -x, -y) == bundle_service.disc_value(matrix, x, y)


def test_classify_monodromy(bundle_service):
    assert bundle_service.classify_monodromy(m(0, -1, 1, 0)) == MonodromyType.ELLIPTIC
    assert bundle_service.classify_monodromy(m(-1, 1, 0, -1)) == MonodromyType.PARABOLIC
    assert bundle_service.classify_monodromy(m(2, 1, 1, 1)) == MonodromyType.HYPERBOLIC


def test_brute_search_examples(bundle_service):
    assert bundle_service.brute_search(m(2, 1, 1, 1), 1) == ((1, 0), -1)
    assert bundle_service.brute_search(m(3, 2, 4, 3), 1000) is None
    assert bundle_service.brute_search(m(1, 1, 0, 1), 1) == ((1, 0), 0)
    with pytest.raises(InvalidBounds):
        bundle_service.brute_search(m(1, 0, 0, 1), 0)


def test_brute_search_returns_smallest_canonical_witness(bundle_service):
    # form -2x^2 - 2xy + y^2 is 1 at (0, 1) and at (-1, 1); the smaller key wins
    found = bundle_service.brute_search(m(1, 1, 2, 3), 10)
    assert found == ((-1, 1), 1)


def test_no_disc_criterion(bundle_service):
    assert bundle_service.no_disc_criterion(m(3, 2, 4, 3))
    assert not bundle_service.no_disc_criterion(m(2, 1, 1, 1))
    assert not bundle_service.no_disc_criterion(m(-1, 0, 0, -1))
    assert not bundle_service.no_disc_criterion(m(1, 0, 0, 1))


def test_decide_examples(bundle_service):
    rotation = bundle_service.decide(m(0, -1, 1, 0))
    assert rotation == DiscVerdict(VerdictKind.EXISTS, DecisionMethod.DEFINITE_ENUMERATION, (1, 0), -1)

    parity = bundle_service.decide(m(3, 2, 4, 3))
    assert parity.kind == VerdictKind.NOT_EXISTS
    assert parity.method == DecisionMethod.PARITY

    cat_map = bundle_service.decide(m(2, 1, 1, 1))
    assert cat_map.kind == VerdictKind.EXISTS
    assert cat_map.witness == (1, 0)
    assert cat_map.value == -1

    minus_identity = bundle_service.decide(m(-1, 0, 0, -1))
    assert minus_identity.kind == VerdictKind.EXISTS
    assert minus_identity.method == DecisionMethod.EIGENVECTOR
    assert minus_identity.value == 0


def test_decide_river_without_witness(bundle_service):
    # form -3x^2 + 3xy + 3y^2 only takes multiples of 3
    verdict = bundle_service.decide(m(5, 3, 3, 2))
    assert verdict.kind == VerdictKind.NOT_EXISTS
    assert verdict.method == DecisionMethod.RIVER_CYCLE


@pytest.mark.parametrize("matrix", [m(1, 1, 0, 1), m(-1, 1, 0, -1), m(3, -4, 1, -1), m(-3, 4, -1, 1)])
def test_eigenvector_gives_zero(bundle_service, matrix):
    verdict = bundle_service.decide(matrix)
    assert verdict.method == DecisionMethod.EIGENVECTOR
    assert verdict.value == 0
    x, y = verdict.witness
    image = bundle_service.slope_service.apply_matrix(matrix, (x, y))
    assert image in ((x, y), (-x, -y))


def test_river_cycle_terminates_with_consistent_transforms(bundle_service):
    for matrix in [m(2, 1, 1, 1), m(5, 3, 3, 2), m(4, 7, 1, 2)]:
        form = bundle_service.form_of(matrix)
        walk = list(bundle_service.river_cycle(matrix))
        assert walk
        for (a, b, c), transform in walk:
            assert b * b - 4 * a * c == form.disc
            assert form(transform.a, transform.c) == a
            assert form(transform.b, transform.d) == c


def test_river_cycle_step_limit():
    bundle = BundleDiscService(Config(overrides={'RIVER_STEP_LIMIT': 1, 'LOG_LEVEL': 'WARNING'}))
    with pytest.raises(CycleLimitExceeded):
        bundle.decide(m(5, 3, 3, 2))


def test_decide_agrees_with_brute_force_up_to_five(bundle_service):
    matrices = list(bundle_service.enumerate_matrices(5))
    assert len(matrices) > 300
    for matrix in matrices:
        verdict = bundle_service.decide(matrix)
        assert verdict.kind != VerdictKind.UNKNOWN
        assert verdict.exists == (bundle_service.brute_search(matrix, 50) is not None), matrix
        if verdict.exists:
            x, y = verdict.witness
            assert bundle_service.disc_value(matrix, x, y) in (-1, 0, 1)


def test_parity_criterion_up_to_seven(bundle_service):
    flagged = [matrix for matrix in bundle_service.enumerate_matrices(7)
               if bundle_service.no_disc_criterion(matrix)]
    assert m(3, 2, 4, 3) in flagged
    for matrix in flagged:
        assert bundle_service.decide(matrix).kind == VerdictKind.NOT_EXISTS
        assert bundle_service.brute_search(matrix, 1000) is None


def test_criterion_holds_on_level_two_matrices():
    flagged = [matrix for matrix in _LEVEL_TWO if _BUNDLE.no_disc_criterion(matrix)]
    assert len(flagged) >= 1000
    for matrix in flagged:
        assert [e % 2 for e in matrix.entries] == [1, 0, 0, 1]
        assert _BUNDLE.decide(matrix).kind == VerdictKind.NOT_EXISTS, matrix
        assert _BUNDLE.brute_search(matrix, 200) is None, matrix


def test_conjugate(bundle_service):
    cat_map = m(2, 1, 1, 1)
    assert bundle_service.conjugate(cat_map, UnimodularMatrix.identity()) == cat_map
    assert bundle_service.conjugate(cat_map, UnimodularMatrix(1, 1, 0, 1)) == m(3, -1, 1, 0)


@settings(max_examples=500, deadline=None)
@given(st.sampled_from(_UP_TO_TEN), st.sampled_from(_UP_TO_TEN))
def test_decision_is_conjugacy_invariant(matrix, conjugator):
    conjugated = _BUNDLE.conjugate(matrix, conjugator)
    assert conjugated.trace == matrix.trace
    assert _BUNDLE.decide(conjugated).kind == _BUNDLE.decide(matrix).kind


def test_decide_by_search(bundle_service):
    unknown = bundle_service.decide_by_search(m(3, 2, 4, 3), 20)
    assert unknown.kind == VerdictKind.UNKNOWN
    assert unknown.search_height == 20
    found = bundle_service.decide_by_search(m(2, 1, 1, 1), 5)
    assert found.kind == VerdictKind.EXISTS
    assert found.method == DecisionMethod.BRUTE_FORCE


def test_enumerate_matrices(bundle_service):
    up_to_one = list(bundle_service.enumerate_matrices(1))
    assert m(1, 0, 0, 1) in up_to_one
    assert all(x.a * x.d - x.b * x.c == 1 for x in up_to_one)
    up_to_three = list(bundle_service.enumerate_matrices(3))
    assert m(3, 2, 1, 1) in up_to_three
    assert all(max(abs(e) for e in x.entries) <= 3 for x in up_to_three)
    assert len(set(up_to_three)) == len(up_to_three)


def test_scan_matrices(bundle_service):
    report = bundle_service.scan_matrices(5)
    assert report.disagreements == ()
    assert report.total == report.exists_count + report.not_exists_count
    assert report.criterion_count > 0
    assert bundle_service.decide(m(1, 0, 0, 1)).exists
    with pytest.raises(InvalidBounds):
        bundle_service.scan_matrices(0)
    with pytest.raises(BoundsTooLarge):
        bundle_service.scan_matrices(bundle_service.config.MAX_SCAN_ENTRY_BOUND + 1)


def test_parallel_scan_matches_serial(bundle_service):
    parallel = BundleDiscService(Config(overrides={'SCAN_WORKERS': 2, 'LOG_LEVEL': 'WARNING'}))
    assert parallel.scan_matrices(3) == bundle_service.scan_matrices(3)
