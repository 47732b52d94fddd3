from src.models.slope_model import TreeVertex
from src.models.tree_model import ObservationReport


def test_observations_hold_on_box_30_61(verification_service, box_30_61):
    report = verification_service.verify_observations(box_30_61)
    assert report.checked == len(box_30_61.vertices)
    assert report.distance_mismatches == ()
    assert report.monotonicity_failures == ()
    assert report.branch_mismatches == ()
    assert report.branch_ties == ()
    assert report.passed


def test_edge_slope_law_on_box_30_61(verification_service, box_30_61):
    assert verification_service.verify_observations(box_30_61).edge_slope_failures == ()
    slopes = verification_service.slope_service.slope_of_vertex
    for x, y in box_30_61.ordered_edges():
        assert verification_service.slope_service.intersection_number(slopes(x), slopes(y)) == 2


def test_run_suite_small_box(verification_service):
    tree_report, observations = verification_service.run_suite(5, 9)
    assert tree_report.is_tree
    assert observations.passed
    assert observations.to_dict()['passed'] is True


def test_report_lists_failures():
    report = ObservationReport(checked=1, monotonicity_failures=(TreeVertex(1, 3),))
    assert not report.passed
    assert report.to_dict()['monotonicity_failures'] == ['1/3']
