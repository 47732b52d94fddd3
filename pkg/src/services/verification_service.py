import logging
from typing import Optional, Tuple

from src.models.tree_model import ObservationReport, TreeBox, TreeReport
from src.services.tree_service import MoebiusTreeService
from src.utils.config import Config


class VerificationService:
    """Checks the tree claim and the observations on a finite box against the BFS oracle."""

    def __init__(self, config: Optional[Config] = None, tree_service: Optional[MoebiusTreeService] = None):
        self.config = config or Config()
        self.tree_service = tree_service or MoebiusTreeService(self.config)
        self.slope_service = self.tree_service.slope_service
        self.logger = self._setup_logger()

    def _setup_logger(self):
        logger = logging.getLogger('VerificationService')
        return logger

    def verify_observations(self, box: TreeBox) -> ObservationReport:
        """
        Runs every observation check over a box and collects the mismatches
        """
        tree = self.tree_service
        distance_mismatches = []
        monotonicity_failures = []
        branch_mismatches = []
        branch_ties = []

        for v in box.ordered_vertices():
            path = tree.path_to_root(v)
            oracle = box.root_distance.get(v)
            if oracle is None or path.length != oracle or tree.root_distance(v) != oracle:
                distance_mismatches.append(v)

            sizes = [abs(w.p) for w in reversed(path.vertices)]
            if any(x >= y for x, y in zip(sizes, sizes[1:])):
                monotonicity_failures.append(v)

            nearest, distances = tree.nearest_anchor(v)
            if nearest is None:
                branch_ties.append(v)
            elif nearest != tree.classify(v):
                self.logger.warning(f"⚠️ {v}: threshold branch disagrees with distances {distances}")
                branch_mismatches.append(v)

        edge_slope_failures = []
        for x, y in box.ordered_edges():
            slopes = self.slope_service.slope_of_vertex(x), self.slope_service.slope_of_vertex(y)
            if self.slope_service.intersection_number(*slopes) != 2:
                edge_slope_failures.append((x, y))

        report = ObservationReport(
            checked=len(box.vertices),
            distance_mismatches=tuple(distance_mismatches),
            monotonicity_failures=tuple(monotonicity_failures),
            branch_mismatches=tuple(branch_mismatches),
            branch_ties=tuple(branch_ties),
            edge_slope_failures=tuple(edge_slope_failures)
        )
        if report.passed:
            self.logger.info(f"✅ Observations hold on {report.checked} vertices")
        else:
            self.logger.warning(f"⚠️ Observation suite failed: {report.to_dict()}")
        return report

    def run_suite(self, p_bound: int, q_bound: int) -> Tuple[TreeReport, ObservationReport]:
        """
        Builds the box once and runs the tree check together with the observation checks
        """
        box = self.tree_service.build_box_graph(p_bound, q_bound)
        return self.tree_service.verify_tree(box), self.verify_observations(box)
