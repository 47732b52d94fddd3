import logging
from typing import List, Optional, Sequence, Tuple

from src.models.collar_model import BandDescriptor, RegionDecomposition
from src.models.error_model import BoundaryIncompressible, NotZ2Compatible
from src.models.slope_model import BoundarySlope, Curve, ROOT, TreeVertex, UnimodularMatrix
from src.services.tree_service import MoebiusTreeService
from src.utils.config import Config

MERIDIAN = BoundarySlope(0, 1)


class CollarService:
    """Boundary compression, band addition and torus x I region decompositions."""

    def __init__(self, config: Optional[Config] = None, tree_service: Optional[MoebiusTreeService] = None):
        self.config = config or Config()
        self.tree_service = tree_service or MoebiusTreeService(self.config)
        self.slope_service = self.tree_service.slope_service
        self.logger = self._setup_logger()

    def _setup_logger(self):
        logger = logging.getLogger('CollarService')
        return logger

    def compress(self, slope: BoundarySlope) -> BoundarySlope:
        """
        Slope of the surface after one boundary compression (its tree parent)
        """
        if slope == MERIDIAN:
            raise BoundaryIncompressible("The meridian disc (0,1) admits no boundary compression")
        vertex = self.slope_service.vertex_of_slope(slope)
        return self.slope_service.slope_of_vertex(self.tree_service.parent(vertex))

    def add_band(self, slope: BoundarySlope, bound: int) -> List[BoundarySlope]:
        vertex = self.slope_service.vertex_of_slope(slope)
        return [self.slope_service.slope_of_vertex(w) for w in self.tree_service.children(vertex, bound)]

    def band_decomposition(self, slope: BoundarySlope) -> List[BandDescriptor]:
        vertex = self.slope_service.vertex_of_slope(slope)
        path = self.tree_service.path_to_root(vertex).reversed()
        return self._bands([self.slope_service.slope_of_vertex(v) for v in path])

    def _bands(self, slopes: Sequence[BoundarySlope]) -> List[BandDescriptor]:
        return [BandDescriptor(outer.u - inner.u, outer.v - inner.v)
                for inner, outer in zip(slopes, slopes[1:])]

    def region_decomposition(self, inner: Curve, outer: Curve) -> RegionDecomposition:
        """Slope sequence of the surface between an inner and an outer boundary curve.

        Coordinates are normalized so the inner curve is (0,1). Twists along the
        inner curve and the sign of the outer curve are then fixed by taking
        the normalized outer slope (u, v) with 0 < v <= |u|/2, and u < 0 when
        v = |u|/2 (only possible for |u| = 2).
        """
        normalizer = self.slope_service.matrix_sending_to_meridian(inner)
        x, y = self.slope_service.apply_matrix(normalizer, outer)
        if x % 2 != 0:
            raise NotZ2Compatible(
                f"{inner} and {outer} have odd intersection number {abs(x)}",
                details="no one-sided surface has these boundary slopes"
            )

        if x == 0:
            target = ROOT
        else:
            # the twist orbit of +-(x, y) meets 0 < v < |x| in (x, r) and (-x, |x| - r)
            r = y % abs(x)
            if 2 * r > abs(x) or (2 * r == abs(x) and x > 0):
                x, y = -x, -y
                r = y % abs(x)
            twist = (r - y) // x
            normalizer = self.slope_service.compose(UnimodularMatrix(1, 0, twist, 1), normalizer)
            target = TreeVertex(x // 2, r)

        path = self.tree_service.path_to_root(target).reversed()
        slopes = tuple(self.slope_service.slope_of_vertex(v) for v in path)
        decomposition = RegionDecomposition(
            inner_slope=tuple(inner),
            outer_slope=tuple(outer),
            normalizer=normalizer,
            slopes=slopes,
            bands=tuple(self._bands(slopes))
        )
        self.logger.debug(f"🧩 Regions for {inner} -> {outer}: genus {decomposition.genus}")
        return decomposition

    def pull_back(self, decomposition: RegionDecomposition) -> List[Curve]:
        inverse = decomposition.normalizer.inverse()
        return [self.slope_service.apply_matrix(inverse, s.coords) for s in decomposition.slopes]

    def surface_collars(self, boundary_pairs: Sequence[Tuple[Curve, Curve]]) -> List[RegionDecomposition]:
        """One region decomposition per boundary collar of a link space."""
        return [self.region_decomposition(inner, outer) for inner, outer in boundary_pairs]

    def collars_match(self, pairs_a: Sequence[Tuple[Curve, Curve]],
                      pairs_b: Sequence[Tuple[Curve, Curve]]) -> bool:
        """Whether two surfaces restrict to the same surface in every collar."""
        if len(pairs_a) != len(pairs_b):
            return False
        return all(
            a.slopes == b.slopes
            for a, b in zip(self.surface_collars(pairs_a), self.surface_collars(pairs_b))
        )
