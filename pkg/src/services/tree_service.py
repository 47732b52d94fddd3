import logging
from math import gcd
from typing import Dict, List, Optional, Tuple

import networkx as nx

from src.models.error_model import (
    BoundsTooLarge, InvalidBounds, RootHasNoParent
)
from src.models.slope_model import BoundarySlope, FareyVertex, ROOT, TreeVertex
from src.models.tree_model import (
    ANCHOR_NUMERATORS, Branch, BranchClass, GeodesicPath, TreeBox, TreeReport
)
from src.services.slope_service import SlopeService, mod_inverse, xgcd
from src.utils.config import Config


class MoebiusTreeService:
    """The Moebius band tree: odd-denominator vertices of the Farey graph."""

    def __init__(self, config: Optional[Config] = None, slope_service: Optional[SlopeService] = None):
        self.config = config or Config()
        self.slope_service = slope_service or SlopeService(self.config)
        self.logger = self._setup_logger()

    def _setup_logger(self):
        logger = logging.getLogger('MoebiusTreeService')
        return logger

    def parent(self, vertex: FareyVertex) -> TreeVertex:
        """
        Neighbor of the vertex one step closer to 0/1 (the Farey parent with odd denominator)
        """
        vertex = self.slope_service.as_tree_vertex(vertex)
        if vertex == ROOT:
            raise RootHasNoParent("0/1 is the root of the tree")
        left, right = self.slope_service.farey_parents(vertex)
        odd = left if left.q % 2 == 1 else right
        return TreeVertex.from_farey(odd)

    def path_to_root(self, vertex: FareyVertex) -> GeodesicPath:
        vertex = self.slope_service.as_tree_vertex(vertex)
        path = [vertex]
        while path[-1] != ROOT:
            path.append(self.parent(path[-1]))
        return GeodesicPath(tuple(path))

    def root_distance(self, vertex: FareyVertex) -> int:
        """Distance to 0/1, taking whole Stern-Brocot runs in one step.

        With O the older of the two Stern-Brocot parents of p/q (denominator b):
        b odd means the tree parent is O itself; b even means the next q // b
        tree parents are p/q - k*O, all with odd denominators.
        """
        vertex = self.slope_service.as_tree_vertex(vertex)
        p, q = abs(vertex.p), vertex.q
        steps = 0
        while p != 0:
            if q == 1:
                return steps + p
            b = mod_inverse(p, q)
            a = (p * b - 1) // q
            older = (a, b) if b < q - b else (p - a, q - b)
            if older[1] % 2 == 1:
                steps += 1
                p, q = older
            else:
                run = q // older[1]
                steps += run
                p, q = p - run * older[0], q - run * older[1]
        return steps

    def genus(self, slope: BoundarySlope) -> int:
        return self.root_distance(self.slope_service.vertex_of_slope(slope))

    def path_between(self, u: FareyVertex, v: FareyVertex) -> GeodesicPath:
        up = list(reversed(self.path_to_root(u).vertices))
        down = list(reversed(self.path_to_root(v).vertices))
        common = 0
        while common < min(len(up), len(down)) and up[common] == down[common]:
            common += 1
        # up[common - 1] is the deepest shared vertex; 0/1 is always shared
        spliced = list(reversed(up[common:])) + [up[common - 1]] + down[common:]
        return GeodesicPath(tuple(spliced))

    def distance(self, u: FareyVertex, v: FareyVertex) -> int:
        if u == ROOT:
            return self.root_distance(v)
        if v == ROOT:
            return self.root_distance(u)
        return self.path_between(u, v).length

    def neighbors(self, vertex: FareyVertex, bound: int) -> List[TreeVertex]:
        """Solutions w of |det(vertex, w)| = 1 with odd w.q and max(|w.p|, w.q) <= bound."""
        vertex = self.slope_service.as_tree_vertex(vertex)
        if bound < 1:
            raise InvalidBounds(f"Neighbor bound must be positive, got {bound}")
        p, q = vertex.p, vertex.q
        _, s, t = xgcd(p, q)
        found = []
        for sign in (1, -1):
            base_p, base_q = -t * sign, s * sign
            first = -((base_q - 1) // q)
            last = (bound - base_q) // q
            for k in range(first, last + 1):
                w_p, w_q = base_p + k * p, base_q + k * q
                if w_q % 2 == 1 and abs(w_p) <= bound:
                    found.append(TreeVertex(w_p, w_q))
        return sorted(found, key=lambda w: w.sort_key())

    def children(self, vertex: FareyVertex, bound: int) -> List[TreeVertex]:
        vertex = self.slope_service.as_tree_vertex(vertex)
        if vertex == ROOT:
            return self.neighbors(vertex, bound)
        parent = self.parent(vertex)
        return [w for w in self.neighbors(vertex, bound) if w != parent]

    def classify(self, vertex: FareyVertex) -> BranchClass:
        vertex = self.slope_service.as_tree_vertex(vertex)
        size = abs(vertex.p)
        # q odd, so 2|p| never equals q or 3q
        if 2 * size > 3 * vertex.q:
            label = Branch.LONGITUDINAL
        elif 2 * size < vertex.q:
            label = Branch.MERIDIONAL
        else:
            label = Branch.CENTRAL
        return BranchClass(anchor=self._anchor(label, vertex.p), label=label)

    def _anchor(self, label: Branch, p: int) -> TreeVertex:
        sign = -1 if p < 0 else 1
        return TreeVertex(sign * ANCHOR_NUMERATORS[label], 1)

    def nearest_anchor(self, vertex: FareyVertex) -> Tuple[Optional[BranchClass], Dict[Branch, int]]:
        """Branch by distance to the anchors 0/1, +-1/1, +-2/1; None when the minimum is tied."""
        vertex = self.slope_service.as_tree_vertex(vertex)
        distances = {
            label: self.distance(vertex, self._anchor(label, vertex.p))
            for label in Branch
        }
        closest = min(distances.values())
        winners = [label for label, d in distances.items() if d == closest]
        if len(winners) != 1:
            return None, distances
        label = winners[0]
        return BranchClass(anchor=self._anchor(label, vertex.p), label=label), distances

    def build_box_graph(self, p_bound: int, q_bound: int) -> TreeBox:
        """
        Subgraph of the tree on all vertices with |p| <= p_bound and odd q <= q_bound
        """
        if p_bound < 1 or q_bound < 1 or q_bound % 2 == 0:
            raise InvalidBounds(
                f"Box needs p_bound >= 1 and odd q_bound >= 1, got ({p_bound}, {q_bound})"
            )
        cap = self.config.MAX_BOX_VERTICES
        vertices = []
        for q in range(1, q_bound + 1, 2):
            for p in range(-p_bound, p_bound + 1):
                if gcd(p, q) == 1:
                    vertices.append(TreeVertex(p, q))
                    if len(vertices) > cap:
                        raise BoundsTooLarge(
                            f"Box ({p_bound}, {q_bound}) exceeds {cap} vertices"
                        )

        self.logger.info(f"🌳 Building box ({p_bound}, {q_bound}) with {len(vertices)} vertices")

        graph = nx.Graph()
        graph.add_nodes_from(vertices)
        edges = set()
        for v in vertices:
            for w_q in range(1, q_bound + 1, 2):
                for sign in (1, -1):
                    numerator = v.p * w_q - sign
                    if numerator % v.q:
                        continue
                    w_p = numerator // v.q
                    if abs(w_p) > p_bound:
                        continue
                    w = TreeVertex(w_p, w_q)
                    edges.add(tuple(sorted((v, w), key=lambda x: x.sort_key())))
        graph.add_edges_from(edges)

        root_distance = nx.single_source_shortest_path_length(graph, ROOT)
        self.logger.debug(f"✅ Box ready: {graph.number_of_edges()} edges, "
                          f"{len(root_distance)} vertices reached from 0/1")

        return TreeBox(
            p_bound=p_bound,
            q_bound=q_bound,
            vertices=frozenset(vertices),
            adjacency=frozenset(edges),
            root_distance=dict(root_distance),
            graph=graph
        )

    def verify_tree(self, box: TreeBox) -> TreeReport:
        """
        Checks the box graph is a tree and every non-root vertex has exactly one odd parent
        """
        graph = box.graph
        connected = nx.is_connected(graph)
        acyclic = nx.is_forest(graph)

        odd_parent_unique = True
        for v in box.vertices:
            if v == ROOT:
                continue
            smaller = [w for w in graph.neighbors(v) if abs(w.p) < abs(v.p)]
            if len(smaller) != 1:
                self.logger.warning(f"⚠️ {v} has {len(smaller)} neighbors closer to the root")
                odd_parent_unique = False

        report = TreeReport(
            connected=connected,
            acyclic=acyclic,
            odd_parent_unique=odd_parent_unique,
            vertex_count=graph.number_of_nodes(),
            edge_count=graph.number_of_edges()
        )
        self.logger.info(f"🔍 Tree check on box ({box.p_bound}, {box.q_bound}): {report.to_dict()}")
        return report
