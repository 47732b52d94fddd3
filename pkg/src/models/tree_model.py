from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Any, FrozenSet, List, Mapping, Tuple

import networkx as nx

from src.models.slope_model import TreeVertex


class Branch(Enum):
    MERIDIONAL = "Meridional"
    CENTRAL = "Central"
    LONGITUDINAL = "Longitudinal"


# |p| of the anchor vertex for each branch
ANCHOR_NUMERATORS = {
    Branch.MERIDIONAL: 0,
    Branch.CENTRAL: 1,
    Branch.LONGITUDINAL: 2,
}


@dataclass(frozen=True)
class GeodesicPath:
    vertices: Tuple[TreeVertex, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("A geodesic path needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("A geodesic path cannot revisit a vertex")
        for x, y in zip(self.vertices, self.vertices[1:]):
            if abs(x.p * y.q - y.p * x.q) != 1:
                raise ValueError(f"{x} and {y} are not adjacent")

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, index):
        return self.vertices[index]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def reversed(self) -> 'GeodesicPath':
        return GeodesicPath(tuple(reversed(self.vertices)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'vertices': [v.to_dict() for v in self.vertices],
            'length': self.length
        }


@dataclass(frozen=True)
class BranchClass:
    anchor: TreeVertex
    label: Branch

    def __post_init__(self):
        if self.anchor.q != 1 or abs(self.anchor.p) != ANCHOR_NUMERATORS[self.label]:
            raise ValueError(f"{self.anchor} is not the anchor of the {self.label.value} branch")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'anchor': self.anchor.to_dict(),
            'label': self.label.value
        }


@dataclass(frozen=True)
class TreeBox:
    """Finite window |p| <= p_bound, q <= q_bound of the tree, with a BFS oracle."""
    p_bound: int
    q_bound: int
    vertices: FrozenSet[TreeVertex]
    adjacency: FrozenSet[Tuple[TreeVertex, TreeVertex]]
    root_distance: Mapping[TreeVertex, int]
    graph: nx.Graph = field(repr=False, compare=False)

    def ordered_vertices(self) -> List[TreeVertex]:
        return sorted(self.vertices, key=lambda v: v.sort_key())

    def ordered_edges(self) -> List[Tuple[TreeVertex, TreeVertex]]:
        return sorted(self.adjacency, key=lambda e: (e[0].sort_key(), e[1].sort_key()))


@dataclass(frozen=True)
class TreeReport:
    connected: bool
    acyclic: bool
    odd_parent_unique: bool
    vertex_count: int
    edge_count: int

    @property
    def is_tree(self) -> bool:
        return self.connected and self.acyclic and self.odd_parent_unique

    def to_dict(self) -> Dict[str, Any]:
        return {
            'connected': self.connected,
            'acyclic': self.acyclic,
            'odd_parent_unique': self.odd_parent_unique,
            'vertex_count': self.vertex_count,
            'edge_count': self.edge_count
        }


@dataclass(frozen=True)
class ObservationReport:
    """Mismatch lists of the invariant suite; every list is empty when the checks pass."""
    checked: int
    distance_mismatches: Tuple[TreeVertex, ...] = ()
    monotonicity_failures: Tuple[TreeVertex, ...] = ()
    branch_mismatches: Tuple[TreeVertex, ...] = ()
    branch_ties: Tuple[TreeVertex, ...] = ()
    edge_slope_failures: Tuple[Tuple[TreeVertex, TreeVertex], ...] = ()

    @property
    def passed(self) -> bool:
        return not (self.distance_mismatches or self.monotonicity_failures
                    or self.branch_mismatches or self.branch_ties
                    or self.edge_slope_failures)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'checked': self.checked,
            'passed': self.passed,
            'distance_mismatches': [str(v) for v in self.distance_mismatches],
            'monotonicity_failures': [str(v) for v in self.monotonicity_failures],
            'branch_mismatches': [str(v) for v in self.branch_mismatches],
            'branch_ties': [str(v) for v in self.branch_ties],
            'edge_slope_failures': [[str(x), str(y)] for x, y in self.edge_slope_failures]
        }
