from dataclasses import dataclass
from typing import Dict, Any, Tuple

from src.models.slope_model import BoundarySlope, Curve, UnimodularMatrix


@dataclass(frozen=True)
class BandDescriptor:
    """One Moebius band, as the difference of two consecutive boundary slopes."""
    a: int
    b: int

    def __post_init__(self):
        if self.a % 2 or self.b % 2:
            raise ValueError(f"Band ({self.a},{self.b}) must have even components")

    def __str__(self) -> str:
        return f"({self.a},{self.b})"

    def to_dict(self) -> Dict[str, Any]:
        return {'a': self.a, 'b': self.b}


@dataclass(frozen=True)
class RegionDecomposition:
    inner_slope: Curve
    outer_slope: Curve
    normalizer: UnimodularMatrix
    slopes: Tuple[BoundarySlope, ...]
    bands: Tuple[BandDescriptor, ...]

    def __post_init__(self):
        if self.slopes[0] != BoundarySlope(0, 1):
            raise ValueError("Normalized inner slope must be (0,1)")
        if len(self.bands) != len(self.slopes) - 1:
            raise ValueError("Every region holds exactly one band")

    @property
    def genus(self) -> int:
        return len(self.bands)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'inner_slope': list(self.inner_slope),
            'outer_slope': list(self.outer_slope),
            'normalizer': self.normalizer.to_dict(),
            'slopes': [s.to_dict() for s in self.slopes],
            'bands': [b.to_dict() for b in self.bands],
            'genus': self.genus
        }
