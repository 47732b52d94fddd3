from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.models.error_model import InvalidBounds


class RenderFormat(Enum):
    DOT = "dot"
    JSON = "json"
    SVG = "svg"

    @classmethod
    def from_string(cls, value: str):
        value_lower = value.lower().strip()
        for member in cls:
            if member.value == value_lower:
                return member
        raise ValueError(f"Unknown export format: {value}")


@dataclass(frozen=True)
class RenderSpec:
    """Box window of the tree to export, optionally cut at a genus depth."""
    p_bound: int
    q_bound: int
    format: RenderFormat = RenderFormat.DOT
    depth: Optional[int] = None

    def __post_init__(self):
        if self.depth is not None and self.depth < 0:
            raise InvalidBounds(f"Depth must be non-negative, got {self.depth}")
