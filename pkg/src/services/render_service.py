import cmath
import io
import json
import logging
import math
from typing import List, Optional, Tuple

import cairocffi as cairo

from src.models.render_model import RenderFormat, RenderSpec
from src.models.slope_model import TreeVertex
from src.models.tree_model import TreeBox
from src.services.tree_service import MoebiusTreeService
from src.utils.config import Config

# chords closer than this to a diameter are drawn as straight lines
_DIAMETER_TOLERANCE = 1e-9


class RenderService:
    """Exports a box window of the tree as DOT, JSON or an SVG disc-model picture."""

    def __init__(self, config: Optional[Config] = None, tree_service: Optional[MoebiusTreeService] = None):
        self.config = config or Config()
        self.tree_service = tree_service or MoebiusTreeService(self.config)
        self.logger = self._setup_logger()

    def _setup_logger(self):
        logger = logging.getLogger('RenderService')
        return logger

    def export_tree(self, spec: RenderSpec) -> str:
        """
        Renders the box window in the requested format as a single text document
        """
        box = self.tree_service.build_box_graph(spec.p_bound, spec.q_bound)
        vertices, edges = self._window(box, spec.depth)
        self.logger.info(f"🖼️ Exporting {len(vertices)} vertices as {spec.format.value}")

        if spec.format == RenderFormat.DOT:
            return self._to_dot(vertices, edges)
        if spec.format == RenderFormat.JSON:
            return self._to_json(vertices, edges)
        return self._to_svg(vertices, edges)

    def _window(self, box: TreeBox, depth: Optional[int]) -> Tuple[List[TreeVertex], List[Tuple[TreeVertex, TreeVertex]]]:
        vertices = box.ordered_vertices()
        if depth is not None:
            vertices = [v for v in vertices if self.tree_service.root_distance(v) <= depth]
        kept = set(vertices)
        edges = [(x, y) for x, y in box.ordered_edges() if x in kept and y in kept]
        return vertices, edges

    def _to_dot(self, vertices: List[TreeVertex], edges) -> str:
        lines = ["graph moebius_tree {", "  node [shape=plaintext];"]
        lines.extend(f'  "{v}";' for v in vertices)
        lines.extend(f'  "{x}" -- "{y}";' for x, y in edges)
        lines.append("}")
        return "\n".join(lines) + "\n"

    def _to_json(self, vertices: List[TreeVertex], edges) -> str:
        index = {v: i for i, v in enumerate(vertices)}
        document = {
            'vertices': [
                {'p': v.p, 'q': v.q, 'genus': self.tree_service.root_distance(v)}
                for v in vertices
            ],
            'edges': [[index[x], index[y]] for x, y in edges]
        }
        return json.dumps(document, indent=2) + "\n"

    def disc_position(self, vertex: TreeVertex) -> Tuple[float, float]:
        """Point of the boundary circle where a vertex is drawn.

        0/1 sits at the bottom of the disc and positive slopes run to the right.
        Coordinates are rounded to SVG_PRECISION digits so the layout is stable.
        """
        size = self.config.SVG_SIZE
        center, radius = size / 2, size * 0.45
        theta = 2 * math.atan2(vertex.p, vertex.q)
        return (self._fixed(center + radius * math.sin(theta)),
                self._fixed(center + radius * math.cos(theta)))

    def geodesic(self, start: TreeVertex, end: TreeVertex) -> Optional[Tuple[float, float, float, float, float]]:
        """Circle (cx, cy, r, angle1, angle2) of the hyperbolic geodesic between two boundary points.

        The arc runs from angle1 to angle2 in increasing angle, inside the disc. None means the two
        points are diametric and the geodesic is a straight chord.
        """
        size = self.config.SVG_SIZE
        center = complex(size / 2, size / 2)
        w1 = complex(*self.disc_position(start)) - center
        w2 = complex(*self.disc_position(end)) - center
        delta = abs(cmath.phase(w2 / w1))
        if abs(math.pi - delta) < _DIAMETER_TOLERANCE:
            return None

        arc_center = center + (w1 + w2) / (1 + math.cos(delta))
        arc_radius = size * 0.45 * math.tan(delta / 2)
        theta1 = cmath.phase(w1 + center - arc_center)
        theta2 = cmath.phase(w2 + center - arc_center)
        # the arc inside the disc spans pi - delta
        if (theta2 - theta1) % (2 * math.pi) > math.pi:
            theta1, theta2 = theta2, theta1
        return arc_center.real, arc_center.imag, arc_radius, theta1, theta2

    def _fixed(self, value: float) -> float:
        return round(value, self.config.SVG_PRECISION) + 0.0

    def _to_svg(self, vertices: List[TreeVertex], edges) -> str:
        size = self.config.SVG_SIZE
        buffer = io.BytesIO()
        surface = cairo.SVGSurface(buffer, size, size)
        ctx = cairo.Context(surface)
        ctx.set_source_rgb(1, 1, 1)
        ctx.paint()

        ctx.arc(size / 2, size / 2, size * 0.45, 0, 2 * math.pi)
        ctx.set_source_rgb(0, 0, 0)
        ctx.set_line_width(1)
        ctx.stroke()

        for x, y in edges:
            circle = self.geodesic(x, y)
            if circle is None:
                ctx.move_to(*self.disc_position(x))
                ctx.line_to(*self.disc_position(y))
            else:
                ctx.new_sub_path()
                ctx.arc(*circle)
            ctx.set_source_rgb(0.27, 0.51, 0.71)
            ctx.stroke()

        ctx.select_font_face('sans-serif')
        ctx.set_font_size(10)
        ctx.set_source_rgb(0, 0, 0)
        for v in vertices:
            px, py = self.disc_position(v)
            ctx.new_sub_path()
            ctx.arc(px, py, 3, 0, 2 * math.pi)
            ctx.fill()
            ctx.move_to(px + 4, py - 4)
            ctx.show_text(str(v))

        surface.finish()
        return buffer.getvalue().decode('utf-8')
