import structlog

from .envelope import concave_envelope
from .polytope import lattice_points


logger = structlog.get_logger(__name__)

SCALE = 40
MARGIN = 20
RADIUS = 3


def _number(value):
    return f"{float(value):.2f}"


def _path(points, transform):
    first, *rest = [transform(p) for p in points]
    path = f"M{_number(first[0])},{_number(first[1])}"
    path += "".join(f"L{_number(x)},{_number(y)}" for x, y in rest)
    return path + "z"


def _edges(polygons):
    edges = set()
    for polygon in polygons:
        for a, b in zip(polygon, polygon[1:] + polygon[:1]):
            edges.add(tuple(sorted((tuple(a), tuple(b)))))
    return sorted(edges)


def render_svg(polytope, k, phi=None):
    """
    k△ with its lattice points, and the subdivision of f_φ when φ is given

    Boundary points are grey, interior points black, subdivision edges red.
    The output only depends on its arguments.
    """
    lattice = lattice_points(polytope, k)
    vertices = lattice.dilated.vertices
    xs = [v.x for v in vertices]
    ys = [v.y for v in vertices]

    width = (max(xs) - min(xs)) * SCALE + 2 * MARGIN
    height = (max(ys) - min(ys)) * SCALE + 2 * MARGIN

    def transform(point):
        # svg y grows downwards
        return (
            (point[0] - min(xs)) * SCALE + MARGIN,
            (max(ys) - point[1]) * SCALE + MARGIN,
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<path fill="none" stroke="black" stroke-width="2" '
        f'd="{_path(vertices, transform)}"/>',
    ]

    if phi is not None:
        for a, b in _edges(concave_envelope(phi).polygons):
            (x1, y1), (x2, y2) = transform(a), transform(b)
            parts.append(
                f'<line x1="{_number(x1)}" y1="{_number(y1)}" x2="{_number(x2)}" '
                f'y2="{_number(y2)}" stroke="red" stroke-width="1"/>'
            )

    for point, on_boundary in zip(lattice.points, lattice.boundary):
        x, y = transform(point)
        colour = "grey" if on_boundary else "black"
        parts.append(
            f'<circle cx="{_number(x)}" cy="{_number(y)}" r="{RADIUS}" '
            f'fill="{colour}"/>'
        )

    parts.append("</svg>")
    logger.debug("rendered svg", polytope=polytope.name, k=k, elements=len(parts))
    return "\n".join(parts) + "\n"
