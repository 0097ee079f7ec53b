from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import attr
import structlog

from .exceptions import InputError
from .polytope import Polytope2D, ehrhart, lattice_points
from .rational import format_rat
from .serializers import group_from_json, polytope_file_from_json, read_json
from .solver import SEMISTABLE_BOUNDARY, UNSTABLE_BARYCENTER
from .symmetry import group_closure


logger = structlog.get_logger(__name__)

SWAP = ((0, 1), (1, 0))
SIGMA_3 = ((0, -1), (1, -1))
SIGMA_4 = ((0, -1), (1, 0))


@attr.s(frozen=True)
class CatalogEntry:
    id = attr.ib()
    polytope = attr.ib()
    weyl = attr.ib()
    degree = attr.ib()
    polarization = attr.ib()
    description = attr.ib()
    provenance = attr.ib(default="")

    @property
    def polarization_degree(self):
        """L² = 2·vol(△)."""
        return 2 * ehrhart(self.polytope).vol


available_entries = {
    "X1": {
        "vertices": [(1, 2), (2, 1), (-3, -3)],
        "generators": [SWAP],
        "degree": 1,
        "polarization": "-3K",
        "description": "P^2/(Z/9), O(-3K) in P^6",
        "provenance": "vertices given explicitly",
    },
    "X2": {
        "vertices": [(-2, 0), (2, 0), (0, 1), (0, -1)],
        "generators": [((-1, 0), (0, 1)), ((1, 0), (0, -1))],
        "degree": 2,
        "polarization": "-2K",
        "description": "P^1xP^1/(Z/4), O(-2K) in P^6",
        "provenance": (
            "vertices given explicitly; Weyl group taken as the axis sign flips"
        ),
    },
    "X3": {
        "vertices": [(0, 3), (3, 0), (-3, -3)],
        "generators": [SIGMA_3, SWAP],
        "degree": 3,
        "polarization": "-3K",
        "description": "{xyz = w^3} in P^3",
        "provenance": (
            "vertices read off plotted axis labels; they are 3x the "
            "anticanonical polygon, although -K is the stated polarization"
        ),
    },
    "X4": {
        "vertices": [(3, 0), (0, 3), (-3, 0), (0, -3)],
        "generators": [SIGMA_4, SWAP],
        "degree": 4,
        "polarization": "-3K",
        "description": "Q1 ∩ Q2 in P^4",
        "provenance": (
            "vertices read off plotted axis labels; they are 3x the "
            "anticanonical polygon, although -K is the stated polarization"
        ),
    },
}


def build_entry(identifier, data):
    polytope = Polytope2D(vertices=data["vertices"], name=identifier)
    return CatalogEntry(
        id=identifier,
        polytope=polytope,
        weyl=group_closure(data["generators"], polytope, name=f"W{identifier[1:]}"),
        degree=data["degree"],
        polarization=data["polarization"],
        description=data["description"],
        provenance=data["provenance"],
    )


@lru_cache(maxsize=None)
def load_catalog():
    """Every entry, built once; generators which are not symmetries are rejected."""
    catalog = {i: build_entry(i, data) for i, data in available_entries.items()}
    logger.debug("catalog loaded", entries=sorted(catalog))
    return catalog


def get_entry(identifier):
    try:
        return load_catalog()[identifier.upper()]
    except KeyError:
        known = ", ".join(sorted(available_entries))
        raise InputError(f"Unknown polytope {identifier!r}, expected one of: {known}")


def x1_notes(k):
    """The barycenter obstruction on △₁, stated for every k."""
    value = Fraction(-8 * k, 9 * k * k + 3 * k + 2)
    return (
        "for every k the lattice points of k*Delta_1 average to "
        "4(-k,-k)/(9k^2+3k+2) while the centroid is 0",
        "so J(-(x1+x2)) = -8k/(9k^2+3k+2) < 0; "
        f"at k={k} this is {format_rat(value)}",
    )


def x2_notes():
    """The flat direction of △₂ at k=2."""
    return (
        "g = -|y|/2 is Weyl-invariant and not affine; on 2*Delta_2 the lattice "
        "points and the area both give |y| the mean 2/3, so J(g) = 0",
        "(X2, L^2) is Chow semistable but not polystable; the search finds "
        "(X2, L^3) polystable",
    )


def report_notes(report):
    """Remarks a catalog polytope adds to its solver report."""
    name = report.polytope.name
    if name == "X1" and report.verdict == UNSTABLE_BARYCENTER:
        return x1_notes(report.k)
    if name == "X2" and report.k == 2 and report.verdict == SEMISTABLE_BOUNDARY:
        return x2_notes()
    return ()


def load_group(path, polytope):
    generators = group_from_json(read_json(path), source=path)
    return group_closure(generators, polytope, name=Path(path).stem)


def resolve(identifier, group_path=None):
    """
    (polytope, group) for a catalog id or a polytope JSON file

    A file may carry its own "generators"; an explicit group file wins.
    """
    if Path(identifier).suffix == ".json" or Path(identifier).exists():
        polytope, generators = polytope_file_from_json(
            read_json(identifier), name=Path(identifier).stem
        )
        group = None
        if generators:
            group = group_closure(generators, polytope, name=polytope.name)
    else:
        entry = get_entry(identifier)
        polytope, group = entry.polytope, entry.weyl

    if group_path is not None:
        group = load_group(group_path, polytope)

    return polytope, group


def catalog_rows():
    rows = []
    for entry in load_catalog().values():
        rows.append(
            [
                entry.id,
                " ".join(f"({v.x},{v.y})" for v in entry.polytope.vertices),
                len(entry.weyl),
                len(lattice_points(entry.polytope, 1)),
                format_rat(ehrhart(entry.polytope).vol),
                entry.degree,
                f"{entry.polarization}, L^2={format_rat(entry.polarization_degree)}",
                entry.description,
            ]
        )
    return rows
