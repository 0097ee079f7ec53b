import json

import attr
import pytest

from chowstab.catalog import (
    available_entries,
    catalog_rows,
    get_entry,
    load_group,
    report_notes,
    resolve,
    x1_notes,
    x2_notes,
)
from chowstab.exceptions import InputError
from chowstab.polytope import lattice_points
from chowstab.solver import SEMISTABLE_BOUNDARY, decide_stability


def test_catalog_entries(catalog):
    assert list(catalog) == ["X1", "X2", "X3", "X4"]
    assert [len(e.weyl) for e in catalog.values()] == [2, 4, 6, 8]
    assert [len(lattice_points(e.polytope, 1)) for e in catalog.values()] == [
        7,
        7,
        19,
        25,
    ]


def test_polarization_degree(catalog):
    assert catalog["X1"].polarization_degree == 9
    assert catalog["X2"].polarization_degree == 8
    assert catalog["X3"].polarization_degree == 27
    assert catalog["X4"].polarization_degree == 36


def test_get_entry_is_case_insensitive():
    assert get_entry("x3").id == "X3"


def test_get_entry_unknown():
    with pytest.raises(InputError, match="Unknown polytope 'X5'"):
        get_entry("X5")


def test_plot_read_entries_are_flagged():
    assert "plotted" in available_entries["X3"]["provenance"]
    assert "plotted" in available_entries["X4"]["provenance"]
    assert "plotted" not in available_entries["X1"]["provenance"]


def test_x1_notes():
    first, second = x1_notes(2)

    assert "4(-k,-k)/(9k^2+3k+2)" in first
    assert second.endswith("at k=2 this is -4/11")


def test_resolve_catalog_id(catalog):
    polytope, group = resolve("X2")

    assert polytope == catalog["X2"].polytope
    assert group == catalog["X2"].weyl


def test_resolve_polytope_file(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(
        json.dumps(
            {
                "vertices": [[1, 0], [0, 1], [-1, -1]],
                "generators": [[[0, -1], [1, -1]]],
            }
        )
    )

    polytope, group = resolve(str(path))

    assert polytope.name == "triangle"
    assert len(group) == 3
    assert len(lattice_points(polytope, 1)) == 4


def test_resolve_with_group_file(tmp_path):
    path = tmp_path / "flips.json"
    path.write_text(json.dumps([[[-1, 0], [0, 1]]]))

    _, group = resolve("X2", str(path))

    assert len(group) == 2
    assert group.name == "flips"


def test_load_group_rejects_non_symmetry(tmp_path, diamond):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"generators": [[[0, 1], [1, 0]]]}))

    with pytest.raises(InputError, match="not a symmetry"):
        load_group(path, diamond)


def test_load_group_needs_a_list(tmp_path, diamond):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"generators": "swap"}))

    with pytest.raises(InputError, match="list of generator matrices"):
        load_group(path, diamond)


def test_catalog_rows():
    rows = catalog_rows()

    assert [row[0] for row in rows] == ["X1", "X2", "X3", "X4"]
    assert rows[0][6] == "-3K, L^2=9/1"
    assert rows[3][4] == "18/1"
    assert rows[2][4] == "27/2"
    assert [row[2] for row in rows] == [2, 4, 6, 8]


def test_report_notes(catalog):
    x1 = decide_stability(catalog["X1"].polytope, 1, catalog["X1"].weyl)
    x2 = attr.evolve(
        decide_stability(catalog["X2"].polytope, 1, catalog["X2"].weyl),
        k=2,
        verdict=SEMISTABLE_BOUNDARY,
    )
    x4 = decide_stability(catalog["X4"].polytope, 1, catalog["X4"].weyl)

    assert report_notes(x1) == x1_notes(1)
    assert report_notes(x2) == x2_notes()
    assert "mean 2/3" in x2_notes()[0]
    assert report_notes(x4) == ()


def test_resolve_polytope_file_without_vertices(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"name": "broken"}))

    with pytest.raises(InputError, match="Malformed polytope file"):
        resolve(str(path))
