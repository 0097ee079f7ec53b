import json
from pathlib import Path

import structlog
from marshmallow import (
    EXCLUDE,
    Schema,
    ValidationError,
    fields,
    post_load,
    pre_dump,
    validate,
)

from .chow import BarycenterReport
from .envelope import heights_for
from .estimates import FAIL, PASS, DeltaTable, EstimateReport
from .exceptions import InputError
from .geometry import Point2
from .polytope import Polytope2D, lattice_points
from .rational import as_rat, format_rat
from .solver import VERDICTS, StabilityReport


logger = structlog.get_logger(__name__)


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def write_json(path, data):
    Path(path).write_text(dumps(data))
    logger.debug("wrote json", path=str(path))


class Rational(fields.Field):
    """A Fraction written as "p/q"; integers are accepted on input."""

    default_error_messages = {"invalid": "Invalid rational {input!r}, expected 'p/q'"}

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else format_rat(value)

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return as_rat(value)
        except InputError as exc:
            raise self.make_error("invalid", input=value) from exc


class RationalPoint(fields.Field):
    default_error_messages = {"invalid": "Expected a pair of rationals, got {input!r}"}

    def _serialize(self, value, attr, obj, **kwargs):
        return [format_rat(value.x), format_rat(value.y)]

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            x, y = value
            return Point2(as_rat(x), as_rat(y))
        except (TypeError, ValueError) as exc:
            raise self.make_error("invalid", input=value) from exc


def _lattice_point(**kwargs):
    return fields.List(
        fields.Integer(strict=True), validate=validate.Length(equal=2), **kwargs
    )


class PolytopeSchema(Schema):
    name = fields.String(allow_none=True, load_default=None)
    vertices = fields.List(_lattice_point(), required=True)

    @post_load
    def make_polytope(self, data, **kwargs):
        return Polytope2D(vertices=data["vertices"], name=data["name"])


class PolytopeFileSchema(PolytopeSchema):
    """A polytope file may carry the generators of its symmetry group."""

    generators = fields.List(
        fields.List(fields.List(fields.Integer(strict=True))), load_default=None
    )

    @post_load
    def make_polytope(self, data, **kwargs):
        polytope = Polytope2D(vertices=data["vertices"], name=data["name"])
        return polytope, data["generators"]


class GroupSchema(Schema):
    class Meta:
        unknown = EXCLUDE

    generators = fields.List(
        fields.List(fields.List(fields.Integer(strict=True))), required=True
    )


class HeightEntrySchema(Schema):
    x = _lattice_point(required=True)
    v = Rational(required=True)


class HeightsSchema(Schema):
    """Heights on every lattice point of k△; building φ needs the polytope."""

    polytope = fields.String(allow_none=True, load_default=None)
    k = fields.Integer(strict=True, allow_none=True, load_default=None)
    values = fields.List(fields.Nested(HeightEntrySchema), required=True)

    @pre_dump
    def from_heights(self, phi, **kwargs):
        return {
            "polytope": phi.lattice.polytope.name,
            "k": phi.lattice.k,
            "values": [
                {"x": p, "v": v} for p, v in zip(phi.lattice.points, phi.values)
            ],
        }


class BarycenterSchema(Schema):
    discrete = RationalPoint(required=True)
    continuous = RationalPoint(required=True)
    mismatch = RationalPoint(required=True)
    passes = fields.Boolean(required=True)

    @post_load
    def make_report(self, data, **kwargs):
        return BarycenterReport(**data)


class StabilityReportSchema(Schema):
    polytope = fields.Nested(PolytopeSchema, required=True)
    k = fields.Integer(strict=True, required=True, validate=validate.Range(min=1))
    barycenter = fields.Nested(BarycenterSchema, required=True)
    j_min = Rational(required=True)
    verdict = fields.String(required=True, validate=validate.OneOf(VERDICTS))
    certificate = fields.Nested(HeightsSchema, allow_none=True, required=True)
    certificate_j = Rational(allow_none=True, required=True)
    iterations = fields.Integer(strict=True, required=True)
    used_weyl_reduction = fields.Boolean(required=True)
    conventions = fields.String(required=True)
    notes = fields.List(fields.String(), required=True)

    @post_load
    def make_report(self, data, **kwargs):
        if data["certificate"] is not None:
            data["certificate"] = build_heights(
                data["certificate"], data["polytope"], data["k"]
            )
        return StabilityReport(**data)


class DeltaTableSchema(Schema):
    k = fields.Integer(strict=True, required=True)
    interior = Rational(required=True)
    generic_boundary = Rational(required=True)
    long_vertex = Rational(required=True)
    near_short_vertex = Rational(required=True)
    short_vertex = Rational(required=True)

    @post_load
    def make_table(self, data, **kwargs):
        return DeltaTable(**data)


class EstimateReportSchema(Schema):
    estimate = fields.String(required=True)
    parameters = fields.Dict(required=True)
    status = fields.String(required=True, validate=validate.OneOf([PASS, FAIL]))
    witness = fields.Raw(allow_none=True, required=True)
    seed = fields.Integer(allow_none=True, required=True)
    details = fields.Dict(required=True)
    delta_table = fields.Nested(DeltaTableSchema, allow_none=True, load_default=None)

    @post_load
    def make_report(self, data, **kwargs):
        try:
            return EstimateReport(**data)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc


def _load(schema, data, what):
    try:
        return schema.load(data)
    except ValidationError as exc:
        raise InputError(f"Malformed {what}: {exc.messages}") from exc


def polytope_to_json(polytope):
    return PolytopeSchema().dump(polytope)


def polytope_from_json(data):
    return _load(PolytopeSchema(), data, "polytope")


def polytope_file_from_json(data, name=None):
    """(polytope, generators or None); ``name`` is used when the file has none."""
    if isinstance(data, dict) and name is not None:
        data = {"name": name, **data}
    return _load(PolytopeFileSchema(), data, "polytope file")


def group_from_json(data, source):
    """Generator matrices from a bare list or an object with "generators"."""
    if isinstance(data, list):
        data = {"generators": data}
    try:
        return GroupSchema().load(data)["generators"]
    except ValidationError as exc:
        raise InputError(
            f"{source} must hold a list of generator matrices: {exc.messages}"
        ) from exc


def heights_to_json(phi):
    return HeightsSchema().dump(phi)


def build_heights(data, polytope, k):
    """φ on k△ from loaded heights; every lattice point must be given once."""
    if data["k"] is not None and data["k"] != k:
        raise InputError(f"Heights are given for k={data['k']}, not k={k}")
    if data["polytope"] and polytope.name and data["polytope"] != polytope.name:
        raise InputError(
            f"Heights are given for {data['polytope']}, not {polytope.name}"
        )

    lattice = lattice_points(polytope, k)
    values = {}
    for entry in data["values"]:
        point = Point2(*entry["x"])
        if point not in lattice.index_of:
            raise InputError(f"{tuple(point)} is not a lattice point of k={k}")
        if point in values:
            raise InputError(f"{tuple(point)} is given twice")
        values[point] = entry["v"]

    missing = [p for p in lattice.points if p not in values]
    if missing:
        raise InputError(
            f"No height for {len(missing)} points, first {tuple(missing[0])}"
        )

    return heights_for(polytope, k, [values[p] for p in lattice.points])


def heights_from_json(data, polytope, k):
    return build_heights(_load(HeightsSchema(), data, "heights"), polytope, k)


def barycenter_to_json(report):
    return BarycenterSchema().dump(report)


def barycenter_from_json(data):
    return _load(BarycenterSchema(), data, "barycenter")


def report_to_json(report):
    return StabilityReportSchema().dump(report)


def report_from_json(data):
    return _load(StabilityReportSchema(), data, "report")


def delta_table_to_json(table):
    return DeltaTableSchema().dump(table)


def delta_table_from_json(data):
    return _load(DeltaTableSchema(), data, "delta table")


def estimate_to_json(report):
    return EstimateReportSchema().dump(report)


def estimate_from_json(data):
    return _load(EstimateReportSchema(), data, "estimate report")
