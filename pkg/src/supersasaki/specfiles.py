"""JSON documents describing charts, fields, and maps.

Geometry document:

    {
      "name": "misner",
      "coords": ["t", "phi"],
      "metric": [["0", "1"], ["1", "t"]],
      "omega": [["0", "-1"], ["1", "0"]],
      "sample_domain": {"t": [0.5, 1.5], "phi": [0.2, 1.2]},
      "notes": "free text",
      "reference_christoffel": [["t", "t", "phi", "1/2"], ...],
      "reference_nabla": {"t": "dtdot + ...", "phi": "..."},
      "reference_sasaki": "2*tdot*phidot + ..."
    }

omega and everything from "notes" down are optional. The reference_*
fields hold independently published values for the same chart; commands
print deltas against them but never force agreement.

Vector field document (or inline dict):

    {"kind": "base", "components": ["y", "0"]}
    {"kind": "ptm", "parity": "odd",
     "components": ["dx", "0"], "barred": ["1", "x*y"]}

Map document:

    {"name": "rotation", "source": "euclidean2", "target": "euclidean2",
     "components": ["cos(1)*x - sin(1)*y", "sin(1)*x + cos(1)*y"],
     "inverse": ["cos(1)*x + sin(1)*y", "-sin(1)*x + cos(1)*y"]}

All expression strings use the package grammar; metric and omega entries
may mention only the chart coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .geometry import (
    AlmostSymplectic,
    Chart,
    ChristoffelSymbols,
    GeometryError,
    MetricTensor,
    VectorFieldM,
    christoffel,
)
from .grassmann import EVEN, ODD, GradedError, GradedExpr, parse_graded
from .sasakilift import VectorFieldPTM, ptm_table
from .symexpr import Expr, ParseError, parse_expr
from .transform import SmoothMap


class SpecError(ValueError):
    """A spec document that does not satisfy its schema."""


def _load_document(source: str | Path | Mapping[str, Any]) -> Mapping[str, Any]:
    if isinstance(source, Mapping):
        return source
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"cannot read spec file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecError(f"{path} must hold a JSON object")
    return doc


def _parse_entry(text: Any, vocabulary: list[str], where: str) -> Expr:
    if not isinstance(text, str):
        raise SpecError(f"{where} must be an expression string, got {text!r}")
    try:
        return parse_expr(text, vocabulary)
    except ParseError as exc:
        raise SpecError(f"{where}: {exc}") from exc


@dataclass(frozen=True)
class GeometrySpec:
    name: str
    chart: Chart
    metric: MetricTensor
    omega: AlmostSymplectic | None
    notes: str
    reference_christoffel: tuple[tuple[str, str, str, Expr], ...] | None
    reference_nabla: Mapping[str, str] | None
    reference_sasaki: str | None

    def require_omega(self) -> AlmostSymplectic:
        if self.omega is None:
            raise SpecError(
                f"geometry {self.name!r} declares no two-form; this command needs one"
            )
        return self.omega

    def connection(self) -> ChristoffelSymbols:
        return christoffel(self.metric)


def load_geometry(source: str | Path | Mapping[str, Any]) -> GeometrySpec:
    doc = _load_document(source)
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise SpecError("geometry needs a nonempty string 'name'")
    coords = doc.get("coords")
    if (
        not isinstance(coords, list)
        or not coords
        or not all(isinstance(c, str) for c in coords)
    ):
        raise SpecError(f"geometry {name!r}: 'coords' must be a list of names")
    domain = doc.get("sample_domain")
    if not isinstance(domain, dict):
        raise SpecError(f"geometry {name!r}: 'sample_domain' must map coords to intervals")
    intervals: dict[str, tuple[float, float]] = {}
    for c in coords:
        box = domain.get(c)
        if (
            not isinstance(box, list)
            or len(box) != 2
            or not all(isinstance(v, (int, float)) for v in box)
            or not box[0] < box[1]
        ):
            raise SpecError(
                f"geometry {name!r}: sample_domain[{c!r}] must be [lo, hi] with lo < hi"
            )
        intervals[c] = (float(box[0]), float(box[1]))
    try:
        chart = Chart(tuple(coords), intervals, name=name)
    except GeometryError as exc:
        raise SpecError(f"geometry {name!r}: {exc}") from exc

    n = len(coords)
    vocab = list(coords)

    def load_matrix(key: str) -> tuple[tuple[Expr, ...], ...]:
        rows = doc.get(key)
        if (
            not isinstance(rows, list)
            or len(rows) != n
            or any(not isinstance(r, list) or len(r) != n for r in rows)
        ):
            raise SpecError(f"geometry {name!r}: '{key}' must be a {n}x{n} matrix")
        return tuple(
            tuple(_parse_entry(e, vocab, f"{name}.{key}[{i}][{j}]") for j, e in enumerate(row))
            for i, row in enumerate(rows)
        )

    try:
        metric = MetricTensor(chart, load_matrix("metric"))
    except GeometryError as exc:
        raise SpecError(f"geometry {name!r}: {exc}") from exc

    omega = None
    if "omega" in doc:
        if n % 2:
            raise SpecError(
                f"geometry {name!r}: a two-form needs an even number of coordinates"
            )
        try:
            omega = AlmostSymplectic(chart, load_matrix("omega"))
        except GeometryError as exc:
            raise SpecError(f"geometry {name!r}: {exc}") from exc

    notes = doc.get("notes", "")
    if not isinstance(notes, str):
        raise SpecError(f"geometry {name!r}: 'notes' must be a string")

    ref_gamma = None
    if "reference_christoffel" in doc:
        raw = doc["reference_christoffel"]
        if not isinstance(raw, list):
            raise SpecError(f"geometry {name!r}: reference_christoffel must be a list")
        rows = []
        for item in raw:
            if (
                not isinstance(item, list)
                or len(item) != 4
                or any(not isinstance(s, str) for s in item)
            ):
                raise SpecError(
                    f"geometry {name!r}: reference_christoffel entries are "
                    "[upper, lower, lower, value]"
                )
            a, b, c, value = item
            for idx in (a, b, c):
                if idx not in coords:
                    raise SpecError(
                        f"geometry {name!r}: unknown coordinate {idx!r} in "
                        "reference_christoffel"
                    )
            rows.append((a, b, c, _parse_entry(value, vocab, f"{name}.reference_christoffel")))
        ref_gamma = tuple(rows)

    ref_nabla = None
    if "reference_nabla" in doc:
        raw = doc["reference_nabla"]
        if not isinstance(raw, dict) or any(
            k not in coords or not isinstance(v, str) for k, v in raw.items()
        ):
            raise SpecError(
                f"geometry {name!r}: reference_nabla maps coordinates to strings"
            )
        ref_nabla = dict(raw)

    ref_sasaki = doc.get("reference_sasaki")
    if ref_sasaki is not None and not isinstance(ref_sasaki, str):
        raise SpecError(f"geometry {name!r}: reference_sasaki must be a string")

    return GeometrySpec(
        name=name,
        chart=chart,
        metric=metric,
        omega=omega,
        notes=notes,
        reference_christoffel=ref_gamma,
        reference_nabla=ref_nabla,
        reference_sasaki=ref_sasaki,
    )


def load_base_field(
    source: str | Path | Mapping[str, Any], chart: Chart
) -> VectorFieldM:
    doc = _load_document(source)
    if doc.get("kind", "base") != "base":
        raise SpecError("expected a base vector field document")
    comps = doc.get("components")
    if not isinstance(comps, list) or len(comps) != chart.dim:
        raise SpecError(f"base field needs {chart.dim} components")
    vocab = list(chart.coords)
    parsed = tuple(
        _parse_entry(e, vocab, f"field.components[{i}]") for i, e in enumerate(comps)
    )
    return VectorFieldM(chart, parsed)


_PARITY_WORDS = {"even": EVEN, "odd": ODD}


def load_ptm_field(
    source: str | Path | Mapping[str, Any], chart: Chart
) -> VectorFieldPTM:
    doc = _load_document(source)
    if doc.get("kind") != "ptm":
        raise SpecError("expected a 'ptm' vector field document")
    parity_word = doc.get("parity")
    if parity_word not in _PARITY_WORDS:
        raise SpecError("ptm field needs parity 'even' or 'odd'")
    parity = _PARITY_WORDS[parity_word]
    table = ptm_table(chart)
    out: dict[str, tuple[GradedExpr, ...]] = {}
    for key in ("components", "barred"):
        rows = doc.get(key)
        if not isinstance(rows, list) or len(rows) != chart.dim:
            raise SpecError(f"ptm field needs {chart.dim} '{key}' strings")
        parsed = []
        for i, text in enumerate(rows):
            if not isinstance(text, str):
                raise SpecError(f"field.{key}[{i}] must be a string")
            try:
                parsed.append(parse_graded(text, table))
            except (ParseError, GradedError) as exc:
                raise SpecError(f"field.{key}[{i}]: {exc}") from exc
        out[key] = tuple(parsed)
    try:
        return VectorFieldPTM(table, out["components"], out["barred"], parity)
    except GradedError as exc:
        raise SpecError(f"ptm field: {exc}") from exc


def load_map(
    source: str | Path | Mapping[str, Any],
    source_geometry: GeometrySpec,
    target_geometry: GeometrySpec,
) -> SmoothMap:
    doc = _load_document(source)
    name = doc.get("name", "map")
    if not isinstance(name, str):
        raise SpecError("map 'name' must be a string")
    for key, geom in (("source", source_geometry), ("target", target_geometry)):
        declared = doc.get(key)
        if declared != geom.name:
            raise SpecError(
                f"map {name!r} declares {key}={declared!r} but was given "
                f"geometry {geom.name!r}"
            )
    comps = doc.get("components")
    if not isinstance(comps, list) or len(comps) != target_geometry.chart.dim:
        raise SpecError(f"map {name!r} needs {target_geometry.chart.dim} components")
    vocab = list(source_geometry.chart.coords)
    parsed = tuple(
        _parse_entry(e, vocab, f"{name}.components[{i}]") for i, e in enumerate(comps)
    )
    inverse = None
    if "inverse" in doc:
        raw = doc["inverse"]
        if not isinstance(raw, list) or len(raw) != source_geometry.chart.dim:
            raise SpecError(
                f"map {name!r} inverse needs {source_geometry.chart.dim} components"
            )
        tvocab = list(target_geometry.chart.coords)
        inverse = tuple(
            _parse_entry(e, tvocab, f"{name}.inverse[{i}]") for i, e in enumerate(raw)
        )
    try:
        return SmoothMap(
            source_geometry.chart,
            target_geometry.chart,
            parsed,
            inverse,
            name=name,
        )
    except GeometryError as exc:
        raise SpecError(f"map {name!r}: {exc}") from exc
