"""Batch front door.

    supersasaki christoffel GEOM.json
    supersasaki sasaki GEOM.json
    supersasaki classical-sasaki GEOM.json
    supersasaki acs GEOM.json
    supersasaki pair GEOM.json --x lie:y,0 --y deRham
    supersasaki check GEOM.json --suite proposition
    supersasaki check GEOM.json --suite naturality --map MAP.json [--target GEOM2.json]

Field arguments for `pair` take one of the forms

    deRham                  the odd de Rham field of the chart
    interior:COMPS          interior field of a base vector field
    lie:COMPS               Lie field of a base vector field
    raw:FILE.json           a ptm field document

where COMPS is either a path to a base-field document or inline
comma-separated component expressions like "y,0".

Exit codes: 0 all checks pass, 1 at least one check failed, 2 bad input.
Reports are deterministic for a fixed --seed; timing is printed only
with --timing so that default output is reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from typing import Sequence

from .cartan import (
    cartan_commutators,
    de_rham,
    interior,
    lie_derivative,
    verify_proposition,
)
from .geometry import (
    GeometryError,
    VectorFieldM,
    acs_candidate,
    christoffel_fd,
    metric_compatibility_residual,
    squares_to_minus_identity,
    torsion_residual,
)
from .grassmann import (
    EVEN,
    ODD,
    GradedError,
    GradedExpr,
    graded_equal,
    graded_to_text,
    parity_of,
    parse_graded,
)
from .report import RunReport, render_structured, render_text
from .sasakilift import (
    classical_sasaki,
    lift_geometry,
    odd_velocity_name,
    pairing_closed_form,
    pairing_via_lift,
    random_base_field,
    random_field,
    vector_field_on_base,
    velocity_name,
)
from .specfiles import (
    GeometrySpec,
    SpecError,
    load_base_field,
    load_geometry,
    load_map,
    load_ptm_field,
)
from .symexpr import (
    OracleConfig,
    ParseError,
    canonical_text,
    eval_numeric,
    free_vars,
    is_zero_expr,
    parse_expr,
)
from .transform import SmoothMap, check_naturality, pairing_invariance

_INPUT_ERRORS = (SpecError, ParseError, GeometryError, GradedError, OSError)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("text", "structured"), default="text",
        help="report rendering (default text)",
    )
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="sampling comparison tolerance (default 1e-9)")
    parser.add_argument("--samples", type=int, default=50,
                        help="sample count for the randomized oracle (default 50)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for every randomized choice (default 0)")
    parser.add_argument("--timing", action="store_true",
                        help="append wall-clock time to the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supersasaki",
        description="Lift a metric and almost-symplectic form on a chart to "
        "an even metric function on the odd tangent bundle, and verify the "
        "identities that come with the construction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("christoffel", "Levi-Civita symbols of the chart metric"),
        ("sasaki", "the lifted metric function on the odd tangent bundle"),
        ("classical-sasaki", "the all-even tangent-bundle comparison metric"),
        ("acs", "the candidate almost complex structure omega g^-1"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("geometry", help="geometry spec file")
        _common_flags(sp)

    pair = sub.add_parser("pair", help="pair two fields through the lifted metric")
    pair.add_argument("geometry", help="geometry spec file")
    pair.add_argument("--x", required=True, metavar="FIELD",
                      help="deRham | interior:COMPS | lie:COMPS | raw:FILE")
    pair.add_argument("--y", required=True, metavar="FIELD",
                      help="same forms as --x")
    _common_flags(pair)

    chk = sub.add_parser("check", help="run a verification suite")
    chk.add_argument("geometry", help="geometry spec file")
    chk.add_argument("--suite", required=True,
                     choices=("cartan", "proposition", "invariance", "naturality"))
    chk.add_argument("--map", dest="map_path",
                     help="map spec file (invariance and naturality)")
    chk.add_argument("--target",
                     help="target geometry spec file (defaults to the source)")
    chk.add_argument("--fields", type=int, default=5,
                     help="randomized field rounds per suite (default 5)")
    _common_flags(chk)
    return parser


def _config(args: argparse.Namespace, spec: GeometrySpec) -> OracleConfig:
    return OracleConfig(
        samples=args.samples, tol=args.tol, seed=args.seed
    ).with_intervals(spec.chart.intervals)


def _gamma_label(spec: GeometrySpec, a: int, b: int, c: int) -> str:
    coords = spec.chart.coords
    return f"Gamma^{coords[a]}_{{{coords[b]},{coords[c]}}}"


def cmd_christoffel(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("christoffel", inputs={"geometry": spec.name})
    gamma = spec.connection()
    n = spec.chart.dim
    lines = []
    computed: dict[tuple[int, int, int], str] = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                text = canonical_text(gamma.entry(a, b, c))
                if text != "0":
                    computed[(a, b, c)] = text
                    lines.append(f"{_gamma_label(spec, a, b, c)} = {text}")
    report.values["nonzero symbols"] = lines or ["(all zero)"]

    compat = metric_compatibility_residual(spec.metric, gamma)
    flat_ok = all(
        is_zero_expr(compat[c][a][b])
        for c in range(n) for a in range(n) for b in range(n)
    )
    report.add("metric compatibility residual = 0", flat_ok)
    torsion = torsion_residual(gamma)
    torsion_ok = all(
        is_zero_expr(torsion[a][b][c])
        for a in range(n) for b in range(n) for c in range(n)
    )
    report.add("symbols symmetric in the lower pair", torsion_ok)

    rng = random.Random(args.seed)
    worst = 0.0
    points = max(1, args.samples)
    for _ in range(points):
        point = {
            c: rng.uniform(*spec.chart.intervals.get(c, (-1.0, 1.0)))
            for c in spec.chart.coords
        }
        fd = christoffel_fd(spec.metric, point)
        sym = [
            [
                [eval_numeric(gamma.entry(a, b, c), point) for c in range(n)]
                for b in range(n)
            ]
            for a in range(n)
        ]
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    worst = max(worst, abs(fd[a][b][c] - sym[a][b][c]))
    report.add(
        f"finite-difference cross-check at {points} points (worst {worst:.3e})",
        worst < 1e-6,
    )

    if spec.reference_christoffel is not None:
        covered = set()
        for a_n, b_n, c_n, value in spec.reference_christoffel:
            a, b, c = (spec.chart.coords.index(x) for x in (a_n, b_n, c_n))
            covered.add((a, b, c))
            ours = canonical_text(gamma.entry(a, b, c))
            ref = canonical_text(value)
            marker = "agrees" if ours == ref else f"differs (computed {ours}, reference {ref})"
            report.info(f"reference {_gamma_label(spec, a, b, c)} = {ref}: {marker}")
        extras = sorted(set(computed) - covered)
        for a, b, c in extras:
            report.info(
                f"beyond the reference set: {_gamma_label(spec, a, b, c)} = {computed[(a, b, c)]}"
            )
        if not extras:
            report.info("no computed symbols beyond the reference set")
    return report


def cmd_sasaki(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("sasaki", inputs={"geometry": spec.name})
    omega = spec.require_omega()
    lift = lift_geometry(spec.metric, omega)
    report.values["metric function"] = graded_to_text(lift.lifted)
    for i, c in enumerate(spec.chart.coords):
        report.values[f"nabla {velocity_name(c)}"] = graded_to_text(lift.nabla[i])

    report.add("metric function is even", parity_of(lift.lifted) in (EVEN, None))
    velocities = {velocity_name(c) for c in spec.chart.coords}
    odd_velocities = {odd_velocity_name(c) for c in spec.chart.coords}
    names = lift.tptm.names
    at_zero_section = all(
        any(names[i] in odd_velocities for i in mono)
        or (free_vars(coeff) & velocities)
        for mono, coeff in lift.lifted.terms.items()
    )
    report.add("vanishes at the zero section", at_zero_section)

    if spec.reference_nabla is not None:
        for i, c in enumerate(spec.chart.coords):
            if c not in spec.reference_nabla:
                continue
            ref = parse_graded(spec.reference_nabla[c], lift.tptm)
            delta = lift.nabla[i] - ref
            report.info(
                f"nabla {velocity_name(c)} minus reference",
                "0" if delta.is_zero() else graded_to_text(delta),
            )
    if spec.reference_sasaki is not None:
        ref = parse_graded(spec.reference_sasaki, lift.tptm)
        delta = lift.lifted - ref
        report.info(
            "metric function minus reference",
            "0" if delta.is_zero() else graded_to_text(delta),
        )
    return report


def cmd_classical_sasaki(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("classical-sasaki", inputs={"geometry": spec.name})
    report.values["metric function"] = graded_to_text(classical_sasaki(spec.metric))
    return report


def cmd_acs(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("acs", inputs={"geometry": spec.name})
    omega = spec.require_omega()
    J = acs_candidate(spec.metric, omega)
    report.values["J"] = [
        "[" + ", ".join(canonical_text(e) for e in row) + "]" for row in J
    ]
    report.values["J^2 = -Id"] = "true" if squares_to_minus_identity(J) else "false"
    return report


def _parse_field_arg(
    text: str, spec: GeometrySpec, what: str
):
    """FIELD argument -> a ptm vector field (see module docstring)."""
    chart = spec.chart
    if text == "deRham":
        return de_rham(chart), "deRham"
    for prefix in ("interior", "lie", "raw"):
        if text.startswith(prefix + ":"):
            payload = text[len(prefix) + 1 :]
            break
    else:
        raise SpecError(
            f"{what}: expected deRham, interior:..., lie:..., or raw:..., got {text!r}"
        )
    if prefix == "raw":
        field = load_ptm_field(payload, chart)
        return field, f"raw field from {payload}"
    if payload.endswith(".json"):
        base = load_base_field(payload, chart)
        label = f"{prefix} of field from {payload}"
    else:
        comps = payload.split(",")
        if len(comps) != chart.dim:
            raise SpecError(
                f"{what}: inline components need {chart.dim} comma-separated entries"
            )
        base = VectorFieldM(
            chart,
            tuple(parse_expr(p.strip(), list(chart.coords)) for p in comps),
        )
        label = f"{prefix}({payload})"
    return (interior(base) if prefix == "interior" else lie_derivative(base)), label


def cmd_pair(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("pair", inputs={"geometry": spec.name})
    omega = spec.require_omega()
    X, x_label = _parse_field_arg(args.x, spec, "--x")
    Y, y_label = _parse_field_arg(args.y, spec, "--y")
    report.inputs["x"] = x_label
    report.inputs["y"] = y_label
    lift = lift_geometry(spec.metric, omega)
    cfg = _config(args, spec)
    via = pairing_via_lift(X, Y, lift.lifted)
    closed = pairing_closed_form(X, Y, spec.metric, omega, lift.gamma)
    report.values["pairing (vertical lift)"] = graded_to_text(via)
    report.values["pairing (closed form)"] = graded_to_text(closed)
    residual = via - closed
    report.add(
        "vertical lift and closed form agree",
        graded_equal(residual, GradedExpr.zero(residual.table), cfg),
        "0" if residual.is_zero() else graded_to_text(residual),
    )
    return report


def _suite_cartan(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("check cartan", inputs={"geometry": spec.name})
    cfg = _config(args, spec)
    rng = random.Random(args.seed)
    for k in range(max(1, args.fields)):
        X = random_base_field(spec.chart, rng)
        Y = random_base_field(spec.chart, rng)
        sub = cartan_commutators(X, Y, cfg)
        for entry in sub.entries:
            report.add(f"round {k}: {entry.name}", entry.holds, entry.residual)
    return report


def _suite_proposition(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("check proposition", inputs={"geometry": spec.name})
    omega = spec.require_omega()
    cfg = _config(args, spec)
    gamma = spec.connection()
    lift = lift_geometry(spec.metric, omega, gamma)
    rng = random.Random(args.seed)
    for k in range(max(1, args.fields)):
        X = random_base_field(spec.chart, rng)
        Y = random_base_field(spec.chart, rng)
        sub = verify_proposition(spec.metric, omega, gamma, X, Y, cfg, lift)
        for entry in sub.entries:
            report.add(f"round {k}: {entry.name}", entry.holds, entry.residual)
    return report


def _load_pair_of_charts(
    args: argparse.Namespace, spec: GeometrySpec
) -> tuple[GeometrySpec, SmoothMap]:
    if not args.map_path:
        raise SpecError(f"suite {args.suite!r} needs --map")
    target = load_geometry(args.target) if args.target else spec
    psi = load_map(args.map_path, spec, target)
    return target, psi


def _suite_invariance(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("check invariance", inputs={"geometry": spec.name})
    target, psi = _load_pair_of_charts(args, spec)
    report.inputs["map"] = psi.name
    report.inputs["target"] = target.name
    omega_m = spec.require_omega()
    omega_n = target.require_omega()
    cfg = _config(args, spec)
    lift_m = lift_geometry(spec.metric, omega_m)
    lift_n = lift_geometry(target.metric, omega_n)

    tchart = target.chart
    fixed: list[tuple[str, object]] = []
    frame = vector_field_on_base(
        tchart, tuple(parse_expr("1" if i == 0 else "0", list(tchart.coords)) for i in range(tchart.dim))
    )
    fixed.append(("first coordinate field", frame))
    if tchart.dim >= 2:
        comps = ["0"] * tchart.dim
        comps[0] = tchart.coords[1]
        comps[1] = "-" + tchart.coords[0]
        rotational = vector_field_on_base(
            tchart, tuple(parse_expr(c, list(tchart.coords)) for c in comps)
        )
        fixed.append(("rotational field", rotational))
    rng = random.Random(args.seed)
    fixed.append(("seeded odd field", random_field(tchart, ODD, rng)))
    fixed.append(("seeded even field", random_field(tchart, EVEN, rng)))

    for i in range(len(fixed)):
        for j in range(i, len(fixed)):
            name_i, X = fixed[i]
            name_j, Y = fixed[j]
            outcome = pairing_invariance(psi, lift_m, lift_n, X, Y, cfg)
            report.add(
                f"<{name_i} | {name_j}> invariant under {psi.name}",
                outcome.holds,
                outcome.residual,
            )
    return report


def _suite_naturality(args: argparse.Namespace, spec: GeometrySpec) -> RunReport:
    report = RunReport("check naturality", inputs={"geometry": spec.name})
    target, psi = _load_pair_of_charts(args, spec)
    report.inputs["map"] = psi.name
    report.inputs["target"] = target.name
    omega_m = spec.require_omega()
    omega_n = target.require_omega()
    cfg = _config(args, spec)
    outcome = check_naturality(
        psi, (spec.metric, omega_m), (target.metric, omega_n), cfg
    )
    report.info(f"map is an isometry: {'yes' if outcome.isometry else 'no'}")
    report.info(
        f"map is a symplectomorphism: {'yes' if outcome.symplectomorphism else 'no'}"
    )
    report.add(
        "pullback of the lifted metric equals the source lift",
        outcome.holds,
        outcome.residual,
    )
    return report


_SUITES = {
    "cartan": _suite_cartan,
    "proposition": _suite_proposition,
    "invariance": _suite_invariance,
    "naturality": _suite_naturality,
}

_COMMANDS = {
    "christoffel": cmd_christoffel,
    "sasaki": cmd_sasaki,
    "classical-sasaki": cmd_classical_sasaki,
    "acs": cmd_acs,
    "pair": cmd_pair,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        spec = load_geometry(args.geometry)
        if args.command == "check":
            report = _SUITES[args.suite](args, spec)
        else:
            report = _COMMANDS[args.command](args, spec)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.elapsed = time.perf_counter() - started
    renderer = render_structured if args.format == "structured" else render_text
    print(renderer(report, with_timing=args.timing))
    return 0 if report.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
