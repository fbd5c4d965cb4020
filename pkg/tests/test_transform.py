import random

import pytest

from supersasaki.geometry import (
    AlmostSymplectic,
    Chart,
    GeometryError,
    MetricTensor,
    christoffel,
)
from supersasaki.grassmann import ODD, EVEN, graded_equal, graded_to_text, parse_graded
from supersasaki.sasakilift import lift_geometry, ptm_table, random_field, tptm_table
from supersasaki.symexpr import OracleConfig, canonical_equal, is_zero_expr, parse_expr
from supersasaki.transform import (
    SmoothMap,
    check_naturality,
    compose_maps,
    field_pullback,
    is_isometry,
    is_symplectomorphism,
    pairing_invariance,
    prolong,
    pullback,
    pullback_metric,
    pullback_two_form,
    transform_christoffel,
)

SEED = 90210


def _p(text):
    return parse_expr(text)


def euclidean_chart(name="euclidean2"):
    return Chart(("x", "y"), intervals={"x": (-1.0, 1.0), "y": (-1.0, 1.0)}, name=name)


def euclidean_data():
    ch = euclidean_chart()
    g = MetricTensor(ch, [[_p("1"), _p("0")], [_p("0"), _p("1")]])
    om = AlmostSymplectic(ch, [[_p("0"), _p("-1")], [_p("1"), _p("0")]])
    return g, om


def polar_chart():
    return Chart(("r", "theta"), intervals={"r": (0.4, 1.6), "theta": (0.1, 1.3)}, name="polar")


def rotation(angle_text="1"):
    ch = euclidean_chart()
    c, s = f"cos({angle_text})", f"sin({angle_text})"
    return SmoothMap(
        ch,
        ch,
        (_p(f"{c}*x - {s}*y"), _p(f"{s}*x + {c}*y")),
        inverse=(_p(f"{c}*x + {s}*y"), _p(f"-{s}*x + {c}*y")),
        name="rotation",
    )


def doubling():
    ch = euclidean_chart()
    return SmoothMap(
        ch, ch, (_p("2*x"), _p("2*y")), inverse=(_p("x/2"), _p("y/2")), name="scaling"
    )


def polar_to_cartesian():
    return SmoothMap(
        polar_chart(),
        euclidean_chart(),
        (_p("r*cos(theta)"), _p("r*sin(theta)")),
        name="polar_to_cartesian",
    )


def test_map_validation():
    ch = euclidean_chart()
    with pytest.raises(GeometryError):
        SmoothMap(ch, ch, (_p("x"),))  # wrong arity
    with pytest.raises(GeometryError):
        SmoothMap(ch, ch, (_p("x"), _p("z")))  # unknown source name
    with pytest.raises(GeometryError):
        SmoothMap(ch, ch, (_p("2*x"), _p("2*y")), inverse=(_p("x"), _p("y")))


def test_prolongation_blocks():
    psi = doubling()
    images = prolong(psi)
    src = tptm_table(psi.source)
    assert graded_equal(images["dx"], parse_graded("2*dx", src))
    assert graded_equal(images["xdot"], parse_graded("2*xdot", src))
    assert graded_equal(images["dxdot"], parse_graded("2*dxdot", src))
    assert graded_equal(images["x"], parse_graded("2*x", src))


def test_prolongation_second_order_block():
    # y = x^2 style curvature shows up only in the d(xdot) image
    src = Chart(("u", "v"), intervals={"u": (0.2, 1.0), "v": (0.2, 1.0)}, name="uv")
    tgt = euclidean_chart()
    psi = SmoothMap(src, tgt, (_p("u"), _p("u^2 + v")), name="bend")
    images = prolong(psi)
    table = tptm_table(src)
    assert graded_equal(images["dydot"], parse_graded("2*u*dudot + dvdot + 2*udot*du", table))
    assert graded_equal(images["dy"], parse_graded("2*u*du + dv", table))
    assert graded_equal(images["ydot"], parse_graded("2*u*udot + vdot", table))


def test_prolongation_on_a_line():
    src = Chart(("x",), intervals={"x": (0.2, 1.0)}, name="line_x")
    tgt = Chart(("y",), intervals={"y": (0.2, 1.0)}, name="line_y")
    psi = SmoothMap(src, tgt, (_p("x^2"),), name="square")
    images = prolong(psi)
    table = tptm_table(src)
    assert graded_equal(images["dydot"], parse_graded("2*x*dxdot + 2*xdot*dx", table))
    assert graded_equal(images["dy"], parse_graded("2*x*dx", table))
    assert graded_equal(images["ydot"], parse_graded("2*x*xdot", table))


def test_prolongation_is_functorial():
    first = rotation("1")
    second = rotation("1/2")
    composed = compose_maps(second, first)
    cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(first.source.intervals)
    direct = prolong(composed)
    step1 = prolong(second)
    table = tptm_table(first.source)
    for gen, image in direct.items():
        chained = pullback(first, step1[gen])
        assert graded_equal(image, chained, cfg), f"functoriality broke at {gen}"


def test_pullback_metric_recovers_polar_from_flat():
    psi = polar_to_cartesian()
    gE, omE = euclidean_data()
    gP = pullback_metric(psi, gE)
    assert canonical_equal(gP.matrix[0][0], _p("1"))
    assert canonical_equal(gP.matrix[1][1], _p("r^2"))
    assert is_zero_expr(gP.matrix[0][1])
    omP = pullback_two_form(psi, omE)
    assert canonical_equal(omP.matrix[0][1], _p("-r"))
    assert canonical_equal(omP.matrix[1][0], _p("r"))


def test_christoffel_transport_matches_direct_computation():
    psi = polar_to_cartesian()
    gE, _ = euclidean_data()
    gP = pullback_metric(psi, gE)
    gammaE = christoffel(gE)
    moved = transform_christoffel(psi, gammaE)
    direct = christoffel(gP)
    cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(psi.source.intervals)
    n = 2
    for a in range(n):
        for b in range(n):
            for c in range(n):
                assert cfg.equal(moved.entry(a, b, c), direct.entry(a, b, c)), (
                    f"transported Gamma disagrees at {(a, b, c)}"
                )


def test_pullback_of_splitting_covectors_is_jacobian_linear():
    # with the target flat and the source connection transported, pulling
    # back nabla(ydot^a) must give J^a_b nabla(xdot^b)
    from supersasaki.grassmann import GradedExpr
    from supersasaki.sasakilift import nabla_dot
    from supersasaki.transform import jacobian

    psi = polar_to_cartesian()
    gE, _ = euclidean_data()
    gammaE = christoffel(gE)
    gammaP = transform_christoffel(psi, gammaE)
    nabla_target = nabla_dot(gammaE)
    nabla_source = nabla_dot(gammaP)
    J = jacobian(psi)
    cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(psi.source.intervals)
    n = 2
    for alpha in range(n):
        pulled = pullback(psi, nabla_target[alpha])
        combo = GradedExpr.zero(pulled.table)
        for a in range(n):
            combo = combo + nabla_source[a].scale(J[alpha][a])
        assert graded_equal(pulled, combo, cfg), (
            f"splitting covector {alpha} does not transform linearly"
        )


def test_christoffel_naturality_across_shipped_maps():
    gE, _ = euclidean_data()
    cases = [(rotation(), gE), (doubling(), gE)]
    ch = Chart(("t", "phi"), intervals={"t": (0.5, 1.5), "phi": (0.2, 1.2)}, name="misner")
    gMis = MetricTensor(ch, [[_p("0"), _p("1")], [_p("1"), _p("t")]])
    cases.append(
        (
            SmoothMap(ch, ch, (_p("t"), _p("phi + 1")), inverse=(_p("t"), _p("phi - 1")), name="phi_translation"),
            gMis,
        )
    )
    for psi, g_target in cases:
        cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(psi.source.intervals)
        pulled_metric = pullback_metric(psi, g_target)
        moved = transform_christoffel(psi, christoffel(g_target))
        direct = christoffel(pulled_metric)
        n = psi.source.dim
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    assert cfg.equal(moved.entry(a, b, c), direct.entry(a, b, c)), (
                        f"{psi.name}: connection naturality broke at {(a, b, c)}"
                    )


def test_preserving_both_structures_forces_naturality():
    gE, omE = euclidean_data()
    psiP = polar_to_cartesian()
    gP = pullback_metric(psiP, gE)
    omP = pullback_two_form(psiP, omE)
    ch = Chart(("t", "phi"), intervals={"t": (0.5, 1.5), "phi": (0.2, 1.2)}, name="misner")
    gMis = MetricTensor(ch, [[_p("0"), _p("1")], [_p("1"), _p("t")]])
    omMis = AlmostSymplectic(ch, [[_p("0"), _p("-1")], [_p("1"), _p("0")]])
    trans = SmoothMap(ch, ch, (_p("t"), _p("phi + 1")), inverse=(_p("t"), _p("phi - 1")), name="phi_translation")
    cases = [
        (rotation(), (gE, omE), (gE, omE)),
        (doubling(), (gE, omE), (gE, omE)),
        (psiP, (gP, omP), (gE, omE)),
        (trans, (gMis, omMis), (gMis, omMis)),
    ]
    preserved = 0
    for psi, source_data, target_data in cases:
        cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(psi.source.intervals)
        report = check_naturality(psi, source_data, target_data, cfg)
        if report.isometry and report.symplectomorphism:
            preserved += 1
            assert report.holds, f"{psi.name}: preserved both structures but broke the lift"
    assert preserved >= 3, "property check should not be vacuous"


def test_rotation_is_an_isometry_and_natural():
    psi = rotation()
    gE, omE = euclidean_data()
    cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(psi.source.intervals)
    assert is_isometry(psi, gE, gE, cfg)
    assert is_symplectomorphism(psi, omE, omE, cfg)
    report = check_naturality(psi, (gE, omE), (gE, omE), cfg)
    assert report.holds
    assert report.residual == "0"


def test_scaling_breaks_naturality_with_a_visible_residual():
    psi = doubling()
    gE, omE = euclidean_data()
    cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(psi.source.intervals)
    report = check_naturality(psi, (gE, omE), (gE, omE), cfg)
    assert not report.isometry
    assert not report.holds
    assert report.residual == "3*xdot^2 + 3*ydot^2 + 6*dxdot*dydot"


def test_polar_chart_naturality_is_exact():
    psi = polar_to_cartesian()
    gE, omE = euclidean_data()
    gP = pullback_metric(psi, gE)
    omP = pullback_two_form(psi, omE)
    cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(psi.source.intervals)
    report = check_naturality(psi, (gP, omP), (gE, omE), cfg)
    assert report.isometry and report.symplectomorphism and report.holds


def test_field_pullback_respects_parity_and_chart():
    psi = polar_to_cartesian()
    rng = random.Random(SEED)
    tgt_chart = psi.target
    for parity in (EVEN, ODD):
        V = random_field(tgt_chart, parity, rng)
        W = field_pullback(psi, V)
        assert W.parity == parity
        assert W.table == ptm_table(psi.source)


def test_pairing_invariance_under_chart_change():
    psi = polar_to_cartesian()
    gE, omE = euclidean_data()
    gP = pullback_metric(psi, gE)
    omP = pullback_two_form(psi, omE)
    source_lift = lift_geometry(gP, omP)
    target_lift = lift_geometry(gE, omE)
    cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(psi.source.intervals)
    rng = random.Random(SEED)
    for parity in (EVEN, ODD):
        for _ in range(3):
            X = random_field(psi.target, parity, rng)
            Y = random_field(psi.target, rng.choice((EVEN, ODD)), rng)
            outcome = pairing_invariance(psi, source_lift, target_lift, X, Y, cfg)
            assert outcome.holds, outcome.residual
    print("pairing invariance holds for sampled fields across the chart change")


def test_translation_along_a_symmetry_direction():
    ch = Chart(("t", "phi"), intervals={"t": (0.5, 1.5), "phi": (0.2, 1.2)}, name="misner")
    g = MetricTensor(ch, [[_p("0"), _p("1")], [_p("1"), _p("t")]])
    om = AlmostSymplectic(ch, [[_p("0"), _p("-1")], [_p("1"), _p("0")]])
    psi = SmoothMap(ch, ch, (_p("t"), _p("phi + 1")), inverse=(_p("t"), _p("phi - 1")), name="phi_translation")
    cfg = OracleConfig(samples=25, tol=1e-9, seed=SEED).with_intervals(ch.intervals)
    report = check_naturality(psi, (g, om), (g, om), cfg)
    assert report.isometry and report.holds
