import random
import time

from supersasaki.cartan import (
    apply_field,
    cartan_commutators,
    de_rham,
    field_residuals,
    fields_equal,
    interior,
    lie_derivative,
    super_commutator,
    verify_proposition,
)
from supersasaki.geometry import (
    AlmostSymplectic,
    Chart,
    MetricTensor,
    VectorFieldM,
    christoffel,
    vector_commutator,
)
from supersasaki.grassmann import EVEN, ODD, epsilon, graded_equal, graded_to_text, parse_graded
from supersasaki.sasakilift import lift_geometry, pairing_via_lift, random_base_field
from supersasaki.symexpr import OracleConfig, canonical_equal, parse_expr

SEED = 7130


def _p(text):
    return parse_expr(text)


def euclidean2():
    ch = Chart(("x", "y"), intervals={"x": (-1.0, 1.0), "y": (-1.0, 1.0)}, name="euclidean2")
    g = MetricTensor(ch, [[_p("1"), _p("0")], [_p("0"), _p("1")]])
    om = AlmostSymplectic(ch, [[_p("0"), _p("-1")], [_p("1"), _p("0")]])
    return g, om


def misner():
    ch = Chart(("t", "phi"), intervals={"t": (0.5, 1.5), "phi": (0.2, 1.2)}, name="misner")
    g = MetricTensor(ch, [[_p("0"), _p("1")], [_p("1"), _p("t")]])
    om = AlmostSymplectic(ch, [[_p("0"), _p("-1")], [_p("1"), _p("0")]])
    return g, om


def polar():
    ch = Chart(("r", "theta"), intervals={"r": (0.4, 1.6), "theta": (0.1, 1.3)}, name="polar")
    g = MetricTensor(ch, [[_p("1"), _p("0")], [_p("0"), _p("r^2")]])
    om = AlmostSymplectic(ch, [[_p("0"), _p("-r")], [_p("r"), _p("0")]])
    return g, om


def test_operator_parities():
    ch = euclidean2()[0].chart
    X = VectorFieldM(ch, (_p("y"), _p("x^2")))
    assert de_rham(ch).parity == ODD
    assert interior(X).parity == ODD
    assert lie_derivative(X).parity == EVEN


def test_exterior_derivative_acts_like_d():
    ch = euclidean2()[0].chart
    d = de_rham(ch)
    table = d.table
    f = parse_graded("x*y", table)
    assert graded_equal(apply_field(d, f), parse_graded("y*dx + x*dy", table))
    # d is a derivation into the odd slot, so d(dx) = 0 and d(x*dx) = dx*dx = 0
    assert apply_field(d, parse_graded("dx", table)).is_zero()
    assert apply_field(d, parse_graded("x*dx", table)).is_zero()
    assert graded_equal(
        apply_field(d, parse_graded("y*dx", table)),
        parse_graded("dy*dx", table),
    )


def test_d_squares_to_zero_as_a_field():
    ch = polar()[0].chart
    d = de_rham(ch)
    dd = super_commutator(d, d)
    for res in list(dd.components) + list(dd.barred):
        assert res.is_zero(), "[d,d] should vanish identically"


def test_d_with_interior_gives_lie():
    ch = euclidean2()[0].chart
    X = VectorFieldM(ch, (_p("y"), _p("x*y")))
    got = super_commutator(de_rham(ch), interior(X))
    want = lie_derivative(X)
    assert fields_equal(got, want), "[d, i_X] != L_X"
    # and the parity comes out even
    assert got.parity == EVEN


def test_lie_interior_bracket_is_interior_of_commutator():
    ch = misner()[0].chart
    X = VectorFieldM(ch, (_p("phi"), _p("t")))
    Y = VectorFieldM(ch, (_p("t*phi"), _p("1")))
    got = super_commutator(lie_derivative(X), interior(Y))
    want = interior(vector_commutator(X, Y))
    assert fields_equal(got, want), "[L_X, i_Y] != i_[X,Y]"


def test_commutator_table_randomized():
    rng = random.Random(SEED)
    start = time.monotonic()
    for g, _ in (euclidean2(), misner(), polar()):
        cfg = OracleConfig(samples=20, tol=1e-9, seed=SEED).with_intervals(g.chart.intervals)
        for round_no in range(4):
            X = random_base_field(g.chart, rng)
            Y = random_base_field(g.chart, rng)
            report = cartan_commutators(X, Y, cfg)
            assert len(report.entries) == 6
            for entry in report.entries:
                assert entry.holds, f"{g.chart.name} round {round_no}: {entry.name}"
    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"commutator table too slow: {elapsed:.1f}s"
    print(f"commutator table over 12 random rounds in {elapsed:.2f}s")


def test_interior_fields_pair_to_the_two_form():
    g, om = misner()
    lift = lift_geometry(g, om)
    e0 = VectorFieldM(g.chart, (_p("1"), _p("0")))
    e1 = VectorFieldM(g.chart, (_p("0"), _p("1")))
    got = pairing_via_lift(interior(e0), interior(e1), lift.lifted)
    assert graded_to_text(got) == "-1"
    got = pairing_via_lift(interior(e1), interior(e0), lift.lifted)
    assert graded_to_text(got) == "1"
    got = pairing_via_lift(interior(e0), interior(e0), lift.lifted)
    assert got.is_zero()


def test_lie_against_d_gives_the_flat_one_form():
    g, om = euclidean2()
    lift = lift_geometry(g, om)
    X = VectorFieldM(g.chart, (_p("y"), _p("0")))
    got = pairing_via_lift(lie_derivative(X), de_rham(g.chart), lift.lifted)
    assert graded_to_text(got) == "y*dx"
    d = de_rham(g.chart)
    assert pairing_via_lift(d, d, lift.lifted).is_zero()
    assert pairing_via_lift(interior(X), d, lift.lifted).is_zero()


def test_proposition_on_fixed_fields():
    for g, om in (euclidean2(), misner(), polar()):
        gamma = christoffel(g)
        cfg = OracleConfig(samples=20, tol=1e-9, seed=SEED).with_intervals(g.chart.intervals)
        c0, c1 = g.chart.coords
        X = VectorFieldM(g.chart, (_p(c1), _p(c0)))
        Y = VectorFieldM(g.chart, (_p("1"), _p(f"{c0}*{c1}")))
        report = verify_proposition(g, om, gamma, X, Y, cfg)
        assert len(report.entries) == 6
        for entry in report.entries:
            assert entry.holds, f"{g.chart.name}: {entry.name}: {entry.residual}"


def test_reports_disclose_their_sign_conventions():
    g, om = euclidean2()
    X = VectorFieldM(g.chart, (_p("y"), _p("0")))
    Y = VectorFieldM(g.chart, (_p("x"), _p("1")))
    report = verify_proposition(g, om, christoffel(g), X, Y)
    assert any("two-form dictionary" in line for line in report.conventions), (
        "the identity report must say which two-form sign dictionary was used"
    )
    assert any("left" in line for line in report.conventions)
    table_report = cartan_commutators(X, Y)
    assert table_report.conventions == report.conventions


def test_proposition_randomized_all_geometries():
    rng = random.Random(SEED + 1)
    start = time.monotonic()
    for g, om in (euclidean2(), misner(), polar()):
        gamma = christoffel(g)
        lift = lift_geometry(g, om, gamma)
        cfg = OracleConfig(samples=20, tol=1e-9, seed=SEED).with_intervals(g.chart.intervals)
        for round_no in range(5):
            X = random_base_field(g.chart, rng)
            Y = random_base_field(g.chart, rng)
            report = verify_proposition(g, om, gamma, X, Y, cfg, lift=lift)
            for entry in report.entries:
                assert entry.holds, f"{g.chart.name} round {round_no}: {entry.name}"
    elapsed = time.monotonic() - start
    print(f"proposition suite over 15 random rounds in {elapsed:.2f}s")


def test_epsilon_level_pairing_recovers_base_tensors():
    rng = random.Random(SEED + 2)
    for g, om in (euclidean2(), misner(), polar()):
        lift = lift_geometry(g, om)
        cfg = OracleConfig(samples=20, tol=1e-9, seed=SEED).with_intervals(g.chart.intervals)
        for _ in range(4):
            X = random_base_field(g.chart, rng)
            Y = random_base_field(g.chart, rng)
            pair = pairing_via_lift(lie_derivative(X), lie_derivative(Y), lift.lifted)
            n = g.chart.dim
            gXY = _p("0")
            from supersasaki.geometry import bilinear_eval

            gXY = bilinear_eval(g.matrix, X.components, Y.components)
            assert cfg.equal(epsilon(pair), gXY), "epsilon part is not g(X,Y)"
            ipair = pairing_via_lift(interior(X), interior(Y), lift.lifted)
            omXY = bilinear_eval(om.matrix, X.components, Y.components)
            assert cfg.equal(epsilon(ipair), omXY), "interior pairing is not omega(X,Y)"


def test_residuals_report_actual_failures():
    ch = euclidean2()[0].chart
    X = VectorFieldM(ch, (_p("y"), _p("0")))
    # L_X and i_X differ; the residual list must say where
    res = field_residuals(lie_derivative(X), interior(X))
    assert any(not r.is_zero() for r in res)
