"""Cartan calculus realized as vector fields on the odd tangent bundle.

The three operator families, written in the chart's generators:

    d   = dx^a d/dx^a                                  (odd)
    i_X = X^a(x) d/d(dx^a)                             (odd)
    L_X = X^a(x) d/dx^a + dx^b (dX^a/dx^b) d/d(dx^a)   (even)

The graded commutator of two first-order fields is again first order, so
its components are extracted by applying it to the generators:

    [U, V](w) = U(V(w)) - (-1)^{|U||V|} V(U(w))

for each generator w. The six pairing identities relate these fields
through the lifted metric: the left side of every identity is computed by
the vertical-lift pairing, the right side assembled from the chart data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import (
    AlmostSymplectic,
    Chart,
    ChristoffelSymbols,
    MetricTensor,
    OMEGA_DICTIONARY_NOTE,
    VectorFieldM,
    bilinear_eval,
    covariant_derivative,
    flat,
    vector_commutator,
)
from .grassmann import (
    EVEN,
    ODD,
    ODD_DERIVATIVE_NOTE,
    GradedError,
    GradedExpr,
    gmul,
    graded_equal,
    graded_to_text,
    partial,
)
from .sasakilift import (
    LiftedGeometry,
    VectorFieldPTM,
    base_coords_of,
    lift_geometry,
    odd_fiber_name,
    pairing_via_lift,
    ptm_table,
)
from .symexpr import Const, Expr, OracleConfig, differentiate, simplify


@dataclass(frozen=True)
class CartanField(VectorFieldPTM):
    """A vector field on the odd tangent bundle tagged with how it arose."""

    origin: str = "custom"


def de_rham(chart: Chart) -> CartanField:
    """The odd field d = dx^a d/dx^a; squares to zero."""
    table = ptm_table(chart)
    comps = tuple(
        GradedExpr.generator(table, odd_fiber_name(c)) for c in chart.coords
    )
    zeros = tuple(GradedExpr.zero(table) for _ in chart.coords)
    return CartanField(table, comps, zeros, ODD, origin="deRham")


def interior(X: VectorFieldM) -> CartanField:
    """The odd field i_X = X^a(x) d/d(dx^a)."""
    table = ptm_table(X.chart)
    zeros = tuple(GradedExpr.zero(table) for _ in X.chart.coords)
    barred = tuple(
        GradedExpr.make(table, [((), c)]) for c in X.components
    )
    return CartanField(table, zeros, barred, ODD, origin="interior")


def lie_derivative(X: VectorFieldM) -> CartanField:
    """The even field L_X = X^a d/dx^a + dx^b (dX^a/dx^b) d/d(dx^a)."""
    chart = X.chart
    table = ptm_table(chart)
    comps = tuple(
        GradedExpr.make(table, [((), c)]) for c in X.components
    )
    barred = []
    for a in range(chart.dim):
        total = GradedExpr.zero(table)
        for b, cb in enumerate(chart.coords):
            coeff = differentiate(X.components[a], cb)
            total = total + GradedExpr.generator(
                table, odd_fiber_name(cb)
            ).scale(coeff)
        barred.append(total)
    return CartanField(table, comps, tuple(barred), EVEN, origin="lie")


def apply_field(U: VectorFieldPTM, f: GradedExpr) -> GradedExpr:
    """U acting as a first-order differential operator on f."""
    if f.table != U.table:
        raise GradedError("field and function live over different tables")
    coords = base_coords_of(U.table)
    total = GradedExpr.zero(U.table)
    for a, c in enumerate(coords):
        if not U.components[a].is_zero():
            total = total + gmul(U.components[a], partial(f, c))
        if not U.barred[a].is_zero():
            total = total + gmul(U.barred[a], partial(f, odd_fiber_name(c)))
    return total


def super_commutator(U: VectorFieldPTM, V: VectorFieldPTM) -> VectorFieldPTM:
    """[U, V] = U V - (-1)^{|U||V|} V U, components read off by applying the
    bracket to each generator."""
    if U.table != V.table:
        raise GradedError("bracketed fields live over different tables")
    # multiplier of the V U term: -(-1)^{|U||V|}
    sign = Const(Fraction(1 if (U.parity and V.parity) else -1))
    comps = tuple(
        apply_field(U, V.components[j]) + apply_field(V, U.components[j]).scale(sign)
        for j in range(U.dim)
    )
    barred = tuple(
        apply_field(U, V.barred[j]) + apply_field(V, U.barred[j]).scale(sign)
        for j in range(U.dim)
    )
    return VectorFieldPTM(
        U.table, comps, barred, (U.parity + V.parity) % 2
    )


def field_residuals(U: VectorFieldPTM, V: VectorFieldPTM) -> tuple[GradedExpr, ...]:
    """Componentwise differences U - V, ordered components then barred."""
    if U.table != V.table:
        raise GradedError("compared fields live over different tables")
    return tuple(U.components[j] - V.components[j] for j in range(U.dim)) + tuple(
        U.barred[j] - V.barred[j] for j in range(U.dim)
    )


def fields_equal(
    U: VectorFieldPTM, V: VectorFieldPTM, config: OracleConfig | None = None
) -> bool:
    zero = GradedExpr.zero(U.table)
    return all(graded_equal(r, zero, config) for r in field_residuals(U, V))


# ---------------------------------------------------------------------------
# check reports

@dataclass(frozen=True)
class CheckOutcome:
    name: str
    holds: bool
    residual: str  # canonical text of the residual, "0" when it vanishes


@dataclass(frozen=True)
class CheckReport:
    title: str
    entries: tuple[CheckOutcome, ...]
    conventions: tuple[str, ...]

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.entries)


CONVENTIONS = (ODD_DERIVATIVE_NOTE, OMEGA_DICTIONARY_NOTE)


def _field_outcome(
    name: str,
    U: VectorFieldPTM,
    V: VectorFieldPTM,
    config: OracleConfig | None,
) -> CheckOutcome:
    residuals = field_residuals(U, V)
    zero = GradedExpr.zero(U.table)
    holds = all(graded_equal(r, zero, config) for r in residuals)
    nonzero = [graded_to_text(r) for r in residuals if not r.is_zero()]
    return CheckOutcome(name, holds, "; ".join(nonzero) if nonzero else "0")


def cartan_commutators(
    X: VectorFieldM, Y: VectorFieldM, config: OracleConfig | None = None
) -> CheckReport:
    """The graded commutation table of d, i, and L on one chart."""
    chart = X.chart
    table = ptm_table(chart)
    zero_field = VectorFieldPTM(
        table,
        tuple(GradedExpr.zero(table) for _ in chart.coords),
        tuple(GradedExpr.zero(table) for _ in chart.coords),
        EVEN,
    )
    d = de_rham(chart)
    iX, iY = interior(X), interior(Y)
    LX, LY = lie_derivative(X), lie_derivative(Y)
    XY = vector_commutator(X, Y)
    checks = (
        ("[d,d] = 0", super_commutator(d, d), zero_field),
        ("[d,i_X] = L_X", super_commutator(d, iX), LX),
        ("[i_X,i_Y] = 0", super_commutator(iX, iY), zero_field),
        ("[L_X,i_Y] = i_[X,Y]", super_commutator(LX, iY), interior(XY)),
        ("[d,L_X] = 0", super_commutator(d, LX), zero_field),
        ("[L_X,L_Y] = L_[X,Y]", super_commutator(LX, LY), lie_derivative(XY)),
    )
    entries = tuple(
        _field_outcome(name, got, want, config) for name, got, want in checks
    )
    return CheckReport("cartan commutators", entries, CONVENTIONS)


def _scalar_graded(table, e: Expr) -> GradedExpr:
    return GradedExpr.make(table, [((), simplify(e))])


def verify_proposition(
    g: MetricTensor,
    omega: AlmostSymplectic,
    gamma: ChristoffelSymbols,
    X: VectorFieldM,
    Y: VectorFieldM,
    config: OracleConfig | None = None,
    lift: LiftedGeometry | None = None,
) -> CheckReport:
    """The six pairing identities for the lifted metric.

    Left sides come from the vertical-lift pairing against the lifted
    metric; right sides are assembled from the chart data:

      (i)   <i_X|i_Y> = omega(X,Y)
      (ii)  <i_X|d>   = 0
      (iii) <d|d>     = 0
      (iv)  <L_X|d>   = dx^b (flat X)_b
      (v)   <L_X|i_Y> = -dx^c (DX)^a_c Y^b omega_ba
      (vi)  <L_X|L_Y> = X^a Y^b g_ba
                        + dx^c (DX)^a_c dx^e (DY)^b_e omega_ba

    Every entry is evaluated even if an earlier one fails.
    """
    chart = g.chart
    if lift is None:
        lift = lift_geometry(g, omega, gamma)
    table = lift.ptm
    n = chart.dim
    d = de_rham(chart)
    iX, iY = interior(X), interior(Y)
    LX, LY = lie_derivative(X), lie_derivative(Y)
    DX = covariant_derivative(gamma, X)
    DY = covariant_derivative(gamma, Y)
    om = omega.matrix

    def dx(c: int) -> GradedExpr:
        return GradedExpr.generator(table, odd_fiber_name(chart.coords[c]))

    # (i)
    rhs_i = _scalar_graded(table, bilinear_eval(om, X.components, Y.components))
    # (iv)
    flat_x = flat(g, X)
    rhs_iv = GradedExpr.zero(table)
    for b in range(n):
        rhs_iv = rhs_iv + dx(b).scale(flat_x.components[b])
    # (v): -dx^c (DX)^a_c Y^b omega_ba, the omega indices reversed relative
    # to bilinear_eval's layout
    rhs_v = GradedExpr.zero(table)
    for c in range(n):
        coeff = simplify(
            bilinear_eval(om, Y.components, [DX[a][c] for a in range(n)])
        )
        rhs_v = rhs_v + dx(c).scale(coeff).scale(Const(Fraction(-1)))
    # (vi): scalar g block plus dx^c (DX)^a_c dx^e (DY)^b_e omega_ba
    rhs_vi = _scalar_graded(
        table, bilinear_eval(g.matrix, X.components, Y.components)
    )
    for c in range(n):
        for e in range(n):
            coeff = simplify(
                bilinear_eval(
                    om,
                    [DY[b][e] for b in range(n)],
                    [DX[a][c] for a in range(n)],
                )
            )
            rhs_vi = rhs_vi + gmul(dx(c), dx(e)).scale(coeff)

    zero = GradedExpr.zero(table)
    checks = (
        ("(i) <i_X|i_Y> = omega(X,Y)", pairing_via_lift(iX, iY, lift.lifted), rhs_i),
        ("(ii) <i_X|d> = 0", pairing_via_lift(iX, d, lift.lifted), zero),
        ("(iii) <d|d> = 0", pairing_via_lift(d, d, lift.lifted), zero),
        ("(iv) <L_X|d> = flat(X)", pairing_via_lift(LX, d, lift.lifted), rhs_iv),
        ("(v) <L_X|i_Y> = omega(DX,Y)", pairing_via_lift(LX, iY, lift.lifted), rhs_v),
        ("(vi) <L_X|L_Y> = g(X,Y) + omega(dxDX,dxDY)",
         pairing_via_lift(LX, LY, lift.lifted), rhs_vi),
    )
    entries = []
    for name, lhs, rhs in checks:
        residual = lhs - rhs
        holds = graded_equal(residual, zero, config)
        entries.append(
            CheckOutcome(name, holds, "0" if residual.is_zero() else graded_to_text(residual))
        )
    return CheckReport("pairing identities", tuple(entries), CONVENTIONS)
