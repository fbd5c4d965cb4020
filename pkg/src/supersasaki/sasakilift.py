"""The lift: from (metric, two-form) on a chart to an even metric function
on the tangent bundle of the odd tangent bundle.

Coordinate naming, derived from the chart's coordinate names:

  * base coordinate        x        (even)
  * odd fiber              d<x>     (odd)
  * velocity               <x>dot   (even)
  * odd velocity fiber     d<x>dot  (odd)
  * auxiliary odd fiber    xi_<x>   (odd, only inside the construction)

The construction: with Gamma the Levi-Civita symbols of g, form the
splitting covectors

    nabla(xdot^a) = dxdot^a + dx^b * xdot^c * Gamma^a_{cb}

and the auxiliary quadratic function (no 1/2 on the two-form block)

    G = xdot^a xdot^b g_ba + xi^a xi^b omega_ba ;

the lifted metric is G with xi^a replaced by nabla(xdot^a).

Vector fields on the odd tangent bundle pair through either the vertical
lift (1/2 iota_X iota_Y applied to the lifted metric) or the closed
formula; both are exposed and tested against each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import (
    AlmostSymplectic,
    Chart,
    ChristoffelSymbols,
    GeometryError,
    MetricTensor,
    VectorFieldM,
    christoffel,
)
from .grassmann import (
    EVEN,
    ODD,
    GeneratorTable,
    GradedError,
    GradedExpr,
    extend_to,
    gmul,
    graded_to_text,
    gsubstitute,
    parity_of,
    partial,
    restrict_to,
)
from .symexpr import (
    Add,
    Const,
    Expr,
    Mul,
    Var,
    ZERO,
    as_expr,
    simplify,
)


def odd_fiber_name(coord: str) -> str:
    return "d" + coord

def velocity_name(coord: str) -> str:
    return coord + "dot"

def odd_velocity_name(coord: str) -> str:
    return "d" + coord + "dot"

def aux_fiber_name(coord: str) -> str:
    return "xi_" + coord

def classical_fiber_name(coord: str) -> str:
    return "delta_" + coord

def classical_velocity_fiber_name(coord: str) -> str:
    return "delta_" + coord + "dot"


def ptm_table(chart: Chart) -> GeneratorTable:
    """Generators of the odd tangent bundle chart: x even, dx odd."""
    gens = [(c, EVEN) for c in chart.coords]
    gens += [(odd_fiber_name(c), ODD) for c in chart.coords]
    return GeneratorTable(tuple(gens))


def tptm_table(chart: Chart) -> GeneratorTable:
    """Generators of the tangent bundle of the odd tangent bundle:
    x even, dx odd, xdot even, dxdot odd."""
    gens = [(c, EVEN) for c in chart.coords]
    gens += [(odd_fiber_name(c), ODD) for c in chart.coords]
    gens += [(velocity_name(c), EVEN) for c in chart.coords]
    gens += [(odd_velocity_name(c), ODD) for c in chart.coords]
    return GeneratorTable(tuple(gens))


def aux_table(chart: Chart) -> GeneratorTable:
    gens = list(tptm_table(chart).gens)
    gens += [(aux_fiber_name(c), ODD) for c in chart.coords]
    return GeneratorTable(tuple(gens))


def classical_table(chart: Chart) -> GeneratorTable:
    """All-even analogue used by the classical construction."""
    gens = [(c, EVEN) for c in chart.coords]
    gens += [(classical_fiber_name(c), EVEN) for c in chart.coords]
    gens += [(velocity_name(c), EVEN) for c in chart.coords]
    gens += [(classical_velocity_fiber_name(c), EVEN) for c in chart.coords]
    return GeneratorTable(tuple(gens))


def nabla_dot(gamma: ChristoffelSymbols, table: GeneratorTable | None = None) -> tuple[GradedExpr, ...]:
    """Splitting covectors nabla(xdot^a) = dxdot^a + dx^b xdot^c Gamma^a_{cb}."""
    chart = gamma.chart
    table = table or tptm_table(chart)
    n = chart.dim
    out = []
    for a in range(n):
        total = GradedExpr.generator(table, odd_velocity_name(chart.coords[a]))
        for b in range(n):
            coeff_terms = []
            for c in range(n):
                coeff_terms.append(Mul.of(Var(velocity_name(chart.coords[c])), gamma.entry(a, c, b)))
            piece = GradedExpr.generator(table, odd_fiber_name(chart.coords[b])).scale(
                Add.of(*coeff_terms)
            )
            total = total + piece
        out.append(total)
    return tuple(out)


def metric_function(
    g: MetricTensor, omega: AlmostSymplectic, table: GeneratorTable | None = None
) -> GradedExpr:
    """G = xdot^a xdot^b g_ba + xi^a xi^b omega_ba over the auxiliary table."""
    chart = g.chart
    table = table or aux_table(chart)
    n = chart.dim
    total = GradedExpr.zero(table)
    for a in range(n):
        for b in range(n):
            if not (isinstance(g.matrix[b][a], Const) and g.matrix[b][a].value == 0):
                h_piece = gmul(
                    GradedExpr.generator(table, velocity_name(chart.coords[a])),
                    GradedExpr.generator(table, velocity_name(chart.coords[b])),
                ).scale(g.matrix[b][a])
                total = total + h_piece
            w = omega.matrix[b][a]
            if not (isinstance(w, Const) and w.value == 0):
                o_piece = gmul(
                    GradedExpr.generator(table, aux_fiber_name(chart.coords[a])),
                    GradedExpr.generator(table, aux_fiber_name(chart.coords[b])),
                ).scale(w)
                total = total + o_piece
    return total


@dataclass(frozen=True)
class LiftedGeometry:
    """Everything the downstream checks need about one chart's lift."""

    chart: Chart
    metric: MetricTensor
    omega: AlmostSymplectic
    gamma: ChristoffelSymbols
    ptm: GeneratorTable
    tptm: GeneratorTable
    nabla: tuple[GradedExpr, ...]
    lifted: GradedExpr  # over tptm


def lift_geometry(
    g: MetricTensor,
    omega: AlmostSymplectic,
    gamma: ChristoffelSymbols | None = None,
) -> LiftedGeometry:
    """Build the lifted metric by substituting the splitting covectors for
    the auxiliary odd fiber generators of G; bundle everything downstream
    consumers reuse."""
    if g.chart != omega.chart:
        raise GeometryError("metric and two-form live on different charts")
    chart = g.chart
    if gamma is None:
        gamma = christoffel(g)
    elif gamma.chart != chart:
        raise GeometryError("connection lives on a different chart")
    tptm = tptm_table(chart)
    nabla = nabla_dot(gamma, tptm)
    aux = aux_table(chart)
    G = metric_function(g, omega, aux)
    images = {
        aux_fiber_name(c): nabla[i] for i, c in enumerate(chart.coords)
    }
    lifted = gsubstitute(G, images, tptm)
    return LiftedGeometry(
        chart=chart,
        metric=g,
        omega=omega,
        gamma=gamma,
        ptm=ptm_table(chart),
        tptm=tptm,
        nabla=nabla,
        lifted=lifted,
    )


def super_sasaki(
    g: MetricTensor,
    omega: AlmostSymplectic,
    gamma: ChristoffelSymbols | None = None,
) -> GradedExpr:
    """The even metric function on the odd tangent bundle: substitute
    nabla(xdot^a) for xi^a in G = xdot^a xdot^b g_ba + xi^a xi^b omega_ba."""
    return lift_geometry(g, omega, gamma).lifted


def classical_sasaki(
    g: MetricTensor, gamma: ChristoffelSymbols | None = None
) -> GradedExpr:
    """All-even analogue: xdot^a xdot^b g_ba + D(xdot)^a D(xdot)^b g_ba
    with D(xdot)^a = delta_xdot^a + delta_x^b xdot^c Gamma^a_{cb}, over the
    purely even table."""
    chart = g.chart
    n = chart.dim
    if gamma is None:
        gamma = christoffel(g)
    table = classical_table(chart)
    D: list[Expr] = []
    for a in range(n):
        terms: list[Expr] = [Var(classical_velocity_fiber_name(chart.coords[a]))]
        for b in range(n):
            for c in range(n):
                terms.append(
                    Mul.of(
                        Var(classical_fiber_name(chart.coords[b])),
                        Var(velocity_name(chart.coords[c])),
                        gamma.entry(a, c, b),
                    )
                )
        D.append(Add.of(*terms))
    total_terms: list[Expr] = []
    for a in range(n):
        for b in range(n):
            total_terms.append(
                Mul.of(
                    Var(velocity_name(chart.coords[a])),
                    Var(velocity_name(chart.coords[b])),
                    g.matrix[b][a],
                )
            )
            total_terms.append(Mul.of(D[a], D[b], g.matrix[b][a]))
    return GradedExpr.make(table, [((), Add.of(*total_terms))])


# ---------------------------------------------------------------------------
# vector fields on the odd tangent bundle and the two pairings

@dataclass(frozen=True)
class VectorFieldPTM:
    """First-order operator A^a d/dx^a + B^a d/d(dx^a) with homogeneous
    parity; A^a has the field's parity, B^a the opposite."""

    table: GeneratorTable  # the ptm table
    components: tuple[GradedExpr, ...]
    barred: tuple[GradedExpr, ...]
    parity: int

    def __post_init__(self) -> None:
        if self.parity not in (EVEN, ODD):
            raise GradedError("field parity must be 0 or 1")
        for comp in self.components:
            p = parity_of(comp)
            if not comp.is_zero() and p != self.parity:
                raise GradedError(
                    f"component {graded_to_text(comp)} has parity {p}, "
                    f"declared {self.parity}"
                )
        for comp in self.barred:
            p = parity_of(comp)
            if not comp.is_zero() and p != (self.parity + 1) % 2:
                raise GradedError(
                    f"barred component {graded_to_text(comp)} has parity {p}, "
                    f"expected {(self.parity + 1) % 2}"
                )
        if len(self.components) != len(self.barred):
            raise GradedError("components and barred components differ in length")

    @property
    def dim(self) -> int:
        return len(self.components)


def base_coords_of(table: GeneratorTable) -> tuple[str, ...]:
    """Recover the chart coordinates from an odd-tangent-bundle table: they
    are exactly its even generators."""
    return table.even_names


def vertical_lift(
    X: VectorFieldPTM, table: GeneratorTable | None = None
) -> tuple[tuple[GradedExpr, str], ...]:
    """iota_X = X^a d/d(xdot^a) + Xbar^a d/d(dxdot^a), as (coefficient,
    generator-name) pairs over the velocity-extended table."""
    coords = base_coords_of(X.table)
    if table is None:
        table = tptm_table(Chart(coords))
    ops: list[tuple[GradedExpr, str]] = []
    for a, c in enumerate(coords):
        comp = extend_to(X.components[a], table)
        if not comp.is_zero():
            ops.append((comp, velocity_name(c)))
        barred = extend_to(X.barred[a], table)
        if not barred.is_zero():
            ops.append((barred, odd_velocity_name(c)))
    return tuple(ops)


def apply_first_order(
    ops: Iterable[tuple[GradedExpr, str]], f: GradedExpr
) -> GradedExpr:
    """Apply sum_i coeff_i * d/d(gen_i) to f (left derivatives)."""
    total = None
    for coeff, gen in ops:
        piece = gmul(coeff, partial(f, gen))
        total = piece if total is None else total + piece
    if total is None:
        raise ValueError("empty operator")
    return total


def pairing_via_lift(
    X: VectorFieldPTM, Y: VectorFieldPTM, gS: GradedExpr
) -> GradedExpr:
    """<X|Y> = 1/2 iota_X iota_Y gS, projected back down to the odd
    tangent bundle chart."""
    if X.table != Y.table:
        raise GradedError("paired fields live over different tables")
    base = base_coords_of(X.table)
    if gS.table.even_names[: len(base)] != base:
        raise GradedError("metric function does not extend the fields' chart")
    inner = apply_first_order(vertical_lift(Y, gS.table), gS)
    outer = apply_first_order(vertical_lift(X, gS.table), inner)
    scaled = outer.scale(Const(Fraction(1, 2)))
    return restrict_to(scaled, X.table)


def pairing_closed_form(
    X: VectorFieldPTM,
    Y: VectorFieldPTM,
    g: MetricTensor,
    omega: AlmostSymplectic,
    gamma: ChristoffelSymbols,
) -> GradedExpr:
    """The expanded pairing formula:

        <X|Y> = X^a Y^b g_ba
              - X^a Y^b dx^c dx^d Gamma^e_{da} Gamma^f_{bc} omega_fe
              + [ (-1)^|Y| Xbar^a Y^b + (-1)^(|X|(|Y|+1)) Ybar^a X^b ]
                  dx^c Gamma^d_{cb} omega_da
              + (-1)^|Y| Xbar^a Ybar^b omega_ba
    """
    chart = g.chart
    ptm = X.table
    if base_coords_of(ptm) != chart.coords:
        raise GradedError("fields and tensors live on different charts")
    n = chart.dim
    gmat = g.matrix
    om = omega.matrix
    sign_y = -1 if Y.parity == ODD else 1
    sign_xy = -1 if (X.parity * ((Y.parity + 1) % 2)) % 2 else 1

    total = GradedExpr.zero(ptm)

    # X^a Y^b g_ba
    for a in range(n):
        for b in range(n):
            piece = gmul(X.components[a], Y.components[b]).scale(gmat[b][a])
            total = total + piece

    # - X^a Y^b dx^c dx^d Gamma^e_{da} Gamma^f_{bc} omega_fe
    for a in range(n):
        for b in range(n):
            XY = gmul(X.components[a], Y.components[b])
            if XY.is_zero():
                continue
            for c in range(n):
                for d in range(n):
                    scalar_terms = []
                    for e in range(n):
                        for f_ in range(n):
                            scalar_terms.append(
                                Mul.of(gamma.entry(e, d, a), gamma.entry(f_, b, c), om[f_][e])
                            )
                    coeff = simplify(Add.of(*scalar_terms))
                    dxdx = gmul(
                        GradedExpr.generator(ptm, odd_fiber_name(chart.coords[c])),
                        GradedExpr.generator(ptm, odd_fiber_name(chart.coords[d])),
                    )
                    piece = gmul(XY, dxdx).scale(coeff).scale(Const(Fraction(-1)))
                    total = total + piece

    # [ sign_y Xbar^a Y^b + sign_xy Ybar^a X^b ] dx^c Gamma^d_{cb} omega_da
    for a in range(n):
        for b in range(n):
            bracket = gmul(X.barred[a], Y.components[b]).scale(Const(Fraction(sign_y))) + gmul(
                Y.barred[a], X.components[b]
            ).scale(Const(Fraction(sign_xy)))
            if bracket.is_zero():
                continue
            for c in range(n):
                scalar_terms = [
                    Mul.of(gamma.entry(d, c, b), om[d][a]) for d in range(n)
                ]
                coeff = simplify(Add.of(*scalar_terms))
                piece = gmul(
                    bracket,
                    GradedExpr.generator(ptm, odd_fiber_name(chart.coords[c])),
                ).scale(coeff)
                total = total + piece

    # sign_y Xbar^a Ybar^b omega_ba
    for a in range(n):
        for b in range(n):
            piece = gmul(X.barred[a], Y.barred[b]).scale(om[b][a]).scale(
                Const(Fraction(sign_y))
            )
            total = total + piece

    return total


# ---------------------------------------------------------------------------
# frames and random fields

def frame_fields(chart: Chart) -> list[VectorFieldPTM]:
    """The 2n coordinate frame operators: d/dx^a (even), d/d(dx^a) (odd)."""
    table = ptm_table(chart)
    n = chart.dim
    zero = GradedExpr.zero(table)
    one = GradedExpr.one(table)
    out: list[VectorFieldPTM] = []
    for a in range(n):
        comps = tuple(one if i == a else zero for i in range(n))
        zeros = tuple(zero for _ in range(n))
        out.append(VectorFieldPTM(table, comps, zeros, EVEN))
    for a in range(n):
        comps = tuple(zero for _ in range(n))
        barred = tuple(one if i == a else zero for i in range(n))
        out.append(VectorFieldPTM(table, comps, barred, ODD))
    return out


def _random_coefficient(
    table: GeneratorTable, chart: Chart, parity: int, rng: random.Random
) -> GradedExpr:
    """Small random polynomial coefficient of the requested parity: integer
    coefficients, base-coordinate monomials up to degree 2, odd degree 0/1/2
    matching the parity."""
    n = chart.dim
    coords = chart.coords
    entries: list[tuple[tuple[int, ...], Expr]] = []

    def scalar_poly() -> Expr:
        terms: list[Expr] = [Const(Fraction(rng.randint(-2, 2)))]
        for _ in range(rng.randint(0, 2)):
            c = rng.randint(-2, 2)
            if c == 0:
                continue
            v = Var(coords[rng.randrange(n)])
            if rng.random() < 0.3:
                v = Mul.of(v, Var(coords[rng.randrange(n)]))
            terms.append(Mul.of(Const(Fraction(c)), v))
        return Add.of(*terms)

    if parity == EVEN:
        entries.append(((), scalar_poly()))
        if n >= 2 and rng.random() < 0.5:
            i, j = sorted(rng.sample(range(n), 2))
            entries.append(
                (
                    (table.index(odd_fiber_name(coords[i])), table.index(odd_fiber_name(coords[j]))),
                    scalar_poly(),
                )
            )
    else:
        for _ in range(rng.randint(1, 2)):
            i = rng.randrange(n)
            entries.append(((table.index(odd_fiber_name(coords[i])),), scalar_poly()))
    return GradedExpr.make(table, entries)


def random_field(
    chart: Chart, parity: int, rng: random.Random
) -> VectorFieldPTM:
    """Random homogeneous field on the odd tangent bundle chart."""
    table = ptm_table(chart)
    n = chart.dim
    comps = tuple(_random_coefficient(table, chart, parity, rng) for _ in range(n))
    barred = tuple(
        _random_coefficient(table, chart, (parity + 1) % 2, rng) for _ in range(n)
    )
    return VectorFieldPTM(table, comps, barred, parity)


def random_base_field(chart: Chart, rng: random.Random) -> VectorFieldM:
    """Classical vector field with small integer polynomial components."""
    comps: list[Expr] = []
    for _ in chart.coords:
        terms: list[Expr] = [Const(Fraction(rng.randint(-2, 2)))]
        for _ in range(rng.randint(1, 2)):
            c = rng.randint(-2, 2)
            if c == 0:
                continue
            v: Expr = Var(rng.choice(chart.coords))
            if rng.random() < 0.4:
                v = Mul.of(v, Var(rng.choice(chart.coords)))
            terms.append(Mul.of(Const(Fraction(c)), v))
        comps.append(Add.of(*terms))
    return VectorFieldM(chart, tuple(comps))


def vector_field_on_base(
    chart: Chart, components: Sequence[Expr]
) -> VectorFieldPTM:
    """A classical vector field X^a(x) d/dx^a seen on the odd tangent
    bundle (even, no barred part)."""
    table = ptm_table(chart)
    comps = tuple(
        GradedExpr.make(table, [((), as_expr(c))]) for c in components
    )
    zero = tuple(GradedExpr.zero(table) for _ in chart.coords)
    return VectorFieldPTM(table, comps, zero, EVEN)
