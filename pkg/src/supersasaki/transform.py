"""Chart changes: smooth maps between charts, their prolongation to the
odd tangent bundle and its tangent bundle, transport of the classical
tensors, and the naturality check for the lifted metric.

A map y = psi(x) prolongs blockwise, with J the Jacobian d y^alpha/d x^a:

    y^alpha      -> y^alpha(x)
    dy^alpha     -> dx^a J[alpha][a]
    ydot^alpha   -> xdot^b J[alpha][b]
    dydot^alpha  -> dxdot^c J[alpha][c] + xdot^b dx^c d2y^alpha/(dx^c dx^b)

Pulling functions back substitutes these images; pulling a vector field
on the odd tangent bundle back solves the two triangular systems

    J[alpha][a] A'^a = psi*(A^alpha)
    J[alpha][b] B'^b = psi*(B^alpha) - A'^a dx^c d2y^alpha/(dx^a dx^c)

with the symbolic inverse Jacobian. The naturality check compares the
pullback of the target's lifted metric against the source's own lifted
metric; it vanishes whenever the map is an isometry for the metrics and
a symplectomorphism for the two-forms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartan import CheckOutcome, CONVENTIONS
from .geometry import (
    AlmostSymplectic,
    Chart,
    ChristoffelSymbols,
    GeometryError,
    MetricTensor,
    Matrix,
    matrix_inverse,
)
from .grassmann import (
    GradedError,
    GradedExpr,
    gmul,
    graded_equal,
    graded_to_text,
    gsubstitute,
)
from .sasakilift import (
    LiftedGeometry,
    VectorFieldPTM,
    lift_geometry,
    odd_fiber_name,
    odd_velocity_name,
    pairing_via_lift,
    ptm_table,
    tptm_table,
    velocity_name,
)
from .symexpr import (
    Add,
    Expr,
    Mul,
    OracleConfig,
    Var,
    differentiate,
    free_vars,
    simplify,
    substitute,
)


@dataclass(frozen=True)
class SmoothMap:
    """y^alpha = components[alpha](x); the optional inverse is checked to
    compose to the identity."""

    source: Chart
    target: Chart
    components: tuple[Expr, ...]
    inverse: tuple[Expr, ...] | None = None
    name: str = "map"

    def __post_init__(self) -> None:
        if len(self.components) != self.target.dim:
            raise GeometryError(
                f"map {self.name!r} needs {self.target.dim} components"
            )
        object.__setattr__(
            self, "components", tuple(simplify(e) for e in self.components)
        )
        src = set(self.source.coords)
        for e in self.components:
            extra = free_vars(e) - src
            if extra:
                raise GeometryError(
                    f"map {self.name!r} uses unknown source names {sorted(extra)}"
                )
        if self.inverse is not None:
            if len(self.inverse) != self.source.dim:
                raise GeometryError(
                    f"inverse of {self.name!r} needs {self.source.dim} components"
                )
            object.__setattr__(
                self, "inverse", tuple(simplify(e) for e in self.inverse)
            )
            tgt = set(self.target.coords)
            for e in self.inverse:
                extra = free_vars(e) - tgt
                if extra:
                    raise GeometryError(
                        f"inverse of {self.name!r} uses unknown target names "
                        f"{sorted(extra)}"
                    )
            forward = dict(zip(self.target.coords, self.components))
            cfg = OracleConfig().with_intervals(self.source.intervals)
            for a, c in enumerate(self.source.coords):
                back = substitute(self.inverse[a], forward)
                if not cfg.equal(back, Var(c)):
                    raise GeometryError(
                        f"inverse of {self.name!r} fails to recover {c!r}"
                    )


def jacobian(psi: SmoothMap) -> Matrix:
    """J[alpha][a] = d y^alpha / d x^a."""
    return tuple(
        tuple(differentiate(comp, c) for c in psi.source.coords)
        for comp in psi.components
    )


def jacobian_inverse(psi: SmoothMap) -> Matrix:
    """Symbolic (J^-1)[a][alpha], entries functions of the source chart."""
    return matrix_inverse(jacobian(psi))


def second_derivative(psi: SmoothMap, alpha: int) -> Matrix:
    """H[b][c] = d2 y^alpha / (d x^b d x^c)."""
    coords = psi.source.coords
    row = tuple(differentiate(psi.components[alpha], c) for c in coords)
    return tuple(
        tuple(differentiate(row[b], coords[c]) for c in range(len(coords)))
        for b in range(len(coords))
    )


def compose_scalar(psi: SmoothMap, e: Expr) -> Expr:
    """A scalar in target coordinates, written in source coordinates."""
    return simplify(substitute(e, dict(zip(psi.target.coords, psi.components))))


def prolong_ptm(psi: SmoothMap) -> dict[str, GradedExpr]:
    """Images of the target's odd-tangent generators over the source's."""
    table = ptm_table(psi.source)
    J = jacobian(psi)
    images: dict[str, GradedExpr] = {}
    for alpha, yc in enumerate(psi.target.coords):
        images[yc] = GradedExpr.make(table, [((), psi.components[alpha])])
        dy = GradedExpr.zero(table)
        for a, xc in enumerate(psi.source.coords):
            dy = dy + GradedExpr.generator(table, odd_fiber_name(xc)).scale(
                J[alpha][a]
            )
        images[odd_fiber_name(yc)] = dy
    return images


def prolong(psi: SmoothMap) -> dict[str, GradedExpr]:
    """Images of all four target generator blocks over the source's
    velocity-extended table."""
    table = tptm_table(psi.source)
    src = psi.source.coords
    J = jacobian(psi)
    images: dict[str, GradedExpr] = {}
    for alpha, yc in enumerate(psi.target.coords):
        images[yc] = GradedExpr.make(table, [((), psi.components[alpha])])
        dy = GradedExpr.zero(table)
        for a, xc in enumerate(src):
            dy = dy + GradedExpr.generator(table, odd_fiber_name(xc)).scale(
                J[alpha][a]
            )
        images[odd_fiber_name(yc)] = dy
        ydot = Add.of(
            *(Mul.of(Var(velocity_name(xc)), J[alpha][b]) for b, xc in enumerate(src))
        )
        images[velocity_name(yc)] = GradedExpr.make(table, [((), simplify(ydot))])
        H = second_derivative(psi, alpha)
        dydot = GradedExpr.zero(table)
        for c, xc in enumerate(src):
            dydot = dydot + GradedExpr.generator(
                table, odd_velocity_name(xc)
            ).scale(J[alpha][c])
        for c, xc in enumerate(src):
            coeff = Add.of(
                *(
                    Mul.of(Var(velocity_name(src[b])), H[c][b])
                    for b in range(len(src))
                )
            )
            dydot = dydot + GradedExpr.generator(
                table, odd_fiber_name(xc)
            ).scale(simplify(coeff))
        images[odd_velocity_name(yc)] = dydot
    return images


def pullback(psi: SmoothMap, f: GradedExpr) -> GradedExpr:
    """psi* f for f over the target's odd tangent bundle or its tangent
    bundle, landing over the matching source table."""
    if f.table == ptm_table(psi.target):
        return gsubstitute(f, prolong_ptm(psi), ptm_table(psi.source))
    if f.table == tptm_table(psi.target):
        return gsubstitute(f, prolong(psi), tptm_table(psi.source))
    raise GradedError("pullback expects a function over the target's tables")


# ---------------------------------------------------------------------------
# tensor transport

def pullback_metric(psi: SmoothMap, g: MetricTensor) -> MetricTensor:
    """(psi* g)[a][b] = J[alpha][a] J[beta][b] g[alpha][beta] o psi."""
    if g.chart != psi.target:
        raise GeometryError("metric lives on a different chart than the map's target")
    n_src, n_tgt = psi.source.dim, psi.target.dim
    J = jacobian(psi)
    comp = [[compose_scalar(psi, g.matrix[al][be]) for be in range(n_tgt)] for al in range(n_tgt)]
    rows = []
    for a in range(n_src):
        row = []
        for b in range(n_src):
            terms = [
                Mul.of(J[al][a], J[be][b], comp[al][be])
                for al in range(n_tgt)
                for be in range(n_tgt)
            ]
            row.append(simplify(Add.of(*terms)))
        rows.append(tuple(row))
    return MetricTensor(psi.source, tuple(rows))


def pullback_two_form(psi: SmoothMap, omega: AlmostSymplectic) -> AlmostSymplectic:
    """Same transport law as the metric; antisymmetry survives."""
    if omega.chart != psi.target:
        raise GeometryError("two-form lives on a different chart than the map's target")
    n_src, n_tgt = psi.source.dim, psi.target.dim
    J = jacobian(psi)
    comp = [[compose_scalar(psi, omega.matrix[al][be]) for be in range(n_tgt)] for al in range(n_tgt)]
    rows = []
    for a in range(n_src):
        row = []
        for b in range(n_src):
            terms = [
                Mul.of(J[al][a], J[be][b], comp[al][be])
                for al in range(n_tgt)
                for be in range(n_tgt)
            ]
            row.append(simplify(Add.of(*terms)))
        rows.append(tuple(row))
    return AlmostSymplectic(psi.source, tuple(rows))


def transform_christoffel(
    psi: SmoothMap, gamma: ChristoffelSymbols
) -> ChristoffelSymbols:
    """The inhomogeneous law: Gamma'^a_{bc} =
    (J^-1)[a][alpha] (Gamma^alpha_{beta gamma} o psi J[beta][b] J[gamma][c]
    + d2 y^alpha/(dx^b dx^c))."""
    if gamma.chart != psi.target:
        raise GeometryError("symbols live on a different chart than the map's target")
    n_src, n_tgt = psi.source.dim, psi.target.dim
    J = jacobian(psi)
    K = jacobian_inverse(psi)
    H = [second_derivative(psi, alpha) for alpha in range(n_tgt)]
    comp = [
        [
            [compose_scalar(psi, gamma.entry(al, be, ga)) for ga in range(n_tgt)]
            for be in range(n_tgt)
        ]
        for al in range(n_tgt)
    ]
    out = []
    for a in range(n_src):
        plane = []
        for b in range(n_src):
            row = []
            for c in range(n_src):
                terms = []
                for al in range(n_tgt):
                    inner = [H[al][b][c]]
                    for be in range(n_tgt):
                        for ga in range(n_tgt):
                            inner.append(
                                Mul.of(comp[al][be][ga], J[be][b], J[ga][c])
                            )
                    terms.append(Mul.of(K[a][al], Add.of(*inner)))
                row.append(simplify(Add.of(*terms)))
            plane.append(tuple(row))
        out.append(tuple(plane))
    return ChristoffelSymbols(psi.source, tuple(out))


def transform_tensors(
    psi: SmoothMap,
    g: MetricTensor,
    omega: AlmostSymplectic,
    gamma: ChristoffelSymbols,
) -> tuple[MetricTensor, AlmostSymplectic, ChristoffelSymbols]:
    return (
        pullback_metric(psi, g),
        pullback_two_form(psi, omega),
        transform_christoffel(psi, gamma),
    )


def is_isometry(
    psi: SmoothMap,
    g_source: MetricTensor,
    g_target: MetricTensor,
    config: OracleConfig | None = None,
) -> bool:
    """Does psi* g_target equal g_source, componentwise?"""
    cfg = config or OracleConfig().with_intervals(psi.source.intervals)
    pulled = pullback_metric(psi, g_target)
    return all(
        cfg.equal(pulled.matrix[a][b], g_source.matrix[a][b])
        for a in range(psi.source.dim)
        for b in range(psi.source.dim)
    )


def is_symplectomorphism(
    psi: SmoothMap,
    omega_source: AlmostSymplectic,
    omega_target: AlmostSymplectic,
    config: OracleConfig | None = None,
) -> bool:
    """Does psi* omega_target equal omega_source, componentwise?"""
    cfg = config or OracleConfig().with_intervals(psi.source.intervals)
    pulled = pullback_two_form(psi, omega_target)
    return all(
        cfg.equal(pulled.matrix[a][b], omega_source.matrix[a][b])
        for a in range(psi.source.dim)
        for b in range(psi.source.dim)
    )


# ---------------------------------------------------------------------------
# vector fields and the naturality of the lift

def field_pullback(psi: SmoothMap, V: VectorFieldPTM) -> VectorFieldPTM:
    """Transport a vector field on the target's odd tangent bundle to the
    source's, solving against the Jacobian (see module docstring)."""
    if V.table != ptm_table(psi.target):
        raise GradedError("field does not live over the map's target")
    table = ptm_table(psi.source)
    images = prolong_ptm(psi)
    K = jacobian_inverse(psi)
    n_src, n_tgt = psi.source.dim, psi.target.dim
    pulled_A = [
        gsubstitute(V.components[al], images, table) for al in range(n_tgt)
    ]
    pulled_B = [gsubstitute(V.barred[al], images, table) for al in range(n_tgt)]
    comps = []
    for a in range(n_src):
        total = GradedExpr.zero(table)
        for al in range(n_tgt):
            total = total + pulled_A[al].scale(K[a][al])
        comps.append(total)
    barred = []
    for b in range(n_src):
        total = GradedExpr.zero(table)
        for al in range(n_tgt):
            H = second_derivative(psi, al)
            rhs = pulled_B[al]
            for a in range(n_src):
                for c, xc in enumerate(psi.source.coords):
                    piece = gmul(
                        comps[a],
                        GradedExpr.generator(table, odd_fiber_name(xc)).scale(
                            H[a][c]
                        ),
                    )
                    rhs = rhs - piece
            total = total + rhs.scale(K[b][al])
        barred.append(total)
    return VectorFieldPTM(table, tuple(comps), tuple(barred), V.parity)


@dataclass(frozen=True)
class NaturalityReport:
    map_name: str
    isometry: bool
    symplectomorphism: bool
    holds: bool
    residual: str
    conventions: tuple[str, ...] = CONVENTIONS


def check_naturality(
    psi: SmoothMap,
    source_data: tuple[MetricTensor, AlmostSymplectic],
    target_data: tuple[MetricTensor, AlmostSymplectic],
    config: OracleConfig | None = None,
    source_lift: LiftedGeometry | None = None,
    target_lift: LiftedGeometry | None = None,
) -> NaturalityReport:
    """Pull the target's lifted metric back along the prolonged map and
    compare with the source's own lifted metric."""
    g_m, om_m = source_data
    g_n, om_n = target_data
    cfg = config or OracleConfig().with_intervals(psi.source.intervals)
    if source_lift is None:
        source_lift = lift_geometry(g_m, om_m)
    if target_lift is None:
        target_lift = lift_geometry(g_n, om_n)
    pulled = pullback(psi, target_lift.lifted)
    residual = pulled - source_lift.lifted
    holds = graded_equal(residual, GradedExpr.zero(residual.table), cfg)
    return NaturalityReport(
        map_name=psi.name,
        isometry=is_isometry(psi, g_m, g_n, cfg),
        symplectomorphism=is_symplectomorphism(psi, om_m, om_n, cfg),
        holds=holds,
        residual="0" if residual.is_zero() else graded_to_text(residual),
    )


def pairing_invariance(
    psi: SmoothMap,
    source_lift: LiftedGeometry,
    target_lift: LiftedGeometry,
    X: VectorFieldPTM,
    Y: VectorFieldPTM,
    config: OracleConfig | None = None,
) -> CheckOutcome:
    """<psi*X | psi*Y> on the source chart against psi*<X|Y> from the
    target chart, for fields given over the target's odd tangent bundle."""
    cfg = config or OracleConfig().with_intervals(psi.source.intervals)
    lhs = pairing_via_lift(
        field_pullback(psi, X), field_pullback(psi, Y), source_lift.lifted
    )
    rhs = pullback(psi, pairing_via_lift(X, Y, target_lift.lifted))
    residual = lhs - rhs
    holds = graded_equal(residual, GradedExpr.zero(residual.table), cfg)
    return CheckOutcome(
        f"pairing invariance under {psi.name}",
        holds,
        "0" if residual.is_zero() else graded_to_text(residual),
    )


def compose_maps(outer: SmoothMap, inner: SmoothMap) -> SmoothMap:
    """outer o inner, defined when inner's target chart is outer's source."""
    if inner.target.coords != outer.source.coords:
        raise GeometryError("map composition needs matching middle charts")
    comps = tuple(compose_scalar(inner, e) for e in outer.components)
    inv = None
    if inner.inverse is not None and outer.inverse is not None:
        back = dict(zip(outer.source.coords, outer.inverse))
        inv = tuple(
            simplify(substitute(e, back)) for e in inner.inverse
        )
    return SmoothMap(
        inner.source,
        outer.target,
        comps,
        inv,
        name=f"{outer.name} o {inner.name}",
    )
