"""Classical chart-level geometry: metric, two-form, Levi-Civita symbols,
musical isomorphism, and numeric finite-difference cross-checks.

Index conventions, fixed once for the whole package:

  * bilinear_eval(B, X, Y) = sum_ab X^a Y^b B[a][b]
  * christoffel: Gamma^a_{bc} = 1/2 g^{ad} (d_b g_dc + d_c g_bd - d_d g_bc),
    symmetric in the lower pair
  * covariant_derivative(X): (DX)^a_b = d_b X^a + X^c Gamma^a_{cb}
  * flat(X)_a = X^b g_ba
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .symexpr import (
    Add,
    Const,
    Div,
    Expr,
    Interval,
    Mul,
    ZERO,
    canonical_equal,
    differentiate,
    eval_numeric,
    is_zero_expr,
    neg,
    simplify,
    to_text,
)
from .symexpr.expr import FUNCTIONS

Matrix = tuple[tuple[Expr, ...], ...]

# Printed in every report so outputs are self-describing.
OMEGA_DICTIONARY_NOTE = (
    "two-form dictionary: sum_{a<b} c_ab dx^a^dx^b is stored with "
    "matrix[a][b] = -c_ab for a < b (antisymmetric completion); the "
    "quadratic fiber block is xi^a xi^b matrix[b][a]"
)


class GeometryError(ValueError):
    """Malformed chart data: wrong shapes, bad symmetry, degenerate forms."""


@dataclass(frozen=True)
class Chart:
    """Named coordinates plus the box domain used for sampling checks."""

    coords: tuple[str, ...]
    intervals: Mapping[str, Interval] = field(default_factory=dict)
    name: str = "chart"

    def __post_init__(self) -> None:
        if not self.coords:
            raise GeometryError("a chart needs at least one coordinate")
        if len(set(self.coords)) != len(self.coords):
            raise GeometryError(f"duplicate coordinate names: {self.coords}")
        for c in self.coords:
            if c in FUNCTIONS:
                raise GeometryError(f"coordinate {c!r} collides with a function name")
        for key in self.intervals:
            if key not in self.coords:
                raise GeometryError(f"interval given for unknown coordinate {key!r}")

    @property
    def dim(self) -> int:
        return len(self.coords)


def _as_matrix(rows: Sequence[Sequence[Expr]], dim: int, what: str) -> Matrix:
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise GeometryError(f"{what} must be a {dim}x{dim} matrix")
    return tuple(tuple(simplify(e) for e in row) for row in rows)


@dataclass(frozen=True)
class MetricTensor:
    chart: Chart
    matrix: Matrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _as_matrix(self.matrix, self.chart.dim, "metric"))
        n = self.chart.dim
        for a in range(n):
            for b in range(a + 1, n):
                if not canonical_equal(self.matrix[a][b], self.matrix[b][a]):
                    raise GeometryError(
                        f"metric is not symmetric at ({a},{b}): "
                        f"{to_text(self.matrix[a][b])} vs {to_text(self.matrix[b][a])}"
                    )
        if is_zero_expr(matrix_det(self.matrix)):
            raise GeometryError("metric determinant is identically zero")


@dataclass(frozen=True)
class AlmostSymplectic:
    """Antisymmetric nondegenerate coefficient matrix of a two-form.

    Dictionary for classical input: the two-form sum_{a<b} c_ab dx^a^dx^b
    is stored with matrix[a][b] = -c_ab for a < b (and the antisymmetric
    completion), so that pairings computed as U^a V^b matrix[a][b] and the
    squared odd fiber expansion xi^a xi^b matrix[b][a] both come out with
    the signs the checked identities require.
    """

    chart: Chart
    matrix: Matrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _as_matrix(self.matrix, self.chart.dim, "two-form"))
        n = self.chart.dim
        for a in range(n):
            for b in range(a, n):
                if not is_zero_expr(Add.of(self.matrix[a][b], self.matrix[b][a])):
                    raise GeometryError(
                        f"two-form matrix is not antisymmetric at ({a},{b})"
                    )
        if is_zero_expr(matrix_det(self.matrix)):
            raise GeometryError("two-form determinant is identically zero")

    @staticmethod
    def from_upper_coefficients(
        chart: Chart, coeffs: Mapping[tuple[int, int], Expr]
    ) -> "AlmostSymplectic":
        """Build from wedge coefficients c_ab (a < b) of the classical
        two-form, applying the sign dictionary above."""
        n = chart.dim
        rows = [[ZERO for _ in range(n)] for _ in range(n)]
        for (a, b), c in coeffs.items():
            if not (0 <= a < b < n):
                raise GeometryError(f"wedge coefficient index ({a},{b}) out of range")
            rows[a][b] = neg(c)
            rows[b][a] = c
        return AlmostSymplectic(chart, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class VectorFieldM:
    chart: Chart
    components: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.chart.dim:
            raise GeometryError("vector field has wrong number of components")
        object.__setattr__(
            self, "components", tuple(simplify(e) for e in self.components)
        )


@dataclass(frozen=True)
class OneForm:
    chart: Chart
    components: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.chart.dim:
            raise GeometryError("one-form has wrong number of components")
        object.__setattr__(
            self, "components", tuple(simplify(e) for e in self.components)
        )


@dataclass(frozen=True)
class ChristoffelSymbols:
    """gamma[a][b][c] = Gamma^a_{bc}, symmetric in (b, c)."""

    chart: Chart
    gamma: tuple[tuple[tuple[Expr, ...], ...], ...]

    def __post_init__(self) -> None:
        n = self.chart.dim
        g = self.gamma
        if len(g) != n or any(len(p) != n or any(len(r) != n for r in p) for p in g):
            raise GeometryError("christoffel table must be dim^3")

    def entry(self, a: int, b: int, c: int) -> Expr:
        return self.gamma[a][b][c]


# ---------------------------------------------------------------------------
# matrix algebra

def matrix_det(m: Matrix | Sequence[Sequence[Expr]]) -> Expr:
    n = len(m)
    if n == 1:
        return simplify(m[0][0])
    if n == 2:
        return simplify(Add.of(Mul.of(m[0][0], m[1][1]), neg(Mul.of(m[0][1], m[1][0]))))
    total: list[Expr] = []
    for j in range(n):
        minor = [
            [m[i][k] for k in range(n) if k != j] for i in range(1, n)
        ]
        term = Mul.of(m[0][j], matrix_det(minor))
        total.append(term if j % 2 == 0 else neg(term))
    return simplify(Add.of(*total))


def _cofactor(m: Sequence[Sequence[Expr]], i: int, j: int) -> Expr:
    n = len(m)
    minor = [
        [m[r][c] for c in range(n) if c != j] for r in range(n) if r != i
    ]
    d = matrix_det(minor) if minor else Const(Fraction(1))
    return d if (i + j) % 2 == 0 else neg(d)


def matrix_inverse(m: Matrix | Sequence[Sequence[Expr]]) -> Matrix:
    """Adjugate over determinant, entries simplified."""
    n = len(m)
    det = matrix_det(m)
    if is_zero_expr(det):
        raise GeometryError("matrix is singular (determinant identically zero)")
    return tuple(
        tuple(simplify(Div(_cofactor(m, j, i), det)) for j in range(n))
        for i in range(n)
    )


def matrix_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(
            simplify(Add.of(*(Mul.of(a[i][k], b[k][j]) for k in range(n))))
            for j in range(n)
        )
        for i in range(n)
    )


def eval_matrix(m: Matrix, point: Mapping[str, float]) -> list[list[float]]:
    return [[eval_numeric(e, point) for e in row] for row in m]


# ---------------------------------------------------------------------------
# covariant machinery

def inverse_metric(g: MetricTensor) -> Matrix:
    return matrix_inverse(g.matrix)


def christoffel(g: MetricTensor) -> ChristoffelSymbols:
    """Levi-Civita connection coefficients of g."""
    chart = g.chart
    n = chart.dim
    ginv = inverse_metric(g)
    coords = chart.coords
    dg = [
        [[differentiate(g.matrix[a][b], coords[c]) for c in range(n)] for b in range(n)]
        for a in range(n)
    ]
    half = Const(Fraction(1, 2))
    gamma = []
    for a in range(n):
        plane = []
        for b in range(n):
            row = []
            for c in range(n):
                pieces = []
                for d in range(n):
                    bracket = Add.of(
                        dg[d][c][b],          # d_b g_dc
                        dg[b][d][c],          # d_c g_bd
                        neg(dg[b][c][d]),     # -d_d g_bc
                    )
                    pieces.append(Mul.of(ginv[a][d], bracket))
                row.append(simplify(Mul.of(half, Add.of(*pieces))))
            plane.append(tuple(row))
        gamma.append(tuple(plane))
    return ChristoffelSymbols(chart, tuple(gamma))


def metric_compatibility_residual(
    g: MetricTensor, gamma: ChristoffelSymbols
) -> tuple[tuple[tuple[Expr, ...], ...], ...]:
    """R[c][a][b] = d_c g_ab - Gamma^d_{ca} g_db - Gamma^d_{cb} g_ad;
    identically zero exactly when the symbols are metric for g."""
    chart = g.chart
    n = chart.dim
    out = []
    for c in range(n):
        plane = []
        for a in range(n):
            row = []
            for b in range(n):
                terms = [differentiate(g.matrix[a][b], chart.coords[c])]
                for d in range(n):
                    terms.append(neg(Mul.of(gamma.entry(d, c, a), g.matrix[d][b])))
                    terms.append(neg(Mul.of(gamma.entry(d, c, b), g.matrix[a][d])))
                row.append(simplify(Add.of(*terms)))
            plane.append(tuple(row))
        out.append(tuple(plane))
    return tuple(out)


def torsion_residual(
    gamma: ChristoffelSymbols,
) -> tuple[tuple[tuple[Expr, ...], ...], ...]:
    """T[a][b][c] = Gamma^a_{bc} - Gamma^a_{cb}; zero for a symmetric
    connection."""
    n = gamma.chart.dim
    return tuple(
        tuple(
            tuple(
                simplify(Add.of(gamma.entry(a, b, c), neg(gamma.entry(a, c, b))))
                for c in range(n)
            )
            for b in range(n)
        )
        for a in range(n)
    )


def covariant_derivative(gamma: ChristoffelSymbols, X: VectorFieldM) -> Matrix:
    """(DX)^a_b = d_b X^a + X^c Gamma^a_{cb}."""
    chart = gamma.chart
    n = chart.dim
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            terms = [differentiate(X.components[a], chart.coords[b])]
            for c in range(n):
                terms.append(Mul.of(X.components[c], gamma.entry(a, c, b)))
            row.append(simplify(Add.of(*terms)))
        out.append(tuple(row))
    return tuple(out)


def flat(g: MetricTensor, X: VectorFieldM) -> OneForm:
    """Musical lowering: flat(X)_a = X^b g_ba."""
    n = g.chart.dim
    comps = tuple(
        simplify(Add.of(*(Mul.of(X.components[b], g.matrix[b][a]) for b in range(n))))
        for a in range(n)
    )
    return OneForm(g.chart, comps)


def bilinear_eval(
    B: Matrix, X: Sequence[Expr], Y: Sequence[Expr]
) -> Expr:
    """sum_ab X^a Y^b B[a][b], simplified."""
    n = len(B)
    terms = []
    for a in range(n):
        for b in range(n):
            terms.append(Mul.of(X[a], Y[b], B[a][b]))
    return simplify(Add.of(*terms))


def vector_commutator(X: VectorFieldM, Y: VectorFieldM) -> VectorFieldM:
    """[X, Y]^a = X^b d_b Y^a - Y^b d_b X^a."""
    chart = X.chart
    n = chart.dim
    comps = []
    for a in range(n):
        terms = []
        for b in range(n):
            terms.append(Mul.of(X.components[b], differentiate(Y.components[a], chart.coords[b])))
            terms.append(neg(Mul.of(Y.components[b], differentiate(X.components[a], chart.coords[b]))))
        comps.append(simplify(Add.of(*terms)))
    return VectorFieldM(chart, tuple(comps))


def acs_candidate(g: MetricTensor, omega: AlmostSymplectic) -> Matrix:
    """J with J_a^b = omega_ac g^cb; squares to -Id exactly when the pair
    is compatible in the usual sense. Row index a, column index b."""
    ginv = inverse_metric(g)
    n = g.chart.dim
    return tuple(
        tuple(
            simplify(Add.of(*(Mul.of(omega.matrix[a][c], ginv[c][b]) for c in range(n))))
            for b in range(n)
        )
        for a in range(n)
    )


def squares_to_minus_identity(J: Matrix) -> bool:
    n = len(J)
    J2 = matrix_mul(J, J)
    for i in range(n):
        for j in range(n):
            expected = Const(Fraction(-1)) if i == j else ZERO
            if not canonical_equal(J2[i][j], expected):
                return False
    return True


# ---------------------------------------------------------------------------
# numeric cross-check: connection symbols by finite differences

def christoffel_fd(
    g: MetricTensor, point: Mapping[str, float], step: float = 1e-5
) -> list[list[list[float]]]:
    """Levi-Civita symbols at a point from central differences of the
    metric entries; independent of the symbolic derivative path."""
    chart = g.chart
    n = chart.dim
    coords = chart.coords

    def metric_at(p: Mapping[str, float]) -> list[list[float]]:
        return eval_matrix(g.matrix, p)

    def shifted(c: str, delta: float) -> dict[str, float]:
        q = dict(point)
        q[c] = q[c] + delta
        return q

    dg = [
        [
            [
                (metric_at(shifted(coords[c], step))[a][b]
                 - metric_at(shifted(coords[c], -step))[a][b]) / (2 * step)
                for c in range(n)
            ]
            for b in range(n)
        ]
        for a in range(n)
    ]
    gmat = metric_at(point)
    ginv = _invert_numeric(gmat)
    gamma = [[[0.0] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                s = 0.0
                for d in range(n):
                    s += ginv[a][d] * (dg[d][c][b] + dg[b][d][c] - dg[b][c][d])
                gamma[a][b][c] = 0.5 * s
    return gamma


def _invert_numeric(m: list[list[float]]) -> list[list[float]]:
    n = len(m)
    aug = [list(row) + [1.0 if i == j else 0.0 for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if abs(aug[pivot][col]) < 1e-14:
            raise GeometryError("numeric matrix is singular at the sample point")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for r in range(n):
            if r != col:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
