"""Functions on a coordinate superdomain: polynomial data in anticommuting
generators with scalar-expression coefficients.

A GeneratorTable fixes an ordered list of named generators, each even or
odd. A GradedExpr stores, per sorted tuple of odd generator indices, a
scalar coefficient depending only on the even generator names. Products
pick up the sign of the permutation that sorts the odd factors (counted by
merge inversions); odd squares vanish. Odd partial derivatives act from
the left: differentiating by the generator at position p of a monomial
costs the sign (-1)^p.

Substitution is an algebra morphism: even generators may be sent to even
graded expressions (a nilpotent part is handled by the finite Taylor
expansion of each scalar operation around the body), odd generators to odd
expressions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .symexpr import (
    Add,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    ONE,
    OracleConfig,
    Pow,
    Var,
    ZERO,
    as_expr,
    differentiate,
    free_vars,
    is_zero_expr,
    parse_expr,
    simplify,
    substitute,
    to_text,
)
from .symexpr.expr import FUNCTIONS, _negative_head

EVEN = 0
ODD = 1

# Printed in every report so outputs are self-describing.
ODD_DERIVATIVE_NOTE = (
    "odd derivatives act from the left: d/d(theta) applied to the "
    "generator at position p of a monomial costs (-1)^p"
)

Monomial = tuple[int, ...]


class GradedError(ValueError):
    """Violation of parity or generator-table constraints."""


def _check_name(name: str) -> None:
    if not name or not (name[0].isalpha() or name[0] == "_"):
        raise GradedError(f"invalid generator name {name!r}")
    if not all(c.isalnum() or c == "_" for c in name):
        raise GradedError(f"invalid generator name {name!r}")
    if name in FUNCTIONS:
        raise GradedError(f"generator name {name!r} collides with a reserved function")


@dataclass(frozen=True)
class GeneratorTable:
    """Ordered, parity-tagged generator names for one superdomain chart."""

    gens: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        for name, parity in self.gens:
            _check_name(name)
            if parity not in (EVEN, ODD):
                raise GradedError(f"parity of {name!r} must be 0 or 1, got {parity!r}")
            if name in seen:
                raise GradedError(f"duplicate generator name {name!r}")
            seen.add(name)

    @staticmethod
    def of(*gens: tuple[str, int]) -> "GeneratorTable":
        return GeneratorTable(tuple(gens))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.gens)

    @property
    def even_names(self) -> tuple[str, ...]:
        return tuple(n for n, p in self.gens if p == EVEN)

    @property
    def odd_names(self) -> tuple[str, ...]:
        return tuple(n for n, p in self.gens if p == ODD)

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.gens):
            if n == name:
                return i
        raise GradedError(f"no generator named {name!r}")

    def parity(self, name: str) -> int:
        return self.gens[self.index(name)][1]

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.gens)

    def __len__(self) -> int:
        return len(self.gens)


def _merge_with_sign(m1: Monomial, m2: Monomial) -> tuple[Monomial | None, int]:
    """Merge two ascending index tuples; None when they share an index.
    The sign counts how many transpositions sort the concatenation."""
    if not m1:
        return m2, 1
    if not m2:
        return m1, 1
    out: list[int] = []
    sign = 1
    i = j = 0
    while i < len(m1) and j < len(m2):
        a, b = m1[i], m2[j]
        if a == b:
            return None, 0
        if a < b:
            out.append(a)
            i += 1
        else:
            # b jumps over the remaining elements of m1
            if (len(m1) - i) % 2:
                sign = -sign
            out.append(b)
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out), sign


class GradedExpr:
    """Element of the function algebra over a GeneratorTable. Immutable by
    convention; coefficients are stored in canonical scalar form."""

    __slots__ = ("table", "terms")

    def __init__(self, table: GeneratorTable, terms: dict[Monomial, Expr]):
        # private: use make()/scalar()/generator() which normalize
        self.table = table
        self.terms = terms

    @staticmethod
    def make(
        table: GeneratorTable,
        entries: Iterable[tuple[Monomial, Expr]],
        *,
        presimplified: bool = False,
    ) -> "GradedExpr":
        acc: dict[Monomial, Expr] = {}
        for mono, coeff in entries:
            mono = tuple(mono)
            if any(mono[k] >= mono[k + 1] for k in range(len(mono) - 1)):
                raise GradedError(f"monomial indices must be strictly ascending: {mono}")
            for idx in mono:
                if idx < 0 or idx >= len(table) or table.gens[idx][1] != ODD:
                    raise GradedError(f"monomial index {idx} is not an odd generator")
            if mono in acc:
                acc[mono] = Add.of(acc[mono], coeff)
                presimplified = False
            else:
                acc[mono] = coeff
        even = set(table.even_names)
        out: dict[Monomial, Expr] = {}
        for mono, coeff in acc.items():
            c = coeff if presimplified else simplify(coeff)
            if is_zero_expr(c):
                continue
            stray = free_vars(c) - even
            if stray:
                raise GradedError(
                    f"coefficient {to_text(c)} depends on non-even names {sorted(stray)}"
                )
            out[mono] = c
        return GradedExpr(table, out)

    @staticmethod
    def zero(table: GeneratorTable) -> "GradedExpr":
        return GradedExpr(table, {})

    @staticmethod
    def scalar(table: GeneratorTable, coeff: Expr | int | Fraction) -> "GradedExpr":
        return GradedExpr.make(table, [((), as_expr(coeff))])

    @staticmethod
    def one(table: GeneratorTable) -> "GradedExpr":
        return GradedExpr(table, {(): ONE})

    @staticmethod
    def generator(table: GeneratorTable, name: str) -> "GradedExpr":
        idx = table.index(name)
        if table.gens[idx][1] == ODD:
            return GradedExpr(table, {(idx,): ONE})
        return GradedExpr(table, {(): Var(name)})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Monomial) -> Expr:
        return self.terms.get(tuple(mono), ZERO)

    def body(self) -> Expr:
        return self.terms.get((), ZERO)

    def __add__(self, other: "GradedExpr") -> "GradedExpr":
        self._same_table(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            if mono in out:
                s = simplify(Add.of(out[mono], coeff))
                if is_zero_expr(s):
                    del out[mono]
                else:
                    out[mono] = s
            else:
                out[mono] = coeff
        return GradedExpr(self.table, out)

    def __sub__(self, other: "GradedExpr") -> "GradedExpr":
        return self + other.scale(Const(Fraction(-1)))

    def __neg__(self) -> "GradedExpr":
        return self.scale(Const(Fraction(-1)))

    def scale(self, factor: Expr | int | Fraction) -> "GradedExpr":
        factor = as_expr(factor)
        if is_zero_expr(factor):
            return GradedExpr.zero(self.table)
        out = {}
        for mono, coeff in self.terms.items():
            c = simplify(Mul.of(factor, coeff))
            if not is_zero_expr(c):
                out[mono] = c
        return GradedExpr(self.table, out)

    def __mul__(self, other: "GradedExpr") -> "GradedExpr":
        return gmul(self, other)

    def _same_table(self, other: "GradedExpr") -> None:
        if self.table != other.table:
            raise GradedError("operands live over different generator tables")

    def components_by_degree(self) -> dict[int, "GradedExpr"]:
        """Split by number of odd factors (0, 1, 2, ...)."""
        buckets: dict[int, dict[Monomial, Expr]] = {}
        for mono, coeff in self.terms.items():
            buckets.setdefault(len(mono), {})[mono] = coeff
        return {d: GradedExpr(self.table, t) for d, t in sorted(buckets.items())}

    def __str__(self) -> str:
        return graded_to_text(self)

    def __repr__(self) -> str:
        return f"GradedExpr({graded_to_text(self)!r})"


def gmul(f: GradedExpr, g: GradedExpr) -> GradedExpr:
    """Product in the graded-commutative algebra (Koszul signs)."""
    f._same_table(g)
    acc: dict[Monomial, Expr] = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            merged, sign = _merge_with_sign(m1, m2)
            if merged is None:
                continue
            piece = Mul.of(c1, c2) if sign == 1 else Mul.of(Const(Fraction(-1)), c1, c2)
            acc[merged] = Add.of(acc[merged], piece) if merged in acc else piece
    out: dict[Monomial, Expr] = {}
    for mono, coeff in acc.items():
        c = simplify(coeff)
        if not is_zero_expr(c):
            out[mono] = c
    return GradedExpr(f.table, out)


def parity_of(f: GradedExpr) -> int | None:
    """0 for even, 1 for odd, None for inhomogeneous. Zero counts as even."""
    if not f.terms:
        return EVEN
    parities = {len(mono) % 2 for mono in f.terms}
    if len(parities) > 1:
        return None
    return parities.pop()


def epsilon(f: GradedExpr) -> Expr:
    """Project onto the purely scalar part (all odd generators to zero)."""
    return f.body()


def partial(f: GradedExpr, name: str) -> GradedExpr:
    """Partial derivative by a generator. Odd generators differentiate from
    the left; even generators differentiate the coefficients."""
    idx = f.table.index(name)
    if f.table.gens[idx][1] == EVEN:
        out = {}
        for mono, coeff in f.terms.items():
            d = differentiate(coeff, name)
            if not is_zero_expr(d):
                out[mono] = d
        return GradedExpr(f.table, out)
    out = {}
    for mono, coeff in f.terms.items():
        if idx not in mono:
            continue
        pos = mono.index(idx)
        rest = mono[:pos] + mono[pos + 1 :]
        c = coeff if pos % 2 == 0 else simplify(Mul.of(Const(Fraction(-1)), coeff))
        out[rest] = c
    return GradedExpr(f.table, out)


# ---------------------------------------------------------------------------
# substitution

def _graded_compose(f_of_w: Expr, w: str, ge: GradedExpr) -> GradedExpr:
    """f(ge) for an even graded argument, by finite Taylor expansion of f
    around the body: f(b + s) = sum_k f^(k)(b) s^k / k!, s nilpotent."""
    table = ge.table
    if parity_of(ge) not in (EVEN,):
        raise GradedError("scalar operations apply to even graded arguments only")
    body = ge.body()
    soul = GradedExpr(table, {m: c for m, c in ge.terms.items() if m})
    head = simplify(substitute(f_of_w, {w: body}))
    acc_terms = [GradedExpr.make(table, [((), head)], presimplified=False)]
    power = GradedExpr.one(table)
    deriv = f_of_w
    factorial = 1
    k = 0
    while True:
        k += 1
        power = gmul(power, soul)
        if power.is_zero():
            break
        deriv = differentiate(deriv, w)
        if is_zero_expr(deriv):
            break
        factorial *= k
        coeff = simplify(
            Div(substitute(deriv, {w: body}), Const(Fraction(factorial)))
        )
        acc_terms.append(power.scale(coeff))
    total = GradedExpr.zero(table)
    for t in acc_terms:
        total = total + t
    return total


_FRESH = "_w0"


def graded_inverse(ge: GradedExpr) -> GradedExpr:
    """Multiplicative inverse; requires an even argument with nonzero body."""
    if parity_of(ge) not in (EVEN,):
        raise GradedError("only even graded quantities are invertible")
    if is_zero_expr(ge.body()):
        raise ZeroDivisionError("graded quantity has zero body, not invertible")
    return _graded_compose(Div(ONE, Var(_FRESH)), _FRESH, ge)


def graded_eval_scalar(
    e: Expr, images: Mapping[str, GradedExpr], table: GeneratorTable
) -> GradedExpr:
    """Evaluate a scalar tree on graded arguments, as an algebra morphism.
    Variables not in images must name even generators of the table."""
    if isinstance(e, Const):
        return GradedExpr(table, {} if e.value == 0 else {(): e})
    if isinstance(e, Var):
        if e.name in images:
            return images[e.name]
        if e.name not in table:
            raise GradedError(f"{e.name!r} is not a generator of the target table")
        return GradedExpr.generator(table, e.name)
    if isinstance(e, Add):
        total = GradedExpr.zero(table)
        for t in e.terms:
            total = total + graded_eval_scalar(t, images, table)
        return total
    if isinstance(e, Mul):
        total = GradedExpr.one(table)
        for f in e.factors:
            total = gmul(total, graded_eval_scalar(f, images, table))
        return total
    if isinstance(e, Pow):
        base = graded_eval_scalar(e.base, images, table)
        k = e.exponent
        if k < 0:
            base = graded_inverse(base)
            k = -k
        total = GradedExpr.one(table)
        for _ in range(k):
            total = gmul(total, base)
        return total
    if isinstance(e, Div):
        num = graded_eval_scalar(e.num, images, table)
        den = graded_eval_scalar(e.den, images, table)
        return gmul(num, graded_inverse(den))
    if isinstance(e, Call):
        arg = graded_eval_scalar(e.arg, images, table)
        if not any(m for m in arg.terms):
            return GradedExpr.make(table, [((), Call(e.func, arg.body()))])
        return _graded_compose(Call(e.func, Var(_FRESH)), _FRESH, arg)
    raise TypeError(f"not an expression node: {e!r}")


def gsubstitute(
    f: GradedExpr,
    images: Mapping[str, GradedExpr],
    target: GeneratorTable,
) -> GradedExpr:
    """Algebra morphism determined by generator images. Generators without
    an image must exist in the target with the same parity and map to
    themselves. Image parities must match generator parities (zero images
    are allowed for either)."""
    source = f.table
    complete: dict[str, GradedExpr] = {}
    for name, parity in source.gens:
        if name in images:
            img = images[name]
            if img.table != target:
                raise GradedError(f"image of {name!r} lives over the wrong table")
            img_parity = parity_of(img)
            if not img.is_zero() and img_parity != parity:
                raise GradedError(
                    f"image of {name!r} has parity {img_parity}, expected {parity}"
                )
            complete[name] = img
        else:
            if name not in target or target.parity(name) != parity:
                raise GradedError(
                    f"no image given for {name!r} and the target table has no "
                    f"matching generator"
                )
            complete[name] = GradedExpr.generator(target, name)
    extra = set(images) - set(source.names)
    if extra:
        raise GradedError(f"images given for unknown generators {sorted(extra)}")
    even_images = {n: complete[n] for n, p in source.gens if p == EVEN}
    total = GradedExpr.zero(target)
    for mono, coeff in f.terms.items():
        piece = graded_eval_scalar(coeff, even_images, target)
        for idx in mono:
            piece = gmul(piece, complete[source.gens[idx][0]])
        total = total + piece
    return total


def extend_to(f: GradedExpr, super_table: GeneratorTable) -> GradedExpr:
    """Reinterpret f over a larger table containing all its generators."""
    mapping: dict[int, int] = {}
    for i, (name, parity) in enumerate(f.table.gens):
        if name not in super_table or super_table.parity(name) != parity:
            raise GradedError(f"target table lacks generator {name!r} with parity {parity}")
        mapping[i] = super_table.index(name)
    out: dict[Monomial, Expr] = {}
    for mono, coeff in f.terms.items():
        new = tuple(mapping[i] for i in mono)
        if any(new[k] >= new[k + 1] for k in range(len(new) - 1)):
            # same relative order is required for a plain reinterpretation
            raise GradedError("target table permutes odd generators; cannot extend")
        out[new] = coeff
    return GradedExpr(super_table, out)


def restrict_to(f: GradedExpr, sub_table: GeneratorTable) -> GradedExpr:
    """Reinterpret f over a smaller table; fails if f uses dropped names."""
    allowed = set(sub_table.names)
    for mono, coeff in f.terms.items():
        used = {f.table.gens[i][0] for i in mono} | set(free_vars(coeff))
        stray = used - allowed
        if stray:
            raise GradedError(f"expression uses generators {sorted(stray)} not in target")
    mapping = {f.table.index(n): sub_table.index(n) for n in sub_table.names if n in f.table}
    out: dict[Monomial, Expr] = {}
    for mono, coeff in f.terms.items():
        new = tuple(mapping[i] for i in mono)
        if any(new[k] >= new[k + 1] for k in range(len(new) - 1)):
            raise GradedError("target table permutes odd generators; cannot restrict")
        out[new] = coeff
    return GradedExpr(sub_table, out)


def graded_equal(f: GradedExpr, g: GradedExpr, config: OracleConfig | None = None) -> bool:
    """Coefficient-wise equality through the scalar oracle."""
    f._same_table(g)
    config = config or OracleConfig()
    for mono in set(f.terms) | set(g.terms):
        if not config.equal(f.coefficient(mono), g.coefficient(mono)):
            return False
    return True


def parse_graded(text: str, table: GeneratorTable) -> GradedExpr:
    """Parse text whose identifiers are the table's generator names."""
    tree = parse_expr(text, table.names)
    return graded_eval_scalar(tree, {}, table)


# ---------------------------------------------------------------------------
# rendering

def _coeff_piece(coeff: Expr, gens_text: str) -> str:
    if isinstance(coeff, Const) and coeff.value == 1:
        return gens_text
    if isinstance(coeff, Const) and coeff.value == -1:
        return "-" + gens_text
    flipped = _negative_head(coeff)
    if flipped is not None:
        return "-" + _coeff_piece(flipped, gens_text)
    if isinstance(coeff, Add):
        return f"({to_text(coeff)})*{gens_text}"
    return f"{to_text(coeff)}*{gens_text}"


def graded_to_text(f: GradedExpr) -> str:
    if not f.terms:
        return "0"
    names = f.table.names
    pieces: list[str] = []
    for mono in sorted(f.terms, key=lambda m: (len(m), m)):
        coeff = f.terms[mono]
        if not mono:
            pieces.append(to_text(coeff))
            continue
        gens_text = "*".join(names[i] for i in mono)
        pieces.append(_coeff_piece(coeff, gens_text))
    out = pieces[0]
    for p in pieces[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out
