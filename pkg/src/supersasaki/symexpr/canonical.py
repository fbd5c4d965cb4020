"""Canonical rational form for scalar expressions.

Every expression is rewritten as num/den where num, den are multivariate
polynomials over "atoms" (variables and function applications with already
canonical arguments), with:

  * monomial rewrites applied to a fixed point:
      sin(u)^(2k+r) -> (1 - cos(u)^2)^k * sin(u)^r
      sqrt(u)^(2k+r) -> u^k * sqrt(u)^r
  * the gcd of num and den cancelled (primitive PRS over the integers),
  * the denominator made monic (leading coefficient 1 under graded lex).

Two expressions are equal as rational functions iff they canonicalize to
identical pairs, which backs both simplify() and the fast tier of the
equality oracle. Coefficients stay exact rationals throughout.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .expr import (
    Add,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    Pow,
    Var,
    derivative_raw,
    to_text,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Atom:
    """A variable or a function application, identified by a sortable key.

    The carried expr is the atom as a tree (Var, or Call with canonical
    argument); identity and ordering use only the key.
    """

    __slots__ = ("key", "expr")

    def __init__(self, key: tuple, expr: Expr):
        self.key = key
        self.expr = expr

    def __lt__(self, other: "Atom") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Atom) and self.key == other.key

    def __repr__(self) -> str:
        return f"Atom({self.key!r})"


def _var_atom(name: str) -> Atom:
    return Atom(("v", name), Var(name))


def _call_atom(func: str, canonical_arg: Expr) -> Atom:
    return Atom(("f", func, to_text(canonical_arg)), Call(func, canonical_arg))


# Monomial: tuple of (atom, exponent>=1) pairs, atoms strictly increasing.
Monomial = tuple[tuple[Atom, int], ...]

_UNIT: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out: list[tuple[Atom, int]] = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i][0] == b[j][0]:
            out.append((a[i][0], a[i][1] + b[j][1]))
            i += 1
            j += 1
        elif a[i][0] < b[j][0]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b, or None when b does not divide a."""
    result: list[tuple[Atom, int]] = []
    i = 0
    for atom, e in b:
        while i < len(a) and a[i][0] < atom:
            result.append(a[i])
            i += 1
        if i >= len(a) or a[i][0] != atom or a[i][1] < e:
            return None
        if a[i][1] > e:
            result.append((atom, a[i][1] - e))
        i += 1
    result.extend(a[i:])
    return tuple(result)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


# Printed in every report so outputs are self-describing.
MONOMIAL_ORDER_NOTE = (
    "canonical form orders monomials by total degree, then lexicographically "
    "by atom name with higher powers first"
)


def term_sort_key(m: Monomial):
    """Graded lex key; min() under this key is the leading monomial."""
    return (-_mono_degree(m), tuple((a.key, -e) for a, e in m))


class Poly:
    """Multivariate polynomial with Fraction coefficients, sparse dict."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction]):
        self.terms = terms

    @staticmethod
    def zero() -> "Poly":
        return Poly({})

    @staticmethod
    def const(c: Fraction | int) -> "Poly":
        c = Fraction(c)
        return Poly({} if c == 0 else {_UNIT: c})

    @staticmethod
    def from_atom(atom: Atom, exp: int = 1) -> "Poly":
        return Poly({((atom, exp),): _ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _UNIT in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get(_UNIT, _ZERO)

    def atoms(self) -> set[Atom]:
        out: set[Atom] = set()
        for m in self.terms:
            for a, _ in m:
                out.add(a)
        return out

    def lead(self) -> Monomial:
        return min(self.terms, key=term_sort_key)

    def __add__(self, other: "Poly") -> "Poly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, _ZERO) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "Poly":
        if c == 0:
            return Poly({})
        if c == 1:
            return self
        return Poly({m: k * c for m, k in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return Poly({})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, _ZERO) + c1 * c2
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        return Poly(out)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("Poly power must be nonnegative")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:  # pragma: no cover - not used as dict key
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"Poly({to_text(_poly_to_expr(self))})"


_POLY_ONE = Poly.const(1)


# ---------------------------------------------------------------------------
# integer gcd machinery (primitive PRS)

def _int_content(p: Poly) -> int:
    g = 0
    for c in p.terms.values():
        g = math.gcd(g, abs(c.numerator))
        if g == 1:
            break
    return g


def _clear_denominators(p: Poly) -> Poly:
    lcm = 1
    for c in p.terms.values():
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return p.scale(Fraction(lcm))


def _positive_lead(p: Poly) -> Poly:
    if p.is_zero():
        return p
    if p.terms[p.lead()] < 0:
        return p.scale(Fraction(-1))
    return p


def _div_exact(p: Poly, g: Poly) -> Poly:
    """Exact polynomial division; raises if g does not divide p."""
    if g.is_const():
        return p.scale(1 / g.const_value())
    out: dict[Monomial, Fraction] = {}
    r = p
    glead = g.lead()
    gcoeff = g.terms[glead]
    while not r.is_zero():
        rlead = r.lead()
        t = _mono_div(rlead, glead)
        if t is None:
            raise ArithmeticError("inexact polynomial division")
        c = r.terms[rlead] / gcoeff
        out[t] = c
        r = r - g * Poly({t: c})
    return Poly(out)


def _coeffs_in(p: Poly, v: Atom) -> dict[int, Poly]:
    """View p as a polynomial in v with coefficients free of v."""
    out: dict[int, dict[Monomial, Fraction]] = {}
    for m, c in p.terms.items():
        deg = 0
        rest: list[tuple[Atom, int]] = []
        for atom, e in m:
            if atom == v:
                deg = e
            else:
                rest.append((atom, e))
        bucket = out.setdefault(deg, {})
        bucket[tuple(rest)] = bucket.get(tuple(rest), _ZERO) + c
    return {d: Poly({m: c for m, c in terms.items() if c != 0}) for d, terms in out.items()}


def _recompose(coeffs: dict[int, Poly], v: Atom) -> Poly:
    total = Poly.zero()
    for d, p in coeffs.items():
        vp = _POLY_ONE if d == 0 else Poly.from_atom(v, d)
        total = total + p * vp
    return total


def _fold_gcd(polys: Iterable[Poly]) -> Poly:
    g = Poly.zero()
    for p in polys:
        g = poly_gcd(g, p)
        if g.is_const() and g.const_value() == 1:
            break
    return g


def _prem(A: dict[int, Poly], B: dict[int, Poly]) -> dict[int, Poly]:
    """Pseudo-remainder of A by B, both univariate views in the same atom."""
    db = max(B)
    lb = B[db]
    R = dict(A)
    while R and max(R) >= db:
        dr = max(R)
        lr = R[dr]
        newR: dict[int, Poly] = {d: p * lb for d, p in R.items()}
        for d, p in B.items():
            shift = d + dr - db
            q = newR.get(shift, Poly.zero()) - lr * p
            newR[shift] = q
        R = {d: p for d, p in newR.items() if not p.is_zero()}
    return R


def _primitive_view(R: dict[int, Poly]) -> dict[int, Poly]:
    if not R:
        return R
    c = _fold_gcd(R.values())
    if c.is_const() and c.const_value() == 1:
        return R
    return {d: _div_exact(p, c) for d, p in R.items()}


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Gcd of integer-coefficient polynomials, primitive with positive lead."""
    if a.is_zero():
        return _positive_lead(b)
    if b.is_zero():
        return _positive_lead(a)
    if a.is_const() or b.is_const():
        return Poly.const(math.gcd(_int_content(a), _int_content(b)))
    v = min(a.atoms() | b.atoms())
    A = _coeffs_in(a, v)
    B = _coeffs_in(b, v)
    ca = _fold_gcd(A.values())
    cb = _fold_gcd(B.values())
    c = poly_gcd(ca, cb)
    PA = {d: _div_exact(p, ca) for d, p in A.items()}
    PB = {d: _div_exact(p, cb) for d, p in B.items()}
    if max(PA) < max(PB):
        PA, PB = PB, PA
    while PB:
        R = _prem(PA, PB)
        PA = PB
        PB = _primitive_view(R)
    if max(PA) == 0:
        return _positive_lead(c)
    return _positive_lead(c * _recompose(PA, v))


# ---------------------------------------------------------------------------
# monomial rewrites (fixed point)

def _is_reducible(atom: Atom, exp: int) -> bool:
    return exp >= 2 and atom.key[0] == "f" and atom.key[1] in ("sin", "sqrt")


def _rat_add(n1: Poly, d1: Poly, n2: Poly, d2: Poly) -> tuple[Poly, Poly]:
    if d1 == d2:
        return n1 + n2, d1
    return n1 * d2 + n2 * d1, d1 * d2


def _reduce_pass(p: Poly) -> tuple[Poly, Poly, bool]:
    """One sweep of the sin^2/sqrt^2 monomial rewrites over p; returns a
    rational pair because sqrt arguments may carry denominators."""
    changed = False
    num_plain = Poly.zero()
    fractional: list[tuple[Poly, Poly]] = []
    for mono, coeff in p.terms.items():
        kept: list[tuple[Atom, int]] = []
        reps: list[tuple[Poly, Poly]] = []
        for atom, e in mono:
            if not _is_reducible(atom, e):
                kept.append((atom, e))
                continue
            changed = True
            half, rem = divmod(e, 2)
            func = atom.key[1]
            if func == "sin":
                arg = atom.expr.arg
                cos_sq = Poly.from_atom(_call_atom("cos", arg), 2)
                base = Poly.const(1) - cos_sq
                rep_n = base**half
                if rem:
                    rep_n = rep_n * Poly.from_atom(atom)
                reps.append((rep_n, _POLY_ONE))
            else:  # sqrt
                an, ad = _walk(atom.expr.arg)
                rep_n = an**half
                rep_d = ad**half
                if rem:
                    rep_n = rep_n * Poly.from_atom(atom)
                reps.append((rep_n, rep_d))
        n_i = Poly({tuple(kept): coeff})
        d_i = _POLY_ONE
        for rn, rd in reps:
            n_i = n_i * rn
            d_i = d_i * rd
        if d_i is _POLY_ONE or d_i == _POLY_ONE:
            num_plain = num_plain + n_i
        else:
            fractional.append((n_i, d_i))
    num, den = num_plain, _POLY_ONE
    for n_i, d_i in fractional:
        num, den = _rat_add(num, den, n_i, d_i)
    return num, den, changed


# ---------------------------------------------------------------------------
# canonical pair

def canonicalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    while True:
        nn, nd, ch1 = _reduce_pass(num)
        dn, dd, ch2 = _reduce_pass(den)
        num = nn * dd
        den = nd * dn
        if not (ch1 or ch2):
            break
    if num.is_zero():
        if den.is_zero():
            raise ZeroDivisionError("0/0 in exact arithmetic")
        return Poly.zero(), _POLY_ONE
    if den.is_zero():
        raise ZeroDivisionError("division by an expression that is identically zero")
    if den.is_const():
        c = den.const_value()
        return num.scale(1 / c), _POLY_ONE
    # strip any common monomial factor, cheap and frequent (powers of r etc.)
    num, den = _cancel_monomial(num, den)
    if not den.is_const():
        ni = _clear_denominators(num)
        di = _clear_denominators(den)
        g = poly_gcd(ni, di)
        if not g.is_const():
            num = _div_exact(num, g)
            den = _div_exact(den, g)
    if den.is_const():
        return num.scale(1 / den.const_value()), _POLY_ONE
    lc = den.terms[den.lead()]
    return num.scale(1 / lc), den.scale(1 / lc)


def _common_mono(p: Poly) -> Monomial:
    it = iter(p.terms)
    common = next(it)
    for m in it:
        if not common:
            break
        merged: list[tuple[Atom, int]] = []
        d = dict(m)
        for atom, e in common:
            if atom in d:
                merged.append((atom, min(e, d[atom])))
        common = tuple(merged)
    return common


def _cancel_monomial(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    shared_candidates = dict(_common_mono(den))
    if not shared_candidates:
        return num, den
    num_common = dict(_common_mono(num))
    shared: Monomial = tuple(
        (atom, min(e, num_common[atom]))
        for atom, e in sorted(shared_candidates.items(), key=lambda kv: kv[0])
        if atom in num_common
    )
    if not shared:
        return num, den
    new_num = {}
    for m, c in num.terms.items():
        new_num[_mono_div(m, shared)] = c
    new_den = {}
    for m, c in den.terms.items():
        new_den[_mono_div(m, shared)] = c
    return Poly(new_num), Poly(new_den)


# ---------------------------------------------------------------------------
# expression tree <-> canonical pair

def _walk(e: Expr) -> tuple[Poly, Poly]:
    if isinstance(e, Const):
        return Poly.const(e.value), _POLY_ONE
    if isinstance(e, Var):
        return Poly.from_atom(_var_atom(e.name)), _POLY_ONE
    if isinstance(e, Add):
        num, den = Poly.zero(), _POLY_ONE
        for t in e.terms:
            tn, td = _walk(t)
            num, den = _rat_add(num, den, tn, td)
        return num, den
    if isinstance(e, Mul):
        num, den = _POLY_ONE, _POLY_ONE
        for f in e.factors:
            fn, fd = _walk(f)
            num = num * fn
            den = den * fd
        return num, den
    if isinstance(e, Pow):
        bn, bd = _walk(e.base)
        k = e.exponent
        if k >= 0:
            return bn**k, bd**k
        if bn.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return bd ** (-k), bn ** (-k)
    if isinstance(e, Div):
        nn, nd = _walk(e.num)
        dn, dd = _walk(e.den)
        return nn * dd, nd * dn
    if isinstance(e, Call):
        an, ad = canonicalize(*_walk(e.arg))
        arg_tree = _pair_to_expr(an, ad)
        return Poly.from_atom(_call_atom(e.func, arg_tree)), _POLY_ONE
    raise TypeError(f"not an expression node: {e!r}")


def _poly_to_expr(p: Poly) -> Expr:
    if p.is_zero():
        return Const(_ZERO)
    terms: list[Expr] = []
    for mono in sorted(p.terms, key=term_sort_key):
        coeff = p.terms[mono]
        factors: list[Expr] = []
        for atom, e in mono:
            factors.append(atom.expr if e == 1 else Pow(atom.expr, e))
        if not factors:
            terms.append(Const(coeff))
        elif coeff == 1:
            terms.append(factors[0] if len(factors) == 1 else Mul(tuple(factors)))
        else:
            terms.append(Mul(tuple([Const(coeff)] + factors)))
    return Add.of(*terms)


def _pair_to_expr(num: Poly, den: Poly) -> Expr:
    if den == _POLY_ONE:
        return _poly_to_expr(num)
    return Div(_poly_to_expr(num), _poly_to_expr(den))


@lru_cache(maxsize=8192)
def to_canonical(e: Expr) -> tuple[Poly, Poly]:
    return canonicalize(*_walk(e))


def simplify(e: Expr) -> Expr:
    """Canonical representative of e as a rational expression."""
    return _pair_to_expr(*to_canonical(e))


def is_zero_expr(e: Expr) -> bool:
    """True iff e is identically zero as a rational expression (after the
    pinned rewrites); trig identities beyond those may still evaluate to
    zero everywhere without being detected here."""
    num, _ = to_canonical(e)
    return num.is_zero()


def canonical_text(e: Expr) -> str:
    return to_text(simplify(e))


def canonical_equal(a: Expr, b: Expr) -> bool:
    """Fast equality tier: identical canonical pairs."""
    na, da = to_canonical(a)
    nb, db = to_canonical(b)
    return na == nb and da == db


def differentiate(e: Expr, name: str) -> Expr:
    """Exact partial derivative, returned in canonical form."""
    return simplify(derivative_raw(e, name))
