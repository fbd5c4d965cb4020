"""Expression trees over commuting scalar variables.

Nodes are immutable. Constructors do no simplification beyond flattening
nested sums/products and folding arithmetic on bare constants; canonical
form lives in canonical.py. Constants are exact rationals, powers carry
integer exponents only, and the function vocabulary is fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

FUNCTIONS = ("sin", "cos", "exp", "sqrt", "ln")

Rational = Union[int, Fraction]


class EvalError(ValueError):
    """Numeric evaluation left the domain (division by zero, sqrt of a
    negative, log of a nonpositive value, overflow, unassigned variable)."""


class Expr:
    """Base class for scalar expression nodes."""

    __slots__ = ()

    def __add__(self, other: "Expr | Rational") -> "Expr":
        return Add.of(self, as_expr(other))

    def __radd__(self, other: Rational) -> "Expr":
        return Add.of(as_expr(other), self)

    def __sub__(self, other: "Expr | Rational") -> "Expr":
        return Add.of(self, neg(as_expr(other)))

    def __rsub__(self, other: Rational) -> "Expr":
        return Add.of(as_expr(other), neg(self))

    def __mul__(self, other: "Expr | Rational") -> "Expr":
        return Mul.of(self, as_expr(other))

    def __rmul__(self, other: Rational) -> "Expr":
        return Mul.of(as_expr(other), self)

    def __truediv__(self, other: "Expr | Rational") -> "Expr":
        return Div(self, as_expr(other))

    def __rtruediv__(self, other: Rational) -> "Expr":
        return Div(as_expr(other), self)

    def __pow__(self, exponent: int) -> "Expr":
        return Pow(self, exponent)

    def __neg__(self) -> "Expr":
        return neg(self)

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: Fraction

    __slots__ = ("value",)

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, repr=False)
class Var(Expr):
    name: str

    __slots__ = ("name",)


@dataclass(frozen=True, repr=False)
class Add(Expr):
    terms: tuple[Expr, ...]

    __slots__ = ("terms",)

    @staticmethod
    def of(*terms: Expr) -> Expr:
        flat: list[Expr] = []
        for t in terms:
            if isinstance(t, Add):
                flat.extend(t.terms)
            else:
                flat.append(t)
        if not flat:
            return ZERO
        if len(flat) == 1:
            return flat[0]
        return Add(tuple(flat))


@dataclass(frozen=True, repr=False)
class Mul(Expr):
    factors: tuple[Expr, ...]

    __slots__ = ("factors",)

    @staticmethod
    def of(*factors: Expr) -> Expr:
        flat: list[Expr] = []
        for f in factors:
            if isinstance(f, Mul):
                flat.extend(f.factors)
            else:
                flat.append(f)
        if not flat:
            return ONE
        if len(flat) == 1:
            return flat[0]
        return Mul(tuple(flat))


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    base: Expr
    exponent: int

    __slots__ = ("base", "exponent")

    def __post_init__(self) -> None:
        if not isinstance(self.exponent, int) or isinstance(self.exponent, bool):
            raise TypeError(f"power exponent must be an int, got {self.exponent!r}")


@dataclass(frozen=True, repr=False)
class Div(Expr):
    num: Expr
    den: Expr

    __slots__ = ("num", "den")


@dataclass(frozen=True, repr=False)
class Call(Expr):
    func: str
    arg: Expr

    __slots__ = ("func", "arg")

    def __post_init__(self) -> None:
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function {self.func!r}; expected one of {FUNCTIONS}")


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def as_expr(value: Expr | Rational) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Const(Fraction(value))
    raise TypeError(f"cannot coerce {value!r} to an expression")


def const(value: Rational) -> Const:
    return Const(Fraction(value))


def var(name: str) -> Var:
    return Var(name)


def neg(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    return Mul.of(Const(Fraction(-1)), e)


def sin(e: Expr) -> Expr:
    return Call("sin", e)


def cos(e: Expr) -> Expr:
    return Call("cos", e)


def exp(e: Expr) -> Expr:
    return Call("exp", e)


def sqrt(e: Expr) -> Expr:
    return Call("sqrt", e)


def ln(e: Expr) -> Expr:
    return Call("ln", e)


def is_zero_literal(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0


def is_one_literal(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 1


# ---------------------------------------------------------------------------
# printing

# precedence levels: 1 sum, 2 product/quotient, 3 power, 4 atom
_SUM, _PROD, _POWER, _ATOM = 1, 2, 3, 4


def _negative_head(e: Expr) -> Expr | None:
    """If e prints with a leading minus sign, return its sign-flipped twin."""
    if isinstance(e, Const) and e.value < 0:
        return Const(-e.value)
    if isinstance(e, Mul) and isinstance(e.factors[0], Const) and e.factors[0].value < 0:
        head = Const(-e.factors[0].value)
        rest = e.factors[1:]
        if head.value == 1 and len(rest) == 1:
            return rest[0]
        if head.value == 1:
            return Mul(rest)
        return Mul((head,) + rest)
    if isinstance(e, Div):
        flipped = _negative_head(e.num)
        if flipped is not None:
            return Div(flipped, e.den)
    return None


def _render(e: Expr) -> tuple[str, int]:
    """Return (text, precedence level of the outermost construct)."""
    if isinstance(e, Const):
        v = e.value
        if v.denominator == 1:
            text = str(v.numerator)
        else:
            text = f"{v.numerator}/{v.denominator}"
        level = _SUM if v < 0 or v.denominator != 1 else _ATOM
        return text, level
    if isinstance(e, Var):
        return e.name, _ATOM
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})", _ATOM
    if isinstance(e, Add):
        parts: list[str] = []
        for i, t in enumerate(e.terms):
            flipped = None if i == 0 else _negative_head(t)
            if flipped is not None:
                parts.append(" - " + _child(flipped, _PROD))
            elif i == 0:
                parts.append(_child(t, _PROD) if isinstance(t, Add) else _render(t)[0])
            else:
                parts.append(" + " + _child(t, _PROD))
        return "".join(parts), _SUM
    if isinstance(e, Mul):
        factors = e.factors
        if isinstance(factors[0], Const) and factors[0].value == -1 and len(factors) > 1:
            # in this grammar '-' binds a single base, so "-x^2" means (-x)^2;
            # parenthesize everything the minus must cover
            rest = factors[1:]
            if len(rest) == 1 and isinstance(rest[0], (Var, Call)):
                return "-" + _render(rest[0])[0], _SUM
            inner = rest[0] if len(rest) == 1 else Mul(rest)
            return "-(" + to_text(inner) + ")", _SUM
        texts = []
        for i, f in enumerate(factors):
            if i == 0 and isinstance(f, Const):
                # leading constants (fractions, negatives) reparse without
                # parens because the parser folds constant prefixes
                texts.append(_render(f)[0])
                continue
            need_parens_for_sign = _starts_negative(f)
            texts.append(_child(f, _PROD, force=need_parens_for_sign))
        return "*".join(texts), _PROD
    if isinstance(e, Div):
        # a bare constant numerator reparses correctly without parens,
        # since the parser refolds constant/constant prefixes
        num = _render(e.num)[0] if isinstance(e.num, Const) else _child(e.num, _PROD)
        den = _child(e.den, _POWER)
        return f"{num}/{den}", _PROD
    if isinstance(e, Pow):
        base = _child(e.base, _ATOM)
        return f"{base}^{e.exponent}", _POWER
    raise TypeError(f"not an expression node: {e!r}")


def _starts_negative(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value < 0
    if isinstance(e, Mul):
        return _starts_negative(e.factors[0])
    if isinstance(e, Div):
        return _starts_negative(e.num)
    return False


def _child(e: Expr, minimum: int, force: bool = False) -> str:
    text, level = _render(e)
    if force or level < minimum:
        return f"({text})"
    return text


def to_text(e: Expr) -> str:
    """Render an expression in the same grammar the parser accepts."""
    return _render(e)[0]


# ---------------------------------------------------------------------------
# structure queries and rewrites

def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Add):
        out: frozenset[str] = frozenset()
        for t in e.terms:
            out |= free_vars(t)
        return out
    if isinstance(e, Mul):
        out = frozenset()
        for f in e.factors:
            out |= free_vars(f)
        return out
    if isinstance(e, Pow):
        return free_vars(e.base)
    if isinstance(e, Div):
        return free_vars(e.num) | free_vars(e.den)
    if isinstance(e, Call):
        return free_vars(e.arg)
    raise TypeError(f"not an expression node: {e!r}")


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace variables by expressions, simultaneously. No simplification."""
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Add):
        return Add.of(*(substitute(t, mapping) for t in e.terms))
    if isinstance(e, Mul):
        return Mul.of(*(substitute(f, mapping) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, mapping), e.exponent)
    if isinstance(e, Div):
        return Div(substitute(e.num, mapping), substitute(e.den, mapping))
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, mapping))
    raise TypeError(f"not an expression node: {e!r}")


_FUNC_EVAL: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "ln": math.log,
}


def eval_numeric(e: Expr, assignment: Mapping[str, float]) -> float:
    """Evaluate at a point, IEEE doubles. Raises EvalError off-domain."""
    try:
        value = _eval(e, assignment)
    except ZeroDivisionError as exc:
        raise EvalError(f"division by zero while evaluating {to_text(e)}") from exc
    except (ValueError, OverflowError) as exc:
        raise EvalError(f"domain error while evaluating {to_text(e)}: {exc}") from exc
    if not math.isfinite(value):
        raise EvalError(f"non-finite value while evaluating {to_text(e)}")
    return value


def _eval(e: Expr, a: Mapping[str, float]) -> float:
    if isinstance(e, Const):
        return e.value.numerator / e.value.denominator
    if isinstance(e, Var):
        try:
            return a[e.name]
        except KeyError:
            raise EvalError(f"no value assigned to variable {e.name!r}") from None
    if isinstance(e, Add):
        return math.fsum(_eval(t, a) for t in e.terms)
    if isinstance(e, Mul):
        out = 1.0
        for f in e.factors:
            out *= _eval(f, a)
        return out
    if isinstance(e, Pow):
        return _eval(e.base, a) ** e.exponent
    if isinstance(e, Div):
        den = _eval(e.den, a)
        if den == 0.0:
            raise ZeroDivisionError
        return _eval(e.num, a) / den
    if isinstance(e, Call):
        return _FUNC_EVAL[e.func](_eval(e.arg, a))
    raise TypeError(f"not an expression node: {e!r}")


_FUNC_DERIVATIVE: dict[str, Callable[[Expr], Expr]] = {
    # outer derivative of f at u, chain-rule factor applied by the caller
    "sin": lambda u: Call("cos", u),
    "cos": lambda u: neg(Call("sin", u)),
    "exp": lambda u: Call("exp", u),
    "sqrt": lambda u: Div(ONE, Mul.of(Const(Fraction(2)), Call("sqrt", u))),
    "ln": lambda u: Div(ONE, u),
}


def derivative_raw(e: Expr, name: str) -> Expr:
    """Partial derivative as a raw tree; callers simplify."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == name else ZERO
    if isinstance(e, Add):
        return Add.of(*(derivative_raw(t, name) for t in e.terms))
    if isinstance(e, Mul):
        terms = []
        for i, f in enumerate(e.factors):
            df = derivative_raw(f, name)
            if is_zero_literal(df):
                continue
            rest = e.factors[:i] + e.factors[i + 1 :]
            terms.append(Mul.of(df, *rest))
        return Add.of(*terms) if terms else ZERO
    if isinstance(e, Pow):
        if e.exponent == 0:
            return ZERO
        db = derivative_raw(e.base, name)
        if is_zero_literal(db):
            return ZERO
        return Mul.of(Const(Fraction(e.exponent)), Pow(e.base, e.exponent - 1), db)
    if isinstance(e, Div):
        dn = derivative_raw(e.num, name)
        dd = derivative_raw(e.den, name)
        if is_zero_literal(dd):
            return Div(dn, e.den)
        return Div(
            Add.of(Mul.of(dn, e.den), neg(Mul.of(e.num, dd))),
            Pow(e.den, 2),
        )
    if isinstance(e, Call):
        du = derivative_raw(e.arg, name)
        if is_zero_literal(du):
            return ZERO
        return Mul.of(_FUNC_DERIVATIVE[e.func](e.arg), du)
    raise TypeError(f"not an expression node: {e!r}")


def iter_nodes(e: Expr) -> Iterable[Expr]:
    """Depth-first iteration over all nodes."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Add):
            stack.extend(node.terms)
        elif isinstance(node, Mul):
            stack.extend(node.factors)
        elif isinstance(node, Pow):
            stack.append(node.base)
        elif isinstance(node, Div):
            stack.append(node.num)
            stack.append(node.den)
        elif isinstance(node, Call):
            stack.append(node.arg)
