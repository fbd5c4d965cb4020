"""Equality oracle: canonical-form coincidence, else randomized sampling.

Tier 1 declares two expressions equal when their canonical rational pairs
coincide. Tier 2 samples both on a box domain with a deterministic RNG and
compares values to tolerance; sample points where either side leaves its
domain (sqrt of a negative, division by zero, ...) are redrawn, and running
out of redraws raises instead of guessing.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field, replace
from typing import Mapping

from .canonical import canonical_equal
from .expr import EvalError, Expr, eval_numeric, free_vars

Assignment = Mapping[str, float]
Interval = tuple[float, float]

DEFAULT_SAMPLES = 50
DEFAULT_TOL = 1e-9
DEFAULT_INTERVAL: Interval = (-1.0, 1.0)

# generous cap on redraws before declaring the domain unusable
_ATTEMPT_FACTOR = 50


class OracleError(RuntimeError):
    """Sampling could not collect enough in-domain points."""


@dataclass(frozen=True)
class Witness:
    """A sample point where the two sides differ."""

    point: dict[str, float]
    left: float
    right: float


def _rng_for(seed: int, names: tuple[str, ...]) -> random.Random:
    # derive the stream from seed + variable names without str hash
    # randomization so runs are reproducible across processes
    digest = hashlib.sha256(("%d|%s" % (seed, ",".join(names))).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _within(left: float, right: float, tol: float) -> bool:
    return abs(left - right) <= tol * max(1.0, abs(left), abs(right))


def sample_compare(
    a: Expr,
    b: Expr,
    *,
    samples: int = DEFAULT_SAMPLES,
    tol: float = DEFAULT_TOL,
    domain: Mapping[str, Interval] | None = None,
    seed: int = 0,
    default_interval: Interval = DEFAULT_INTERVAL,
) -> Witness | None:
    """Sampling tier alone: None if all samples agree, else a witness."""
    names = tuple(sorted(free_vars(a) | free_vars(b)))
    domain = domain or {}
    if not names:
        try:
            va, vb = eval_numeric(a, {}), eval_numeric(b, {})
        except EvalError as exc:
            raise OracleError(f"constant comparison left the domain: {exc}") from exc
        return None if _within(va, vb, tol) else Witness({}, va, vb)
    rng = _rng_for(seed, names)
    collected = 0
    attempts = 0
    last_error: EvalError | None = None
    while collected < samples:
        attempts += 1
        if attempts > samples * _ATTEMPT_FACTOR:
            raise OracleError(
                f"could not collect {samples} in-domain samples after {attempts - 1} "
                f"attempts; last failure: {last_error}"
            )
        point = {}
        for name in names:
            lo, hi = domain.get(name, default_interval)
            point[name] = rng.uniform(lo, hi)
        try:
            va = eval_numeric(a, point)
            vb = eval_numeric(b, point)
        except EvalError as exc:
            last_error = exc
            continue
        if not _within(va, vb, tol):
            return Witness(point, va, vb)
        collected += 1
    return None


def expr_equal(
    a: Expr,
    b: Expr,
    *,
    samples: int = DEFAULT_SAMPLES,
    tol: float = DEFAULT_TOL,
    domain: Mapping[str, Interval] | None = None,
    seed: int = 0,
    default_interval: Interval = DEFAULT_INTERVAL,
) -> bool:
    """Two-tier equality: exact canonical coincidence, else sampling."""
    if canonical_equal(a, b):
        return True
    witness = sample_compare(
        a, b, samples=samples, tol=tol, domain=domain, seed=seed,
        default_interval=default_interval,
    )
    return witness is None


@dataclass(frozen=True)
class OracleConfig:
    """Equality-check policy shared across a computation: sample count,
    tolerance, RNG seed, and per-variable sampling intervals."""

    samples: int = DEFAULT_SAMPLES
    tol: float = DEFAULT_TOL
    seed: int = 0
    intervals: Mapping[str, Interval] = field(default_factory=dict)
    default_interval: Interval = DEFAULT_INTERVAL

    def with_intervals(self, extra: Mapping[str, Interval]) -> "OracleConfig":
        merged = dict(self.intervals)
        merged.update(extra)
        return replace(self, intervals=merged)

    def equal(self, a: Expr, b: Expr) -> bool:
        return expr_equal(
            a, b, samples=self.samples, tol=self.tol, domain=self.intervals,
            seed=self.seed, default_interval=self.default_interval,
        )

    def witness(self, a: Expr, b: Expr) -> Witness | None:
        if canonical_equal(a, b):
            return None
        return sample_compare(
            a, b, samples=self.samples, tol=self.tol, domain=self.intervals,
            seed=self.seed, default_interval=self.default_interval,
        )
