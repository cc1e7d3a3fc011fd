"""Hypergeometric series of a scalar matrix argument ``x * I_n``.

The series

    pFq(a; b; x I_n) = sum_k sum_{|kappa| = k} (a)_kappa / (b)_kappa
                       * C_kappa(x I_n) / k!

depends on ``x`` only through ``x**k``, so it is organised by *level sums*
``S_k = sum_{|kappa|=k} (a)_kappa/(b)_kappa C_kappa(I_n)/k!`` which are
generated once per parameter set and reused for every argument.

The superscript ``gamma`` is the ensemble-style parameter of the
generalized Pochhammer symbol, ``(a)_kappa = prod_i (a - (gamma/2)(i-1))_{k_i}``;
the Jack parameter is ``2/gamma``.  It is never converted internally.

Partitions of level ``k+1`` are produced from level ``k`` by adding one box
to the last row or opening a new row, which reaches every partition exactly
once.  The term ratio for one added box is a short product, so a whole level
is advanced with a handful of vectorized numpy operations.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special as sp

from ..errors import DomainError, IllConditioned, NonConvergence

__all__ = [
    "MhgParams",
    "SeriesValue",
    "LevelSums",
    "mhg",
    "mhg_at_one_2f1",
]

DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_DEGREE = 200
DEFAULT_MAX_PARTITIONS = 4_000_000

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MhgParams:
    """Upper and lower parameters of a ``pFq`` and its superscript ``gamma``."""

    upper: tuple[float, ...]
    lower: tuple[float, ...]
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(float(b) for b in self.lower))
        if not self.gamma > 0:
            raise DomainError("superscript gamma must be positive")
        if len(self.upper) > len(self.lower) + 1:
            raise DomainError("p <= q + 1 is required for convergence")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)


@dataclass(frozen=True)
class SeriesValue:
    value: float
    degree_used: int
    tail_estimate: float
    terminated: bool
    rounding_estimate: float = 0.0

    @property
    def error_estimate(self) -> float:
        return self.tail_estimate + self.rounding_estimate


def _snap_zero(v: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Zero out factors that are zero up to rounding of their summands."""
    return np.where(np.abs(v) <= 64 * _EPS * scale, 0.0, v)


@dataclass
class LevelSums:
    """Lazily extended level sums of a scalar-argument hypergeometric series.

    ``coefficients[k]`` is ``S_k`` and ``abs_coefficients[k]`` the sum of the
    absolute values of the individual partition terms (used to bound the
    rounding error).  Extension is guarded by a lock, and evaluation never
    depends on how far the table has been extended by earlier calls.
    """

    params: MhgParams
    n: int
    max_partitions: int = DEFAULT_MAX_PARTITIONS
    coefficients: list = field(default_factory=lambda: [1.0])
    abs_coefficients: list = field(default_factory=lambda: [1.0])
    terminated: bool = False
    partitions_generated: int = 1

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        self._lock = threading.Lock()
        g = self.params.gamma
        self._alpha = 2.0 / g
        self._half_gamma = g / 2.0
        self._upper = np.asarray(self.params.upper, dtype=float)
        self._lower = np.asarray(self.params.lower, dtype=float)
        width = max(self.n, 1)
        self._parts = np.zeros((1, width), dtype=np.int64)
        self._length = np.zeros(1, dtype=np.int64)
        self._terms = np.ones(1)
        if self.n == 0:
            self.terminated = True

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def extend(self, degree: int) -> None:
        with self._lock:
            while self.degree < degree and not self.terminated:
                self._advance()

    def _advance(self) -> None:
        parts, length, terms = self._parts, self._length, self._terms
        n = self.n
        rows_new, cols_new, src_new = [], [], []
        # children extending the last row
        has_rows = length > 0
        last = np.where(has_rows, length - 1, 0)
        idx = np.arange(len(length))
        last_len = parts[idx, last]
        above = np.where(last > 0, parts[idx, np.maximum(last - 1, 0)], np.iinfo(np.int64).max)
        ext = has_rows & (last_len < above)
        rows_new.append(last[ext])
        cols_new.append(last_len[ext] + 1)
        src_new.append(idx[ext])
        # children opening a new row
        opn = length < n
        rows_new.append(length[opn])
        cols_new.append(np.ones(int(opn.sum()), dtype=np.int64))
        src_new.append(idx[opn])

        row = np.concatenate(rows_new)
        col = np.concatenate(cols_new)
        src = np.concatenate(src_new)
        if row.size == 0:
            self.terminated = True
            return

        shift = self._half_gamma * row
        cm1 = col - 1.0
        num = np.ones(row.size)
        for a in self._upper:
            v = a - shift + cm1
            num = num * _snap_zero(v, abs(a) + shift + cm1)
        keep = num != 0.0
        den = np.ones(row.size)
        for b in self._lower:
            v = b - shift + cm1
            den = den * _snap_zero(v, abs(b) + shift + cm1)
        bad = keep & (den == 0.0)
        if bad.any():
            raise IllConditioned(
                "a lower parameter Pochhammer vanishes where the upper ones do not"
            )
        alpha = self._alpha
        ncol = self.n * self._half_gamma - shift + cm1
        num = num * alpha * alpha * ncol
        den = den * alpha * col * (1.0 + alpha * cm1)
        # hook-length corrections for cells above the new box
        p_src = parts[src]
        for r in range(max(n - 1, 0)):
            active = row > r
            if not active.any():
                break
            arm = p_src[:, r] - col
            d = row - r
            f = np.where(
                active,
                (d + alpha * (1 + arm)) * (d + 1 + alpha * arm)
                / np.where(active, (d - 1 + alpha * (1 + arm)) * (d + alpha * arm), 1.0),
                1.0,
            )
            den = den * f
        new_terms = terms[src] * num / den

        keep &= np.isfinite(new_terms)
        if not np.all(np.isfinite(new_terms[num != 0.0])):
            raise NonConvergence("series terms overflow double precision", degree=self.degree)
        row, col, src, new_terms = row[keep], col[keep], src[keep], new_terms[keep]
        new_parts = p_src[keep].copy() if keep.size else p_src
        new_parts[np.arange(row.size), row] = col
        new_length = np.maximum(length[src], row + 1)

        self.partitions_generated += row.size
        if self.partitions_generated > self.max_partitions:
            raise NonConvergence(
                f"partition budget of {self.max_partitions} exceeded at degree "
                f"{self.degree + 1} (n={self.n})",
                degree=self.degree,
            )
        self._parts, self._length, self._terms = new_parts, new_length, new_terms
        self.coefficients.append(float(new_terms.sum()) if row.size else 0.0)
        self.abs_coefficients.append(float(np.abs(new_terms).sum()) if row.size else 0.0)
        if row.size == 0:
            self.terminated = True

    def coefficient_array(self, degree: Optional[int] = None) -> np.ndarray:
        if degree is not None:
            self.extend(degree)
        return np.asarray(self.coefficients if degree is None else self.coefficients[: degree + 1])

    def evaluate(
        self,
        x: float,
        rel_tol: float = DEFAULT_REL_TOL,
        max_degree: int = DEFAULT_MAX_DEGREE,
        raise_on_failure: bool = True,
    ) -> SeriesValue:
        """Sum the series at ``x * I_n`` with the level-sum stopping rule."""
        x = float(x)
        if self.n == 0 or x == 0.0:
            return SeriesValue(1.0, 0, 0.0, True)
        partial = 1.0
        abs_partial = 1.0
        prev = 1.0
        k = 0
        xk = 1.0
        while True:
            k += 1
            if k > self.degree and not self.terminated:
                if k > max_degree:
                    break
                self.extend(k)
            if k > self.degree:
                # exhausted: the polynomial is complete
                rounding = 4 * _EPS * abs_partial * (k + 1)
                return SeriesValue(partial, k - 1, 0.0, True, rounding)
            xk *= x
            cur = self.coefficients[k] * xk
            partial += cur
            abs_partial += self.abs_coefficients[k] * abs(xk)
            if k >= 2 and abs(cur) + abs(prev) <= rel_tol * abs(partial):
                r = abs(cur / prev) if prev != 0 else 0.0
                tail = abs(cur) * r / (1 - r) if r < 1 else math.inf
                if tail <= rel_tol * abs(partial):
                    rounding = 4 * _EPS * abs_partial * (k + 1)
                    return SeriesValue(partial, k, tail, False, rounding)
            prev = cur
        r = abs(cur / prev) if prev != 0 else 0.0
        tail = abs(cur) * r / (1 - r) if r < 1 else math.inf
        rounding = 4 * _EPS * abs_partial * (k + 1)
        out = SeriesValue(partial, k - 1, tail, False, rounding)
        if raise_on_failure:
            raise NonConvergence(
                f"series not converged after degree {max_degree} at x={x}: "
                f"tail estimate {tail:.3g} vs value {partial:.6g}",
                value=partial,
                tail_estimate=tail,
                degree=k - 1,
            )
        return out


def mhg(
    params: MhgParams,
    x: float,
    m: int,
    max_degree: int = DEFAULT_MAX_DEGREE,
    rel_tol: float = DEFAULT_REL_TOL,
) -> SeriesValue:
    """Evaluate ``pFq^gamma(upper; lower; x I_m)``.

    Raises :class:`NonConvergence` when ``max_degree`` is reached with a tail
    estimate above ``rel_tol * |value|`` and :class:`IllConditioned` when a
    lower-parameter Pochhammer symbol vanishes without a matching upper zero.
    """
    if params.p == params.q + 1 and abs(x) >= 1:
        levels = LevelSums(params, m)
        # only a terminating series makes sense outside the unit disk
        levels.extend(max_degree + 1)
        if not levels.terminated:
            raise DomainError("|x| < 1 is required for a non-terminating series")
        return levels.evaluate(x, rel_tol, max_degree)
    return LevelSums(params, m).evaluate(x, rel_tol, max_degree)


def _log_gamma_signed(x: float) -> tuple[float, float]:
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma pole at {x}")
    return float(sp.gammaln(x)), float(sp.gammasgn(x))


def mhg_at_one_2f1(a: float, b: float, c: float, gamma: float, n: int) -> float:
    """Closed-form ``2F1^gamma(a, b; c; I_n)`` (multivariate Gauss summation).

    ``prod_{i=1}^n Gamma(c-s_i) Gamma(c-a-b-s_i) / (Gamma(c-a-s_i) Gamma(c-b-s_i))``
    with ``s_i = (gamma/2)(i-1)``.  Valid when the series terminates or when
    ``c - a - b > (n-1) gamma/2``.
    """
    if n == 0:
        return 1.0
    log_total, sign = 0.0, 1.0
    for i in range(n):
        s = 0.5 * gamma * i
        for arg, power in ((c - s, 1), (c - a - b - s, 1), (c - a - s, -1), (c - b - s, -1)):
            if power < 0 and arg <= 0 and arg == math.floor(arg):
                # 1/Gamma at a pole vanishes
                return 0.0
            lg, sg = _log_gamma_signed(arg)
            log_total += power * lg
            sign *= sg
    return sign * math.exp(log_total)
