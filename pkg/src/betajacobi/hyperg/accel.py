"""Tail acceleration for level-sum series with a known singularity at ``x = 1``.

A series ``F(x) = sum_k S_k x^k`` whose only singularity on the unit circle
is at ``x = 1``, with local expansion ``sum_j (1-x)^{e_j} (analytic)``, has
level sums with the asymptotic expansion

    S_k ~ sum_eps d_eps * Gamma(k - eps) / Gamma(k + 1),   eps = e_j + l.

The coefficients ``d_eps`` are fitted by least squares on the top of the
computed levels (optionally constrained by the exact value ``F(1)``), and the
fitted model supplies the tail ``sum_{k > D}`` in closed or quadrature form.
Two fits with different basis sizes give an error estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import special as sp

__all__ = ["TailModel", "fit_tail_model", "AcceleratedSeries", "accelerated_sum"]

_EPS = np.finfo(float).eps
_CHUNK = 1024

# double-exponential nodes on (0, 1) for the tail integral (built once)
_TS_H = 1.0 / 16
_TS_T = np.arange(-5.0, 5.0 + _TS_H / 2, _TS_H)
_TS_S = 1.0 / (1.0 + np.exp(-np.pi * np.sinh(_TS_T)))
_TS_SC = 1.0 / (1.0 + np.exp(np.pi * np.sinh(_TS_T)))
_TS_W = _TS_H * np.pi * np.cosh(_TS_T) * _TS_S * _TS_SC


def _basis(k: np.ndarray, eps: np.ndarray) -> np.ndarray:
    """``Gamma(k - eps) / Gamma(k + 1)`` for each (k, eps) pair."""
    return np.exp(sp.gammaln(k[:, None] - eps[None, :]) - sp.gammaln(k[:, None] + 1.0))


def _tail_at_one(D: int, eps: np.ndarray) -> np.ndarray:
    """``sum_{k > D} Gamma(k - eps)/Gamma(k+1) = Gamma(D+1-eps)/(eps Gamma(D+1))``."""
    return np.exp(sp.gammaln(D + 1.0 - eps) - sp.gammaln(D + 1.0)) / eps


def _tail(x: np.ndarray, D: int, eps: np.ndarray) -> np.ndarray:
    """``T_eps(x) = sum_{k > D} Gamma(k - eps)/Gamma(k+1) x^k`` for ``0 <= x <= 1``.

    Uses ``T = x^{D+1}/Gamma(1+eps) int_0^1 (1-u)^{D-eps} u^eps / (1 - x + x u) du``,
    integrated with a double-exponential rule that resolves the ``u ~ 1-x``
    boundary layer.  Returns an array of shape ``(len(x), len(eps))``.
    """
    x = np.asarray(x, dtype=float)
    lam = 1.0 - x
    u = _TS_S
    uc = _TS_SC
    # log of (1-u)^{D-eps} u^eps, shape (nodes, eps)
    log_w = (D - eps)[None, :] * np.log(uc)[:, None] + eps[None, :] * np.log(u)[:, None]
    base = np.exp(log_w) * _TS_W[:, None]
    denom = lam[:, None] + x[:, None] * u[None, :]
    integral = (1.0 / denom) @ base
    scale = np.exp((D + 1) * np.log(np.where(x > 0, x, 1.0)))
    scale = np.where(x > 0, scale, 0.0)
    out = integral * scale[:, None] / sp.gamma(1.0 + eps)[None, :]
    at_one = x == 1.0
    if at_one.any():
        out[at_one] = _tail_at_one(D, eps)
    return out


@dataclass(frozen=True)
class TailModel:
    eps: np.ndarray
    d: np.ndarray
    degree: int
    residual: float

    def tail(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.eps.size == 0:
            return np.zeros_like(x)
        return _tail(x, self.degree, self.eps) @ self.d


def _exponent_set(exponents: Sequence[float], span: float) -> np.ndarray:
    e0 = min(exponents)
    out = []
    for e in exponents:
        l = 0
        while e + l < e0 + span:
            out.append(e + l)
            l += 1
    return np.array(sorted(out))


def fit_tail_model(
    coefficients: Sequence[float],
    exponents: Sequence[float],
    span: float,
    window: float = 0.5,
    anchor: Optional[float] = None,
) -> TailModel:
    """Fit level sums ``S_k`` (``k <= D``) by the singular basis.

    ``span`` limits the basis to exponents below ``min(exponents) + span``;
    ``window`` is the fraction of the top levels used in the fit.  With
    ``anchor = F(1)`` the fit is constrained to reproduce it.
    """
    S = np.asarray(coefficients, dtype=float)
    D = S.size - 1
    eps = _exponent_set(exponents, span)
    k0 = max(int(D * (1 - window)), int(math.ceil(eps.max())) + 2 if eps.size else 1)
    k = np.arange(k0, D + 1, dtype=float)
    if eps.size == 0 or k.size < eps.size + 2:
        return TailModel(np.empty(0), np.empty(0), D, math.inf)
    X = _basis(k, eps)
    y = S[k0:]
    # weight rows so that every level counts relative to its own size
    w = 1.0 / np.maximum(np.abs(X).max(axis=1), 1e-300)
    Xw = X * w[:, None]
    yw = y * w
    col = np.abs(Xw).max(axis=0)
    col[col == 0] = 1.0
    Xs = Xw / col
    if anchor is not None:
        # exact constraint: partial sum at x=1 plus model tail equals F(1)
        target = anchor - math.fsum(S)
        row = _tail_at_one(D, eps) / col
        big = 1e3 * max(np.abs(Xs).max(), 1.0) / max(np.abs(row).max(), 1e-300)
        Xs = np.vstack([Xs, big * row])
        yw = np.append(yw, big * target)
    sol, *_ = np.linalg.lstsq(Xs, yw, rcond=1e-14)
    d = sol / col
    fitted = X @ d
    scale = max(np.abs(y).max(), 1e-300)
    residual = float(np.abs(fitted - y).max() / scale)
    return TailModel(eps, d, D, residual)


class AcceleratedSeries:
    """Level-sum series with a fitted singular tail, fitted once.

    Calling the object at ``x`` (array, ``0 <= x <= 1``) returns the value and
    an error estimate: the spread between the tails fitted with the two basis
    sizes in ``spans``, plus a bound on the rounding of the partial sum.
    When ``terminated`` is true the coefficients are an exact polynomial and
    no tail is added.
    """

    def __init__(
        self,
        coefficients: Sequence[float],
        abs_coefficients: Sequence[float],
        exponents: Sequence[float],
        anchor: Optional[float] = None,
        terminated: bool = False,
        spans: Sequence[float] = (3.0, 4.5),
    ):
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.abs_coefficients = np.asarray(abs_coefficients, dtype=float)
        self.degree = self.coefficients.size - 1
        self.terminated = terminated
        if terminated:
            self.models = []
        else:
            self.models = []
            for s in spans:
                try:
                    self.models.append(
                        fit_tail_model(self.coefficients, exponents, s, anchor=anchor)
                    )
                except np.linalg.LinAlgError:
                    # ill-scaled levels (overflowing coefficients): no usable model
                    self.models = []
                    break

    def __call__(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.size > _CHUNK:
            parts = [self._evaluate(x[i : i + _CHUNK]) for i in range(0, x.size, _CHUNK)]
            return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
        return self._evaluate(x)

    def _evaluate(self, x):
        k = np.arange(self.degree + 1)
        # Horner would be faster; the power table keeps the rounding bound simple
        powers = x[:, None] ** k[None, :]
        partial = powers @ self.coefficients
        rounding = 4 * _EPS * (powers @ (self.abs_coefficients * (k + 1)))
        if self.terminated:
            return partial, rounding
        if not self.models or not all(np.isfinite(m.residual) for m in self.models):
            # no usable model: fall back to a geometric bound on the tail
            last = np.abs(self.coefficients[-1]) * x**self.degree
            tail_bound = np.where(x < 1, last * x / np.maximum(1 - x, 1e-300), np.inf)
            return partial, rounding + tail_bound
        tails = [m.tail(x) for m in self.models]
        return partial + tails[-1], rounding + np.abs(tails[-1] - tails[0])


def accelerated_sum(
    coefficients: Sequence[float],
    abs_coefficients: Sequence[float],
    exponents: Sequence[float],
    x,
    anchor: Optional[float] = None,
    spans: Sequence[float] = (3.0, 4.5),
) -> tuple[np.ndarray, np.ndarray]:
    """One-shot form of :class:`AcceleratedSeries`."""
    return AcceleratedSeries(coefficients, abs_coefficients, exponents, anchor, False, spans)(x)
