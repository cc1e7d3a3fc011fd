"""Densities of the extreme eigenvalues of beta-Jacobi ensembles.

Eight laws are provided: the exact smallest and largest eigenvalue densities
for general ``(beta, a, b, m)``, the two special families ``a = 2/beta - 2``
("case 1") and ``beta (a+1)/2 = k`` integer ("case 2"), and the four hard-edge
limits of those families.

Every law is written as

    f(x) = x^(alpha-1) * (1-x)^(rho-1) * exp(logreg(x)) * val(x)

on ``(0, 1)``, or ``x^(alpha-1) * exp(logreg(x)) * val(x)`` on ``(0, inf)``,
where ``val`` is a smooth special-function factor.  Keeping the endpoint
powers separate lets the quadrature use ``w = x^alpha`` near 0 and
``v = (1-x)^rho`` near 1, which removes the endpoint singularities and keeps
prefactors like ``(1-x)^(beta m (b+m)/2)`` in log form.

Variables: the exact laws take the eigenvalue itself; the limit laws take the
scaled variable of their theorem (see :func:`regime_scale`).
"""
from __future__ import annotations

import math
import threading
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import special as sp

from .constants import (
    JacobiParams,
    LogValue,
    case1_constants,
    case2_constants,
    gamma_product,
    norm_min,
)
from .errors import DomainError, NonConvergence, QuadratureFailure
from .hyperg import LevelSums, MhgParams, bessel_k, hyp_series, mhg_at_one_2f1, of1, tricomi_u
from .hyperg.accel import AcceleratedSeries
from .quadrature import QuadResult, gauss_legendre_panels, tanh_sinh

__all__ = [
    "DensityLaw",
    "ExactMinLaw",
    "ExactMaxLaw",
    "Case1ExactLaw",
    "Case2ExactLaw",
    "Case1Regime1Law",
    "Case1Regime2Law",
    "Case2Regime1Law",
    "Case2Regime2Law",
    "make_law",
    "regime_scale",
    "pdf_min_exact",
    "pdf_max_exact",
    "pdf_min_case1",
    "pdf_min_case2",
    "pdf_case1_regime1",
    "pdf_case1_regime2",
    "pdf_case2_regime1",
    "pdf_case2_regime2",
    "case1_regime2_series_route",
    "case1_regime2_bessel_route",
    "g_beta",
    "cdf",
    "quantile",
    "total_mass",
]

_EPS = np.finfo(float).eps
# quadrature tolerance: the series-based integrands carry ~1e-9 relative noise
_QUAD_TOL = 1e-9
_QUAD_ACCEPT = 1e-7

# work limits for the general exact law
EXACT_MAX_DEGREE = 2000
EXACT_MAX_PARTITIONS = 2_000_000


def _as_array(x):
    x = np.asarray(x, dtype=float)
    return x.ndim == 0, np.atleast_1d(x)


class DensityLaw:
    """Base class: pointwise evaluation, quadrature, CDF and quantile.

    Subclasses set ``kind``, ``scaling``, ``finite``, ``params``,
    ``left_exponent`` (alpha), ``right_exponent`` (rho, finite support) or
    ``rate`` (half line), and implement ``_kernel``.
    """

    kind = ""
    scaling = ""
    finite = True
    left_exponent = 1.0
    right_exponent = 1.0
    rate = 1.0

    def __init__(self, rel_tol: float = 1e-6):
        self.rel_tol = rel_tol
        self._cache: dict = {}
        self._lock = threading.Lock()

    # -- subclass hook --------------------------------------------------

    def _kernel(self, x, xc, logx, logxc):
        """Return ``(logreg, val, err)`` arrays; ``err`` bounds ``|val - true val|``."""
        raise NotImplementedError

    # -- pointwise --------------------------------------------------------

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, 1.0) if self.finite else (0.0, math.inf)

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}({inner})"

    def _log_terms(self, x, xc, logx, logxc, drop_left=False, drop_right=False):
        logreg, val, err = self._kernel(x, xc, logx, logxc)
        lp = np.asarray(logreg, dtype=float) + np.zeros_like(x)
        if not drop_left and self.left_exponent != 1:
            lp = lp + (self.left_exponent - 1) * logx
        if self.finite and not drop_right and self.right_exponent != 1:
            lp = lp + (self.right_exponent - 1) * logxc
        # values indistinguishable from zero are reported as zero
        val = np.where((val < 0) & (np.abs(val) <= err), 0.0, val)
        return lp, val, err

    def _interior(self, x):
        with np.errstate(divide="ignore"):
            logx = np.log(x)
            if self.finite:
                xc = 1.0 - x
                logxc = np.log1p(-x)
            else:
                xc = logxc = None
        return x, xc, logx, logxc

    def pdf_with_error(self, x):
        """Density and an estimate of its absolute error (arrays or scalars)."""
        scalar, xx = _as_array(x)
        val = np.zeros_like(xx)
        err = np.zeros_like(xx)
        hi = 1.0 if self.finite else math.inf
        inside = (xx > 0) & (xx < hi)
        if inside.any():
            lp, v, e = self._log_terms(*self._interior(xx[inside]))
            with np.errstate(over="ignore", invalid="ignore"):
                scale = np.exp(lp)
                val[inside] = scale * v
                err[inside] = scale * e
        for edge, expo, side in ((0.0, self.left_exponent, "left"), (1.0, self.right_exponent, "right")):
            if side == "right" and not self.finite:
                continue
            at = xx == edge
            if not at.any():
                continue
            if expo < 1:
                val[at] = math.inf
            elif expo > 1:
                val[at] = 0.0
            else:
                v, e = self._regular_at_edge(side)
                val[at], err[at] = v, e
        if scalar:
            return float(val[0]), float(err[0])
        return val, err

    def _regular_at_edge(self, side):
        if side == "left":
            x = np.zeros(1)
            args = (x, np.ones(1) if self.finite else None, np.full(1, -np.inf),
                    np.zeros(1) if self.finite else None)
            lp, v, e = self._log_terms(*args, drop_left=True)
        else:
            args = (np.ones(1), np.zeros(1), np.zeros(1), np.full(1, -np.inf))
            lp, v, e = self._log_terms(*args, drop_right=True)
        s = math.exp(float(lp[0]))
        return s * float(v[0]), s * float(e[0])

    def pdf(self, x):
        """Density; raises :class:`NonConvergence` where the error estimate
        exceeds ``rel_tol`` times the value."""
        val, err = self.pdf_with_error(x)
        bad = np.asarray(err > self.rel_tol * np.abs(val))
        if bad.any():
            xx = np.atleast_1d(np.asarray(x, dtype=float))
            i = int(np.flatnonzero(np.atleast_1d(bad))[0])
            v, e = np.atleast_1d(val)[i], np.atleast_1d(err)[i]
            raise NonConvergence(
                f"{self.kind}: density at x={xx[i]:.6g} is {v:.6g} with error "
                f"estimate {e:.3g} above the relative tolerance {self.rel_tol:g}",
                value=float(v),
                tail_estimate=float(e),
            )
        return val

    def logpdf(self, x):
        scalar, xx = _as_array(x)
        out = np.full_like(xx, -np.inf)
        hi = 1.0 if self.finite else math.inf
        inside = (xx > 0) & (xx < hi)
        if inside.any():
            lp, v, _ = self._log_terms(*self._interior(xx[inside]))
            with np.errstate(divide="ignore", invalid="ignore"):
                out[inside] = np.where(v > 0, lp + np.log(np.abs(v)), -np.inf)
        edge = ~inside & ((xx == 0) | (self.finite & (xx == 1)))
        if edge.any():
            with np.errstate(divide="ignore"):
                out[edge] = np.log(self.pdf_with_error(xx[edge])[0])
        return float(out[0]) if scalar else out

    # -- transformed integrands -------------------------------------------

    def _left_integrand(self, w):
        """``f(x) dx`` in ``w = x^alpha``."""
        a = self.left_exponent
        with np.errstate(divide="ignore"):
            logx = np.log(w) / a
        x = np.exp(logx)
        if self.finite:
            xc = 1.0 - x
            logxc = np.log1p(-x)
        else:
            xc = logxc = None
        lp, v, _ = self._log_terms(x, xc, logx, logxc, drop_left=True)
        with np.errstate(under="ignore"):
            return np.exp(lp) * v / a

    def _right_integrand(self, v):
        """``f(x) dx`` in ``v = (1-x)^rho`` (finite support only)."""
        r = self.right_exponent
        with np.errstate(divide="ignore"):
            logxc = np.log(v) / r
        xc = np.exp(logxc)
        x = -np.expm1(logxc)
        with np.errstate(divide="ignore"):
            logx = np.log1p(-xc)
        lp, val, _ = self._log_terms(x, xc, logx, logxc, drop_right=True)
        with np.errstate(under="ignore"):
            return np.exp(lp) * val / r

    def _plain_integrand(self, x):
        lp, v, _ = self._log_terms(*self._interior(np.asarray(x, dtype=float)))
        with np.errstate(under="ignore"):
            return np.exp(lp) * v

    # -- pieces ---------------------------------------------------------------

    def split_point(self) -> float:
        """Boundary between the left (``w``) piece and the rest."""
        a = self.left_exponent
        if self.finite:
            return float(min(max(a / (a + self.right_exponent), 1e-12), 0.5))
        return float(max(a / self.rate, 1e-12))

    def _cutoff(self) -> float:
        """Half line: a point beyond which the density is negligible."""
        s = self.split_point()
        c = s + 40.0 / self.rate
        peak = np.max(self.logpdf(np.linspace(s, c, 41)[1:]))
        for _ in range(100):
            lc = self.logpdf(c)
            if lc < peak - 40.0:
                return float(c)
            peak = max(peak, lc)
            # grow gently: the special-function factor may be costly far out
            c = s + 1.25 * (c - s)
        raise QuadratureFailure(f"{self.kind}: no negligible tail found up to {c:.3g}")

    def _pieces(self):
        with self._lock:
            if "pieces" in self._cache:
                return self._cache["pieces"]
        s = self.split_point()
        left = _integrate(self._left_integrand, 0.0, s**self.left_exponent)
        if self.finite:
            vs = (1.0 - s) ** self.right_exponent
            right = _integrate(self._right_integrand, 0.0, vs)
            cut = 1.0
        else:
            cut = self._cutoff()
            right = _integrate(self._plain_integrand, s, cut)
        out = (s, cut, left, right)
        with self._lock:
            self._cache["pieces"] = out
        return out

    def total_mass(self) -> QuadResult:
        """Integral of the density over its support."""
        _, _, left, right = self._pieces()
        return QuadResult(
            left.value + right.value, left.error + right.error, left.evaluations + right.evaluations
        )

    # -- CDF and quantile -----------------------------------------------------

    def _cdf_point(self, t: float) -> float:
        s, cut, left, right = self._pieces()
        if t <= 0:
            return 0.0
        if self.finite and t >= 1:
            return left.value + right.value
        if t <= s:
            return _integrate(self._left_integrand, 0.0, t**self.left_exponent).value
        if self.finite:
            vs = (1.0 - s) ** self.right_exponent
            vt = (1.0 - t) ** self.right_exponent
            return left.value + _integrate(self._right_integrand, vt, vs).value
        if t >= cut:
            return left.value + right.value
        return left.value + _integrate(self._plain_integrand, s, t).value

    def _cdf_sorted(self, t: np.ndarray) -> np.ndarray:
        """CDF at many points through Gauss-Legendre panels between them."""
        s, cut, left, right = self._pieces()
        out = np.empty_like(t)
        out[t <= 0] = 0.0
        total = left.value + right.value
        lower = (t > 0) & (t <= s)
        if lower.any():
            w = t[lower] ** self.left_exponent
            out[lower] = _cumulative(self._left_integrand, 0.0, s**self.left_exponent, w)
        upper = t > s
        if upper.any():
            tu = np.minimum(t[upper], cut)
            if self.finite:
                vs = (1.0 - s) ** self.right_exponent
                v = (1.0 - tu) ** self.right_exponent
                out[upper] = total - _cumulative(self._right_integrand, 0.0, vs, v)
            else:
                out[upper] = left.value + _cumulative(self._plain_integrand, s, cut, tu)
        return out

    def cdf(self, t):
        scalar, tt = _as_array(t)
        if tt.size > 32:
            out = self._cdf_sorted(tt)
        else:
            out = np.array([self._cdf_point(float(v)) for v in tt])
        return float(out[0]) if scalar else out

    def quantile(self, p: float, tol: float = 1e-8) -> float:
        """Inverse CDF by bisection, to ``tol`` in probability."""
        if not 0 < p < 1:
            raise DomainError(f"quantile level must lie in (0,1), got {p}")
        s, cut, left, right = self._pieces()
        if p <= left.value:
            a = self.left_exponent
            lo, hi = 0.0, s**a

            def F(w):
                return _integrate(self._left_integrand, 0.0, w).value

            to_x = lambda w: w ** (1.0 / a)
        else:
            lo, hi = s, cut
            F = self._cdf_point
            to_x = lambda x: x
            if left.value + right.value < p:
                raise QuadratureFailure(
                    f"{self.kind}: total mass {left.value + right.value:.10g} is below p={p}"
                )
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            c = F(mid)
            if abs(c - p) <= tol:
                return float(to_x(mid))
            if c < p:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 4 * _EPS * hi:
                break
        return float(to_x(0.5 * (lo + hi)))


def _integrate(f, a, b) -> QuadResult:
    """tanh-sinh to ``_QUAD_TOL``; a result stalled by integrand noise is
    accepted when the last refinement changed it by less than ``_QUAD_ACCEPT``
    relative, with that change as its error."""
    try:
        return tanh_sinh(f, a, b, rel_tol=_QUAD_TOL)
    except QuadratureFailure as exc:
        v, e = exc.value, exc.error
        if v is not None and e is not None and math.isfinite(v) and e <= _QUAD_ACCEPT * abs(v):
            return QuadResult(v, e, -1)
        raise


def _cumulative(f, a, b, points, base_panels=64, order=10):
    """``int_a^p f`` at every p in ``points`` (all inside ``[a, b]``)."""
    points = np.clip(points, a, b)
    edges = np.union1d(np.linspace(a, b, base_panels + 1), points)
    pieces = gauss_legendre_panels(f, edges, order)
    cum = np.concatenate([[0.0], np.cumsum(pieces)])
    return cum[np.searchsorted(edges, points)]


# -- exact laws ---------------------------------------------------------------


class ExactMinLaw(DensityLaw):
    """Smallest eigenvalue of the beta-Jacobi ensemble.

    ``f = C lam^(p-1) (1-lam)^(q-1) 2F1^beta(1-p, beta(b+m-1)/2;
    beta(b+2m-1)/2 + 1; (1-lam) I_{m-1})`` with ``p = beta(a+1)/2`` and
    ``q = beta m (b+m)/2``.  The series is summed in level sums and its tail
    near ``lam = 0`` is supplied by :class:`AcceleratedSeries`, anchored at
    the Gauss sum ``F(1)``.
    """

    kind = "exact_min"
    scaling = "lambda"
    finite = True

    def __init__(
        self,
        params: JacobiParams,
        rel_tol: float = 1e-6,
        max_degree: int = EXACT_MAX_DEGREE,
        max_partitions: int = EXACT_MAX_PARTITIONS,
    ):
        super().__init__(rel_tol)
        self.jacobi = params
        self.params = dict(beta=params.beta, a=params.a, b=params.b, m=params.m)
        beta, b, m = params.beta, params.b, params.m
        p = params.p
        self.left_exponent = p
        self.right_exponent = params.q
        self._log_c = norm_min(params).log_abs
        n = m - 1
        self.degree = 0
        self.series: Optional[AcceleratedSeries] = None
        if n == 0:
            return
        upper = (1.0 - p, 0.5 * beta * (b + m - 1))
        lower = 0.5 * beta * (b + 2 * m - 1) + 1.0
        levels = LevelSums(MhgParams(upper, (lower,), beta), n, max_partitions=max_partitions)
        try:
            levels.extend(max_degree)
        except NonConvergence:
            # budget reached: fit on what was generated
            pass
        self.degree = levels.degree
        anchor = mhg_at_one_2f1(upper[0], upper[1], lower, beta, n)
        # exponents of the non-analytic terms of F at argument 1
        exponents = [j * (beta + p) + 0.5 * beta * j * (j - 1) for j in range(1, n + 1)]
        self.series = AcceleratedSeries(
            levels.coefficients, levels.abs_coefficients, exponents, anchor, levels.terminated
        )

    def _kernel(self, x, xc, logx, logxc):
        if self.series is None:
            return self._log_c, np.ones_like(x), np.zeros_like(x)
        val, err = self.series(xc)
        return self._log_c, val, err


class ExactMaxLaw(DensityLaw):
    """Largest eigenvalue: the smallest-eigenvalue law with ``a`` and ``b``
    swapped, read at ``1 - lam`` (same code path)."""

    kind = "exact_max"
    scaling = "lambda"
    finite = True

    def __init__(self, params: JacobiParams, rel_tol: float = 1e-6, **kw):
        super().__init__(rel_tol)
        self.jacobi = params
        self.params = dict(beta=params.beta, a=params.a, b=params.b, m=params.m)
        self.mirror = ExactMinLaw(params.swapped(), rel_tol, **kw)
        self.left_exponent = self.mirror.right_exponent
        self.right_exponent = self.mirror.left_exponent

    def _kernel(self, x, xc, logx, logxc):
        return self.mirror._kernel(xc, x, logxc, logx)


class Case1ExactLaw(DensityLaw):
    """Smallest eigenvalue for ``a = 2/beta - 2``, ``0 < beta < 2``.

    For ``lam <= 1/2`` the two classical 2F1 pieces in ``lam`` are used;
    where they cancel by more than four digits, and for ``lam > 1/2``, the
    single positive-term 2F1 in ``1 - lam`` that the matrix series reduces to.
    """

    kind = "case1_exact"
    scaling = "lambda"
    finite = True
    max_cancellation = 1e4

    def __init__(self, beta: float, b: float, m: int, rel_tol: float = 1e-6):
        super().__init__(rel_tol)
        k1 = case1_constants(beta, b, m)
        self.jacobi = JacobiParams(beta, 2.0 / beta - 2.0, b, m)
        self.params = dict(beta=float(beta), b=float(b), m=int(m))
        h = 0.5 * beta
        self.h = h
        self.left_exponent = 1.0 - h
        self.right_exponent = self.jacobi.q
        self._k = k1
        coef_a = k1.A / k1.F
        self._log_two_piece = k1.C_tilde.log_abs + coef_a.log_abs
        self._sign_two_piece = k1.C_tilde.sign * coef_a.sign
        self._ratio = 0.0 if k1.B.sign == 0 else (k1.B / k1.A).value
        self._g1 = ((h * (b + m - 1), h * (m - 1)), (-h,))
        self._g2 = ((h * m + 1, h * (b + m) + 1), (2 + h,))
        self._lemma = ((h * (b + m - 1), h * (m - 1)), (h * (b + 2 * m - 1) + 1,))

    def two_piece(self, lam):
        """Bracket of the two-piece form and its cancellation factor."""
        lam = np.asarray(lam, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            t1 = hyp_series(*self._g1, lam)
            if self._ratio != 0.0:
                t2 = self._ratio * lam ** (1 + self.h) * hyp_series(*self._g2, lam)
            else:
                t2 = np.zeros_like(lam)
            total = t1 + t2
            cancel = (np.abs(t1) + np.abs(t2)) / np.abs(total)
        return total, cancel

    def _kernel(self, x, xc, logx, logxc):
        logreg = np.full_like(x, self._k.C.log_abs)
        val = np.empty_like(x)
        err = np.empty_like(x)
        rest = x > 0.5
        near = ~rest
        if near.any():
            total, cancel = self.two_piece(x[near])
            ok = np.isfinite(cancel) & (cancel < self.max_cancellation)
            idx = np.flatnonzero(near)
            good = idx[ok]
            val[good] = self._sign_two_piece * total[ok]
            err[good] = 64 * _EPS * cancel[ok] * np.abs(total[ok])
            logreg[good] = self._log_two_piece
            rest[idx[~ok]] = True
        if rest.any():
            v = hyp_series(*self._lemma, xc[rest])
            val[rest] = v
            err[rest] = 64 * _EPS * np.abs(v)
        return logreg, val, err


class Case2ExactLaw(DensityLaw):
    """Smallest eigenvalue for ``beta (a+1)/2 = k`` a positive integer.

    ``f = W lam^(k-1) (1-lam)^(q-1) 2F1^(4/beta)(1-m, -m-b+1;
    2 + (2/beta)(k-1); lam I_{k-1})``; the series is a polynomial.
    """

    kind = "case2_exact"
    scaling = "lambda"
    finite = True

    def __init__(self, beta: float, k: int, b: float, m: int, rel_tol: float = 1e-6):
        super().__init__(rel_tol)
        k2 = case2_constants(beta, k, b, m)
        self.jacobi = JacobiParams(beta, 2.0 * k / beta - 1.0, b, m)
        self.params = dict(beta=float(beta), k=int(k), b=float(b), m=int(m))
        self.left_exponent = float(k)
        self.right_exponent = self.jacobi.q
        self._log_w = k2.W.log_abs
        self.coefficients, self.abs_coefficients = _terminating_levels(
            (1.0 - m, 1.0 - m - b), (2.0 + (2.0 / beta) * (k - 1),), 4.0 / beta, k - 1
        )

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def _kernel(self, x, xc, logx, logxc):
        val, err = _polynomial(self.coefficients, self.abs_coefficients, x)
        return self._log_w, val, err


def _terminating_levels(upper, lower, gamma, n):
    levels = LevelSums(MhgParams(upper, lower, gamma), n)
    # the terminating degree is bounded by the partitions allowed per row
    levels.extend(10_000)
    if not levels.terminated:
        raise NonConvergence("terminating series did not terminate")  # pragma: no cover
    c = np.asarray(levels.coefficients)
    a = np.asarray(levels.abs_coefficients)
    last = np.flatnonzero(c != 0)
    d = int(last[-1]) + 1 if last.size else 1
    return c[:d], a[:d]


def _polynomial(coefficients, abs_coefficients, x):
    val = np.zeros_like(x)
    bound = np.zeros_like(x)
    ax = np.abs(x)
    for c, a in zip(coefficients[::-1], abs_coefficients[::-1]):
        val = val * x + c
        bound = bound * ax + a
    return val, 4 * _EPS * len(coefficients) * bound


# -- limit laws --------------------------------------------------------------


def _check_case1_beta(beta):
    if not (0 < beta < 2):
        raise DomainError(f"case 1 requires beta in (0,2), got beta={beta}")


def _check_positive_int(name, v):
    if int(v) != v or v < 1:
        raise DomainError(f"{name} must be a positive integer, got {v}")


def _check_beta(beta):
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError(f"beta must be positive, got {beta}")


class Case1Regime1Law(DensityLaw):
    """``b -> inf`` limit of case 1 in ``y = beta (b+m) lam / 2``:
    ``const * y^(-beta/2) e^(-m y) U(beta(m-1)/2, -beta/2, y)``."""

    kind = "case1_regime1"
    scaling = "y = beta*(b+m)*lambda/2"
    finite = False

    def __init__(self, beta: float, m: int, rel_tol: float = 1e-6):
        super().__init__(rel_tol)
        _check_case1_beta(beta)
        _check_positive_int("m", m)
        self.params = dict(beta=float(beta), m=int(m))
        h = 0.5 * beta
        self.h, self.m = h, int(m)
        self.left_exponent = 1.0 - h
        self.rate = float(m)
        const = (
            LogValue.from_float(2.0 / (beta * math.pi) * math.sin(h * math.pi) * m)
            * gamma_product([1 + h, h * (m - 1) + 1])
        )
        self._log_const = const.log_abs

    def _kernel(self, x, xc, logx, logxc):
        y = np.maximum(x, 1e-300)
        val = np.asarray(tricomi_u(self.h * (self.m - 1), -self.h, y), dtype=float)
        val = np.broadcast_to(val, y.shape).copy()
        return self._log_const - self.m * y, val, 1e-13 * np.abs(val)


def g_beta(beta: float, y, route: str = "series"):
    """The limit of the case-1 bracket in the ``m, b+m -> inf`` regime.

    ``route="series"``: ``0F1(-beta/2; beta y/2)/Gamma(-beta/2)
    - (beta y/2)^(1+beta/2) 0F1(2+beta/2; beta y/2)/Gamma(2+beta/2)``.
    ``route="bessel"``: ``-(2 sin(beta pi/2)/pi) (beta y/2)^(1/2+beta/4)
    K_{1+beta/2}(sqrt(2 beta y))``.
    """
    _check_case1_beta(beta)
    h = 0.5 * beta
    y = np.asarray(y, dtype=float)
    z = h * y
    if route == "series":
        return of1(-h, z) * sp.rgamma(-h) - z ** (1 + h) * of1(2 + h, z) * sp.rgamma(2 + h)
    if route == "bessel":
        return -2 * math.sin(h * math.pi) / math.pi * z ** (0.5 + 0.5 * h) * bessel_k(
            1 + h, np.sqrt(2 * beta * y)
        )
    raise ValueError(f"unknown route {route!r}")


class Case1Regime2Law(DensityLaw):
    """``m, b+m -> inf`` limit of case 1 in ``y = beta m (b+m) lam / 2``:
    ``const * y^(1/2-beta/4) e^(-y) K_{1+beta/2}(sqrt(2 beta y))``.

    Below ``y = 1`` the regular form ``-(2/beta) Gamma(1+beta/2)
    (beta y/2)^(-beta/2) e^(-y) G(y)`` with the series route of
    :func:`g_beta` is used; it has no cancellation there.
    """

    kind = "case1_regime2"
    scaling = "y = beta*m*(b+m)*lambda/2"
    finite = False
    series_below = 1.0

    def __init__(self, beta: float, rel_tol: float = 1e-6):
        super().__init__(rel_tol)
        _check_case1_beta(beta)
        self.params = dict(beta=float(beta))
        self.beta = float(beta)
        h = 0.5 * beta
        self.h = h
        self.left_exponent = 1.0 - h
        self.rate = 1.0
        self._log_k = math.log(
            4 * math.sin(h * math.pi) / (beta * math.pi) * h ** (0.5 - 0.5 * h)
        ) + float(sp.gammaln(1 + h))
        self._log_g = math.log(2.0 / beta) + float(sp.gammaln(1 + h)) - h * math.log(h)

    def _kernel(self, x, xc, logx, logxc):
        y = x
        logreg = np.empty_like(y)
        val = np.empty_like(y)
        low = y <= self.series_below
        if low.any():
            yl = y[low]
            logreg[low] = self._log_g - yl
            val[low] = -g_beta(self.beta, yl, "series")
        if (~low).any():
            yh = y[~low]
            r = np.sqrt(2 * self.beta * yh)
            # y^(beta/2) * y^(1/2 - beta/4) = y^(1/2 + beta/4)
            logreg[~low] = self._log_k + (0.5 + 0.5 * self.h) * np.log(yh) - yh - r
            val[~low] = bessel_k(1 + self.h, r, scaled=True)
        return logreg, val, 1e-13 * np.abs(val)


def case1_regime2_bessel_route(beta: float, y):
    """Closed Bessel form of the case-1 regime-2 density (no series switch)."""
    _check_case1_beta(beta)
    h = 0.5 * beta
    y = np.asarray(y, dtype=float)
    const = 4 * math.sin(h * math.pi) / (beta * math.pi) * h ** (0.5 - 0.5 * h) * math.gamma(1 + h)
    r = np.sqrt(2 * beta * y)
    return const * y ** (0.5 - 0.5 * h) * np.exp(-y - r) * bessel_k(1 + h, r, scaled=True)


def case1_regime2_series_route(beta: float, y):
    """The same density through ``G_beta`` summed as two 0F1 series."""
    _check_case1_beta(beta)
    h = 0.5 * beta
    y = np.asarray(y, dtype=float)
    return -(2.0 / beta) * math.gamma(1 + h) * (h * y) ** (-h) * np.exp(-y) * g_beta(beta, y)


class Case2Regime1Law(DensityLaw):
    """``b -> inf`` limit of case 2 in ``y = (b+m) lam``:
    ``const * y^(k-1) e^(-beta m y/2) 1F1^(4/beta)(1-m; 2+(2/beta)(k-1); -y I_{k-1})``."""

    kind = "case2_regime1"
    scaling = "y = (b+m)*lambda"
    finite = False

    def __init__(self, beta: float, k: int, m: int, rel_tol: float = 1e-6):
        super().__init__(rel_tol)
        _check_beta(beta)
        _check_positive_int("k", k)
        _check_positive_int("m", m)
        self.params = dict(beta=float(beta), k=int(k), m=int(m))
        h = 0.5 * beta
        self.left_exponent = float(k)
        self.rate = h * m
        const = LogValue.from_float(h**k * m) * gamma_product(
            [1 + h, k + h * m], [k, k + h, 1 + h * m]
        )
        self._log_const = const.log_abs
        c, a = _terminating_levels((1.0 - m,), (2.0 + (k - 1) / h,), 2.0 / h, k - 1)
        # at -y every term is positive: fold the sign into the coefficients
        sign = (-1.0) ** np.arange(c.size)
        self.coefficients = c * sign
        self.abs_coefficients = a

    def _kernel(self, x, xc, logx, logxc):
        val, err = _polynomial(self.coefficients, self.abs_coefficients, x)
        return self._log_const - self.rate * x, val, err


class Case2Regime2Law(DensityLaw):
    """``m, b+m -> inf`` limit of case 2 in ``y = m (b+m) lam``:
    ``const * y^(k-1) e^(-beta y/2) 0F1^(4/beta)(2+(2/beta)(k-1); y I_{k-1})``."""

    kind = "case2_regime2"
    scaling = "y = m*(b+m)*lambda"
    finite = False

    def __init__(self, beta: float, k: int, rel_tol: float = 1e-6):
        super().__init__(rel_tol)
        _check_beta(beta)
        _check_positive_int("k", k)
        self.params = dict(beta=float(beta), k=int(k))
        h = 0.5 * beta
        self.left_exponent = float(k)
        self.rate = h
        const = LogValue.from_float(h ** (2 * k - 1)) * gamma_product([1 + h], [k, k + h])
        self._log_const = const.log_abs
        self.levels = None
        if k > 1:
            # heavy tails need high degree; levels stay small for few variables
            self.levels = LevelSums(
                MhgParams((), (2.0 + (k - 1) / h,), 2.0 / h), k - 1, max_partitions=50_000_000
            )

    def _kernel(self, x, xc, logx, logxc):
        base = self._log_const - self.rate * x
        if self.levels is None:
            return base, np.ones_like(x), np.zeros_like(x)
        with self._lock:
            log_val = _positive_series(self.levels, x)
        return base + log_val, np.ones_like(x), 1e-14 * np.ones_like(x)


def _positive_series(levels: LevelSums, x: np.ndarray) -> np.ndarray:
    """``log sum_j S_j x^j`` for a series with positive level sums."""
    x = np.asarray(x, dtype=float)
    xmax = float(x.max()) if x.size else 0.0
    step = 16
    while not levels.terminated:
        S = np.asarray(levels.coefficients)
        D = S.size - 1
        if D >= 2 * step and xmax > 0:
            with np.errstate(divide="ignore"):
                lt = np.log(S) + np.arange(D + 1) * math.log(xmax)
            # the last terms are decreasing and negligible against the largest
            if lt[-1] < lt.max() - 40 and lt[-1] < lt[-2]:
                break
        elif xmax == 0:
            break
        if D > 20_000:
            raise NonConvergence("0F1 series needs more than 20000 levels", degree=D)
        levels.extend(D + step)
    S = np.asarray(levels.coefficients)
    logS = np.log(S)
    out = np.empty_like(x)
    for i in range(0, x.size, 1024):
        xs = x[i : i + 1024]
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = np.where(xs > 0, np.log(np.where(xs > 0, xs, 1.0)), -np.inf)
            j = np.arange(S.size)
            lt = logS[None, :] + np.where(j[None, :] == 0, 0.0, j[None, :] * lx[:, None])
        top = lt.max(axis=1)
        out[i : i + 1024] = top + np.log(np.exp(lt - top[:, None]).sum(axis=1))
    return out


# -- construction and functional interface ------------------------------------


def regime_scale(kind: str, beta: float, b: float, m: int) -> float:
    """Factor ``c`` with ``y = c * lambda`` for each law's variable."""
    if kind in ("exact_min", "exact_max", "case1_exact", "case2_exact"):
        return 1.0
    if kind == "case1_regime1":
        return 0.5 * beta * (b + m)
    if kind == "case1_regime2":
        return 0.5 * beta * m * (b + m)
    if kind == "case2_regime1":
        return float(b + m)
    if kind == "case2_regime2":
        return float(m * (b + m))
    raise ValueError(f"unknown law kind {kind!r}")


@lru_cache(maxsize=64)
def _cached_law(kind: str, args: tuple) -> DensityLaw:
    if kind == "exact_min":
        return ExactMinLaw(JacobiParams(*args))
    if kind == "exact_max":
        return ExactMaxLaw(JacobiParams(*args))
    ctor = {
        "case1_exact": Case1ExactLaw,
        "case2_exact": Case2ExactLaw,
        "case1_regime1": Case1Regime1Law,
        "case1_regime2": Case1Regime2Law,
        "case2_regime1": Case2Regime1Law,
        "case2_regime2": Case2Regime2Law,
    }[kind]
    return ctor(*args)


_LAW_ARGS = {
    "exact_min": ("beta", "a", "b", "m"),
    "exact_max": ("beta", "a", "b", "m"),
    "case1_exact": ("beta", "b", "m"),
    "case2_exact": ("beta", "k", "b", "m"),
    "case1_regime1": ("beta", "m"),
    "case1_regime2": ("beta",),
    "case2_regime1": ("beta", "k", "m"),
    "case2_regime2": ("beta", "k"),
}


def make_law(kind: str, **params) -> DensityLaw:
    """Build (or fetch from a small cache) the law ``kind`` from keyword parameters.

    Extra keywords that the law does not use are ignored, so one parameter
    set can be passed to every law.
    """
    if kind not in _LAW_ARGS:
        raise ValueError(f"unknown law kind {kind!r}")
    try:
        args = tuple(params[name] for name in _LAW_ARGS[kind])
    except KeyError as exc:
        raise DomainError(f"law {kind} needs parameter {exc.args[0]}") from None
    args = tuple(int(v) if name in ("m", "k") and float(v).is_integer() else v
                 for name, v in zip(_LAW_ARGS[kind], args))
    return _cached_law(kind, args)


def pdf_min_exact(params: JacobiParams, lam):
    return make_law("exact_min", beta=params.beta, a=params.a, b=params.b, m=params.m).pdf(lam)


def pdf_max_exact(params: JacobiParams, lam):
    return make_law("exact_max", beta=params.beta, a=params.a, b=params.b, m=params.m).pdf(lam)


def pdf_min_case1(beta, b, m, lam):
    return make_law("case1_exact", beta=beta, b=b, m=m).pdf(lam)


def pdf_min_case2(beta, k, b, m, lam):
    return make_law("case2_exact", beta=beta, k=k, b=b, m=m).pdf(lam)


def pdf_case1_regime1(beta, m, y):
    return make_law("case1_regime1", beta=beta, m=m).pdf(y)


def pdf_case1_regime2(beta, y):
    return make_law("case1_regime2", beta=beta).pdf(y)


def pdf_case2_regime1(beta, k, m, y):
    return make_law("case2_regime1", beta=beta, k=k, m=m).pdf(y)


def pdf_case2_regime2(beta, k, y):
    return make_law("case2_regime2", beta=beta, k=k).pdf(y)


def cdf(law: DensityLaw, t):
    return law.cdf(t)


def quantile(law: DensityLaw, p: float) -> float:
    return law.quantile(p)


def total_mass(law: DensityLaw) -> QuadResult:
    return law.total_mass()
