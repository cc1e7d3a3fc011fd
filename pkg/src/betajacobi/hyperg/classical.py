"""One-variable special functions needed by the limiting laws.

All functions accept a scalar or an array for the argument; the parameters
are scalars.  Series are summed term by term with a vectorized ratio
recurrence.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

from ..errors import DomainError, LogarithmicCase, NonConvergence

__all__ = [
    "hyp_series",
    "gauss_2f1",
    "connection_2f1",
    "kummer_1f1",
    "of1",
    "tricomi_u",
    "bessel_k",
    "bessel_i",
]

_EPS = np.finfo(float).eps
_MAX_TERMS = 100_000
_MAX_CANCELLATION = 1e4


def _is_nonpos_int(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def hyp_series(upper, lower, z, rel_tol=1e-16, max_terms=_MAX_TERMS):
    """Direct summation of the classical pFq series at ``z`` (vectorized).

    Stops once the geometric bound on the remaining tail, built from the next
    term ratio, falls below ``rel_tol`` times the partial sum.
    """
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    for b in lower:
        if _is_nonpos_int(b):
            # tolerated only if an upper parameter terminates earlier
            if not any(_is_nonpos_int(a) and a > b for a in upper):
                raise DomainError(f"lower parameter {b} is a non-positive integer")
    term = np.ones_like(z)
    total = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    k = 0
    while active.any():
        if k >= max_terms:
            raise NonConvergence(f"pFq series did not converge in {max_terms} terms")
        ratio = np.ones_like(z)
        for a in upper:
            ratio = ratio * (a + k)
        for b in lower:
            ratio = ratio / (b + k)
        ratio = ratio * z / (k + 1)
        term = np.where(active, term * ratio, 0.0)
        total = total + term
        k += 1
        if np.all(term == 0.0) and any(_is_nonpos_int(a) for a in upper):
            break
        # |ratio| at the next step; with |z| it bounds every later ratio
        nxt = np.ones_like(z)
        for a in upper:
            nxt = nxt * abs(a + k)
        for b in lower:
            nxt = nxt / abs(b + k)
        nxt = nxt * np.abs(z) / (k + 1)
        r = np.maximum(nxt, np.abs(z)) if len(upper) == len(lower) + 1 else nxt
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.abs(term) * r / (1 - r)
        done = ((r < 1) & (tail <= rel_tol * np.abs(total))) | (term == 0.0)
        active &= ~done
    return float(total[0]) if scalar else total


def _log_abs_gamma(x):
    return float(sp.gammaln(x)), float(sp.gammasgn(x))


def _gamma_ratio(num, den):
    """prod Gamma(num) / prod Gamma(den) with poles of the denominator -> 0."""
    log_total, sign = 0.0, 1.0
    for x in den:
        if _is_nonpos_int(x):
            return 0.0
    for x in num:
        if _is_nonpos_int(x):
            raise DomainError(f"Gamma pole at {x}")
    for x in num:
        lg, sg = _log_abs_gamma(x)
        log_total += lg
        sign *= sg
    for x in den:
        lg, sg = _log_abs_gamma(x)
        log_total -= lg
        sign *= sg
    return sign, log_total


def _connection_parts(a, b, c, z):
    s = c - a - b
    if abs(s - round(s)) < 1e-12:
        raise LogarithmicCase(f"c - a - b = {s} is an integer")
    if _is_nonpos_int(c):
        raise DomainError(f"c = {c} is a non-positive integer")
    z = np.asarray(z, dtype=float)
    w = 1.0 - z
    p1 = np.zeros(np.broadcast(z).shape)
    p2 = np.zeros(np.broadcast(z).shape)
    r1 = _gamma_ratio((c, s), (c - a, c - b))
    if r1 != 0.0:
        sg, lg = r1
        p1 = sg * np.exp(lg) * hyp_series((a, b), (a + b - c + 1,), w)
    r2 = _gamma_ratio((c, -s), (a, b))
    if r2 != 0.0:
        sg, lg = r2
        with np.errstate(divide="ignore"):
            logw = np.log(w)
        p2 = sg * np.exp(lg + s * logw) * hyp_series((c - a, c - b), (s + 1,), w)
    return p1, p2


def connection_2f1(a, b, c, z):
    """Gauss 2F1 through the ``z -> 1 - z`` connection formula.

    Raises :class:`LogarithmicCase` when ``c - a - b`` is an integer.
    """
    p1, p2 = _connection_parts(a, b, c, z)
    out = p1 + p2
    return float(out) if np.ndim(out) == 0 else out


def gauss_2f1(a, b, c, z):
    """Classical Gauss hypergeometric function on ``(-1, 1)``.

    The series is summed directly for ``z <= 1/2`` (or when it terminates);
    for ``z > 1/2`` the connection formula is used, falling back to the
    direct series when ``c - a - b`` is an integer or when the two connection
    terms cancel to more than four digits.
    """
    if _is_nonpos_int(c) and not (
        (_is_nonpos_int(a) and a > c) or (_is_nonpos_int(b) and b > c)
    ):
        raise DomainError(f"c = {c} is a non-positive integer")
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) >= 1) and not (_is_nonpos_int(a) or _is_nonpos_int(b)):
        raise DomainError("gauss_2f1 requires |z| < 1 for a non-terminating series")
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return hyp_series((a, b), (c,), z)
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    out = np.empty_like(zz)
    near = zz > 0.5
    if (~near).any():
        out[~near] = hyp_series((a, b), (c,), zz[~near])
    if near.any():
        zn = zz[near]
        try:
            p1, p2 = _connection_parts(a, b, c, zn)
            val = p1 + p2
            with np.errstate(divide="ignore", invalid="ignore"):
                cancel = (np.abs(p1) + np.abs(p2)) / np.abs(val)
            bad = ~(cancel < _MAX_CANCELLATION)
            if bad.any():
                val[bad] = hyp_series((a, b), (c,), zn[bad])
            out[near] = val
        except LogarithmicCase:
            out[near] = hyp_series((a, b), (c,), zn)
    return float(out[0]) if scalar else out


def kummer_1f1(a, b, z):
    """Confluent hypergeometric ``1F1(a; b; z)``.

    For negative ``z`` the Kummer transformation ``e^z 1F1(b-a; b; -z)``
    avoids the alternating series.
    """
    if _is_nonpos_int(b) and not (_is_nonpos_int(a) and a > b):
        raise DomainError(f"b = {b} is a non-positive integer")
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 700):
        raise NonConvergence("|z| > 700 is outside the supported range of 1F1")
    if _is_nonpos_int(a):
        return hyp_series((a,), (b,), z)
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    out = np.empty_like(zz)
    neg = zz < 0
    if (~neg).any():
        out[~neg] = hyp_series((a,), (b,), zz[~neg])
    if neg.any():
        out[neg] = np.exp(zz[neg]) * hyp_series((b - a,), (b,), -zz[neg])
    return float(out[0]) if scalar else out


def of1(c, z):
    """Confluent limit function ``0F1(; c; z)``."""
    if _is_nonpos_int(c):
        raise DomainError(f"c = {c} is a non-positive integer")
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1e5):
        raise NonConvergence("|z| > 1e5 is outside the supported range of 0F1")
    return hyp_series((), (c,), z)


# -- Tricomi U -----------------------------------------------------------

_U_SERIES_CUTOFF = 8.0
_U_MAX_CANCELLATION = 1e3


def _tricomi_u_integral(a, b, z):
    """``U = 1/Gamma(a) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`` for a > 0.

    Uses the substitution ``t = e^s`` and the trapezoid rule, which converges
    geometrically for this smooth, rapidly decaying integrand.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    h = 0.05
    # left tail decays like e^{a s}; right tail like exp(-z e^s)
    s_lo = min(-40.0 / a, -5.0) + math.log(1.0 / max(z.max(), 1.0))
    s_lo = max(s_lo, -800.0)
    s_hi = math.log(750.0 / z.min()) + 1.0
    s = np.arange(s_lo, s_hi + h, h)
    t = np.exp(s)
    log_base = a * s + (b - a - 1) * np.log1p(t)
    vals = np.exp(log_base[None, :] - z[:, None] * t[None, :])
    return h * vals.sum(axis=1) / math.gamma(a)


def tricomi_u(a, b, z):
    """Tricomi confluent hypergeometric function ``U(a, b, z)`` for ``z > 0``.

    Built from the two-``1F1`` combination

        U = pi/sin(pi b) [ M(a,b,z)/(Gamma(1+a-b) Gamma(b))
                           - z^{1-b} M(1+a-b, 2-b, z)/(Gamma(a) Gamma(2-b)) ]

    for moderate ``z``.  For ``z > 8``, or wherever the two terms cancel to
    more than three digits, the Laplace integral representation is used.
    """
    if float(b).is_integer():
        raise DomainError("tricomi_u requires non-integer b (logarithmic case)")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("tricomi_u requires z > 0")
    if a == 0:
        return np.ones_like(z) if z.ndim else 1.0
    if _is_nonpos_int(a):
        n = int(-a)
        # U(-n, b, z) = (-1)^n (b)_n M(-n, b, z)
        poch = math.prod(b + i for i in range(n))
        return (-1) ** n * poch * kummer_1f1(a, b, z)
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    out = np.empty_like(zz)
    small = zz <= _U_SERIES_CUTOFF
    if small.any():
        zs = zz[small]
        pref = math.pi / math.sin(math.pi * b)
        t1 = kummer_1f1(a, b, zs) * sp.rgamma(1 + a - b) * sp.rgamma(b)
        t2 = (
            zs ** (1 - b)
            * kummer_1f1(1 + a - b, 2 - b, zs)
            * sp.rgamma(a)
            * sp.rgamma(2 - b)
        )
        val = pref * (t1 - t2)
        with np.errstate(divide="ignore", invalid="ignore"):
            cancel = (np.abs(t1) + np.abs(t2)) / np.abs(t1 - t2)
        # more than three digits lost: hand over to the integral
        lost = ~(cancel < _U_MAX_CANCELLATION)
        if a < 0:
            lost[:] = False
        small_idx = np.flatnonzero(small)
        small[small_idx[lost]] = False
        out[small_idx[~lost]] = val[~lost]
    if (~small).any():
        if a < 0:
            raise DomainError("large-z Tricomi U implemented for a > 0 only")
        out[~small] = _tricomi_u_integral(a, b, zz[~small])
    return float(out[0]) if scalar else out


# -- modified Bessel functions --------------------------------------------

_K_SERIES_CUTOFF = 2.0


def bessel_i(nu, z):
    """Modified Bessel ``I_nu(z) = (z/2)^nu / Gamma(nu+1) 0F1(; nu+1; z^2/4)``."""
    z = np.asarray(z, dtype=float)
    if _is_nonpos_int(nu + 1):
        # I_{-n} = I_n for integer order
        return bessel_i(-nu, z)
    with np.errstate(divide="ignore"):
        return (z / 2) ** nu * sp.rgamma(nu + 1) * of1(nu + 1, z * z / 4)


def _bessel_k_integral(nu, z, scaled):
    """``K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt`` by the trapezoid rule."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    h = 0.02
    t_hi = math.acosh(1.0 + 750.0 / z.min()) + 1.0
    t = np.arange(0.0, t_hi + h, h)
    # cosh(t) - 1 = 2 sinh^2(t/2) avoids cancellation for small t
    expo = -z[:, None] * (2.0 * np.sinh(t[None, :] / 2) ** 2)
    if not scaled:
        expo = expo - z[:, None]
    vals = np.exp(expo) * np.cosh(nu * t[None, :])
    vals[:, 0] *= 0.5
    return h * vals.sum(axis=1)


def bessel_k(nu, z, scaled=False):
    """Modified Bessel function of the second kind ``K_nu(z)``, ``z > 0``.

    For non-integer order and ``z <= 2`` it is the ``I_{-nu}, I_nu``
    combination ``pi/2 (I_{-nu} - I_nu)/sin(nu pi)``; for larger ``z`` or
    (near-)integer order the integral ``int_0^inf e^{-z cosh t} cosh(nu t) dt``
    is summed instead.  ``scaled=True`` returns ``e^z K_nu(z)``, which stays
    representable for large ``z``.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("bessel_k requires z > 0")
    nu = abs(nu)
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    out = np.empty_like(zz)
    near_int = abs(nu - round(nu)) < 1e-3
    small = (zz <= _K_SERIES_CUTOFF) & (not near_int)
    if small.any():
        zs = zz[small]
        val = 0.5 * math.pi * (bessel_i(-nu, zs) - bessel_i(nu, zs)) / math.sin(nu * math.pi)
        out[small] = val * np.exp(zs) if scaled else val
    if (~small).any():
        out[~small] = _bessel_k_integral(nu, zz[~small], scaled)
    return float(out[0]) if scalar else out
