"""Monte Carlo sampling of smallest eigenvalues.

Two models:

* the bidiagonal model ``J = B B^T`` whose eigenvalues follow the
  beta-Jacobi law; the smallest eigenvalue is the squared smallest singular
  value of ``B``, found by bisection on the Golub-Kahan form without ever
  forming ``B B^T``;
* the upper-left ``r x r`` corner of a Haar orthogonal/unitary matrix.

Index table for ``B`` (n x n, upper bidiagonal).  Code rows are 1-based here;
row ``r`` uses the variates of index ``i = n - r + 1``:

    row r   diagonal            superdiagonal
    1       c_n                 -s_n c'_{n-1}
    r       c_i s'_i            -s_i c'_{i-1}      (2 <= r <= n-1)
    n       c_1 s'_1            (none)

with ``c_i^2 ~ Beta(beta(a+i)/2, beta(b+i)/2)`` for ``1 <= i <= n``,
``c'_i^2 ~ Beta(beta i/2, beta(a+b+1+i)/2)`` for ``1 <= i <= n-1``, and
``s = sqrt(1 - c^2)``.

Randomness: replicate ``i`` of a batch with seed ``seed`` draws from
``Generator(PCG64(SeedSequence(seed, spawn_key=(i,))))``, so a batch does
not depend on how replicates are split across threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import expit

from .constants import JacobiParams
from .densities import regime_scale
from .errors import DomainError, IllConditioned

__all__ = [
    "sample_beta_variate",
    "beta_variates",
    "replicate_rng",
    "bidiagonal",
    "smallest_singular_value",
    "sutton_sample",
    "sutton_eigenvalues",
    "haar_corner_smallest",
    "SampleBatch",
    "scaling_factor",
    "sample_batch",
    "MAX_RETRIES",
]

MAX_RETRIES = 3
_BISECTION_STEPS = 100
_TINY = 1e-300


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for replicate ``index`` of the batch ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


# -- Beta variates ---------------------------------------------------------------


def _log_gamma_variates(shape: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """``log`` of Gamma(shape, 1) draws, Marsaglia-Tsang.

    Shapes below 1 are boosted: ``G(s) = G(s+1) U^(1/s)``; the log keeps
    ``U^(1/s)`` from underflowing for tiny ``s``.
    """
    shape = np.asarray(shape, dtype=float)
    boost = shape < 1
    a = np.where(boost, shape + 1.0, shape)
    d = a - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty_like(a)
    pending = np.ones(a.shape, dtype=bool)
    while pending.any():
        idx = np.flatnonzero(pending)
        x = rng.standard_normal(idx.size)
        v = (1.0 + c[idx] * x) ** 3
        u = rng.random(idx.size)
        pos = v > 0
        logv = np.log(np.where(pos, v, 1.0))
        dd = d[idx]
        ok = pos & (np.log1p(-u) < 0.5 * x * x + dd - dd * v + dd * logv)
        out[idx[ok]] = np.log(dd[ok]) + logv[ok]
        pending[idx[ok]] = False
    if boost.any():
        # 1 - random() lies in (0, 1]
        u = 1.0 - rng.random(int(boost.sum()))
        out[boost] += np.log(u) / shape[boost]
    return out


def beta_variates(s, t, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Beta(s, t) draws ``x`` and their complements ``1 - x``, both to full
    relative precision (from two Gamma draws in log form)."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(s <= 0) or np.any(t <= 0):
        raise DomainError("Beta shape parameters must be positive")
    lg = _log_gamma_variates(np.concatenate([s, t]), rng)
    lx, ly = lg[: s.size], lg[s.size :]
    return expit(lx - ly), expit(ly - lx)


def sample_beta_variate(s: float, t: float, rng: np.random.Generator) -> float:
    """One Beta(s, t) draw."""
    return float(beta_variates([s], [t], rng)[0][0])


# -- bidiagonal model ---------------------------------------------------------------


def _shapes(params: JacobiParams):
    h = 0.5 * params.beta
    n = params.m
    i = np.arange(1, n + 1, dtype=float)
    j = np.arange(1, n, dtype=float)
    s = np.concatenate([h * (params.a + i), h * j])
    t = np.concatenate([h * (params.b + i), h * (params.a + params.b + 1 + j)])
    return s, t


def bidiagonal(c2, c2c, cp2, cp2c) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and superdiagonal of ``B`` from squared variates.

    ``c2[i-1] = c_i^2`` and ``c2c = 1 - c2`` (length n); ``cp2[i-1] = c'_i^2``
    and ``cp2c = 1 - cp2`` (length n-1).  Arrays may carry leading batch axes.
    """
    c = np.sqrt(c2)
    s = np.sqrt(c2c)
    cp = np.sqrt(cp2)
    sp_ = np.sqrt(cp2c)
    n = c.shape[-1]
    # reverse so that position r-1 holds index i = n - r + 1
    c_r, s_r = c[..., ::-1], s[..., ::-1]
    diag = c_r.copy()
    if n > 1:
        diag[..., 1:] = c_r[..., 1:] * sp_[..., ::-1]
        # superdiagonal row r: -s_i c'_{i-1}, i = n - r + 1
        sup = -s_r[..., :-1] * cp[..., ::-1]
    else:
        sup = np.zeros(c.shape[:-1] + (0,))
    return diag, sup


def _count_below(d2: np.ndarray, e2: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Number of eigenvalues of the Golub-Kahan matrix below ``x`` (> 0).

    The GK matrix is tridiagonal with zero diagonal and off-diagonal
    ``d_1, e_1, d_2, ..., e_{n-1}, d_n``; its eigenvalues are ``+-sigma``.
    """
    n = d2.shape[-1]
    count = np.zeros(x.shape, dtype=np.int64)
    q = -x
    count += q < 0
    for k in range(2 * n - 1):
        f2 = d2[..., k // 2] if k % 2 == 0 else e2[..., k // 2]
        q = np.where(q == 0, -_TINY * np.maximum(x, _TINY), q)
        q = -x - f2 / q
        count += q < 0
    return count


def smallest_singular_value(diag: np.ndarray, sup: np.ndarray) -> np.ndarray:
    """Smallest singular value of upper bidiagonal matrices (batched).

    Bisection on the Sturm count, in log scale first (the value may be tiny)
    and then linear, to full relative accuracy.
    """
    diag = np.atleast_2d(diag)
    sup = np.atleast_2d(sup)
    n = diag.shape[-1]
    d2, e2 = diag * diag, sup * sup
    # all singular values lie below the largest absolute row sum
    hi = np.max(np.abs(diag) + np.concatenate([np.abs(sup), np.zeros(diag.shape[:-1] + (1,))], -1), -1)
    hi = hi * (1 + 1e-12) + _TINY
    lo = np.full_like(hi, _TINY)
    for _ in range(_BISECTION_STEPS):
        mid = np.sqrt(lo * hi)
        below = _count_below(d2, e2, mid) >= n + 1
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
        if np.all(hi <= lo * (1 + 4e-16)):
            break
    return np.sqrt(lo * hi)


def _draw_bidiagonal(params: JacobiParams, rng):
    s, t = _shapes(params)
    x, xc = beta_variates(s, t, rng)
    n = params.m
    return bidiagonal(x[:n], xc[:n], x[n:], xc[n:])


def sutton_sample(params: JacobiParams, rng: np.random.Generator) -> float:
    """Smallest eigenvalue of one draw of ``J = B B^T``."""
    for _ in range(MAX_RETRIES + 1):
        diag, sup = _draw_bidiagonal(params, rng)
        sigma = float(smallest_singular_value(diag, sup)[0])
        lam = sigma * sigma
        if 0 < lam < 1:
            return lam
    raise IllConditioned(f"degenerate smallest eigenvalue after {MAX_RETRIES} retries")


def sutton_eigenvalues(params: JacobiParams, rng: np.random.Generator) -> np.ndarray:
    """All eigenvalues of one draw of ``J`` (ascending), from the SVD of ``B``."""
    diag, sup = _draw_bidiagonal(params, rng)
    n = params.m
    B = np.diag(diag) + np.diag(sup, 1) if n > 1 else np.diag(diag)
    sv = np.linalg.svd(B, compute_uv=False)
    return np.sort(sv * sv)


# -- Haar corners -------------------------------------------------------------------


def haar_corner_smallest(n: int, r: int, field: str, rng: np.random.Generator) -> float:
    """``sigma_min(M_r)^2`` for the ``r x r`` upper-left corner of a Haar matrix.

    The first ``r`` columns of a Haar matrix are the orthonormalized columns
    of an ``n x r`` Gaussian matrix, with the phases of ``diag(R)`` moved
    into ``Q`` (without that correction the result is not Haar).
    """
    if not (1 <= r <= n // 2):
        raise DomainError(f"need 1 <= r <= n/2, got n={n}, r={r}")
    if field == "real":
        Z = rng.standard_normal((n, r))
    elif field == "complex":
        Z = (rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))) / math.sqrt(2)
    else:
        raise DomainError(f"field must be 'real' or 'complex', got {field!r}")
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    Q = Q * (d / np.abs(d))[None, :]
    sv = np.linalg.svd(Q[:r, :r], compute_uv=False)
    return float(sv[-1] ** 2)


# -- batches ----------------------------------------------------------------------


@dataclass
class SampleBatch:
    """Scaled draws with everything needed to regenerate them."""

    model: str
    params: dict
    scaling: str
    seed: int
    values: np.ndarray = field(repr=False)

    @property
    def replicate_count(self) -> int:
        return int(self.values.size)


def _case_of(params: JacobiParams) -> Optional[int]:
    beta, a = params.beta, params.a
    if beta < 2 and abs(a - (2 / beta - 2)) <= 1e-12 * max(1.0, abs(a)):
        return 1
    k = 0.5 * beta * (a + 1)
    if abs(k - round(k)) <= 1e-12 * max(1.0, k) and round(k) >= 1:
        return 2
    return None


def scaling_factor(scaling: str, params: JacobiParams) -> float:
    """Multiplier taking ``lambda_min`` to the requested variable.

    ``raw`` is the eigenvalue itself; ``r1``/``r2`` are the regime-1/2
    variables of whichever special family the parameters belong to; a law
    kind such as ``case2_regime2`` may also be named directly.
    """
    if scaling == "raw":
        return 1.0
    if scaling in ("r1", "r2"):
        case = _case_of(params)
        if case is None:
            raise DomainError(
                f"scaling {scaling} needs a = 2/beta - 2 or beta(a+1)/2 integer, got "
                f"beta={params.beta}, a={params.a}"
            )
        scaling = f"case{case}_regime{scaling[1]}"
    return regime_scale(scaling, params.beta, params.b, params.m)


def _run_chunks(fn, N: int, threads: int) -> np.ndarray:
    if threads <= 1 or N < 2 * threads:
        return fn(0, N)
    bounds = np.linspace(0, N, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda lo_hi: fn(*lo_hi), zip(bounds[:-1], bounds[1:])))
    return np.concatenate(parts)


def _sutton_range(params: JacobiParams, seed: int, lo: int, hi: int) -> np.ndarray:
    rngs = [replicate_rng(seed, i) for i in range(lo, hi)]
    draws = [_draw_bidiagonal(params, g) for g in rngs]
    diag = np.array([d for d, _ in draws])
    sup = np.array([e for _, e in draws]).reshape(len(draws), params.m - 1)
    lam = smallest_singular_value(diag, sup) ** 2
    # redraw degenerate replicates from their own streams
    for k in np.flatnonzero(~((lam > 0) & (lam < 1))):
        for _ in range(MAX_RETRIES):
            d, e = _draw_bidiagonal(params, rngs[k])
            v = float(smallest_singular_value(d, e)[0]) ** 2
            if 0 < v < 1:
                lam[k] = v
                break
        else:
            raise IllConditioned(
                f"replicate {lo + k}: degenerate smallest eigenvalue after {MAX_RETRIES} retries"
            )
    return lam


def sample_batch(
    params,
    scaling: str,
    N: int,
    seed: int,
    threads: int = 1,
    model: str = "sutton",
) -> SampleBatch:
    """``N`` scaled smallest-eigenvalue draws.

    ``model="sutton"`` takes :class:`JacobiParams`; ``model="haar"`` takes a
    dict with ``n``, ``r`` and ``field`` and supports the scalings ``raw``
    (``sigma_min^2``) and ``over_beta`` (``sigma_min^2 / beta``).
    """
    if N < 1:
        raise DomainError(f"need at least one replicate, got N={N}")
    seed = int(seed)
    if model == "sutton":
        if not isinstance(params, JacobiParams):
            params = JacobiParams(**params)
        factor = scaling_factor(scaling, params)
        lam = _run_chunks(lambda lo, hi: _sutton_range(params, seed, lo, hi), N, threads)
        info = dict(beta=params.beta, a=params.a, b=params.b, m=params.m)
        return SampleBatch(model, info, scaling, seed, factor * lam)
    if model == "haar":
        n, r, fld = int(params["n"]), int(params["r"]), params["field"]
        beta = 1.0 if fld == "real" else 2.0
        if scaling == "raw":
            factor = 1.0
        elif scaling == "over_beta":
            factor = 1.0 / beta
        else:
            raise DomainError(f"haar samples support scalings raw and over_beta, got {scaling!r}")

        def run(lo, hi):
            return np.array(
                [haar_corner_smallest(n, r, fld, replicate_rng(seed, i)) for i in range(lo, hi)]
            )

        x = _run_chunks(run, N, threads)
        return SampleBatch(model, dict(n=n, r=r, field=fld), scaling, seed, factor * x)
    raise DomainError(f"unknown model {model!r}")
