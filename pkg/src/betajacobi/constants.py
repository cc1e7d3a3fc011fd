"""Gamma-ratio normalization constants in signed-log form.

Every constant here is a product of Gamma values, some at negative
non-integer arguments (Case 1 has ``Gamma(-beta/2) < 0``), so they are
carried as :class:`LogValue` (sign, log|value|) until the last moment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import special as sp

from .errors import DomainError

_EPS = np.finfo(float).eps

__all__ = [
    "LogValue",
    "log_gamma",
    "gamma_product",
    "JacobiParams",
    "selberg_c",
    "norm_min",
    "norm_max",
    "Case1Constants",
    "case1_constants",
    "Case2Constants",
    "case2_constants",
    "case2_gauss_product",
]


@dataclass(frozen=True)
class LogValue:
    """A real number stored as ``sign * exp(log_abs)``."""

    sign: int
    log_abs: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.sign == 0:
            object.__setattr__(self, "log_abs", -math.inf)

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0:
            return cls(0)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def one(cls) -> "LogValue":
        return cls(1, 0.0)

    def __mul__(self, other):
        if not isinstance(other, LogValue):
            other = LogValue.from_float(float(other))
        return LogValue(self.sign * other.sign, self.log_abs + other.log_abs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LogValue):
            other = LogValue.from_float(float(other))
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogValue")
        return LogValue(self.sign * other.sign, self.log_abs - other.log_abs)

    def __rtruediv__(self, other):
        return LogValue.from_float(float(other)) / self

    def __neg__(self):
        return LogValue(-self.sign, self.log_abs)

    def __pow__(self, k: int):
        if int(k) != k:
            raise ValueError("only integer powers keep the sign well defined")
        k = int(k)
        if self.sign == 0:
            return LogValue(0) if k > 0 else LogValue.one()
        return LogValue(self.sign**k if k >= 0 else self.sign ** (-k), k * self.log_abs)

    def __float__(self) -> float:
        return self.value

    @property
    def value(self) -> float:
        """Plain float (``inf``/``0`` on overflow/underflow)."""
        if self.sign == 0:
            return 0.0
        with np.errstate(over="ignore"):
            return self.sign * float(np.exp(self.log_abs))

    def isclose(self, other: "LogValue", rel_tol: float = 1e-12) -> bool:
        if self.sign != other.sign:
            return False
        if self.sign == 0:
            return True
        return abs(self.log_abs - other.log_abs) <= rel_tol


def log_gamma(x: float) -> LogValue:
    """``Gamma(x)`` as a LogValue; negative non-integers keep their sign."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x}")
    return LogValue(int(sp.gammasgn(x)), float(sp.gammaln(x)))


def gamma_product(num: Iterable[float], den: Iterable[float] = ()) -> LogValue:
    """``prod Gamma(num) / prod Gamma(den)``."""
    out = LogValue.one()
    for x in num:
        out = out * log_gamma(x)
    for x in den:
        out = out / log_gamma(x)
    return out


@dataclass(frozen=True)
class JacobiParams:
    """beta-Jacobi ensemble parameters; ``a, b > -1``, ``beta > 0``, ``m >= 1``."""

    beta: float
    a: float
    b: float
    m: int

    def __post_init__(self):
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if int(self.m) != self.m:
            raise DomainError(f"m must be an integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not self.a > -1:
            raise DomainError(f"a must exceed -1, got {self.a}")
        if not self.b > -1:
            raise DomainError(f"b must exceed -1, got {self.b}")
        if self.m < 1:
            raise DomainError(f"m must be at least 1, got {self.m}")

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.beta, self.b, self.a, self.m)

    @property
    def p(self) -> float:
        """Exponent ``beta (a+1)/2`` of ``lambda`` at the hard edge."""
        return 0.5 * self.beta * (self.a + 1)

    @property
    def q(self) -> float:
        """Exponent ``beta m (b+m)/2`` of ``1 - lambda``."""
        return 0.5 * self.beta * self.m * (self.b + self.m)


def selberg_c(beta: float, a: float, b: float, m: int) -> LogValue:
    """Selberg normalization ``c_{beta,a,b,m}`` of the Jacobi joint density.

    ``c_{beta,a,b,0} = 1`` (empty product).
    """
    if m == 0:
        return LogValue.one()
    JacobiParams(beta, a, b, m)
    h = 0.5 * beta
    j = np.arange(1, m + 1, dtype=float)
    logs = (
        sp.gammaln(h * (a + j))
        + sp.gammaln(h * (b + j))
        + sp.gammaln(1 + h * j)
        - sp.gammaln(1 + h)
        - sp.gammaln(h * (a + b + m + j))
    )
    # all arguments are positive on the valid domain
    return LogValue(1, float(math.fsum(logs)))


def norm_min(params: JacobiParams) -> LogValue:
    """Prefactor ``m c_{beta,b,1+2/beta,m-1} / c_{beta,a,b,m}`` of the min density."""
    beta, a, b, m = params.beta, params.a, params.b, params.m
    return params.m * selberg_c(beta, b, 1 + 2 / beta, m - 1) / selberg_c(beta, a, b, m)


def norm_max(params: JacobiParams) -> LogValue:
    """Prefactor of the largest-eigenvalue density (``a`` and ``b`` swapped)."""
    return norm_min(params.swapped())


def _check_case1(beta: float, b: float, m: int):
    if not (0 < beta < 2):
        raise DomainError(f"case 1 requires beta in (0,2), got beta={beta}")
    if not b > -1:
        raise DomainError(f"b must exceed -1, got {b}")
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")


@dataclass(frozen=True)
class Case1Constants:
    """Constants of the ``a = 2/beta - 2`` family.

    ``C`` multiplies the matrix-argument form, ``A`` and ``B`` are the
    connection-formula coefficients of the two classical pieces, ``F`` is the
    common factor pulled out of them and ``C_tilde = C * F``.
    """

    C: LogValue
    A: LogValue
    B: LogValue
    F: LogValue
    C_tilde: LogValue


def case1_constants(beta: float, b: float, m: int) -> Case1Constants:
    _check_case1(beta, b, m)
    h = 0.5 * beta
    top = h * (b + 2 * m - 1) + 1
    C = LogValue.from_float(h * m * (b + m)) * gamma_product(
        [h * (b + m - 1) + 1, h * (m - 1) + 1], [1 - h, top]
    )
    A = gamma_product([top, h + 1], [h * m + 1, h * (b + m) + 1])
    if m == 1:
        # 1/Gamma(0) = 0 kills the second piece
        B = LogValue(0)
    else:
        B = gamma_product([top, -1 - h], [h * (m - 1), h * (b + m - 1)])
    F = gamma_product([top, 1 + h, -h], [h * (b + m) + 1])
    C_tilde = (
        gamma_product([-h, 1 + h], [1 - h])
        * LogValue.from_float(h * m * (b + m))
        * gamma_product([h * (b + m - 1) + 1, h * (m - 1) + 1], [h * (b + m) + 1])
    )
    recomposed = C * F
    # log-space rounding grows with the size of the Gamma logarithms
    big = top + 1
    if not recomposed.isclose(C_tilde, 1e-10 + 8 * _EPS * big * math.log(big)):
        raise ArithmeticError("case 1 constants are inconsistent")  # pragma: no cover
    return Case1Constants(C, A, B, F, C_tilde)


def _check_case2(beta: float, k: int, b: float, m: int):
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError(f"beta must be positive, got {beta}")
    if int(k) != k or k < 1:
        raise DomainError(f"case 2 requires a positive integer k, got {k}")
    if not b > -1:
        raise DomainError(f"b must exceed -1, got {b}")
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")


@dataclass(frozen=True)
class Case2Constants:
    """``A`` is the terminating series at the identity, ``W`` the density prefactor."""

    A: LogValue
    W: LogValue


def case2_gauss_product(beta: float, k: int, b: float, m: int) -> LogValue:
    """``A_{m,b,beta,k}`` in the regrouped single-product form."""
    h = 0.5 * beta
    out = LogValue.one()
    for i in range(1, m):
        out = out * gamma_product(
            [1 + (i + 1) * h, k + h * (m + b + i)],
            [k + (i + 1) * h, 1 + h * (m + b + i)],
        )
    return out


def case2_constants(beta: float, k: int, b: float, m: int) -> Case2Constants:
    _check_case2(beta, k, b, m)
    h = 0.5 * beta
    A = case2_gauss_product(beta, k, b, m)
    W = (
        gamma_product([1 + h], [k, k + h])
        * LogValue.from_float(m)
        * gamma_product([k + h * m, k + h * (b + m)], [1 + h * m, h * (b + m)])
    )
    return Case2Constants(A, W)
