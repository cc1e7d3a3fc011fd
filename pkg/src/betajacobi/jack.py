"""Jack polynomials ``C_kappa`` evaluated at scalar multiples of the identity.

Only arguments of the form ``x * I_m`` are supported; there the polynomial
has the closed form

    C_kappa(I_m) = (2/beta)^(2k) k! (m beta/2)_kappa / j_kappa,

with ``k = |kappa|``, and homogeneity gives ``C_kappa(x I_m) = x^k C_kappa(I_m)``.
This normalization satisfies ``sum_{kappa |- k} C_kappa(X) = (tr X)^k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .partitions import Partition, gen_pochhammer, j_kappa

__all__ = ["IdentityArgument", "jack_at_identity", "jack_at_scaled_identity"]


@dataclass(frozen=True)
class IdentityArgument:
    """The matrix argument ``scale * I_dim``; ``dim = 0`` is the empty argument."""

    scale: float
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")


def _parts(kappa):
    return kappa.parts if isinstance(kappa, Partition) else tuple(kappa)


def jack_at_identity(kappa, beta: float, m: int) -> float:
    parts = _parts(kappa)
    k = sum(parts)
    if len(parts) > m:
        return 0.0
    alpha = 2.0 / beta
    return (
        alpha ** (2 * k)
        * math.factorial(k)
        * gen_pochhammer(m * beta / 2.0, parts, beta)
        / j_kappa(parts, beta)
    )


def jack_at_scaled_identity(kappa, beta: float, m: int, x: float) -> float:
    k = sum(_parts(kappa))
    if k == 0:
        return 1.0
    # x**k keeps the sign of negative x for odd k
    return x**k * jack_at_identity(kappa, beta, m)
