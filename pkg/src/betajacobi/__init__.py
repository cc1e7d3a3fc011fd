"""Smallest- and largest-eigenvalue distributions of beta-Jacobi ensembles.

Exact densities through hypergeometric functions of matrix argument, their
limit laws at the hard edge, and Monte Carlo samplers to check them.
"""
from .constants import JacobiParams
from .densities import (
    make_law,
    pdf_case1_regime1,
    pdf_case1_regime2,
    pdf_case2_regime1,
    pdf_case2_regime2,
    pdf_max_exact,
    pdf_min_case1,
    pdf_min_case2,
    pdf_min_exact,
)
from .errors import (
    BetaJacobiError,
    DomainError,
    IllConditioned,
    LogarithmicCase,
    NonConvergence,
    QuadratureFailure,
)

__version__ = "0.1.0"
