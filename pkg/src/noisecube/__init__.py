"""Noise operators on the boolean cube: a sharpened margin inequality checked by
brute force, an exact-integer certificate for its one-dimensional core, and
its consequences for binary matroids and Reed-Muller codes on the BSC."""

from __future__ import annotations

from .cube import (
    CubeFunction,
    DegenerateFunctionError,
    apply_noise,
    apply_noise_spectral,
    conditional_expectation,
    make_function,
    norm,
    subcube_indicator,
)
from .margin import (
    VerificationCase,
    lambda_inf,
    lambda_old,
    lambda_param,
    lambda_q,
    theorem_lhs,
    theorem_rhs_exact,
    theorem_rhs_sampled,
    verify_theorem,
)
from .matroid import BinaryMatroid, matroid_lhs, matroid_rhs, verify_matroid
from .onedim import F, G, check_concavity, check_onedim_inequality
from .proofcert import Certificate, certify, certify_range, check_inequality_chain
from .reports import Report, emit
from .rmcodes import (
    RMCode,
    bsc_block_error,
    exact_block_error,
    ml_decode,
    rm_code,
    threshold,
    weight_distribution,
)

__version__ = "0.1.0"
