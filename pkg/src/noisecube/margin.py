"""Both sides of the noise-operator margin inequality

    log ||T_eps f||_q  <=  E_{T ~ lambda} log ||E(f|T)||_q

with per-coordinate parameters lambda_i = lambda(q, eps_i), together with the
parameter formulas, subset weights, and randomized/exhaustive drivers.
Logs are natural on both sides; the lambda formulas use log2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cube import (
    CubeFunction,
    DegenerateFunctionError,
    all_subcubes,
    apply_noise,
    conditional_expectation,
    conditional_norm_table,
    make_function,
    noise_vector,
    norm,
    subcube_indicator,
)
from .stats import Estimate, make_rng, mean_estimate

EXACT_MAX_DIM = 14
INEQUALITY_TOL = 1e-9
EQUALITY_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-12

PROFILES = ("dense", "sparse", "spiky")


@dataclass
class VerificationCase:
    description: str
    lhs: float
    rhs: float
    margin: float
    passed: bool | None
    equality: bool
    stderr: float | None = None
    degenerate: bool = False
    tags: tuple[str, ...] = field(default_factory=tuple)


def _is_integer(q) -> bool:
    return not math.isinf(q) and float(q).is_integer()


def _check_eps(eps):
    arr = np.asarray(eps, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 0.5):
        raise ValueError("noise rate must lie in [0, 1/2]")
    return arr


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def lambda_q(q, eps, allow_real: bool = False):
    """lambda(q, eps) = 1 + log2(eps^q + (1-eps)^q) / (q - 1), integer q >= 2.

    ``allow_real`` admits any real q > 1 for exploratory use only.
    """
    if math.isinf(q):
        raise ValueError("use lambda_inf for q = inf")
    if allow_real:
        if q <= 1:
            raise ValueError(f"q must exceed 1, got {q}")
    elif not _is_integer(q) or q < 2:
        raise ValueError(f"q must be an integer >= 2, got {q!r}")
    e = _check_eps(eps)
    with np.errstate(divide="ignore"):
        # log-sum-exp form: eps^q and (1 - eps)^q underflow for large q
        lam = 1.0 + np.logaddexp2(q * np.log2(e), q * np.log2(1.0 - e)) / (q - 1)
    return _scalar_or_array(np.clip(lam, 0.0, 1.0))


def lambda_inf(eps):
    """lambda(inf, eps) = 1 + log2(1 - eps)."""
    e = _check_eps(eps)
    return _scalar_or_array(np.clip(1.0 + np.log2(1.0 - e), 0.0, 1.0))


def lambda_old(q, eps):
    """Earlier parameter (1 - 2 eps)^(q / (2 ln 2 (q - 1))), kept for comparison.

    q = inf is read as the limit, exponent 1 / (2 ln 2).
    """
    e = _check_eps(eps)
    if math.isinf(q):
        exponent = 1.0 / (2.0 * math.log(2.0))
    else:
        if q < 2:
            raise ValueError(f"q must be >= 2, got {q!r}")
        exponent = q / (2.0 * math.log(2.0) * (q - 1))
    return _scalar_or_array((1.0 - 2.0 * e) ** exponent)


def lambda_param(q, eps, allow_real: bool = False):
    return lambda_inf(eps) if math.isinf(q) else lambda_q(q, eps, allow_real=allow_real)


def subset_weights(lam: Sequence[float]) -> np.ndarray:
    """Pr[T] = prod_{i in T} lam_i prod_{j not in T} (1 - lam_j), indexed by mask."""
    w = np.ones(1)
    for li in np.asarray(lam, dtype=float):
        if not 0.0 <= li <= 1.0:
            raise ValueError("margin parameters must lie in [0, 1]")
        w = np.concatenate([w * (1.0 - li), w * li])
    return w


def theorem_lhs(f: CubeFunction, eps, q) -> float:
    """ln ||T_eps f||_q."""
    if f.is_zero():
        raise DegenerateFunctionError("f is identically zero; both sides are -inf")
    return math.log(norm(apply_noise(f, eps), q))


def log_conditional_norms(f: CubeFunction, q) -> np.ndarray:
    """ln ||E(f|T)||_q for every mask T."""
    if f.is_zero():
        raise DegenerateFunctionError("f is identically zero; both sides are -inf")
    return np.log(conditional_norm_table(f, q))


def theorem_rhs_exact(f: CubeFunction, lam, q, table: np.ndarray | None = None) -> float:
    """E_{T ~ lam} ln ||E(f|T)||_q summed over all 2^n subsets.

    ``table`` may carry a precomputed :func:`log_conditional_norms` result so
    that sweeps over many noise rates reuse it.
    """
    if f.n > EXACT_MAX_DIM:
        raise ValueError(
            f"exact right-hand side needs n <= {EXACT_MAX_DIM} (cost ~4^n); "
            f"use theorem_rhs_sampled for n = {f.n}")
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.shape[0] != f.n:
        raise ValueError(f"margin profile has length {lam.shape[0]}, expected {f.n}")
    weights = subset_weights(lam)
    total = weights.sum()
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise AssertionError(f"subset weights sum to {total!r}")
    if table is None:
        table = log_conditional_norms(f, q)
    support = weights > 0
    return float(np.dot(weights[support], table[support]))


def sample_subsets(lam, trials: int, rng: np.random.Generator) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    bits = rng.random((trials, lam.shape[0])) < lam
    return bits.astype(np.int64) @ (1 << np.arange(lam.shape[0], dtype=np.int64))


def theorem_rhs_sampled(f: CubeFunction, lam, q, trials: int = 10_000, seed=0) -> Estimate:
    """Monte Carlo estimate of E_{T ~ lam} ln ||E(f|T)||_q with its standard error."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if f.is_zero():
        raise DegenerateFunctionError("f is identically zero; both sides are -inf")
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.shape[0] != f.n:
        raise ValueError(f"margin profile has length {lam.shape[0]}, expected {f.n}")
    masks = sample_subsets(lam, trials, make_rng(seed, f.n))
    uniq, inverse = np.unique(masks, return_inverse=True)
    logs = np.array([math.log(norm(conditional_expectation(f, int(T)), q)) for T in uniq])
    return mean_estimate(logs[inverse])


def _case_tags(q) -> tuple[str, ...]:
    if math.isinf(q):
        return ()
    if not _is_integer(q):
        return ("non-integer-q:exploratory",)
    if int(q) % 2:
        # one-dimensional step is stated for even q; the exact certificate covers every integer
        return ("odd-q",)
    return ()


def verify_theorem(f: CubeFunction, eps, q, tol: float = INEQUALITY_TOL,
                   equality_tol: float = EQUALITY_TOL, mode: str = "auto",
                   trials: int = 10_000, seed=0, table: np.ndarray | None = None,
                   description: str = "") -> VerificationCase:
    """Evaluate both sides for f at noise ``eps`` (scalar or per coordinate).

    Exact mode enumerates subsets (n <= 14). Sampled mode estimates the right
    side and passes when margin >= -3 stderr. Non-integer q is evaluated but
    left unjudged (``passed is None``).
    """
    eps = noise_vector(eps, f.n)
    tags = _case_tags(q)
    exploratory = bool(tags) and tags[0].startswith("non-integer")
    lam = lambda_param(q, eps, allow_real=exploratory)
    desc = description or f"n={f.n} q={q} eps={eps.tolist()}"
    if f.is_zero():
        return VerificationCase(desc, -math.inf, -math.inf, 0.0, True, True,
                                degenerate=True, tags=tags)
    if mode == "auto":
        mode = "exact" if f.n <= EXACT_MAX_DIM else "sampled"
    lhs = theorem_lhs(f, eps, q)
    if mode == "exact":
        rhs = theorem_rhs_exact(f, lam, q, table=table)
        stderr = None
        slack = tol
    elif mode == "sampled":
        rhs, stderr = theorem_rhs_sampled(f, lam, q, trials=trials, seed=seed)
        slack = 3.0 * stderr if math.isfinite(stderr) else math.inf
    else:
        raise ValueError(f"unknown mode {mode!r}")
    margin = rhs - lhs
    passed = None if exploratory else bool(margin >= -slack)
    return VerificationCase(desc, lhs, rhs, margin, passed, abs(margin) <= equality_tol,
                            stderr=stderr, tags=tags)


def random_nonneg_function(n: int, profile: str = "dense", seed=0,
                           rng: np.random.Generator | None = None) -> CubeFunction:
    """Random nonnegative, not identically zero test input.

    dense: log-normal positive values; sparse: a random fraction zeroed;
    spiky: a scaled subcube indicator plus uniform noise below 0.1.
    """
    if rng is None:
        rng = make_rng(seed, n, PROFILES.index(profile) if profile in PROFILES else 99)
    size = 1 << n
    if profile == "dense":
        vals = rng.lognormal(0.0, 1.5, size)
    elif profile == "sparse":
        vals = rng.lognormal(0.0, 1.5, size)
        if size > 1:
            nzero = int(rng.integers(1, size))
            vals[rng.permutation(size)[:nzero]] = 0.0
    elif profile == "spiky":
        fixed = {i: int(rng.integers(2)) for i in range(1, n + 1) if rng.random() < 0.5}
        scale = float(rng.uniform(0.5, 4.0))
        vals = scale * subcube_indicator(n, fixed).values + rng.uniform(0.0, 0.1, size)
    else:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    return make_function(n, vals, strict=True)


def subcube_cases(n: int, q_values: Iterable, eps_grid: Iterable[float],
                  tol: float = INEQUALITY_TOL, equality_tol: float = EQUALITY_TOL):
    """verify_theorem over every subcube indicator on {0,1}^n."""
    eps_grid = list(eps_grid)
    cases = []
    for fixed in all_subcubes(n):
        f = subcube_indicator(n, fixed)
        for q in q_values:
            table = log_conditional_norms(f, q)
            for e in eps_grid:
                cases.append(verify_theorem(
                    f, e, q, tol=tol, equality_tol=equality_tol, table=table,
                    description=f"subcube n={n} fixed={fixed} q={q} eps={e}"))
    return cases


def sweep_main_inequality(n_values: Iterable[int], q_values: Iterable, eps_grid: Iterable[float],
                          count: int, seed=0, profiles: Sequence[str] = PROFILES,
                          tol: float = INEQUALITY_TOL) -> list[VerificationCase]:
    """Random-function sweep; each function is drawn once per (n, index) and
    reused across every q and eps so the conditional-norm table is built once
    per (f, q).
    """
    q_values, eps_grid = list(q_values), list(eps_grid)
    cases = []
    for n in n_values:
        for idx in range(count):
            profile = profiles[idx % len(profiles)]
            f = random_nonneg_function(n, profile, rng=make_rng(seed, n, idx))
            for q in q_values:
                table = log_conditional_norms(f, q)
                for e in eps_grid:
                    cases.append(verify_theorem(
                        f, e, q, tol=tol, table=table,
                        description=f"random n={n} #{idx} {profile} q={q} eps={e}"))
    return cases


def random_vector_cases(count: int, n_max: int, q_values: Sequence, seed=0,
                        tol: float = INEQUALITY_TOL) -> list[VerificationCase]:
    """Heterogeneous per-coordinate noise; n, q, profile and eps drawn per case."""
    cases = []
    for idx in range(count):
        rng = make_rng(seed, 7, idx)
        n = int(rng.integers(1, n_max + 1))
        q = q_values[idx % len(q_values)]
        profile = PROFILES[int(rng.integers(len(PROFILES)))]
        f = random_nonneg_function(n, profile, rng=rng)
        eps = rng.uniform(0.0, 0.5, n)
        eps[rng.random(n) < 0.15] = 0.0
        cases.append(verify_theorem(f, eps, q, tol=tol,
                                    description=f"vector #{idx} n={n} q={q} {profile}"))
    return cases
