"""Binary matroids from GF(2) generator matrices and the rank inequality

    log2 E_{S~p} 2^{|S| - r(S)}  <=  E_{T~t} (|T| - r(T)),   t = log2(1 + p),

with equality for coordinate subspaces.

Rows and columns are packed into Python ints. Column j (1-based) of the
generator is the integer whose bit i is entry (i+1, j); subset masks follow
the same convention as the cube module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .stats import Estimate, make_rng, mean_estimate

EXACT_MAX_COLUMNS = 22
MATROID_TOL = 1e-9
MATROID_EQUALITY_TOL = 1e-12


class BinaryMatroid:
    """Column matroid of a k x n GF(2) matrix; rows are packed ints (bit j = column j+1)."""

    def __init__(self, n: int, rows: Iterable[int]):
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.n = int(n)
        self.rows = tuple(int(r) for r in rows)
        for r in self.rows:
            if r < 0 or r >> self.n:
                raise ValueError(f"row {r:#x} has bits beyond column {self.n}")

    @classmethod
    def from_matrix(cls, matrix) -> "BinaryMatroid":
        arr = np.asarray(matrix, dtype=np.int64) % 2
        if arr.ndim != 2:
            raise ValueError("generator must be a 2-d array")
        weights = [1 << j for j in range(arr.shape[1])]
        return cls(arr.shape[1], (int(np.dot(row, weights)) for row in arr))

    @property
    def k(self) -> int:
        return len(self.rows)

    def matrix(self) -> np.ndarray:
        return np.array([[r >> j & 1 for j in range(self.n)] for r in self.rows],
                        dtype=np.uint8).reshape(self.k, self.n)

    @cached_property
    def columns(self) -> tuple[int, ...]:
        return tuple(sum((r >> j & 1) << i for i, r in enumerate(self.rows)) for j in range(self.n))

    def __repr__(self) -> str:
        return f"BinaryMatroid(n={self.n}, k={self.k})"

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryMatroid) and (self.n, self.rows) == (other.n, other.rows)

    def rank(self, S: int) -> int:
        return rank(self, S)

    @cached_property
    def rank_table(self) -> np.ndarray:
        return rank_table(self)


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank of packed GF(2) vectors by insertion into an echelon basis."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def rank(M: BinaryMatroid, S: int) -> int:
    """r(S): GF(2) rank of the columns indexed by S."""
    S = int(S)
    if S < 0 or S >> M.n:
        raise ValueError(f"subset mask {S:#x} has bits outside [1..{M.n}]")
    cols = M.columns
    return gf2_rank(cols[j] for j in range(M.n) if S >> j & 1)


def _popcounts(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


def corank_table(M: BinaryMatroid) -> np.ndarray:
    """|S| - r(S) for every mask S, in O(n 2^n).

    2^{|S| - r(S)} counts the kernel vectors supported inside S: the syndrome
    of every subset is built by doubling, its zeros mark the kernel, and a
    subset-sum (zeta) transform counts them below each S.
    """
    if M.n > EXACT_MAX_COLUMNS:
        raise ValueError(f"exhaustive tables need n <= {EXACT_MAX_COLUMNS}, got {M.n}")
    if M.k > 63:
        raise ValueError("syndrome packing supports at most 63 rows")
    synd = np.zeros(1, dtype=np.int64)
    for col in M.columns:
        synd = np.concatenate([synd, synd ^ np.int64(col)])
    count = (synd == 0).astype(np.int64)
    for j in range(M.n):
        view = count.reshape(-1, 2, 1 << j)
        view[:, 1, :] += view[:, 0, :]
    return np.log2(count).round().astype(np.int64)


def rank_table(M: BinaryMatroid) -> np.ndarray:
    return _popcounts(M.n) - corank_table(M)


def _binomial_weights(n: int, p: float) -> np.ndarray:
    """Pr[S] for S ~ p (each element independently with probability p)."""
    pc = _popcounts(n)
    return np.power(p, pc) * np.power(1.0 - p, n - pc)


def _sample_masks(n: int, p: float, trials: int, rng: np.random.Generator) -> np.ndarray:
    bits = rng.random((trials, n)) < p
    return bits.astype(np.int64) @ (1 << np.arange(n, dtype=np.int64))


def _sampled_coranks(M: BinaryMatroid, p: float, trials: int, seed, stream: int) -> np.ndarray:
    masks = _sample_masks(M.n, p, trials, make_rng(seed, M.n, M.k, stream))
    if M.n <= EXACT_MAX_COLUMNS:
        return corank_table(M)[masks]
    return np.array([int(S).bit_count() - rank(M, int(S)) for S in masks])


def _check_prob(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return float(p)


def matroid_lhs(M: BinaryMatroid, p: float, mode: str = "exact", trials: int = 10_000,
                seed=0) -> Estimate:
    """log2 E_{S~p} 2^{|S| - r(S)}.

    Sampled mode takes log2 of the empirical mean, which is biased low (Jensen);
    its stderr comes from the delta method.
    """
    p = _check_prob(p)
    if mode == "exact":
        if M.n > EXACT_MAX_COLUMNS:
            raise ValueError(f"exact mode needs n <= {EXACT_MAX_COLUMNS}; use mode='sampled'")
        total = float(np.dot(_binomial_weights(M.n, p), np.exp2(corank_table(M))))
        return Estimate(math.log2(total), 0.0)
    if mode == "sampled":
        mean, se = mean_estimate(np.exp2(_sampled_coranks(M, p, trials, seed, 0)))
        return Estimate(math.log2(mean), se / (mean * math.log(2.0)))
    raise ValueError(f"unknown mode {mode!r}")


def matroid_rhs(M: BinaryMatroid, t: float, mode: str = "exact", trials: int = 10_000,
                seed=0) -> Estimate:
    """E_{T~t} (|T| - r(T)); the sampled estimate is unbiased."""
    t = _check_prob(t)
    if mode == "exact":
        if M.n > EXACT_MAX_COLUMNS:
            raise ValueError(f"exact mode needs n <= {EXACT_MAX_COLUMNS}; use mode='sampled'")
        return Estimate(float(np.dot(_binomial_weights(M.n, t), corank_table(M))), 0.0)
    if mode == "sampled":
        return mean_estimate(_sampled_coranks(M, t, trials, seed, 1))
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class MatroidCase:
    description: str
    p: float
    t: float
    lhs: float
    rhs: float
    margin: float
    passed: bool
    equality: bool
    stderr: float | None = None


def verify_matroid(M: BinaryMatroid, p: float, tol: float = MATROID_TOL,
                   equality_tol: float = MATROID_EQUALITY_TOL, description: str = "",
                   mode: str = "exact", trials: int = 10_000, seed=0) -> MatroidCase:
    """Check the rank inequality at one p.

    Sampled mode passes when the margin is within three combined standard
    errors; the log of a sample mean is biased low, which only helps the left side.
    """
    t = math.log2(1.0 + _check_prob(p))
    lhs = matroid_lhs(M, p, mode, trials, seed)
    rhs = matroid_rhs(M, t, mode, trials, seed)
    margin = rhs.value - lhs.value
    stderr = None
    slack = tol
    if mode == "sampled":
        stderr = math.hypot(lhs.stderr, rhs.stderr)
        slack = 3.0 * stderr if math.isfinite(stderr) else math.inf
    return MatroidCase(description or f"{M!r} p={p}", p, t, lhs.value, rhs.value, margin,
                       bool(margin >= -slack), abs(margin) <= equality_tol, stderr)


def random_generator(k: int, n: int, seed=0) -> BinaryMatroid:
    """Uniformly random k x n GF(2) generator, reproducible per seed."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    rng = make_rng(seed, k, n)
    return BinaryMatroid.from_matrix(rng.integers(0, 2, size=(k, n)))


def coordinate_subspace(n: int, support: Iterable[int]) -> BinaryMatroid:
    """Rows e_i for i in the support (1-based): the code whose indicator is a subcube."""
    support = sorted(set(support))
    if any(not 1 <= i <= n for i in support):
        raise ValueError("support coordinates must lie in 1..n")
    return BinaryMatroid(n, (1 << (i - 1) for i in support))


def random_matroid_cases(count: int, n_max: int, p_values: Sequence[float], seed=0,
                         n_min: int = 1) -> list[MatroidCase]:
    cases = []
    for idx in range(count):
        rng = make_rng(seed, 11, idx)
        n = int(rng.integers(n_min, n_max + 1))
        k = int(rng.integers(0, n + 1))
        M = random_generator(k, n, seed=int(rng.integers(2**31)))
        for p in p_values:
            cases.append(verify_matroid(M, p, description=f"random #{idx} k={k} n={n} p={p}"))
    return cases


def format_generator(M: BinaryMatroid) -> str:
    """Text form: 'k n' header, then k rows of n characters in {0,1}."""
    lines = [f"{M.k} {M.n}"]
    lines += ["".join(str(r >> j & 1) for j in range(M.n)) for r in M.rows]
    return "\n".join(lines) + "\n"


def parse_generator(text: str) -> BinaryMatroid:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty generator text")
    k, n = (int(v) for v in lines[0].split())
    rows = lines[1:]
    if len(rows) != k:
        raise ValueError(f"header declares {k} rows, found {len(rows)}")
    packed = []
    for row in rows:
        if len(row) != n or set(row) - {"0", "1"}:
            raise ValueError(f"row {row!r} is not {n} characters from {{0,1}}")
        packed.append(sum(1 << j for j, ch in enumerate(row) if ch == "1"))
    return BinaryMatroid(n, packed)


def read_generator(path) -> BinaryMatroid:
    return parse_generator(Path(path).read_text())


def write_generator(M: BinaryMatroid, path) -> None:
    Path(path).write_text(format_generator(M))
