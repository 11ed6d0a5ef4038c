"""Reed-Muller codes on the binary symmetric channel.

Codewords are indexed by their message: codeword ``m`` is the XOR of the
generator rows selected by the bits of ``m``. Maximum-likelihood decoding is
exhaustive nearest-codeword search with ties going to the lowest index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .matroid import gf2_rank
from .reports import Report
from .stats import Proportion, substreams, wilson_interval

MAX_M = 20
MAX_WEIGHT_DIM = 24
MAX_DECODE_DIM = 20
MAX_EXACT_BLOCK = 16


class LinearCode:
    """Binary linear code given by a full-rank generator matrix (dim x n, uint8)."""

    def __init__(self, generator):
        g = np.asarray(generator, dtype=np.uint8) % 2
        if g.ndim != 2:
            raise ValueError("generator must be 2-d")
        self.generator = g
        self.generator.flags.writeable = False
        if gf2_rank(self.packed_rows) != self.dim:
            raise ValueError("generator rows are linearly dependent")

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    @property
    def rate(self) -> float:
        return self.dim / self.n

    @cached_property
    def packed_rows(self) -> tuple[int, ...]:
        packed = np.packbits(self.generator, axis=1, bitorder="little")
        return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)

    def encode(self, messages) -> np.ndarray:
        """Messages (ints or bit rows) to codeword bit arrays."""
        msgs = np.atleast_1d(np.asarray(messages))
        if msgs.ndim == 1:
            msgs = (msgs[:, None] >> np.arange(self.dim)) & 1
        return (msgs.astype(np.int64) @ self.generator.astype(np.int64) % 2).astype(np.uint8)

    @cached_property
    def codebook(self) -> np.ndarray:
        """All 2^dim codewords as rows, in message order."""
        if self.dim > MAX_DECODE_DIM:
            raise ValueError(f"codebook needs dim <= {MAX_DECODE_DIM}, got {self.dim}")
        return self.encode(np.arange(1 << self.dim))

    @cached_property
    def _codebook_pm(self) -> np.ndarray:
        return (1.0 - 2.0 * self.codebook).astype(np.float32)


class RMCode(LinearCode):
    """RM(r, m): evaluations of monomials of degree <= r on {0,1}^m.

    Point index bit i-1 holds x_i; rows are ordered by degree, then
    lexicographically by variable set.
    """

    def __init__(self, r: int, m: int):
        if not 0 <= r <= m <= MAX_M:
            raise ValueError(f"need 0 <= r <= m <= {MAX_M}, got r={r}, m={m}")
        self.r, self.m = r, m
        points = np.arange(1 << m)
        bits = (points[:, None] >> np.arange(m)) & 1
        rows = []
        for deg in range(r + 1):
            for subset in itertools.combinations(range(m), deg):
                rows.append(np.prod(bits[:, list(subset)], axis=1) if subset
                            else np.ones(1 << m, dtype=np.int64))
        super().__init__(np.array(rows))
        expected = sum(comb(m, i) for i in range(r + 1))
        if self.dim != expected:
            raise AssertionError(f"RM({r},{m}) has dimension {self.dim}, expected {expected}")

    def __repr__(self) -> str:
        return f"RM({self.r},{self.m})"


def rm_code(r: int, m: int) -> RMCode:
    return RMCode(r, m)


def threshold(p):
    """Rate threshold 1 - log2(1 + sqrt(4 p (1-p))) for BSC(p)."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0) or np.any(arr > 0.5):
        raise ValueError("crossover probability must lie in [0, 1/2]")
    out = 1.0 - np.log2(1.0 + np.sqrt(4.0 * arr * (1.0 - arr)))
    return float(out) if out.ndim == 0 else out


def capacity(p):
    """Shannon capacity 1 - h2(p) of BSC(p), for comparison columns."""
    arr = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -arr * np.log2(arr) - (1 - arr) * np.log2(1 - arr)
    h = np.where((arr == 0) | (arr == 1), 0.0, h)
    out = 1.0 - h
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WeightDistribution:
    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    def istar(self, i: int) -> int:
        return min(i, self.n - i)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def is_symmetric(self) -> bool:
        return self.counts == self.counts[::-1]

    def minimum_distance(self) -> int | None:
        return next((i for i in range(1, self.n + 1) if self.counts[i]), None)


def _pack_words(bits: np.ndarray) -> np.ndarray:
    """Pack rows of bits into uint64 words (last axis)."""
    n = bits.shape[-1]
    nwords = max(1, -(-n // 64))
    padded = np.zeros(bits.shape[:-1] + (nwords * 64,), dtype=np.uint64)
    padded[..., :n] = bits
    shifts = np.arange(64, dtype=np.uint64)
    return (padded.reshape(bits.shape[:-1] + (nwords, 64)) << shifts).sum(axis=-1, dtype=np.uint64)


def _enumerate_weights(generator: np.ndarray, chunk_bits: int) -> np.ndarray:
    """Weight counts of the row space: the low ``chunk_bits`` rows form a table
    that is XORed with each combination of the remaining rows."""
    dim, n = generator.shape
    rows = _pack_words(generator)
    low = min(dim, chunk_bits)
    table = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for j in range(low):
        table = np.concatenate([table, table ^ rows[j]])
    high = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for j in range(low, dim):
        high = np.concatenate([high, high ^ rows[j]])
    counts = np.zeros(n + 1, dtype=np.int64)
    for h in high:
        weights = np.bitwise_count(table ^ h).sum(axis=1)
        counts += np.bincount(weights, minlength=n + 1)
    return counts


def dual_generator(code: LinearCode) -> np.ndarray:
    """Basis of the dual code, from the reduced row echelon form of the generator."""
    g = code.generator.copy()
    pivots = []
    row = 0
    for col in range(code.n):
        hit = np.flatnonzero(g[row:, col])
        if hit.size == 0:
            continue
        g[[row, row + hit[0]]] = g[[row + hit[0], row]]
        others = np.flatnonzero(g[:, col])
        others = others[others != row]
        g[others] ^= g[row]
        pivots.append(col)
        row += 1
        if row == code.dim:
            break
    free = [c for c in range(code.n) if c not in set(pivots)]
    h = np.zeros((len(free), code.n), dtype=np.uint8)
    for i, f in enumerate(free):
        h[i, f] = 1
        for r, pc in enumerate(pivots):
            h[i, pc] = g[r, f]
    return h


def macwilliams(dual_counts, n: int) -> tuple[int, ...]:
    """Weight distribution of C from that of its dual, in exact integers:
    A_j = |C_dual|^-1 sum_i B_i K_j(i) with Krawtchouk K_j(i)."""
    size = sum(int(b) for b in dual_counts)
    out = []
    for j in range(n + 1):
        total = 0
        for i, b in enumerate(dual_counts):
            if b:
                kraw = sum((-1) ** s * comb(i, s) * comb(n - i, j - s)
                           for s in range(max(0, j - (n - i)), min(i, j) + 1))
                total += int(b) * kraw
        if total % size:
            raise ArithmeticError("MacWilliams transform did not divide evenly")
        out.append(total // size)
    return tuple(out)


def weight_distribution(code: LinearCode, chunk_bits: int = 16) -> WeightDistribution:
    """Exact weight counts.

    Enumerates the 2^dim codewords on packed words when dim <= 24; otherwise,
    if the dual is small enough, enumerates the dual and applies the MacWilliams
    identity.
    """
    if code.dim <= MAX_WEIGHT_DIM:
        counts = _enumerate_weights(code.generator, chunk_bits)
        return WeightDistribution(tuple(int(c) for c in counts))
    if code.n - code.dim <= MAX_WEIGHT_DIM:
        dual = _enumerate_weights(dual_generator(code), chunk_bits)
        return WeightDistribution(macwilliams(dual, code.n))
    raise ValueError(f"weight enumeration needs dim <= {MAX_WEIGHT_DIM} or co-dimension "
                     f"<= {MAX_WEIGHT_DIM}, got dim {code.dim} of length {code.n}")


def weight_bounds_log2(n: int, rate: float, size_log2: float, i: int) -> dict:
    """log2 of both weight bounds at weight i with the sub-exponential factor dropped."""
    istar = min(i, n - i)
    base = 2.0 ** (1.0 - rate) - 1.0
    if istar == 0:
        bound1 = 0.0
    elif base <= 0:
        bound1 = math.inf
    else:
        bound1 = istar * math.log2(1.0 / base)
    cutoff = (1.0 - 2.0 ** (rate - 1.0)) * n
    small = 2.0 - 2.0 ** rate
    if istar == 0:
        regime1 = size_log2 - n * rate
    elif small <= 0:
        regime1 = math.inf
    else:
        regime1 = size_log2 - istar * math.log2(small) - (n - istar) * rate
    regime2 = math.log2(comb(n, istar)) + size_log2 - n
    in_first = istar <= cutoff
    return {"istar": istar, "bound1_log2": bound1,
            "bound2_log2": regime1 if in_first else regime2,
            "regime": 1 if in_first else 2,
            "bound2_regime1_log2": regime1, "bound2_regime2_log2": regime2,
            "cutoff": cutoff, "near_cutoff": abs(istar - cutoff) < 1.0}


def weight_bound_report(code: LinearCode, dist: WeightDistribution | None = None) -> Report:
    """Tabulate log2 a_i against both weight bounds (report only, no pass/fail)."""
    dist = weight_distribution(code) if dist is None else dist
    size_log2 = float(code.dim)
    doubly_transitive = isinstance(code, RMCode)  # affine-invariant, hence doubly transitive
    rep = Report("weight-report", {"code": repr(code), "n": code.n, "dim": code.dim,
                                   "rate": code.rate, "doubly_transitive": doubly_transitive})
    for i, a in enumerate(dist.counts):
        b = weight_bounds_log2(code.n, code.rate, size_log2, i)
        log_a = math.log2(a) if a else -math.inf
        rep.add({"i": i, "a_i": str(a), "log2_ai": log_a, "istar": b["istar"],
                 "bound1_log2": b["bound1_log2"], "bound2_log2": b["bound2_log2"],
                 "regime": b["regime"], "gap1": b["bound1_log2"] - log_a if a else math.inf,
                 "gap2": b["bound2_log2"] - log_a if a else math.inf,
                 "bound2_regime1_log2": b["bound2_regime1_log2"],
                 "bound2_regime2_log2": b["bound2_regime2_log2"],
                 "near_cutoff": b["near_cutoff"]})
    return rep


WEIGHT_CSV_COLUMNS = ("i", "a_i", "log2_ai", "bound1_log2", "bound2_log2", "regime")


def decode_indices(code: LinearCode, received: np.ndarray) -> np.ndarray:
    """Index of a nearest codeword for each received row; ties -> lowest index."""
    r = np.atleast_2d(np.asarray(received, dtype=np.uint8))
    if r.shape[1] != code.n:
        raise ValueError(f"received words must have length {code.n}")
    # correlation n - 2 d(r, c) in the +/-1 domain; exact in float32 for n <= 2^24
    corr = (1.0 - 2.0 * r).astype(np.float32) @ code._codebook_pm.T
    return np.argmax(corr, axis=1)


def ml_decode(code: LinearCode, received) -> np.ndarray:
    """Nearest codeword to ``received`` (lowest message index among ties)."""
    if code.dim > MAX_DECODE_DIM:
        raise ValueError(f"exhaustive decoding needs dim <= {MAX_DECODE_DIM}, got {code.dim}")
    return code.codebook[int(decode_indices(code, np.asarray(received))[0])].copy()


@dataclass
class SimulationResult:
    code: str
    n: int
    rate: float
    p: float
    trials: int
    errors: int
    block_error_rate: float
    ci_low: float
    ci_high: float
    confidence: float
    seed: int


def _check_p(p: float) -> float:
    if not 0.0 <= p <= 0.5:
        raise ValueError("crossover probability must lie in [0, 1/2]")
    return float(p)


def bsc_block_error(code: LinearCode, p: float, trials: int, seed=0, batch: int = 4096,
                    confidence: float = 0.99) -> SimulationResult:
    """Monte Carlo block-error rate of exhaustive ML decoding on BSC(p).

    Each trial sends a uniformly random codeword, so the lowest-index tie rule
    is averaged over transmitted words. Batches draw from independent
    substreams keyed by batch index.
    """
    p = _check_p(p)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if code.dim > MAX_DECODE_DIM:
        raise ValueError(f"exhaustive decoding needs dim <= {MAX_DECODE_DIM}, got {code.dim}")
    nbatches = -(-trials // batch)
    errors = 0
    for b, rng in enumerate(substreams(seed, nbatches, code.n, code.dim)):
        size = min(batch, trials - b * batch)
        msgs = rng.integers(0, 1 << code.dim, size=size)
        noise = (rng.random((size, code.n)) < p).astype(np.uint8)
        received = code.codebook[msgs] ^ noise
        errors += int(np.count_nonzero(decode_indices(code, received) != msgs))
    prop = wilson_interval(errors, trials, confidence)
    return SimulationResult(repr(code) if isinstance(code, RMCode) else f"[{code.n},{code.dim}]",
                            code.n, code.rate, p, trials, errors, prop.rate, prop.low, prop.high,
                            confidence, int(seed))


def exact_block_error(code: LinearCode, p: float) -> float:
    """Block-error probability by summing over every codeword and error pattern."""
    p = _check_p(p)
    if code.n > MAX_EXACT_BLOCK:
        raise ValueError(f"exhaustive error patterns need n <= {MAX_EXACT_BLOCK}")
    patterns = np.arange(1 << code.n)
    ebits = ((patterns[:, None] >> np.arange(code.n)) & 1).astype(np.uint8)
    weights = ebits.sum(axis=1)
    prob = np.power(p, weights) * np.power(1.0 - p, code.n - weights)
    wrong = np.zeros(1 << code.n)
    for idx, c in enumerate(code.codebook):
        wrong += decode_indices(code, c ^ ebits) != idx
    return float(np.dot(prob, wrong) / (1 << code.dim))


def repetition_block_error(n: int, p: float) -> float:
    """Exact block error of the length-n repetition code under lowest-index ties
    with a uniform transmitted bit: a tie at n/2 flips is lost half the time."""
    p = _check_p(p)
    tail = sum(comb(n, j) * p ** j * (1 - p) ** (n - j) for j in range(n // 2 + 1, n + 1))
    if n % 2 == 0:
        tail += 0.5 * comb(n, n // 2) * p ** (n // 2) * (1 - p) ** (n // 2)
    return tail


def non_increasing_pairs(results: Sequence[SimulationResult], confidence: float = 0.95) -> list[dict]:
    """Pairwise directional check: member j+1 fails only if its error rate is
    significantly above member j (lower bound of j+1 above upper bound of j)."""
    out = []
    for a, b in zip(results, results[1:]):
        ia = wilson_interval(a.errors, a.trials, confidence)
        ib = wilson_interval(b.errors, b.trials, confidence)
        margin = ia.high - ib.low
        out.append({"description": f"{a.code} -> {b.code}", "rate_from": a.block_error_rate,
                    "rate_to": b.block_error_rate, "upper_from": ia.high, "lower_to": ib.low,
                    "margin": margin, "passed": bool(margin >= 0)})
    return out


def family_threshold_report(family: Iterable[tuple[int, int]], p: float, trials: int = 100_000,
                            seed=0, confidence: float = 0.95, below_only: bool = False) -> Report:
    """Per-member rate vs threshold and empirical error rate, plus the directional
    check over consecutive members (all of them, or only those below threshold)."""
    p = _check_p(p)
    thr = threshold(p)
    rep = Report("rm-threshold", {"p": p, "threshold": thr, "capacity": capacity(p),
                                  "trials": trials, "seed": seed, "confidence": confidence,
                                  "below_only": below_only,
                                  "transmission": "uniform random codeword"})
    compared = []
    for idx, (r, m) in enumerate(family):
        code = RMCode(r, m)
        sim = bsc_block_error(code, p, trials, seed=seed + idx, confidence=confidence)
        is_below = code.rate < thr
        rep.add({"description": repr(code), "r": r, "m": m, "n": code.n, "rate": code.rate,
                 "threshold": thr, "below_threshold": is_below, "errors": sim.errors,
                 "block_error_rate": sim.block_error_rate, "ci_low": sim.ci_low,
                 "ci_high": sim.ci_high})
        if is_below or not below_only:
            compared.append(sim)
    rep.extend(non_increasing_pairs(compared, confidence))
    return rep
