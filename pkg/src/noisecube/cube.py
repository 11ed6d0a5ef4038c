"""Nonnegative functions on the boolean cube {0,1}^n.

A function is stored as a dense table of 2^n floats indexed by the point's
bitmask, coordinate 1 being the least significant bit. Subsets of [n] use the
same convention: coordinate i belongs to the mask iff bit i-1 is set.

All norms are expectation norms under the uniform measure,
``||f||_q = (2^-n sum_x f(x)^q)^(1/q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_DIM = 24


class DegenerateFunctionError(ValueError):
    """Raised when a log-norm is requested for the identically zero function."""


@dataclass(frozen=True, eq=False)
class CubeFunction:
    n: int
    values: np.ndarray

    def __post_init__(self):
        self.values.flags.writeable = False

    def __call__(self, point: int) -> float:
        return float(self.values[point])

    def __len__(self) -> int:
        return self.values.shape[0]

    def __repr__(self) -> str:
        return f"CubeFunction(n={self.n}, values={self.values.tolist()!r})"

    def mean(self) -> float:
        return float(self.values.mean())

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def tensor(self) -> np.ndarray:
        """View of the table as a (2,)*n array whose axis j is coordinate j+1."""
        return _as_tensor(self.values, self.n)

    def allclose(self, other: "CubeFunction", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        return self.n == other.n and np.allclose(self.values, other.values, rtol=rtol, atol=atol)

    @classmethod
    def from_factors(cls, factors: Sequence[Sequence[float]]) -> "CubeFunction":
        """Product function f(x) = prod_i factors[i][x_i]."""
        table = np.ones(1)
        for pair in factors:
            a0, a1 = (float(v) for v in pair)
            # new coordinate becomes the most significant bit
            table = np.concatenate([table * a0, table * a1])
        return make_function(len(factors), table)


def _as_tensor(values: np.ndarray, n: int) -> np.ndarray:
    if n == 0:
        return values.reshape(())
    return values.reshape((2,) * n).transpose(tuple(range(n - 1, -1, -1)))


def _from_tensor(tensor: np.ndarray, n: int) -> np.ndarray:
    if n == 0:
        return np.asarray(tensor, dtype=float).reshape(1)
    return np.ascontiguousarray(tensor.transpose(tuple(range(n - 1, -1, -1)))).reshape(-1)


def _check_dim(n: int, cap: int = MAX_DIM) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"dimension must be a nonnegative integer, got {n!r}")
    if n > cap:
        raise ValueError(f"dimension {n} exceeds the cap of {cap} (table of 2^{n} reals)")


def make_function(n: int, values: Iterable[float], strict: bool = False,
                  max_dim: int = MAX_DIM) -> CubeFunction:
    """Validate a table of values and wrap it as a CubeFunction.

    With ``strict=True`` negative entries are rejected, as required by the
    inequality drivers.
    """
    _check_dim(n, max_dim)
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.shape[0] != 1 << n:
        raise ValueError(f"expected {1 << n} values for n={n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("function values must be finite")
    if strict and np.any(arr < 0):
        raise ValueError("function values must be nonnegative")
    return CubeFunction(int(n), arr)


def check_mask(n: int, mask: int) -> int:
    mask = int(mask)
    if mask < 0 or mask >> n:
        raise ValueError(f"subset mask {mask:#x} has bits outside [1..{n}]")
    return mask


def mask_from_coords(coords: Iterable[int]) -> int:
    """Bitmask of a set of 1-based coordinates."""
    mask = 0
    for i in coords:
        if i < 1:
            raise ValueError(f"coordinates are 1-based, got {i}")
        mask |= 1 << (i - 1)
    return mask


def coords_from_mask(mask: int) -> list[int]:
    return [i + 1 for i in range(int(mask).bit_length()) if mask >> i & 1]


def noise_vector(eps, n: int) -> np.ndarray:
    """Broadcast a scalar or per-coordinate noise rate to a validated length-n array."""
    arr = np.asarray(eps, dtype=float)
    arr = np.full(n, float(arr)) if arr.ndim == 0 else arr.reshape(-1)
    if arr.shape[0] != n:
        raise ValueError(f"noise vector has length {arr.shape[0]}, expected {n}")
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 0.5):
        raise ValueError("noise rates must lie in [0, 1/2]")
    return arr


def subcube_indicator(n: int, fixed: Mapping[int, int], normalize: bool = True) -> CubeFunction:
    """Indicator of {x : x_i = b_i for (i, b_i) in fixed}; optionally scaled to mean 1."""
    _check_dim(n)
    factors = [[1.0, 1.0] for _ in range(n)]
    for i, b in fixed.items():
        if not 1 <= i <= n:
            raise ValueError(f"coordinate {i} out of range 1..{n}")
        if b not in (0, 1):
            raise ValueError(f"fixed bit must be 0 or 1, got {b!r}")
        scale = 2.0 if normalize else 1.0
        factors[i - 1] = [scale, 0.0] if b == 0 else [0.0, scale]
    return CubeFunction.from_factors(factors)


def all_subcubes(n: int):
    """Yield every map coordinate -> bit (3^n of them)."""
    for code in range(3 ** n):
        fixed = {}
        for i in range(1, n + 1):
            code, digit = divmod(code, 3)
            if digit < 2:
                fixed[i] = digit
        yield fixed


def _power_mean(values: np.ndarray, q, axis=None):
    if math.isinf(q):
        return values.max(axis=axis)
    if q == 1:
        return values.mean(axis=axis)
    # scale by the max so tiny (or huge) values do not under/overflow in v**q
    top = values.max(axis=axis, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    out = safe * np.mean((values / safe) ** q, axis=axis, keepdims=True) ** (1.0 / q)
    return out.squeeze(axis=axis) if axis is not None else out.reshape(())


def norm(f: CubeFunction, q) -> float:
    """Expectation norm; q may be any real >= 1 or ``math.inf``."""
    if not (math.isinf(q) or q >= 1):
        raise ValueError(f"norm order must be >= 1 or inf, got {q!r}")
    vals = np.abs(f.values) if np.any(f.values < 0) else f.values
    return float(_power_mean(vals, q))


def conditional_expectation(f: CubeFunction, T: int) -> CubeFunction:
    """E(f|T): average over the coordinates outside T."""
    T = check_mask(f.n, T)
    if f.n == 0:
        return f
    drop = tuple(j for j in range(f.n) if not T >> j & 1)
    if not drop:
        return f
    tens = f.tensor()
    avg = np.broadcast_to(tens.mean(axis=drop, keepdims=True), tens.shape)
    return CubeFunction(f.n, _from_tensor(avg, f.n))


def apply_noise(f: CubeFunction, eps) -> CubeFunction:
    """T_eps f, one pairwise mixing pass per coordinate."""
    eps = noise_vector(eps, f.n)
    tens = f.tensor().copy()
    for j, e in enumerate(eps):
        if e == 0.0:
            continue
        tens = (1.0 - e) * tens + e * np.flip(tens, axis=j)
    return CubeFunction(f.n, _from_tensor(tens, f.n))


def apply_noise_coordinate(f: CubeFunction, i: int, eps_i: float) -> CubeFunction:
    """Noise on coordinate i (1-based) only."""
    if not 1 <= i <= f.n:
        raise ValueError(f"coordinate {i} out of range 1..{f.n}")
    eps = np.zeros(f.n)
    eps[i - 1] = eps_i
    return apply_noise(f, eps)


def walsh_hadamard(values: np.ndarray, n: int) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform: hat(S) = sum_x (-1)^{|x & S|} f(x)."""
    tens = _as_tensor(np.asarray(values, dtype=float), n).copy()
    for j in range(n):
        a = np.take(tens, 0, axis=j)
        b = np.take(tens, 1, axis=j)
        tens = np.stack([a + b, a - b], axis=j)
    return _from_tensor(tens, n)


def fourier_coefficients(f: CubeFunction) -> np.ndarray:
    """Coefficients of f in the character basis, normalized so hat(0) = mean(f)."""
    return walsh_hadamard(f.values, f.n) / (1 << f.n)


def apply_noise_spectral(f: CubeFunction, eps) -> CubeFunction:
    """T_eps via the character multipliers prod_{i in S} (1 - 2 eps_i).

    Kept as an independent cross-check of :func:`apply_noise`.
    """
    eps = noise_vector(eps, f.n)
    coeffs = fourier_coefficients(f)
    mult = np.ones(1)
    for e in eps:
        mult = np.concatenate([mult, mult * (1.0 - 2.0 * e)])
    return CubeFunction(f.n, walsh_hadamard(coeffs * mult, f.n))


def conditional_norm_table(f: CubeFunction, q) -> np.ndarray:
    """||E(f|T)||_q for every subset mask T, in O(n 3^n).

    Builds the table of all marginals (each axis gets a third slot holding the
    average over that coordinate), raises it to the q-th power once, and then
    collapses each axis either to the averaged slot (T excludes it) or to the
    mean of the two fixed slots (T includes it).
    """
    n = f.n
    tens = f.tensor()
    for j in range(n):
        avg = tens.mean(axis=j, keepdims=True)
        tens = np.concatenate([tens, avg], axis=j)
    infinite = math.isinf(q)
    work = tens if infinite or q == 1 else tens ** q
    for j in range(n):
        fixed = np.take(work, [0, 1], axis=j)
        collapsed = fixed.max(axis=j) if infinite else fixed.mean(axis=j)
        work = np.stack([np.take(work, 2, axis=j), collapsed], axis=j)
    table = _from_tensor(work, n)
    if not infinite and q != 1:
        table = table ** (1.0 / q)
    return table


def format_function(f: CubeFunction) -> str:
    """Text form: n on the first line, then the 2^n values in index order."""
    body = " ".join(repr(float(v)) for v in f.values)
    return f"{f.n}\n{body}\n"


def parse_function(text: str, strict: bool = False) -> CubeFunction:
    tokens = text.split()
    if not tokens:
        raise ValueError("empty function text")
    n = int(tokens[0])
    return make_function(n, [float(t) for t in tokens[1:]], strict=strict)


def read_function(path, strict: bool = False) -> CubeFunction:
    return parse_function(Path(path).read_text(), strict=strict)


def write_function(f: CubeFunction, path) -> None:
    Path(path).write_text(format_function(f))
