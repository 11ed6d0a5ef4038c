"""The inequality on the one-dimensional cube and the concavity argument behind it.

A mean-one nonnegative function on {0,1} is (1 - x, 1 + x) with 0 <= x <= 1.
With F_q(y) = ln(((1-y)^q + (1+y)^q) / 2) one has q ln||f||_q = F(x) and
q ln||T_eps f||_q = F((1 - 2 eps) x), so the inequality reads
F((1-2eps) x) <= lambda(q, eps) F(x). It follows from concavity of
G(z) = ln F(e^z) on z <= 0.
"""

from __future__ import annotations

import math
from math import comb

import numpy as np

from .margin import EQUALITY_TOL, VerificationCase, _case_tags, lambda_param
from .reports import Report
from .stats import make_rng

Z_FLOOR = -30.0
CONCAVITY_STEP = 1e-3
CONCAVITY_TOL = 1e-8
ONEDIM_TOL = 1e-10


def F(q, y):
    """F_q(y) for 0 <= y <= 1, vectorized over y.

    Integer q sums the even binomial terms under log1p, which keeps full
    relative accuracy as y -> 0.
    """
    y = np.asarray(y, dtype=float)
    if math.isinf(q):
        raise ValueError("F is defined for finite q; use the max-norm form for q = inf")
    if float(q).is_integer():
        q = int(q)
        y2 = y * y
        tail = np.zeros_like(y)
        for j in range(q - q % 2, 1, -2):
            # Horner in y^2 over the even binomials C(q, j)
            tail = (tail + comb(q, j)) * y2
        out = np.log1p(tail)
    else:
        out = np.log(((1.0 - y) ** q + (1.0 + y) ** q) / 2.0)
    return float(out) if out.ndim == 0 else out


def G(q, z, floor: float = Z_FLOOR):
    """G(z) = ln F(e^z) for floor <= z <= 0."""
    z = np.asarray(z, dtype=float)
    if np.any(z < floor):
        raise ValueError(f"z below the underflow floor {floor}")
    out = np.log(F(q, np.exp(z)))
    return float(out) if np.ndim(out) == 0 else out


def onedim_log_norms(q, eps: float, x: float) -> tuple[float, float]:
    """(ln ||T_eps f||_q, lambda ln ||f||_q) for f = (1 - x, 1 + x).

    These are the two sides of the general inequality at n = 1 (the ln ||f||_1
    term vanishes).
    """
    lam = lambda_param(q, eps)
    if math.isinf(q):
        return math.log1p((1.0 - 2.0 * eps) * x), lam * math.log1p(x)
    return F(q, (1.0 - 2.0 * eps) * x) / q, lam * F(q, x) / q


def check_onedim_inequality(q, eps: float, x: float, tol: float = ONEDIM_TOL,
                            equality_tol: float = EQUALITY_TOL) -> VerificationCase:
    """F((1-2eps) x) <= lambda F(x); for q = inf the max-norm logs are compared directly."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    lam = lambda_param(q, eps)
    if math.isinf(q):
        lhs, rhs = math.log1p((1.0 - 2.0 * eps) * x), lam * math.log1p(x)
    else:
        lhs, rhs = F(q, (1.0 - 2.0 * eps) * x), lam * F(q, x)
    margin = rhs - lhs
    return VerificationCase(f"1-dim q={q} eps={eps} x={x}", lhs, rhs, margin,
                            bool(margin >= -tol), abs(margin) <= equality_tol,
                            tags=_case_tags(q))


def check_ratio_monotone(q, eps: float, x_grid, tol: float = ONEDIM_TOL) -> Report:
    """F((1-2eps) x) / F(x) <= F(1-2eps) / F(1) at each grid point in (0, 1]."""
    bound = F(q, 1.0 - 2.0 * eps) / F(q, 1.0)
    rep = Report("ratio-monotone", {"q": q, "eps": eps})
    for x in x_grid:
        if not 0.0 < x <= 1.0:
            raise ValueError("ratio grid must lie in (0, 1]")
        ratio = F(q, (1.0 - 2.0 * eps) * x) / F(q, x)
        margin = bound - ratio
        rep.add(VerificationCase(f"ratio q={q} eps={eps} x={x}", ratio, bound, margin,
                                 bool(margin >= -tol), abs(margin) <= EQUALITY_TOL))
    return rep


def default_z_grid(points: int = 200, low: float = -10.0, step: float = CONCAVITY_STEP):
    """Grid inside [low, 0] leaving room for the central difference at both ends."""
    return np.linspace(low + step, -step, points)


def second_differences(q, z_grid, step: float = CONCAVITY_STEP, floor: float = Z_FLOOR):
    """Raw central second differences G(z+h) - 2G(z) + G(z-h) (not divided by h^2)."""
    z = np.asarray(z_grid, dtype=float)
    return G(q, z + step, floor) - 2.0 * G(q, z, floor) + G(q, z - step, floor)


def concavity_table(q, z_grid=None, step: float = CONCAVITY_STEP) -> list[dict]:
    """Rows (z, G, second difference) for plotting."""
    z = default_z_grid(step=step) if z_grid is None else np.asarray(z_grid, dtype=float)
    g = G(q, z)
    d2 = second_differences(q, z, step)
    return [{"z": float(a), "G": float(b), "second_difference": float(c)}
            for a, b, c in zip(z, np.atleast_1d(g), np.atleast_1d(d2))]


def q2_closed_form(z):
    """Sign carrier of G'' for q = 2: ln(1 + u) - u with u = e^{2z}."""
    u = np.exp(2.0 * np.asarray(z, dtype=float))
    return np.log1p(u) - u


def check_concavity(q, z_grid=None, step: float = CONCAVITY_STEP, tol: float = CONCAVITY_TOL,
                    pairs: int = 200, seed=0, floor: float = Z_FLOOR) -> Report:
    """Second differences of G, the two-point superadditivity form
    G(0) + G(ln(1-2eps) + ln x) <= G(ln(1-2eps)) + G(ln x) on random pairs,
    and for q = 2 the closed-form sign."""
    z = default_z_grid(step=step) if z_grid is None else np.asarray(z_grid, dtype=float)
    if np.any(z - step < floor) or np.any(z + step > 0):
        raise ValueError(f"grid plus step must stay within [{floor}, 0]")
    rep = Report("concavity", {"q": q, "step": step, "tol": tol, "pairs": pairs, "seed": seed})
    for zi, d2 in zip(z, np.atleast_1d(second_differences(q, z, step, floor))):
        rep.add(VerificationCase(f"G'' q={q} z={zi:.6g}", float(d2), 0.0, float(-d2),
                                 bool(d2 <= tol), False, tags=("second-difference",)))
    rng = make_rng(seed, int(q) if not math.isinf(q) else 0)
    g0 = G(q, 0.0)
    for _ in range(pairs):
        eps = float(rng.uniform(0.0, 0.49))
        x = float(rng.uniform(1e-3, 1.0))
        a, b = math.log1p(-2.0 * eps), math.log(x)
        lhs = g0 + G(q, a + b, floor)
        rhs = G(q, a, floor) + G(q, b, floor)
        rep.add(VerificationCase(f"superadditivity q={q} eps={eps:.6g} x={x:.6g}",
                                 lhs, rhs, rhs - lhs, bool(rhs - lhs >= -ONEDIM_TOL),
                                 abs(rhs - lhs) <= EQUALITY_TOL, tags=("superadditivity",)))
    if q == 2:
        for zi, v in zip(z, q2_closed_form(z)):
            rep.add(VerificationCase(f"q=2 closed form z={zi:.6g}", float(v), 0.0, float(-v),
                                     bool(v <= 0.0), False, tags=("closed-form",)))
    return rep


def g_increasing_on_grid(q, z_grid=None) -> bool:
    """G strictly increases in z on the grid, i.e. decreases without bound as z -> -inf."""
    z = np.linspace(Z_FLOOR, 0.0, 301) if z_grid is None else np.asarray(z_grid, dtype=float)
    return bool(np.all(np.diff(G(q, z)) > 0))


def onedim_grid_cases(q_values, eps_grid, x_grid, tol: float = ONEDIM_TOL) -> list[VerificationCase]:
    return [check_onedim_inequality(q, e, x, tol=tol)
            for q in q_values for e in eps_grid for x in x_grid]

