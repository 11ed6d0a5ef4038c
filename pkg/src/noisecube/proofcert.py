"""Exact-arithmetic certificate for the concavity step, for any integer q >= 2.

The one-dimensional inequality reduces to nonnegativity on x >= 0 of the
degree-(2q+1) polynomial

    M_q(x) = (q-2) x (x+2) ((1+x)^(2q-1) + 1) - (2-2x)(1+x)^(2q-1)
             + (4x+2)(1+x) + x (x^2-2x-2)(1+x)^(q-1),

which holds once coef_0 = coef_1 = coef_2 = 0 and coef_k >= 0 for
3 <= k <= 2q+1. Those coefficients are controlled through a quadratic Q(k)
and a cubic P(k). Everything here runs on Python ints and Fractions; no
floating point is used.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Union

Number = Union[int, Fraction]

DEFAULT_Q_MAX = 64


class CertificateFailure(AssertionError):
    """An exact check failed; the message carries the operands."""


def binom(a: int, b: int) -> int:
    """C(a, b) with C(a, b) = 0 for b < 0 or b > a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def falling(a: int, m: int) -> int:
    """a (a-1) ... (a-m+1); the empty product is 1."""
    out = 1
    for i in range(m):
        out *= a - i
    return out


class ExactPolynomial:
    """Univariate polynomial with int or Fraction coefficients, index = power.

    ``degree`` is the declared degree and may exceed the actual one; the
    ``coeffs`` property pads with zeros up to it.
    """

    __slots__ = ("_c", "_declared")

    def __init__(self, coeffs: Iterable[Number] = (), degree: int | None = None):
        c = [_exact(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)
        actual = len(c) - 1
        if degree is not None and degree < actual:
            raise ValueError(f"declared degree {degree} below actual degree {actual}")
        self._declared = actual if degree is None else degree

    @classmethod
    def x(cls) -> "ExactPolynomial":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Number) -> "ExactPolynomial":
        return cls((c,))

    @classmethod
    def binomial_power(cls, a: int, b: Number = 1, s: Number = 1) -> "ExactPolynomial":
        """(b + s x)^a expanded with binomial coefficients."""
        if a < 0:
            raise ValueError("negative power")
        b, s = _exact(b), _exact(s)
        return cls(comb(a, j) * b ** (a - j) * s ** j for j in range(a + 1))

    @property
    def degree(self) -> int:
        return self._declared

    @property
    def actual_degree(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple:
        return self._c + (0,) * (self._declared + 1 - len(self._c))

    def with_degree(self, degree: int) -> "ExactPolynomial":
        return ExactPolynomial(self._c, degree)

    def __getitem__(self, k: int) -> Number:
        return self._c[k] if 0 <= k < len(self._c) else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactPolynomial):
            other = _lift(other)
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self) -> str:
        return f"ExactPolynomial({list(self.coeffs)!r})"

    def __add__(self, other) -> "ExactPolynomial":
        other = _lift(other)
        n = max(len(self._c), len(other._c))
        return ExactPolynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial(-v for v in self._c)

    def __sub__(self, other) -> "ExactPolynomial":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "ExactPolynomial":
        return _lift(other) - self

    def __mul__(self, other) -> "ExactPolynomial":
        other = _lift(other)
        if not self._c or not other._c:
            return ExactPolynomial()
        out = [0] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return ExactPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ExactPolynomial":
        if e < 0:
            raise ValueError("negative power")
        result, base = ExactPolynomial((1,)), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x: Number) -> Number:
        acc: Number = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def derivative(self) -> "ExactPolynomial":
        return ExactPolynomial(k * c for k, c in enumerate(self._c) if k)

    def is_coefficientwise_nonnegative(self) -> bool:
        return all(c >= 0 for c in self._c)


def _exact(v) -> Number:
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    raise TypeError(f"exact coefficients only (int or Fraction), got {type(v).__name__}")


def _lift(v) -> ExactPolynomial:
    return v if isinstance(v, ExactPolynomial) else ExactPolynomial.const(v)


def _check_q(q: int) -> int:
    if isinstance(q, bool) or not isinstance(q, int) or q < 2:
        raise ValueError(f"q must be an integer >= 2, got {q!r}")
    return q


# -- the master polynomial and its coefficients -----------------------------

def expand_master_polynomial(q: int) -> ExactPolynomial:
    """M_q expanded by exact polynomial arithmetic, declared degree 2q+1."""
    _check_q(q)
    x = ExactPolynomial.x()
    u = ExactPolynomial.binomial_power(2 * q - 1)
    v = ExactPolynomial.binomial_power(q - 1)
    master = ((q - 2) * x * (x + 2) * (u + 1)
              - (2 - 2 * x) * u
              + (4 * x + 2) * (1 + x)
              + x * (x * x - 2 * x - 2) * v)
    return master.with_degree(2 * q + 1)


def low_coefficients(q: int) -> tuple[int, int, int]:
    """coef_0, coef_1, coef_2 written term by term as they arise from M_q."""
    _check_q(q)
    c0 = -2 + 2
    c1 = 4 * (q - 2) - 2 * (2 * q - 1) + 2 + 6 - 2
    c2 = ((q - 2) * (2 + 2 * (2 * q - 1)) - 2 * binom(2 * q - 1, 2)
          + 2 * (2 * q - 1) + 4 - 2 - 2 * (q - 1))
    return c0, c1, c2


def coef_formula(q: int, k: int) -> int:
    """coef_k of M_q from the six-binomial form, 3 <= k <= 2q+1."""
    _check_q(q)
    if not 3 <= k <= 2 * q + 1:
        raise ValueError(f"k must lie in [3, {2 * q + 1}], got {k}")
    a = 2 * q - 1
    return (-2 * binom(a, k) + (2 * q - 2) * binom(a, k - 1) + (q - 2) * binom(a, k - 2)
            - 2 * binom(q - 1, k - 1) - 2 * binom(q - 1, k - 2) + binom(q - 1, k - 3))


def R(q: int, k: int) -> int:
    """Second bracket of the factored coefficient: k^2 + (2q-3) k - (2q^2 + 4q - 2)."""
    return k * k + (2 * q - 3) * k - (2 * q * q + 4 * q - 2)


def coef_factored(q: int, k: int) -> Fraction:
    """coef_k as [(2q-1)...(2q-k+2)/k!] (-Q(k)) + [(q-1)...(q-k+3)/(k-1)!] R(k)."""
    first = Fraction(falling(2 * q - 1, k - 2), factorial(k)) * -eval_Q(q, k)
    second = Fraction(falling(q - 1, k - 3), factorial(k - 1)) * R(q, k)
    return first + second


# -- Q, P and their claims ---------------------------------------------------

def Q_coefficients(q: int) -> tuple[int, int, int]:
    """(A, B, C) with Q(k) = A k^2 - B k + C."""
    return q + 2, 4 * q * q + 5 * q + 2, 4 * q * (2 * q + 1)


def eval_Q(q: int, k: int) -> int:
    A, B, C = Q_coefficients(q)
    return A * k * k - B * k + C


def Q_discriminant(q: int) -> int:
    A, B, C = Q_coefficients(q)
    return B * B - 4 * A * C


def eval_P(q: int, k: int) -> int:
    return ((q + 3) * k ** 3 - 3 * (2 * q * q + 3 * q + 3) * k ** 2
            + 2 * (4 * q ** 3 + 12 * q * q + 7 * q + 3) * k - 8 * q * (q + 1) * (2 * q + 1))


def eval_dP(q: int, k: int) -> int:
    return (3 * (q + 3) * k * k - 6 * (2 * q * q + 3 * q + 3) * k
            + 2 * (4 * q ** 3 + 12 * q * q + 7 * q + 3))


def P_derivative_discriminant(q: int) -> int:
    return 36 * (2 * q * q + 3 * q + 3) ** 2 - 24 * (q + 3) * (4 * q ** 3 + 12 * q * q + 7 * q + 3)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class CheckList:
    """Named exact checks; failures keep their operands in ``detail``."""
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(ok), "" if ok else detail))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failed(self) -> list:
        return [c for c in self.checks if not c.ok]

    def raise_on_failure(self) -> None:
        if not self.ok:
            raise CertificateFailure("; ".join(f"{c.name}: {c.detail}" for c in self.failed))


def verify_coefficients(q: int, master: ExactPolynomial | None = None) -> CheckList:
    """Zero prefix, nonnegativity, and formula/expansion agreement for every k."""
    _check_q(q)
    master = expand_master_polynomial(q) if master is None else master
    out = CheckList()
    c = master.coeffs
    out.add("degree", master.degree == 2 * q + 1 and master.actual_degree <= 2 * q + 1,
            f"declared {master.degree}, actual {master.actual_degree}")
    out.add("zero_prefix", c[0] == c[1] == c[2] == 0, f"coef_0..2 = {c[:3]}")
    out.add("low_coefficient_displays", low_coefficients(q) == tuple(c[:3]),
            f"displays {low_coefficients(q)} vs expansion {c[:3]}")
    for k in range(3, 2 * q + 2):
        out.add(f"nonneg[k={k}]", c[k] >= 0, f"coef_{k} = {c[k]}")
        fk = coef_formula(q, k)
        out.add(f"formula[k={k}]", fk == c[k], f"formula {fk} vs expansion {c[k]}")
    return out


def verify_Q_lemma(q: int) -> CheckList:
    """Q(k) <= 0 on [3, 2q+1], the two root-bound inequalities, and the discriminant."""
    _check_q(q)
    A, B, C = Q_coefficients(q)
    out = CheckList()
    for k in range(3, 2 * q + 2):
        out.add(f"Q<=0[k={k}]", eval_Q(q, k) <= 0, f"Q({k}) = {eval_Q(q, k)}")
    out.add("9A+C<=3B", 9 * A + C <= 3 * B, f"A={A} B={B} C={C}")
    out.add("3B-9A-C=4q^2+2q-12", 3 * B - 9 * A - C == 4 * q * q + 2 * q - 12,
            f"{3 * B - 9 * A - C}")
    m = 2 * q + 1
    out.add("(2q+1)^2A+C<=(2q+1)B", m * m * A + C <= m * B, f"A={A} B={B} C={C}")
    D = Q_discriminant(q)
    out.add("discriminant_identity", D == 16 * q ** 4 + 8 * q ** 3 - 39 * q * q - 12 * q + 4, f"D={D}")
    out.add("discriminant_positive", D > 0, f"D={D}")
    out.add("16q^4+8q^3>=80q^2", 16 * q ** 4 + 8 * q ** 3 >= 80 * q * q, "")
    return out


def p_branch(q: int) -> str:
    """Which argument covers P' on [3, q+2]."""
    return "negative-discriminant" if P_derivative_discriminant(q) < 0 else "root-beyond-interval"


def verify_P_claims(q: int) -> CheckList:
    """Endpoint and derivative identities of P, their signs, the discriminant case
    split, the reduction identity tying P to Q and R, and P(k) >= 0 on [3, q+2]
    by direct evaluation."""
    _check_q(q)
    out = CheckList()
    p3, pq2, dp3 = eval_P(q, 3), eval_P(q, q + 2), eval_dP(q, 3)
    out.add("P(3)=2(4q^3-3q^2-10q+9)", p3 == 2 * (4 * q ** 3 - 3 * q * q - 10 * q + 9), f"P(3)={p3}")
    out.add("P(3)>=2(5q^2-10q+9)>=18", p3 >= 2 * (5 * q * q - 10 * q + 9) >= 18, f"P(3)={p3}")
    out.add("P(q+2)=q(3q^3-q-2)", pq2 == q * (3 * q ** 3 - q - 2), f"P(q+2)={pq2}")
    out.add("P(q+2)>0", pq2 > 0, f"P(q+2)={pq2}")
    out.add("P'(3)=8q^3-12q^2-13q+33", dp3 == 8 * q ** 3 - 12 * q * q - 13 * q + 33, f"P'(3)={dp3}")
    out.add("P'(3)>0", dp3 > 0, f"P'(3)={dp3}")
    D = P_derivative_discriminant(q)
    if D < 0:
        out.add("branch:negative-discriminant", all(eval_dP(q, k) > 0 for k in range(3, q + 3)),
                f"D={D}")
    else:
        # larger root of P' is (2q^2+3q+3)/(q+3) + sqrt(D)/(6(q+3))
        lead = Fraction(2 * q * q + 3 * q + 3, q + 3)
        out.add("branch:root-beyond-interval", lead > q + 2, f"D={D} lead={lead}")
    for k in range(3, q + 3):
        reduced = (2 * q - k + 2) * -eval_Q(q, k) + k * R(q, k)
        out.add(f"P=reduction[k={k}]", reduced == eval_P(q, k), f"{reduced} vs {eval_P(q, k)}")
        out.add(f"P>=0[k={k}]", eval_P(q, k) >= 0, f"P({k})={eval_P(q, k)}")
        out.add(f"falling_dominance[k={k}]",
                falling(2 * q - 1, k - 3) >= falling(q - 1, k - 3) >= 0, "")
    return out


def verify_case2(q: int, master: ExactPolynomial | None = None) -> CheckList:
    """For q+3 <= k <= 2q+1 the (q-1)-binomials vanish and coef_k equals
    [(2q-1)...(2q-k+2)/k!] (-Q(k)) >= 0."""
    _check_q(q)
    master = expand_master_polynomial(q) if master is None else master
    out = CheckList()
    for k in range(q + 3, 2 * q + 2):
        vanish = (binom(q - 1, k - 1), binom(q - 1, k - 2), binom(q - 1, k - 3))
        out.add(f"binomials_vanish[k={k}]", vanish == (0, 0, 0), f"{vanish}")
        out.add(f"combination_zero[k={k}]",
                2 * vanish[0] + 2 * vanish[1] - vanish[2] == 0, f"{vanish}")
        prefactor = Fraction(falling(2 * q - 1, k - 2), factorial(k))
        value = prefactor * -eval_Q(q, k)
        out.add(f"factored=expansion[k={k}]", value == master[k], f"{value} vs {master[k]}")
        out.add(f"prefactor*(-Q)>=0[k={k}]", prefactor >= 0 and -eval_Q(q, k) >= 0,
                f"prefactor={prefactor} Q={eval_Q(q, k)}")
    return out


def verify_factored_coefficients(q: int) -> CheckList:
    """coef_formula agrees with the two-bracket factored display for every k >= 3."""
    out = CheckList()
    for k in range(3, 2 * q + 2):
        a, b = coef_formula(q, k), coef_factored(q, k)
        out.add(f"factored[k={k}]", a == b, f"binomial {a} vs factored {b}")
    return out


def spot_check_points(count: int = 20) -> list[Fraction]:
    """Deterministic nonnegative rationals spanning several scales."""
    return [Fraction(i * i, 7) if i % 2 else Fraction(1, i + 1) for i in range(count)]


@dataclass
class Certificate:
    q: int
    degree: int
    coeffs: list
    zero_prefix_ok: bool
    all_nonneg: bool
    formula_ok: bool
    q_lemma_ok: bool
    p_claims_ok: bool
    case2_ok: bool
    factored_ok: bool
    spot_check_ok: bool
    p_branch: str
    passed: bool
    failures: list = field(default_factory=list)
    runtime: float = 0.0


def certify(q: int) -> Certificate:
    """Run every exact check for one q and collect the machine-readable record."""
    start = time.perf_counter()
    master = expand_master_polynomial(q)
    coef = verify_coefficients(q, master)
    qlem = verify_Q_lemma(q)
    pcl = verify_P_claims(q)
    c2 = verify_case2(q, master)
    fac = verify_factored_coefficients(q)
    spot = all(master(x) >= 0 for x in spot_check_points())
    zero_ok = all(c.ok for c in coef.checks if c.name == "zero_prefix")
    nonneg_ok = all(c.ok for c in coef.checks if c.name.startswith("nonneg"))
    formula_ok = all(c.ok for c in coef.checks
                     if c.name.startswith(("formula", "low_coefficient", "degree")))
    failed = [f"{c.name}: {c.detail}" for lst in (coef, qlem, pcl, c2, fac) for c in lst.failed]
    if not spot:
        failed.append("spot_check: M_q(x) < 0 at a sample point")
    passed = not failed
    return Certificate(q, master.degree, [str(c) for c in master.coeffs], zero_ok, nonneg_ok,
                       formula_ok, qlem.ok, pcl.ok, c2.ok, fac.ok, spot, p_branch(q), passed,
                       failed, time.perf_counter() - start)


def certify_range(q_values: Iterable[int]) -> list[Certificate]:
    return [certify(q) for q in q_values]


# -- polynomial identities in q, certified by evaluation plus a degree count --

_IDENTITIES_IN_Q = {
    # name: (degree bound in q, lhs(q), rhs(q))
    "P(3)": (3, lambda q: eval_P(q, 3), lambda q: 2 * (4 * q ** 3 - 3 * q * q - 10 * q + 9)),
    "P(q+2)": (4, lambda q: eval_P(q, q + 2), lambda q: q * (3 * q ** 3 - q - 2)),
    "P'(3)": (3, lambda q: eval_dP(q, 3), lambda q: 8 * q ** 3 - 12 * q * q - 13 * q + 33),
    "disc(Q)": (4, Q_discriminant, lambda q: 16 * q ** 4 + 8 * q ** 3 - 39 * q * q - 12 * q + 4),
    "3B-9A-C": (2, lambda q: 3 * Q_coefficients(q)[1] - 9 * Q_coefficients(q)[0] - Q_coefficients(q)[2],
                lambda q: 4 * q * q + 2 * q - 12),
    "(2q+1)B-(2q+1)^2A-C": (
        3,
        lambda q: ((2 * q + 1) * Q_coefficients(q)[1] - (2 * q + 1) ** 2 * Q_coefficients(q)[0]
                   - Q_coefficients(q)[2]),
        lambda q: 2 * q * (q - 2) * (2 * q + 1)),
}

# bivariate identities in (q, k): (degree bound in each variable, lhs, rhs)
_IDENTITIES_IN_QK = {
    "P=(2q-k+2)(-Q)+kR": (3, eval_P, lambda q, k: (2 * q - k + 2) * -eval_Q(q, k) + k * R(q, k)),
    "case2-bracket=-Q": (
        3,
        lambda q, k: (-2 * (2 * q - k) * (2 * q - k + 1) + (2 * q - 2) * (2 * q - k + 1) * k
                      + (q - 2) * k * (k - 1)),
        lambda q, k: -eval_Q(q, k)),
}


def certify_identities(q_values: Iterable[int]) -> list[dict]:
    """Each identity is a polynomial of known degree bound d; agreement on more
    than d distinct points (a (d+1)x(d+1) grid for two variables) makes it an
    identity. Records state the bound and the number of points used."""
    qs = sorted(set(q_values))
    records = []
    for name, (deg, lhs, rhs) in _IDENTITIES_IN_Q.items():
        bad = [q for q in qs if lhs(q) != rhs(q)]
        records.append({"identity": name, "variables": "q", "degree_bound": deg,
                        "points": len(qs), "agree": not bad,
                        "passed": not bad and len(qs) > deg, "mismatches": bad})
    ks = range(0, 8)
    for name, (deg, lhs, rhs) in _IDENTITIES_IN_QK.items():
        grid = [(q, k) for q in qs for k in ks]
        bad = [(q, k) for q, k in grid if lhs(q, k) != rhs(q, k)]
        enough = len(qs) > deg and len(ks) > deg
        records.append({"identity": name, "variables": "q,k", "degree_bound": deg,
                        "points": len(grid), "agree": not bad,
                        "passed": not bad and enough, "mismatches": bad})
    return records


# -- the reduction chain at a rational sample point --------------------------

def _H_poly(q: int) -> ExactPolynomial:
    return (ExactPolynomial.binomial_power(q, 1, -1) + ExactPolynomial.binomial_power(q)) * Fraction(1, 2)


def _pow(base: Fraction, e: int) -> Fraction:
    return base ** e  # Fraction handles negative exponents exactly


def check_inequality_chain(q: int, y) -> CheckList:
    """Verify every algebraic step from G'' <= 0 down to M_q(x) >= 0 at one rational y.

    Identities are checked for exact equality; each inequality form is checked
    to hold, and the y-, t- and x-forms to share a sign once multiplied by the
    stated positive factors.
    """
    _check_q(q)
    y = Fraction(y)
    if not 0 < y < 1:
        raise ValueError("y must lie strictly between 0 and 1")
    out = CheckList()
    H = _H_poly(q)
    H1, H2 = H.derivative(), H.derivative().derivative()
    h, h1, h2 = H(y), H1(y), H2(y)
    w = 1 - y * y
    A, B = (1 + y) ** (q - 1), (1 - y) ** (q - 1)

    # (a) simplification of y H'' H - y H'^2 + H' H
    core = y * h2 * h - y * h1 * h1 + h1 * h
    closed = q * (q - 1) * y * _pow(w, q - 2) + Fraction(q, 4) * ((1 + y) ** (2 * q - 2) - (1 - y) ** (2 * q - 2))
    out.add("identity:yH''H-yH'^2+H'H", core == closed, f"{core} vs {closed}")

    den = 4 * (q - 1) * y * _pow(w, q - 2) + A * A - B * B
    ratio = q * y * (A - B) ** 2 / den
    out.add("identity:ratio", y * h1 * h1 / core == ratio, f"{y * h1 * h1 / core} vs {ratio}")

    # derivative of the ratio: differentiate N/D as polynomials in y
    yy = ExactPolynomial.x()
    Ap, Bp = ExactPolynomial.binomial_power(q - 1), ExactPolynomial.binomial_power(q - 1, 1, -1)
    Wp = ExactPolynomial((1, 0, -1))
    Np = q * yy * (Ap - Bp) ** 2
    Dp = 4 * (q - 1) * yy * Wp ** (q - 2) + Ap * Ap - Bp * Bp
    dratio = (Np.derivative()(y) * Dp(y) - Np(y) * Dp.derivative()(y)) / Dp(y) ** 2
    X = (A - B) ** 2 + 8 * (q - 1) ** 2 * y * y * _pow(w, q - 3)
    Y = 4 * (q - 1) * (y - 3 * y ** 3) * _pow(w, q - 3)
    display = (q * (A * A - B * B) * X + q * (A - B) ** 2 * Y) / den ** 2
    out.add("identity:derivative_display", dratio == display, f"{dratio} vs {display}")
    out.add("holds:derivative_comparison", h1 / h <= display, f"H'/H={h1 / h} rhs={display}")

    expanded = (h / h1) * (q * (A * A - B * B) * X + q * (A - B) ** 2 * Y)
    four = (A + B) ** 2 * X + (A * A - B * B) * Y + y * (A * A - B * B) * X + y * (A - B) ** 2 * Y
    out.add("identity:expanded_rhs", expanded == four, f"{expanded} vs {four}")

    pre = 4 * (q - 1) * y * _pow(w, q - 3)
    rL = 2 * (A * A - B * B) * w + 4 * (q - 1) * y * _pow(w, q - 1)
    rR = (2 * (A + B) ** 2 * (q - 1) * y + (A * A - B * B) * (1 - 3 * y * y)
          + 2 * (A * A - B * B) * (q - 1) * y * y + (A - B) ** 2 * (y - 3 * y ** 3))
    sL, sR = pre * rL, pre * rR + y * (A * A - B * B) * (A - B) ** 2
    out.add("identity:simplified", four - den ** 2 == sR - sL, f"{four - den ** 2} vs {sR - sL}")
    out.add("positive:dropped_term", y * (A * A - B * B) * (A - B) ** 2 >= 0 and pre > 0, "")

    yL = (2 * q - 4) * y * ((1 + y) ** (2 * q - 1) + (1 - y) ** (2 * q - 1))
    yR = (w * ((1 - 3 * y) * (1 + y) ** (2 * q - 2) - (1 + 3 * y) * (1 - y) ** (2 * q - 2))
          + 2 * y * (1 - 3 * y * y) * _pow(w, q - 1))
    out.add("identity:rearranged", rR - rL == yL - yR, f"{rR - rL} vs {yL - yR}")

    t = (1 + y) / (1 - y)
    tL = (q - 2) * (t * t - 1) * (_pow(t, q) + _pow(t, 1 - q))
    tR = (4 - 2 * t) * _pow(t, q) - (4 * t - 2) * _pow(t, 2 - q) - (t - 1) * (t * t - 4 * t + 1)
    scale = (t + 1) ** 3 / _pow(w, q - 1)
    out.add("identity:y_to_t_lhs", yL * scale == 4 * tL, f"{yL * scale} vs {4 * tL}")
    out.add("identity:y_to_t_rhs", yR * scale == 4 * tR, f"{yR * scale} vs {4 * tR}")

    x = t - 1
    mx = expand_master_polynomial(q)(x)
    out.add("identity:t_to_x", (tL - tR) * _pow(t, q - 1) == mx, f"{(tL - tR) * _pow(t, q - 1)} vs {mx}")

    signs = {(yL > yR) - (yL < yR), (tL > tR) - (tL < tR), (mx > 0) - (mx < 0)}
    out.add("sign_equivalent:y,t,x", len(signs) == 1, f"signs {signs}")
    out.add("holds:y_form", yL >= yR, f"{yL} < {yR}")
    out.add("holds:t_form", tL >= tR, f"{tL} < {tR}")
    out.add("holds:x_form", mx >= 0, f"M({x}) = {mx}")
    return out
