"""Exact polynomial algebra in q.

Cyclotomic polynomials, cyclotomic exponent vectors for quotients of
q-integers and q-binomial coefficients, dense expansion, and the structural
predicates (reciprocal, unimodal, non-negative).

The canonical internal form of a quotient expression is its cyclotomic
exponent vector: the expression sign * prod_d Phi_d(q)**e_d is a polynomial
iff every e_d is non-negative, which is decidable by floor arithmetic alone.
Dense coefficients are only produced on demand by :func:`expand`.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field

from . import core
from ._backend import div_one_minus_qt, mul_one_minus_qt
from .errors import BudgetExceededError

DEGREE_BUDGET_DEFAULT = 10**5

# Schoolbook multiplication switches to divide-and-conquer above this degree.
KARATSUBA_THRESHOLD = 4096


def degree_budget() -> int:
    return int(os.environ.get("DIVCERT_BUDGET_DEGREE", DEGREE_BUDGET_DEFAULT))


class IntPoly:
    """Dense polynomial over the integers; index i holds the coefficient of q^i.

    Normalized: no trailing zero coefficient, the zero polynomial is empty.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, x):
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] -= c
        return IntPoly(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly([-c for c in self.coeffs])

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(_mul(list(self.coeffs), list(other.coeffs)))

    def shift(self, k: int) -> "IntPoly":
        """Multiply by q**k."""
        if not self.coeffs:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"


def _mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    if min(len(a), len(b)) > KARATSUBA_THRESHOLD:
        return _karatsuba(a, b)
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _karatsuba(a: list, b: list) -> list:
    half = min(len(a), len(b)) // 2
    a0, a1 = a[:half], a[half:]
    b0, b1 = b[:half], b[half:]
    z0 = _mul(a0, b0)
    z2 = _mul(a1, b1)
    s0 = [x + y for x, y in _zip_pad(a0, a1)]
    s1 = [x + y for x, y in _zip_pad(b0, b1)]
    z1 = _mul(s0, s1)
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(z0):
        out[i] += c
        out[i + half] -= c
    for i, c in enumerate(z1):
        out[i + half] += c
    for i, c in enumerate(z2):
        out[i + half] -= c
        out[i + 2 * half] += c
    return out


def _zip_pad(a: list, b: list):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def exact_div(num: IntPoly, den: IntPoly) -> IntPoly:
    """Polynomial long division, remainder asserted zero."""
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if num.is_zero():
        return num
    rem = list(num.coeffs)
    d = list(den.coeffs)
    lead = d[-1]
    out = [0] * (len(rem) - len(d) + 1)
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(rem[i + len(d) - 1], lead)
        if r:
            raise ValueError("division leaves a remainder")
        out[i] = q
        if q:
            for j, dj in enumerate(d):
                rem[i + j] -= q * dj
    if any(rem):
        raise ValueError("division leaves a remainder")
    return IntPoly(out)


_cyclo_cache: dict[int, IntPoly] = {}
_cyclo_lock = threading.RLock()  # reentrant: the fill recurses on divisors


def cyclotomic(d: int) -> IntPoly:
    """The d-th cyclotomic polynomial.

    Computed as (q^d - 1) divided by the product of Phi_e over proper
    divisors e of d; the zero remainder of that division is an intrinsic
    self-check.  Results are memoized in a shared append-only cache.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    cached = _cyclo_cache.get(d)
    if cached is not None:
        return cached
    with _cyclo_lock:
        cached = _cyclo_cache.get(d)
        if cached is not None:
            return cached
        num = IntPoly([-1] + [0] * (d - 1) + [1])
        if d == 1:
            result = num
        else:
            den = IntPoly([1])
            for e in _divisors(d):
                if e < d:
                    den = den * cyclotomic(e)
            result = exact_div(num, den)
        _cyclo_cache[d] = result
        return result


def _divisors(n: int) -> list[int]:
    small, large = [], []
    for i in range(1, math.isqrt(n) + 1):
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
    return small + large[::-1]


def _mobius(n: int) -> int:
    mu = 1
    for _, e in core.factorize(n).factors:
        if e > 1:
            return 0
        mu = -mu
    return mu


@dataclass(frozen=True)
class CycloFactorization:
    """sign * prod_d Phi_d(q)**e_d, as a sparse exponent map."""

    exponents: dict[int, int] = field(default_factory=dict)
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if any(e == 0 for e in self.exponents.values()):
            raise ValueError("stored exponents must be nonzero")

    def degree(self) -> int:
        """Degree of the represented expression (may be meaningful only when
        it is a polynomial; in general the formal degree sum)."""
        return sum(e * core.totient(d) for d, e in self.exponents.items())


@dataclass(frozen=True)
class QuotientExpr:
    """prod_i (1-q^{m_i}) / prod_j (1-q^{n_j}) * qbinom(binom_m, binom_k).

    The numerator and denominator multisets must be balanced (equal
    cardinality) so that the (1-q) sign contributions cancel; unbalanced
    expressions are rejected rather than given a sign convention.
    """

    numerator_ms: tuple[int, ...]
    denominator_ns: tuple[int, ...]
    binom_m: int
    binom_k: int

    def __post_init__(self):
        if len(self.numerator_ms) != len(self.denominator_ns):
            raise ValueError("unbalanced quotient expression")
        if any(t < 1 for t in self.numerator_ms + self.denominator_ns):
            raise ValueError("q-integer indices must be positive")
        if not 0 <= self.binom_k <= self.binom_m:
            raise ValueError("require 0 <= binom_k <= binom_m")


def qbinom_factorization(m: int, k: int) -> CycloFactorization:
    """Cyclotomic exponents of the Gaussian polynomial [m, k]_q.

    e_d = floor(m/d) - floor(k/d) - floor((m-k)/d) for 2 <= d <= m; always
    non-negative, and e_1 = 0.
    """
    if not 0 <= k <= m:
        raise ValueError("require 0 <= k <= m")
    exps = {}
    for d in range(2, m + 1):
        e = m // d - k // d - (m - k) // d
        if e:
            exps[d] = e
    return CycloFactorization(exps)


def expr_factorization(expr: QuotientExpr) -> CycloFactorization:
    """Cyclotomic exponents of a full quotient expression.

    Each q-integer factor 1-q^t contributes chi(d | t) for every d >= 2;
    the d = 1 contributions cancel by the balanced invariant.
    """
    top = max([expr.binom_m, *expr.numerator_ms, *expr.denominator_ns])
    m, k = expr.binom_m, expr.binom_k
    exps: dict[int, int] = {}
    for d in range(2, top + 1):
        e = m // d - k // d - (m - k) // d
        for t in expr.numerator_ms:
            if t % d == 0:
                e += 1
        for t in expr.denominator_ns:
            if t % d == 0:
                e -= 1
        if e:
            exps[d] = e
    return CycloFactorization(exps)


def is_polynomial(f: CycloFactorization) -> bool:
    """True iff every stored exponent is non-negative."""
    return all(e >= 0 for e in f.exponents.values())


def expand(f: CycloFactorization, budget: int | None = None) -> IntPoly:
    """Multiply out sign * prod Phi_d**e_d exactly.

    Uses the Moebius identity Phi_d = prod_{e | d} (1-q^{d/e})^{mu(e)}
    (d >= 2) to reduce the whole product to passes of multiplication and
    exact division by binomials 1-q^t, each linear in the degree.  The
    final degree is asserted against sum e_d * phi(d).
    """
    if not is_polynomial(f):
        raise ValueError("expansion requires a polynomial (all exponents >= 0)")
    expected_degree = f.degree()
    limit = budget if budget is not None else degree_budget()
    if expected_degree > limit:
        raise BudgetExceededError(
            f"expansion degree {expected_degree} exceeds budget {limit}")

    sign = f.sign
    g: dict[int, int] = {}
    for d, e_d in f.exponents.items():
        if d == 1:
            # Phi_1 = q - 1 = -(1 - q).
            if e_d % 2:
                sign = -sign
            g[1] = g.get(1, 0) + e_d
            continue
        for e in _divisors(d):
            mu = _mobius(e)
            if mu:
                t = d // e
                g[t] = g.get(t, 0) + mu * e_d

    coeffs = [1]
    for t, e in sorted(g.items()):
        for _ in range(max(e, 0)):
            coeffs = mul_one_minus_qt(coeffs, t)
    for t, e in sorted(g.items()):
        for _ in range(max(-e, 0)):
            coeffs = div_one_minus_qt(coeffs, t)
    if sign < 0:
        coeffs = [-c for c in coeffs]
    result = IntPoly(coeffs)
    assert result.degree == expected_degree, "degree bookkeeping violated"
    return result


def expand_expr(expr: QuotientExpr, budget: int | None = None) -> IntPoly:
    """Expand a quotient expression directly from its q-integer factors.

    Equivalent to expand(expr_factorization(expr)) but skips the Moebius
    round-trip: the q-binomial is itself a balanced quotient of binomials
    1-q^t, so the expansion is 2k + |ms| multiplications and divisions.
    """
    f = expr_factorization(expr)
    if not is_polynomial(f):
        raise ValueError("expansion requires a polynomial expression")
    expected_degree = f.degree()
    limit = budget if budget is not None else degree_budget()
    if expected_degree > limit:
        raise BudgetExceededError(
            f"expansion degree {expected_degree} exceeds budget {limit}")
    m, k = expr.binom_m, expr.binom_k
    coeffs = [1]
    for t in expr.numerator_ms:
        coeffs = mul_one_minus_qt(coeffs, t)
    for i in range(1, k + 1):
        coeffs = mul_one_minus_qt(coeffs, m - k + i)
    for t in expr.denominator_ns:
        coeffs = div_one_minus_qt(coeffs, t)
    for i in range(1, k + 1):
        coeffs = div_one_minus_qt(coeffs, i)
    result = IntPoly(coeffs)
    assert result.degree == expected_degree, "degree bookkeeping violated"
    return result


def qbinom_poly(m: int, k: int, budget: int | None = None) -> IntPoly:
    """Gaussian polynomial [m, k]_q via the q-Pascal recurrence.

    Independent of the cyclotomic route; the two must agree (tested).
    """
    if not 0 <= k <= m:
        raise ValueError("require 0 <= k <= m")
    limit = budget if budget is not None else degree_budget()
    if k * (m - k) > limit:
        raise BudgetExceededError(
            f"q-binomial degree {k * (m - k)} exceeds budget {limit}")
    # [r, j] = [r-1, j-1] + q^j [r-1, j], row by row.
    row = [[1]]
    for r in range(1, m + 1):
        new_row = [[1]]
        for j in range(1, r):
            prev = row[j]
            shifted = [0] * j + prev
            combined = list(row[j - 1]) + [0] * (len(shifted) - len(row[j - 1]))
            for i, c in enumerate(shifted):
                combined[i] += c
            new_row.append(combined)
        new_row.append([1])
        row = new_row
    return IntPoly(row[k])


def is_reciprocal(P: IntPoly) -> bool:
    """Palindromic coefficient sequence; the zero polynomial counts as such."""
    c = P.coeffs
    return c == c[::-1]


def is_unimodal(P: IntPoly) -> bool:
    """Non-negative coefficients rising to a peak and then falling."""
    c = P.coeffs
    if any(x < 0 for x in c):
        return False
    falling = False
    for i in range(1, len(c)):
        if c[i] < c[i - 1]:
            falling = True
        elif c[i] > c[i - 1] and falling:
            return False
    return True


def is_nonneg(P: IntPoly) -> tuple[bool, list[tuple[int, int]]]:
    """Verdict plus every index with a negative coefficient and its value."""
    negatives = [(i, c) for i, c in enumerate(P.coeffs) if c < 0]
    return not negatives, negatives


def unimodal_quotient_check(P: IntPoly, m: int, n: int) -> bool:
    """Is (1-q^m)/(1-q^n) * P(q) a polynomial with non-negative coefficients?

    Rejects the input if the quotient is not a polynomial.  For reciprocal
    unimodal P with m <= n this must come out true; the property tests
    exercise exactly that law.
    """
    if not 1 <= m <= n:
        raise ValueError("require 1 <= m <= n")
    coeffs = mul_one_minus_qt(list(P.coeffs), m)
    quotient = div_one_minus_qt(coeffs, n)
    ok, _ = is_nonneg(IntPoly(quotient))
    return ok
