"""q-side divisibility families.

The seven quotient families of q-binomials by q-integers, the
gcd-strengthened central quotient, the two-route B_{n,k} polynomials, the
gcd binomial quotient underlying all of them, the generalized q-Catalan
polynomials, and the negative-coefficient pattern checker for the
(1-q)^2/((1-q^{10n-1})(1-q^{15n-1})) [30n, 5n]_q family.

Polynomiality is always decided on cyclotomic exponent vectors; dense
coefficients are expanded only when a coefficient-level verdict
(non-negativity, negative positions) is requested and within budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import qpoly
from .errors import BudgetExceededError
from .qpoly import IntPoly, QuotientExpr


@dataclass(frozen=True)
class QFamilyVerdict:
    """Polynomiality / non-negativity verdict for one family instance.

    nonneg is None when the coefficient expansion was skipped (not
    requested, or degree over budget); negative_positions is empty iff
    nonneg is true.
    """

    family_id: str
    params: tuple[tuple[str, int], ...]
    polynomial: bool
    nonneg: bool | None
    negative_positions: tuple[tuple[int, int], ...]
    degree: int

    def __post_init__(self):
        if self.nonneg:
            assert self.polynomial
        if self.nonneg is not None:
            assert self.nonneg == (not self.negative_positions)


# The six (1-q)/(1-q^{cn-1}) families: (c, m-multiplier, k-multiplier).
SINGLE_QUOTIENT_FAMILIES = (
    (6, 12, 3),
    (6, 12, 4),
    (30, 60, 6),
    (30, 120, 40),
    (30, 120, 45),
    (66, 330, 88),
)


def _family_verdict(
    family_id: str,
    params: tuple[tuple[str, int], ...],
    expr: QuotientExpr,
    want_coefficients: bool,
    budget: int | None = None,
) -> QFamilyVerdict:
    f = qpoly.expr_factorization(expr)
    polynomial = qpoly.is_polynomial(f)
    degree = f.degree() if polynomial else 0
    nonneg = None
    negatives: tuple[tuple[int, int], ...] = ()
    if polynomial and want_coefficients:
        try:
            poly = qpoly.expand_expr(expr, budget=budget)
        except BudgetExceededError:
            pass
        else:
            ok, neg = qpoly.is_nonneg(poly)
            nonneg = ok
            negatives = tuple(neg)
    return QFamilyVerdict(family_id, params, polynomial, nonneg, negatives, degree)


def verify_q_families(
    n: int, expand_coefficients: bool = True, budget: int | None = None
) -> list[QFamilyVerdict]:
    """Verdicts for the seven quotient families at a given n.

    The six single-quotient families are checked for polynomiality and
    (when requested and affordable) non-negativity.  The seventh carries a
    polynomiality claim only; its coefficient pattern is the business of
    :func:`check_c330n88n`.
    """
    if n < 1:
        raise ValueError("require n >= 1")
    verdicts = []
    for c, mc, kc in SINGLE_QUOTIENT_FAMILIES:
        expr = QuotientExpr((1,), (c * n - 1,), mc * n, kc * n)
        verdicts.append(_family_verdict(
            f"{mc}n:{kc}n/{c}n-1", (("n", n),), expr,
            expand_coefficients, budget))
    expr = QuotientExpr((1, 1), (10 * n - 1, 15 * n - 1), 30 * n, 5 * n)
    verdicts.append(_family_verdict(
        "30n:5n/(10n-1)(15n-1)", (("n", n),), expr, False, budget))
    return verdicts


def verify_gcd_central_quotient(n: int, k: int) -> QFamilyVerdict:
    """Verdict for (1-q^{gcd(k,n)})/(1-q^n) [2n, n-k]_q, 0 <= k <= n.

    gcd(0, n) = n, so k = 0 reduces the quotient to [2n, n]_q times 1.
    Expected polynomial with non-negative coefficients.
    """
    if not 0 <= k <= n or n < 1:
        raise ValueError("require 1 <= n and 0 <= k <= n")
    g = math.gcd(k, n)
    expr = QuotientExpr((g,), (n,), 2 * n, n - k)
    return _family_verdict(
        "gcd-central", (("n", n), ("k", k)), expr, True)


def b_nk_poly(n: int, k: int) -> IntPoly:
    """(1-q^k)/(1-q^n) [2n, n-k]_q, for 1 <= k <= n, by two routes.

    The quotient definition and the difference form
    [2n-1, n-k]_q - q^k [2n-1, n-k-1]_q are both computed and must agree;
    coefficients are asserted non-negative.
    """
    if not 1 <= k <= n:
        raise ValueError("require 1 <= k <= n")
    quotient = qpoly.expand_expr(QuotientExpr((k,), (n,), 2 * n, n - k))
    first = qpoly.qbinom_poly(2 * n - 1, n - k)
    if n - k - 1 >= 0:
        second = qpoly.qbinom_poly(2 * n - 1, n - k - 1).shift(k)
    else:
        second = IntPoly()
    difference = first - second
    assert quotient == difference, "quotient and difference routes disagree"
    ok, _ = qpoly.is_nonneg(quotient)
    assert ok, "coefficients unexpectedly negative"
    return quotient


def gcd_binomial_quotient_check(a: int, b: int) -> QFamilyVerdict:
    """Verdict for (1-q^{gcd(a,b)})/(1-q^{a+b}) [a+b, a]_q.

    Expected polynomial (the exponent of Phi_d is
    chi(d | gcd(a,b)) + floor((a+b-1)/d) - floor(a/d) - floor(b/d) >= 0)
    and non-negative.
    """
    if a < 1 or b < 1:
        raise ValueError("require a, b >= 1")
    expr = QuotientExpr((math.gcd(a, b),), (a + b,), a + b, a)
    return _family_verdict("gcd-quotient", (("a", a), ("b", b)), expr, True)


def verify_gcd_catalan_family(a: int, b: int, n: int) -> QFamilyVerdict:
    """Verdict for (1-q^{gcd(an, bn+1)})/(1-q^{bn+1}) [an+bn, an]_q.

    The second displayed form with denominator 1-q^{an+bn+1} and binomial
    [an+bn+1, an]_q is computed as well; the two exponent vectors are
    asserted identical.  The verdict itself is the gcd binomial quotient
    check at (an, bn+1).
    """
    if min(a, b, n) < 1:
        raise ValueError("require a, b, n >= 1")
    g = math.gcd(a * n, b * n + 1)
    form1 = QuotientExpr((g,), (b * n + 1,), a * n + b * n, a * n)
    form2 = QuotientExpr((g,), (a * n + b * n + 1,), a * n + b * n + 1, a * n)
    f1 = qpoly.expr_factorization(form1)
    f2 = qpoly.expr_factorization(form2)
    assert f1.exponents == f2.exponents, "the two displayed forms differ"
    verdict = gcd_binomial_quotient_check(a * n, b * n + 1)
    return QFamilyVerdict(
        "gcd-catalan", (("a", a), ("b", b), ("n", n)),
        verdict.polynomial, verdict.nonneg, verdict.negative_positions,
        verdict.degree)


def generalized_q_catalan(a: int, b: int, n: int, budget: int | None = None) -> IntPoly:
    """(1-q^a)/(1-q^{bn+1}) [an+bn, an]_q, expanded; non-negativity asserted.

    gcd(an, bn+1) divides a (since gcd(n, bn+1) = 1), which is what makes
    the expression a polynomial.
    """
    if min(a, b, n) < 1:
        raise ValueError("require a, b, n >= 1")
    assert a % math.gcd(a * n, b * n + 1) == 0
    poly = qpoly.expand_expr(
        QuotientExpr((a,), (b * n + 1,), a * n + b * n, a * n), budget=budget)
    ok, _ = qpoly.is_nonneg(poly)
    assert ok, "coefficients unexpectedly negative"
    return poly


def check_c330n88n(n: int, budget: int | None = None) -> tuple[int, list[tuple[int, int]]]:
    """Negative coefficients of (1-q)^2/((1-q^{10n-1})(1-q^{15n-1})) [30n, 5n]_q.

    Returns (degree, negative positions with values).  The conjectured
    pattern at n is exactly [(1, -1), (125n^2 - 25n + 3, -1)]; any other
    outcome is reported as found, never suppressed.
    """
    if n < 1:
        raise ValueError("require n >= 1")
    expr = QuotientExpr((1, 1), (10 * n - 1, 15 * n - 1), 30 * n, 5 * n)
    f = qpoly.expr_factorization(expr)
    assert qpoly.is_polynomial(f)
    degree = f.degree()
    assert degree == 125 * n * n - 25 * n + 4
    poly = qpoly.expand_expr(expr, budget=budget)
    _, negatives = qpoly.is_nonneg(poly)
    return degree, negatives


def conjectured_pattern(n: int) -> list[tuple[int, int]]:
    """The expected negative positions for check_c330n88n at n."""
    return [(1, -1), (125 * n * n - 25 * n + 3, -1)]
