import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from divcert import qpoly
from divcert._kernels import div_one_minus_qt as pure_div
from divcert._kernels import mul_one_minus_qt as pure_mul
from divcert._backend import BACKEND, div_one_minus_qt, mul_one_minus_qt
from divcert.errors import BudgetExceededError
from divcert.qpoly import IntPoly, QuotientExpr


class TestIntPoly:
    def test_normalization(self):
        assert IntPoly([1, 2, 0, 0]).coeffs == (1, 2)
        assert IntPoly([0, 0]).is_zero()
        assert IntPoly().degree == -1

    def test_arith(self):
        p = IntPoly([1, 1])
        q = IntPoly([-1, 1])
        assert (p * q).coeffs == (-1, 0, 1)
        assert (p + q).coeffs == (0, 2)
        assert (p - p).is_zero()
        assert (-q).coeffs == (1, -1)
        assert p.shift(2).coeffs == (0, 0, 1, 1)

    def test_evaluate(self):
        p = IntPoly([1, 2, 3])
        assert p.evaluate(1) == 6
        assert p.evaluate(10) == 321

    def test_mul_matches_schoolbook_above_threshold(self):
        rng = random.Random(7)
        n = qpoly.KARATSUBA_THRESHOLD + 10
        a = [rng.randrange(-5, 6) for _ in range(n)]
        b = [rng.randrange(-5, 6) for _ in range(n)]
        out = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        assert (IntPoly(a) * IntPoly(b)).coeffs == IntPoly(out).coeffs

    def test_exact_div(self):
        num = IntPoly([-1, 0, 0, 0, 0, 0, 1])  # q^6 - 1
        den = IntPoly([-1, 0, 1])  # q^2 - 1
        assert qpoly.exact_div(num, den).coeffs == (1, 0, 1, 0, 1)
        with pytest.raises(ValueError):
            qpoly.exact_div(IntPoly([1, 1, 1]), IntPoly([-1, 1]))


class TestKernels:
    def test_mul(self):
        assert pure_mul([1, 1], 2) == [1, 1, -1, -1]

    def test_div_roundtrip(self):
        rng = random.Random(11)
        for _ in range(200):
            c = [rng.randrange(-9, 10) for _ in range(rng.randrange(1, 40))]
            t = rng.randrange(1, 8)
            assert pure_div(pure_mul(c, t), t)[:len(c)] == c

    def test_div_rejects_nondivisible(self):
        with pytest.raises(ValueError):
            pure_div([1, 1, 1], 2)

    def test_backend_agrees_with_pure(self):
        rng = random.Random(13)
        for _ in range(200):
            c = [rng.randrange(-9, 10) for _ in range(rng.randrange(1, 60))]
            t = rng.randrange(1, 9)
            assert mul_one_minus_qt(list(c), t) == pure_mul(list(c), t)
            prod = pure_mul(list(c), t)
            assert div_one_minus_qt(list(prod), t) == pure_div(list(prod), t)

    def test_backend_reported(self):
        assert BACKEND in ("c", "python")


class TestCyclotomic:
    def test_small(self):
        assert qpoly.cyclotomic(1).coeffs == (-1, 1)
        assert qpoly.cyclotomic(2).coeffs == (1, 1)
        assert qpoly.cyclotomic(3).coeffs == (1, 1, 1)
        assert qpoly.cyclotomic(6).coeffs == (1, -1, 1)
        assert qpoly.cyclotomic(105).coeffs[7] == -2

    def test_degree_is_totient(self):
        from divcert import core
        for d in range(1, 120):
            assert qpoly.cyclotomic(d).degree == core.totient(d)

    def test_product_identity(self):
        # prod_{e | d} Phi_e(q) == q^d - 1 for every d up to 200.
        for d in range(1, 201):
            prod = IntPoly([1])
            for e in qpoly._divisors(d):
                prod = prod * qpoly.cyclotomic(e)
            assert prod.coeffs == (-1,) + (0,) * (d - 1) + (1,)


class TestQbinomFactorization:
    def test_example_6_3(self):
        f = qpoly.qbinom_factorization(6, 3)
        assert f.exponents == {2: 1, 4: 1, 5: 1, 6: 1}
        assert f.degree() == 9

    def test_edges(self):
        assert qpoly.qbinom_factorization(5, 0).exponents == {}
        assert qpoly.qbinom_factorization(5, 5).exponents == {}

    def test_always_polynomial(self):
        for m in range(0, 40):
            for k in range(0, m + 1):
                f = qpoly.qbinom_factorization(m, k)
                assert qpoly.is_polynomial(f)
                assert f.degree() == k * (m - k)


class TestQuotientExpr:
    def test_balanced_required(self):
        with pytest.raises(ValueError):
            QuotientExpr((1, 2), (3,), 4, 2)

    def test_positive_indices_required(self):
        with pytest.raises(ValueError):
            QuotientExpr((0,), (3,), 4, 2)

    def test_expr_factorization_example(self):
        # (1-q)/(1-q^5) [12, 3]_q.
        expr = QuotientExpr((1,), (5,), 12, 3)
        f = qpoly.expr_factorization(expr)
        assert qpoly.is_polynomial(f)
        # e_5 = (12//5 - 3//5 - 9//5) - 1 = 0, so 5 is absent from the map.
        assert 5 not in f.exponents

    def test_nonpolynomial_detected(self):
        # (1-q)/(1-q^7) [4, 2]_q has e_7 = -1.
        expr = QuotientExpr((1,), (7,), 4, 2)
        f = qpoly.expr_factorization(expr)
        assert f.exponents[7] == -1
        assert not qpoly.is_polynomial(f)


class TestExpand:
    def test_qbinom_4_2(self):
        f = qpoly.qbinom_factorization(4, 2)
        assert qpoly.expand(f).coeffs == (1, 1, 2, 1, 1)

    def test_matches_recurrence(self):
        for m in range(0, 31):
            for k in range(0, m + 1):
                via_cyclo = qpoly.expand(qpoly.qbinom_factorization(m, k))
                via_rec = qpoly.qbinom_poly(m, k)
                assert via_cyclo == via_rec

    def test_expand_expr_matches_expand(self):
        for m, k, u, v in [(12, 3, 1, 5), (12, 4, 1, 5), (10, 5, 5, 10),
                           (8, 4, 2, 4), (20, 6, 3, 9)]:
            expr = QuotientExpr((u,), (v,), m, k)
            f = qpoly.expr_factorization(expr)
            if not qpoly.is_polynomial(f):
                continue
            assert qpoly.expand_expr(expr) == qpoly.expand(f)

    def test_rejects_nonpolynomial(self):
        expr = QuotientExpr((1,), (7,), 4, 2)
        with pytest.raises(ValueError):
            qpoly.expand_expr(expr)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            qpoly.expand_expr(QuotientExpr((), (), 1000, 500), budget=100)
        with pytest.raises(BudgetExceededError):
            qpoly.qbinom_poly(1000, 500, budget=100)

    def test_negative_phi1_sign(self):
        f = qpoly.CycloFactorization({1: 1})
        assert qpoly.expand(f).coeffs == (-1, 1)


class TestPredicates:
    def test_reciprocal(self):
        assert qpoly.is_reciprocal(IntPoly([1, 2, 1]))
        assert not qpoly.is_reciprocal(IntPoly([1, 2]))
        assert qpoly.is_reciprocal(IntPoly())

    def test_unimodal(self):
        assert qpoly.is_unimodal(IntPoly([1, 2, 2, 1]))
        assert not qpoly.is_unimodal(IntPoly([1, 0, 1]))
        assert not qpoly.is_unimodal(IntPoly([1, -1, 1]))

    def test_nonneg(self):
        ok, neg = qpoly.is_nonneg(IntPoly([1, -1, 0, 2, -3]))
        assert not ok
        assert neg == [(1, -1), (4, -3)]
        assert qpoly.is_nonneg(IntPoly([0, 1]))[0]

    def test_qbinoms_reciprocal_unimodal(self):
        for m in range(0, 31):
            for k in range(0, m + 1):
                p = qpoly.qbinom_poly(m, k)
                assert qpoly.is_reciprocal(p)
                assert qpoly.is_unimodal(p)
                assert p.evaluate(1) == math.comb(m, k)


class TestUnimodalQuotient:
    def test_examples(self):
        assert qpoly.unimodal_quotient_check(IntPoly([1, 1, 1]), 2, 3)

    def test_rejects_nonpolynomial_quotient(self):
        with pytest.raises(ValueError):
            qpoly.unimodal_quotient_check(IntPoly([1]), 2, 3)

    def test_catalan_instances(self):
        # (1-q)/(1-q^(n+1)) [2n, n]_q is non-negative for every n <= 30.
        for n in range(1, 31):
            assert qpoly.unimodal_quotient_check(qpoly.qbinom_poly(2 * n, n), 1, n + 1)

    def test_random_qbinom_triples(self):
        # 500 seeded triples: P a random Gaussian polynomial (reciprocal and
        # unimodal), 1 <= m <= n, with (1-q^m)/(1-q^n) P a polynomial.  The
        # quotient must then be non-negative.
        rng = random.Random(2026)
        done = 0
        while done < 500:
            bm = rng.randrange(2, 17)
            bk = rng.randrange(1, bm)
            mm = rng.randrange(1, bm + 1)
            nn = rng.randrange(mm, bm + 1)
            expr = QuotientExpr((mm,), (nn,), bm, bk)
            if not qpoly.is_polynomial(qpoly.expr_factorization(expr)):
                continue
            assert qpoly.unimodal_quotient_check(qpoly.qbinom_poly(bm, bk), mm, nn)
            done += 1

    @given(st.integers(1, 10), st.integers(1, 10))
    @settings(max_examples=60)
    def test_qbinom_absorption_identity(self, k, extra):
        # (1-q^k)/(1-q^m) [m, k]_q = [m-1, k-1]_q, always divisible and
        # non-negative, so the law must report true.
        m = k + extra
        assert qpoly.unimodal_quotient_check(qpoly.qbinom_poly(m, k), k, m)
