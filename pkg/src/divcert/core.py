"""Exact integer arithmetic primitives.

Everything here is arbitrary-precision and deterministic: the sieve, trial
division factorization, Euler's totient, multiplicative orders, Legendre /
Kummer valuations of factorials and binomials, base-p digit expansions and
the Lucas product for binomials modulo a prime.

Divisibility of a binomial coefficient by a modulus is always decided
through p-adic valuations of the factorials involved; the binomial itself
is never materialized on that path.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass

from .errors import BudgetExceededError

# Inputs to factorize() beyond this are rejected: trial division must stay
# deterministic and fast, and nothing in the engine needs larger moduli.
FACTOR_CEILING_DEFAULT = 10**8

# Sieve memory budget (one byte per candidate).
SIEVE_BUDGET_DEFAULT = 10**8

# binom_exact() is an oracle for small instances only.
BINOM_EXACT_BUDGET_DEFAULT = 100_000

# Fixed Miller-Rabin witness set, proven deterministic for n < 3.317e24
# (Sorenson & Webster).  Larger inputs fall back to trial division.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_PROVEN_LIMIT = 3_317_044_064_679_887_385_961_981


def _sieve_budget() -> int:
    return int(os.environ.get("DIVCERT_BUDGET_PRIME", SIEVE_BUDGET_DEFAULT))


def gcd(a: int, b: int) -> int:
    """Greatest common divisor; gcd(a, 0) = a.  Rejects gcd(0, 0)."""
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return math.gcd(a, b)


def primes_up_to(limit: int, budget: int | None = None) -> list[int]:
    """All primes <= limit, ascending, by Eratosthenes sieve."""
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if limit > (budget if budget is not None else _sieve_budget()):
        raise BudgetExceededError(f"sieve limit {limit} exceeds budget")
    sieve = bytearray(b"\x01") * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            start = p * p
            sieve[start:limit + 1:p] = b"\x00" * ((limit - start) // p + 1)
    return [i for i, flag in enumerate(sieve) if flag]


def is_prime(n: int) -> bool:
    """Deterministic primality verdict."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < _MR_PROVEN_LIMIT:
        return _miller_rabin(n)
    return _trial_division_prime(n)


def _miller_rabin(n: int) -> bool:
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _trial_division_prime(n: int) -> bool:  # pragma: no cover - huge inputs only
    f = 41
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization: (prime, exponent) pairs, primes ascending."""

    factors: tuple[tuple[int, int], ...]
    value: int

    def __post_init__(self):
        prod = 1
        prev = 1
        for p, e in self.factors:
            if e < 1 or p <= prev:
                raise ValueError("factors must have ascending primes, exponents >= 1")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p
            prod *= p ** e
        if prod != self.value:
            raise ValueError("factor product does not equal value")


# Trial-division primes are sieved once and extended on demand.
_small_primes: list[int] = []
_small_primes_limit = 0
_small_primes_lock = threading.Lock()


def _trial_primes(limit: int) -> list[int]:
    global _small_primes, _small_primes_limit
    if limit <= _small_primes_limit:
        return _small_primes
    with _small_primes_lock:
        if limit > _small_primes_limit:
            new_limit = max(limit, 1024, 2 * _small_primes_limit)
            _small_primes = primes_up_to(new_limit)
            _small_primes_limit = new_limit
    return _small_primes


def factorize(n: int, ceiling: int = FACTOR_CEILING_DEFAULT) -> Factorization:
    """Prime factorization by trial division; n = 1 gives an empty list."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n > ceiling:
        raise BudgetExceededError(f"factorize input {n} exceeds ceiling {ceiling}")
    value = n
    out = []
    for p in _trial_primes(math.isqrt(n) + 1):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return Factorization(tuple(out), value)


def totient(n: int) -> int:
    """Euler's totient, from the prime factorization of n."""
    if n < 1:
        raise ValueError("totient requires n >= 1")
    result = n
    for p, _ in factorize(n).factors:
        result -= result // p
    return result


def radical(n: int) -> int:
    """Product of the distinct prime factors of n; radical(1) = 1."""
    r = 1
    for p, _ in factorize(n).factors:
        r *= p
    return r


def multiplicative_order(p: int, m: int) -> int:
    """Smallest s >= 1 with p**s == 1 (mod m)."""
    if m < 2:
        raise ValueError("multiplicative_order requires m >= 2")
    if math.gcd(p, m) != 1:
        raise ValueError(f"gcd({p}, {m}) != 1")
    s = totient(m)
    for q, _ in factorize(s).factors:
        while s % q == 0 and pow(p, s // q, m) == 1:
            s //= q
    assert pow(p, s, m) == 1 and totient(m) % s == 0
    return s


def base_p_digits(n: int, p: int) -> list[int]:
    """Base-p digits of n, least significant first; n = 0 gives [0]."""
    if p < 2:
        raise ValueError("base must be >= 2")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return [0]
    digits = []
    while n:
        n, d = divmod(n, p)
        digits.append(d)
    return digits


def legendre_valuation_factorial(n: int, p: int) -> int:
    """v_p(n!) by Legendre's floor sum, cross-checked via the digit-sum form."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    v = 0
    q = n // p
    while q:
        v += q
        q //= p
    # Independent route: (n - base-p digit sum) / (p - 1).
    assert v == (n - sum(base_p_digits(n, p))) // (p - 1)
    return v


@dataclass(frozen=True)
class ValuationCertificate:
    """v_p of binom(m, k), witnessed two ways (Legendre sums, Kummer carries)."""

    p: int
    m: int
    k: int
    valuation: int
    carry_count: int


def binom_valuation(m: int, k: int, p: int) -> ValuationCertificate:
    """p-adic valuation of binom(m, k) with its Kummer carry-count cross-check."""
    if k < 0 or k > m:
        raise ValueError("require 0 <= k <= m")
    v = (legendre_valuation_factorial(m, p)
         - legendre_valuation_factorial(k, p)
         - legendre_valuation_factorial(m - k, p))
    carries = _carry_count(k, m - k, p)
    assert v == carries, "Legendre and Kummer routes disagree"
    return ValuationCertificate(p, m, k, v, carries)


def _carry_count(a: int, b: int, p: int) -> int:
    count = 0
    carry = 0
    while a or b or carry:
        a, da = divmod(a, p)
        b, db = divmod(b, p)
        carry = 1 if da + db + carry >= p else 0
        count += carry
    return count


def lucas_binom_mod_p(m: int, k: int, p: int) -> int:
    """binom(m, k) mod p via the digitwise Lucas product."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 0 or k > m:
        return 0
    result = 1
    while k or m:
        m, dm = divmod(m, p)
        k, dk = divmod(k, p)
        if dk > dm:
            return 0
        result = result * (math.comb(dm, dk) % p) % p
    return result


def binom_exact(m: int, k: int, budget: int = BINOM_EXACT_BUDGET_DEFAULT) -> int:
    """Exact binomial coefficient; small-instance oracle only."""
    if k < 0 or k > m:
        raise ValueError("require 0 <= k <= m")
    if m > budget:
        raise BudgetExceededError(f"binom_exact argument {m} exceeds budget {budget}")
    return math.comb(m, k)


def divides_binomial(
    m: int, k: int, D: int, *, factor_ceiling: int = FACTOR_CEILING_DEFAULT
) -> tuple[bool, list[ValuationCertificate]]:
    """Does D divide binom(m, k)?  Decided prime-by-prime via valuations.

    Returns the verdict together with the full per-prime certificate list,
    whether or not the division holds.  The binomial is never computed.
    """
    if k < 0 or k > m:
        raise ValueError("require 0 <= k <= m")
    if D < 1:
        raise ValueError("modulus must be >= 1")
    verdict = True
    certificates = []
    for p, e in factorize(D, ceiling=factor_ceiling).factors:
        cert = binom_valuation(m, k, p)
        certificates.append(cert)
        if cert.valuation < e:
            verdict = False
    return verdict, certificates
