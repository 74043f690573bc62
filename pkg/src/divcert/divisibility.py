"""Integer-side divisibility verifiers and searches.

Covers: the first n at which bn+1 fails to divide binom(an+bn, an) together
with its totient/order-derived upper bound, the gcd-reduced modulus law, the
fixed congruence families (12n choose 3n mod 6n-1 and friends), witnesses
showing no pair (a, b) works modulo 3n-1, prime windows (x, 20x/19) for
primes congruent to 2 mod 3, the Chebyshev theta function on that residue
class, and the exact rational decomposition identity behind the bound.

All binomial divisibility decisions go through p-adic valuations; no big
binomial coefficient is ever materialized on a decision path.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction

from . import core
from .errors import SearchExhaustedError

FAB_SCAN_CAP_DEFAULT = 10**7
CONJ2_PRIME_CAP_DEFAULT = 10**5


@dataclass(frozen=True)
class BoundInfo:
    """Upper bound (p**s - 1)/(a+b) for the first failing n.

    p is the smallest prime dividing a but not b; s is the multiplicative
    order of p modulo a+b.
    """

    p: int
    bound: int
    s: int


def fab_bound(a: int, b: int) -> BoundInfo | None:
    """Order-derived bound for f(a, b); None when rad(a) divides b."""
    if a < 1 or b < 1:
        raise ValueError("require a, b >= 1")
    for p, _ in core.factorize(a).factors:
        if b % p:
            s = core.multiplicative_order(p, a + b)
            n = pow(p, s) - 1
            assert n % (a + b) == 0
            return BoundInfo(p, n // (a + b), s)
    return None


@dataclass(frozen=True)
class FabResult:
    """Verdict for the smallest n with (bn+1) not dividing binom(an+bn, an).

    verdict is "found" (with n and a per-prime certificate), "proven_zero"
    (every prime factor of a divides b, so divisibility holds for all n), or
    "inconclusive" (the caller's scan cap undercut the theorem bound).
    """

    a: int
    b: int
    verdict: str
    n: int | None = None
    n_max: int | None = None
    bound_used: int | None = None
    certificate: tuple[core.ValuationCertificate, ...] | None = None


def f_ab(a: int, b: int, n_cap: int | None = None) -> FabResult:
    """Compute f(a, b) by bounded scan.

    When rad(a) | b, gcd(a, bn+1) = 1 for every n and the gcd-reduced
    modulus law forces divisibility for all n, so the value is 0 with
    proof.  Otherwise the order bound makes a scan up to the bound
    complete; "inconclusive" can only occur when n_cap undercuts it.
    """
    if a < 1 or b < 1:
        raise ValueError("require a, b >= 1")
    if b % core.radical(a) == 0:
        return FabResult(a, b, "proven_zero")
    info = fab_bound(a, b)
    assert info is not None
    cap = min(n_cap if n_cap is not None else FAB_SCAN_CAP_DEFAULT, info.bound)
    for n in range(1, cap + 1):
        ok, certs = core.divides_binomial((a + b) * n, a * n, b * n + 1)
        if not ok:
            return FabResult(a, b, "found", n=n, bound_used=info.bound,
                             certificate=tuple(certs))
    return FabResult(a, b, "inconclusive", n_max=cap, bound_used=info.bound)


def verify_reduced_modulus(a: int, b: int, n: int) -> bool:
    """Does (bn+1)/gcd(a, bn+1) divide binom(an+bn, an)?

    Expected true for all positive a, b, n; exists as a regression executor.
    """
    if min(a, b, n) < 1:
        raise ValueError("require a, b, n >= 1")
    modulus = (b * n + 1) // math.gcd(a, b * n + 1)
    ok, _ = core.divides_binomial((a + b) * n, a * n, modulus)
    return ok


def lucas_residue_family(
    a: int, b: int, beta: int, p: int, r_max: int
) -> list[tuple[int, int]]:
    """Residues binom(an, bn+beta) mod p along the family n = (p^{r phi(a)}-1)/a.

    Each returned residue is asserted to be +-1 mod p: the top argument is
    all (p-1)-digits in base p, so the Lucas product collapses to a sign.
    """
    if not a > b >= 1:
        raise ValueError("require a > b >= 1")
    if math.gcd(p, a) != 1:
        raise ValueError(f"gcd({p}, {a}) != 1")
    if not core.is_prime(p):
        raise ValueError(f"{p} is not prime")
    phi = core.totient(a)
    out = []
    for r in range(1, r_max + 1):
        top = pow(p, r * phi) - 1
        assert top % a == 0
        n = top // a
        if not a * n > b * n + beta > 0:
            continue
        residue = core.lucas_binom_mod_p(a * n, b * n + beta, p)
        assert residue in (1 % p, p - 1), "residue is not a unit sign"
        out.append((n, residue))
    return out


@dataclass(frozen=True)
class CongruenceCheck:
    label: str
    m: int
    k: int
    modulus: int
    ok: bool


@dataclass(frozen=True)
class CongruenceFamiliesVerdict:
    n: int
    checks: tuple[CongruenceCheck, ...]

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)


# (label, m-multiplier, k-multiplier, modulus linear forms c*n - 1).
_CONGRUENCE_CHECKS = (
    ("6n:3n mod 2n-1", 6, 3, (2,)),
    ("2n:n mod 2n-1", 2, 1, (2,)),
    ("12n:3n mod 6n-1", 12, 3, (6,)),
    ("12n:4n mod 6n-1", 12, 4, (6,)),
    ("30n:5n mod (10n-1)(15n-1)", 30, 5, (10, 15)),
    ("60n:6n mod 30n-1", 60, 6, (30,)),
    ("120n:40n mod 30n-1", 120, 40, (30,)),
    ("120n:45n mod 30n-1", 120, 45, (30,)),
    ("330n:88n mod 66n-1", 330, 88, (66,)),
)


def verify_congruence_families(n: int) -> CongruenceFamiliesVerdict:
    """Run the fixed congruence family checks at a given n; all expected true.

    Composite moduli are checked factor by factor; the two factors 10n-1 and
    15n-1 are asserted coprime, so per-factor divisibility is equivalent to
    divisibility by the product.
    """
    if n < 1:
        raise ValueError("require n >= 1")
    checks = []
    for label, mc, kc, mod_coeffs in _CONGRUENCE_CHECKS:
        factors = [c * n - 1 for c in mod_coeffs]
        if len(factors) > 1:
            assert math.gcd(*factors) == 1
        ok = True
        for modulus in factors:
            if modulus <= 1:
                continue
            good, _ = core.divides_binomial(mc * n, kc * n, modulus)
            ok = ok and good
        modulus = math.prod(factors)
        checks.append(CongruenceCheck(label, mc * n, kc * n, modulus, ok))
    return CongruenceFamiliesVerdict(n, tuple(checks))


@dataclass(frozen=True)
class Conj2Witness:
    """A prime power p^e exactly dividing 3n-1 with
    v_p(binom((a+b)n, an)/(3n-1)) < 0."""

    a: int
    b: int
    p: int
    n: int
    e: int
    valuation: int

    def __post_init__(self):
        modulus = 3 * self.n - 1
        assert modulus % self.p ** self.e == 0
        assert (modulus // self.p ** self.e) % self.p != 0
        assert self.valuation < 0


# Inner search knobs for negative_valuation_witness: cofactors m tried for
# each prime power p^e, and the ceiling on p^e itself.
_CONJ2_COFACTORS = (1, 2, 4)
_CONJ2_POWER_CAP = 10**7


def negative_valuation_witness(
    a: int, b: int, p_cap: int = CONJ2_PRIME_CAP_DEFAULT,
    power_cap: int = _CONJ2_POWER_CAP,
) -> Conj2Witness:
    """First (p, n) with p == 2 (mod 3), p <= p_cap, p^e || 3n-1 and
    v_p(binom((a+b)n, an)) < e.

    n runs over (m * p^e + 1)/3 for small cofactors m coprime to p; e = 1
    (so 3n-1 = p itself when m = 1) is exhausted over all primes before
    higher powers are tried, so the smallest single-prime witness is found
    first whenever one exists.  Higher powers are essential: for
    (a, b) == (2, 2) mod 3 a base-p carry always occurs at the lowest
    digit, so v_p is at least 1 and only moduli divisible by p^2 can fail.
    Exhaustion raises rather than returning a verdict.
    """
    if a < 1 or b < 1:
        raise ValueError("require a, b >= 1")
    primes = [p for p in core.primes_up_to(p_cap) if p % 3 == 2]
    e = 1
    while primes:
        alive = []
        for p in primes:
            q = p ** e
            if q > power_cap:
                continue
            alive.append(p)
            for m in _CONJ2_COFACTORS:
                if m % p == 0 or (m * q) % 3 != 2:
                    continue
                n = (m * q + 1) // 3
                cert = core.binom_valuation((a + b) * n, a * n, p)
                val = cert.valuation - e
                if val < 0:
                    return Conj2Witness(a, b, p, n, e, val)
        primes = alive
        e += 1
    raise SearchExhaustedError(
        f"no witness for (a, b) = ({a}, {b}) with primes up to {p_cap}")


@dataclass(frozen=True)
class PrimeWindowReport:
    """Least prime == 2 (mod 3) in (x, 20x/19) for each integer x in a range."""

    entries: tuple[tuple[int, int], ...]
    failures: tuple[int, ...]
    range: tuple[int, int]


def prime_window_verify(x_lo: int, x_hi: int) -> PrimeWindowReport:
    """Witness primes for every x in [x_lo, x_hi]; strict inequalities.

    A witness for x is the least prime p == 2 (mod 3) with x < p and
    19p < 20x.  Zero failures are expected on [530, 3761].
    """
    if not 2 <= x_lo <= x_hi:
        raise ValueError("require 2 <= x_lo <= x_hi")
    limit = (20 * x_hi) // 19 + 2
    candidates = [p for p in core.primes_up_to(limit) if p % 3 == 2]
    entries = []
    failures = []
    for x in range(x_lo, x_hi + 1):
        i = bisect.bisect_right(candidates, x)
        if i < len(candidates) and 19 * candidates[i] < 20 * x:
            entries.append((x, candidates[i]))
        else:
            failures.append(x)
    return PrimeWindowReport(tuple(entries), tuple(failures), (x_lo, x_hi))


@dataclass(frozen=True)
class ThetaValue:
    """Sum of log p over primes p <= x with p == 2 (mod 3), with error bound."""

    x: int
    value: float
    error_bound: float
    prime_count: int


def chebyshev_theta_3_2(x: int, budget: int | None = None) -> ThetaValue:
    """Chebyshev theta on the residue class 2 mod 3.

    Exactly-rounded float summation (math.fsum) of log p terms; the tracked
    error bound covers one ulp per log evaluation.  For x >= 3761 the value
    is asserted to lie strictly inside (0.49 x, 0.51 x) with margin beyond
    the error bound.
    """
    if x < 2:
        raise ValueError("require x >= 2")
    logs = [math.log(p) for p in core.primes_up_to(x, budget=budget) if p % 3 == 2]
    value = math.fsum(logs)
    error = len(logs) * 2.0**-52 * max(value, 1.0)
    if x >= 3761:
        assert value - error > 0.49 * x and value + error < 0.51 * x
    return ThetaValue(x, value, error, len(logs))


def verify_quotient_decomposition(a: int, b: int, n: int) -> bool:
    """Exact rational identity check:

    binom(an+bn, an)/(bn+1)
      = binom(an+bn, an-1) - ((a+b)/a) * binom(an+bn-1, an-2).

    Expected true for all a, b, n >= 1 with an >= 2.
    """
    if min(a, b, n) < 1 or a * n < 2:
        raise ValueError("require a, b, n >= 1 and an >= 2")
    lhs = Fraction(core.binom_exact((a + b) * n, a * n), b * n + 1)
    rhs = (Fraction(core.binom_exact((a + b) * n, a * n - 1))
           - Fraction(a + b, a) * core.binom_exact((a + b) * n - 1, a * n - 2))
    return lhs == rhs


def first_failing_n(p: int, a: int, b: int, n_max: int) -> int | None:
    """Smallest n <= n_max with (pn-1) not dividing binom(an, bn), else None."""
    if not a > b >= 1:
        raise ValueError("require a > b >= 1")
    for n in range(1, n_max + 1):
        modulus = p * n - 1
        if modulus < 1:
            continue
        if modulus == 1:
            continue
        ok, _ = core.divides_binomial(a * n, b * n, modulus)
        if not ok:
            return n
    return None


def surviving_pairs(
    m: int, a_max: int, b_max: int, n_max: int
) -> list[tuple[int, int]]:
    """Pairs (a, b) with am > b such that (an-1) | binom(amn, bn) for all n <= n_max.

    A modulus an-1 = 0 (only a = 1, n = 1) counts as a failure: a positive
    binomial is never congruent to 0 modulo 0.
    """
    if m < 1:
        raise ValueError("require m >= 1")
    survivors = []
    for a in range(1, a_max + 1):
        for b in range(1, b_max + 1):
            if a * m <= b:
                continue
            if _pair_survives(m, a, b, n_max):
                survivors.append((a, b))
    return survivors


def _pair_survives(m: int, a: int, b: int, n_max: int) -> bool:
    for n in range(1, n_max + 1):
        modulus = a * n - 1
        if modulus == 0:
            return False
        if modulus == 1:
            continue
        ok, _ = core.divides_binomial(a * m * n, b * n, modulus)
        if not ok:
            return False
    return True
