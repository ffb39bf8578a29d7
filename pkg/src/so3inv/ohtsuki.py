"""The central identity and CRT recovery of the rational series.

For a rational homology sphere M with |H1| coprime to the odd prime K,
the mod-K x-expansion of |H1| * legendre(|H1|, K) * Z'(M; K) equals the
mod-K reduction of the universal rational series sum(lambda_n x^n).
`verify_identity` machine-checks that statement coefficient by
coefficient; `reconstruct_lambda` runs it backwards, recovering the
exact rational lambda_n from their residues at many primes.

Reconstruction never trusts a single modulus: the supplied primes are a
seed, further primes are consumed until two consecutive prefixes yield
the same fraction, and the accepted value is re-verified against two
held-out primes.  Candidate fractions are drawn from a balanced
extended-Euclid pass plus a sweep over denominators whose prime factors
are <= 2n or divide |H1| (the denominators of lambda_n admit no other
primes), ranked by |numerator| * denominator.
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, isqrt
from typing import Callable, Optional, Sequence, Tuple

from .arith import as_prime, inv_int, legendre
from .cyclotomic import CycInt, diamond
from .errors import (
    BoundViolation,
    H1DivisibleByK,
    InconsistentResidues,
    InsufficientModulus,
    InsufficientTerms,
    So3InvError,
)
from .nt import SeifertData, h1_order
from .series import LambdaSeries, RatSeries, TruncPoly, vee
from .surgery import Lens, P1Surgery, exact_p1


# ---------------------------------------------------------------------------
# the two sides of the identity


def manifold_label(m) -> str:
    if isinstance(m, Lens):
        return f"L({m.p},{m.q})"
    if isinstance(m, SeifertData):
        return "X(" + ",".join(f"{p}/{q}" for (p, q) in m.fractions) + ")"
    if isinstance(m, P1Surgery):
        return f"S[{m.jones};" + ",".join(str(f) for f in m.framings) + "]"
    return repr(m)


def closed_zprime(m, K) -> CycInt:
    """Exact Z' via the closed form appropriate to the presentation."""
    from .closedform import lens_zprime, seifert_zprime

    if isinstance(m, Lens):
        return lens_zprime(m.p, m.q, K)
    if isinstance(m, SeifertData):
        return seifert_zprime(m, K)
    if isinstance(m, P1Surgery):
        return exact_p1(m, K)
    raise So3InvError(f"no exact evaluation for {m!r}")


def closed_lambda_series(m, n_max: int) -> LambdaSeries:
    from .closedform import lens_lambda_series, seifert_lambda_series

    if isinstance(m, Lens):
        return lens_lambda_series(m.p, m.q, n_max)
    if isinstance(m, SeifertData):
        return seifert_lambda_series(m, n_max)
    raise So3InvError(f"no closed-form series for {m!r}")


def diamond_side(m, K) -> TruncPoly:
    """diamond(|H1| * legendre(|H1|, K) * Z'(M; K)), exactly."""
    K = as_prime(K).K
    h1 = h1_order(m)
    if h1 % K == 0:
        raise H1DivisibleByK(f"|H1| = {h1} is divisible by K = {K}")
    return diamond(closed_zprime(m, K) * (h1 * legendre(h1, K)))


def vee_side(lam: LambdaSeries, K) -> TruncPoly:
    """Mod-K reduction of the series, truncated at degree (K-1)/2."""
    K = as_prime(K).K
    d = (K - 1) // 2
    if lam.n_max < d:
        raise InsufficientTerms(
            f"need lambda_n through n = {d}, have n_max = {lam.n_max}")
    return vee(RatSeries([lam[n] for n in range(d + 1)], d), K)


@dataclass(frozen=True)
class IdentityReport:
    manifold: str
    K: int
    lhs: Optional[TruncPoly]
    rhs: Optional[TruncPoly]
    verdict: str  # "equal" | "unequal" | "skipped"
    first_mismatch: Optional[int] = None
    error: Optional[str] = None


def verify_identity(m, primes: Sequence[int],
                    lambda_source: Optional[Callable] = None):
    """One IdentityReport per prime; per-prime failures are recorded.

    lambda_source(M, n_max) supplies the series; the default is the
    closed form for the family at hand.
    """
    source = lambda_source or closed_lambda_series
    label = manifold_label(m)
    reports = []
    for K in primes:
        try:
            lhs = diamond_side(m, K)
            rhs = vee_side(source(m, (K - 1) // 2), K)
        except So3InvError as e:
            reports.append(IdentityReport(
                label, K, None, None, "skipped",
                error=f"{type(e).__name__}: {e}"))
            continue
        first = next((n for n, (a, b) in
                      enumerate(zip(lhs.coeffs, rhs.coeffs)) if a != b), None)
        reports.append(IdentityReport(
            label, K, lhs, rhs,
            "equal" if first is None else "unequal", first))
    return reports


# ---------------------------------------------------------------------------
# rational reconstruction


@dataclass(frozen=True)
class ReconstructionResult:
    manifold: str
    n_max: int
    values: Tuple[Fraction, ...]
    moduli: Tuple[int, ...]  # per-n product of primes at acceptance
    primes_used: Tuple[int, ...]
    skipped: Tuple[int, ...]

    def __getitem__(self, n: int) -> Fraction:
        return self.values[n]


def _next_prime(n: int) -> int:
    n += 1 + (n % 2)
    while True:
        if all(n % p for p in range(3, isqrt(n) + 1, 2)):
            return n
        n += 2


def _crt(r1: int, m1: int, r2: int, m2: int):
    t = ((r2 - r1) * inv_int(m1 % m2, m2)) % m2
    return (r1 + m1 * t) % (m1 * m2), m1 * m2


def _smooth_denominators(ps, cap: int, count: int):
    heap, seen = [1], {1}
    while heap and count > 0:
        d = heapq.heappop(heap)
        count -= 1
        yield d
        for p in ps:
            m = d * p
            if m <= cap and m not in seen:
                seen.add(m)
                heapq.heappush(heap, m)


def _wang(r: int, M: int) -> Optional[Fraction]:
    a0, a1 = M, r % M
    t0, t1 = 0, 1
    bound = isqrt(M // 2)
    while a1 > bound:
        q = a0 // a1
        a0, a1 = a1, a0 - q * a1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(a1, abs(t1)) != 1:
        return None
    return Fraction(a1, t1) if t1 > 0 else Fraction(-a1, -t1)


_SAFETY = 16  # a candidate must fit 2*SAFETY times into the modulus


def _best_fraction(r: int, M: int, n: int, h1: int) -> Optional[Fraction]:
    """Most exceptional fraction = r (mod M), or None if all look like noise."""
    if M < 15:
        return None
    ps = {p for p in range(2, max(2, 2 * n) + 1)
          if all(p % d for d in range(2, isqrt(p) + 1))}
    m = h1
    for p in range(2, isqrt(h1) + 1):
        while m % p == 0:
            ps.add(p)
            m //= p
    if m > 1:
        ps.add(m)
    best = None
    for d in _smooth_denominators(sorted(ps), M // 2, 20000):
        a = r * d % M
        if 2 * a > M:
            a -= M
        if (a == 0 and d > 1) or gcd(a, d) != 1:
            continue
        key = (abs(a) * d, d)
        if best is None or key < best[0]:
            best = (key, Fraction(a, d))
    w = _wang(r, M)
    if w is not None:
        key = (abs(w.numerator) * w.denominator, w.denominator)
        if best is None or key < best[0]:
            best = (key, w)
    if best is None or 2 * _SAFETY * best[0][0] > M:
        return None
    return best[1]


def reconstruct_lambda(m, primes: Sequence[int], n_max: int, *,
                       prime_ceiling: int = 2000) -> ReconstructionResult:
    """Recover lambda_0..lambda_n_max from residues at many primes.

    The prime at K pins lambda_n mod K only for n <= (K-1)/2, so each
    coefficient filters the stream accordingly; primes dividing |H1|
    (or failing another precondition of the exact evaluation) are
    skipped with a warning.  Acceptance requires the same fraction from
    two consecutive prefixes plus agreement at two held-out primes.
    """
    h1 = h1_order(m)
    label = manifold_label(m)
    seeds = sorted({as_prime(K).K for K in primes})
    if not seeds:
        raise So3InvError("need at least one seed prime")
    if len(seeds) != len(primes):
        raise So3InvError(f"primes must be pairwise distinct: {primes}")

    coeff_cache = {}
    skipped = []

    def residues(K):
        if K not in coeff_cache:
            try:
                coeff_cache[K] = diamond_side(m, K).coeffs
            except So3InvError as e:
                warnings.warn(f"{label}: skipping K = {K}: {e}")
                coeff_cache[K] = None
                skipped.append(K)
        return coeff_cache[K]

    def usable_stream(n):
        K = 0
        for s in seeds:
            K = s
            if (K - 1) // 2 >= n and residues(K) is not None:
                yield K
        while K < prime_ceiling:
            K = _next_prime(K)
            if (K - 1) // 2 >= n and residues(K) is not None:
                yield K

    values, moduli, used_all = [], [], set()
    for n in range(n_max + 1):
        r, M = 0, 1
        prev, accepted, used = None, None, []
        stream = usable_stream(n)
        for K in stream:
            r, M = _crt(r, M, residues(K)[n], K)
            used.append(K)
            cand = _best_fraction(r, M, n, h1)
            if cand is not None and cand == prev:
                accepted = cand
                break
            prev = cand
        if accepted is None:
            raise InsufficientModulus(
                f"lambda_{n} of {label}: no stable fraction from "
                f"{len(used)} primes up to {prime_ceiling} (modulus {M})")
        for K in (K for K, _ in zip(stream, range(2))):  # held-out check
            if accepted.denominator % K == 0:
                continue
            lift = (accepted.numerator
                    * inv_int(accepted.denominator, K)) % K
            if lift != residues(K)[n]:
                raise InconsistentResidues(
                    f"lambda_{n} of {label} = {accepted} fails mod {K}")
        check_bounds(label, n, h1, accepted)
        values.append(accepted)
        moduli.append(M)
        used_all.update(used)
    return ReconstructionResult(label, n_max, tuple(values), tuple(moduli),
                                tuple(sorted(used_all)), tuple(skipped))


def check_bounds(label: str, n: int, h1: int, value: Fraction):
    """Denominator structure of the recovered coefficients, n <= 6."""
    if n > 6:
        return
    big = 2 ** (4 * n) * factorial(n) * factorial(2 * n) * factorial(9 * n)
    if (value * big * h1 ** n).denominator != 1:
        raise BoundViolation(
            f"lambda_{n} of {label} = {value} breaks the integrality bound")
    d = (value * h1 ** n).denominator
    for p in range(2, d + 1):
        if p > max(2 * n, 1):
            raise BoundViolation(
                f"lambda_{n} of {label}: denominator prime {p} > {2 * n}")
        while d % p == 0:
            d //= p
        if d == 1:
            break
