"""Security reductions and decryption-multiplicity statistics for RSA+."""

import json
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    BadWitness,
    BudgetExceeded,
    DuplicatePrime,
    FactoringIncomplete,
    NoInvertibleRoot,
    NotInvertible,
    OracleFailure,
    TrivialPair,
)
from .keys import RsaPlusCiphertext, RsaPlusPrivateKey
from .modarith import jacobi, mod_inv, sqrt_mod_n
from .primes import is_probable_prime
from .schemes import ExponentProfile, rsaplus_decrypt, rsaplus_encrypt, sample_exponent

log = logging.getLogger(__name__)

Oracle = Callable[[int, int], List[int]]


def unique_decryption_probability(primes: Iterable[int]) -> Fraction:
    """Heuristic chance that RSA+ decryption yields a single candidate.

    ``1 - prod(1 - 1/l)`` over the odd primes ``l`` dividing phi(n).
    """
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise DuplicatePrime(f"repeated prime in {primes}")
    prod = Fraction(1)
    for l in primes:
        if l < 3 or l % 2 == 0:
            raise ValueError(f"{l} is not an odd prime")
        prod *= Fraction(l - 1, l)
    return 1 - prod


def _odd_prime_factors(k: int, bound: int) -> Tuple[List[int], bool]:
    """Odd prime factors of ``k`` by trial division up to ``bound``.

    The second item is False when a cofactor is left that is neither 1 nor a
    probable prime.
    """
    found = []
    while k % 2 == 0:
        k //= 2
    d = 3
    while d <= bound and d * d <= k:
        if k % d == 0:
            found.append(d)
            while k % d == 0:
                k //= d
        d += 2
    complete = True
    if k > 1:
        if d * d > k or is_probable_prime(k, rng=random.Random(k)):
            found.append(k)
        else:
            complete = False
    return found, complete


def phi_odd_prime_divisors(p: int, q: int, bound: int = 10**6) -> Tuple[List[int], bool]:
    fp, cp = _odd_prime_factors(p - 1, bound)
    fq, cq = _odd_prime_factors(q - 1, bound)
    return sorted(set(fp) | set(fq)), cp and cq


@dataclass(frozen=True)
class MultiplicityReport:
    predicted: Fraction
    observed: float
    trials: int
    primes_used: Tuple[int, ...]
    lower_bound: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (0 <= self.predicted <= 1 and 0 <= self.observed <= 1):
            raise ValueError("probabilities must lie in [0, 1]")

    @property
    def absolute_deviation(self) -> float:
        return abs(self.observed - float(self.predicted))

    @property
    def relative_deviation(self) -> float:
        pred = float(self.predicted)
        return self.absolute_deviation / pred if pred else float("inf")

    def as_dict(self) -> dict:
        return {
            "predicted_num": self.predicted.numerator,
            "predicted_den": self.predicted.denominator,
            "observed": self.observed,
            "trials": self.trials,
            "primes": list(self.primes_used),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), separators=(", ", ": "))

    def to_csv(self) -> str:
        d = self.as_dict()
        d["primes"] = " ".join(map(str, d["primes"]))
        return ",".join(d) + "\n" + ",".join(str(v) for v in d.values()) + "\n"

    def to_table(self) -> str:
        bound = " (lower bound)" if self.lower_bound else ""
        rows = [
            ("predicted", f"{self.predicted} = {float(self.predicted):.6f}{bound}"),
            ("observed", f"{self.observed:.6f}"),
            ("trials", str(self.trials)),
            ("primes", " ".join(map(str, self.primes_used)) or "-"),
            ("abs deviation", f"{self.absolute_deviation:.6f}"),
            ("rel deviation", f"{self.relative_deviation:.4%}"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}} | {v}" for k, v in rows) + "\n"


def random_unit(n: int, rng: random.Random) -> int:
    while True:
        m = rng.randrange(2, n - 1)
        if gcd(m, n) == 1:
            return m


def count_candidates(
    priv: RsaPlusPrivateKey,
    trials: int,
    rng: random.Random,
    mode: Optional[str] = None,
    profile: Optional[ExponentProfile] = None,
) -> Tuple[int, int]:
    """Encrypt/decrypt ``trials`` random messages; return (#single, #double)."""
    pub = priv.public
    single = double = 0
    while single + double < trials:
        m = random_unit(pub.n, rng)
        ct = rsaplus_encrypt(m, pub, rng, mode, profile)
        try:
            cands = rsaplus_decrypt(ct, priv)
        except NoInvertibleRoot:
            log.warning("exponent not coprime with phi(n); resampling")
            continue
        if len(cands) == 1:
            single += 1
        else:
            double += 1
    return single, double


def measure_decryption_multiplicity(
    priv: RsaPlusPrivateKey,
    trials: int,
    rng: random.Random,
    mode: Optional[str] = None,
    profile: Optional[ExponentProfile] = None,
    factor_bound: int = 10**6,
    strict: bool = False,
) -> MultiplicityReport:
    """Compare the observed single-candidate rate against the heuristic formula.

    When phi(n) cannot be fully factored below ``factor_bound`` the prediction
    only covers the primes found and is flagged as a lower bound, or
    :class:`FactoringIncomplete` is raised if ``strict``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    primes, complete = phi_odd_prime_divisors(priv.p, priv.q, factor_bound)
    if not complete and strict:
        raise FactoringIncomplete("phi(n) has an unfactored composite cofactor")
    single, _ = count_candidates(priv, trials, rng, mode, profile)
    return MultiplicityReport(
        unique_decryption_probability(primes),
        single / trials,
        trials,
        tuple(primes),
        lower_bound=not complete,
    )


def estimate_two_preimage_rate(
    priv: RsaPlusPrivateKey,
    trials: int,
    rng: random.Random,
    mode: Optional[str] = None,
    profile: Optional[ExponentProfile] = None,
) -> float:
    """Fraction of ciphertexts that decrypt to two candidates."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _, double = count_candidates(priv, trials, rng, mode, profile)
    return double / trials


def factor_from_two_roots(x1: int, x3: int, n: int) -> Tuple[int, int]:
    """Factor ``n`` from two square roots of the same value that are not +-equal."""
    x1 %= n
    x3 %= n
    if (x1 * x1 - x3 * x3) % n:
        raise ValueError("x1 and x3 are not square roots of the same residue")
    if x1 == x3 or (x1 + x3) % n == 0:
        raise TrivialPair("x1 = +-x3 (mod n) carries no information")
    g = gcd(x1 + x3, n)
    return tuple(sorted((g, n // g)))


def factor_from_exponent_multiple(
    y: int, y_inv: int, n: int, rng: random.Random, budget: int = 64
) -> Tuple[int, int]:
    """Factor ``n`` given ``y`` and an inverse of ``y`` modulo phi(n).

    ``k = y*y_inv - 1`` is a multiple of phi(n). Writing ``k = 2^s t`` with
    ``t`` odd, the sequence ``a^t, a^(2t), ..., a^k`` ends in 1 for every unit
    ``a``; the element just before the first 1, if it is not -1, is a
    nontrivial square root of 1 and splits ``n``. Each base succeeds with
    probability at least 1/2.
    """
    k = y * y_inv - 1
    if k <= 0:
        raise BadWitness("y*y_inv - 1 must be a positive multiple of phi(n)")
    t, s = k, 0
    while t % 2 == 0:
        t //= 2
        s += 1
    for _ in range(budget):
        a = rng.randrange(2, n - 1)
        g = gcd(a, n)
        if g != 1:
            return tuple(sorted((g, n // g)))
        z = pow(a, t, n)
        if z == 1 or z == n - 1:
            continue
        for i in range(s):
            z2 = z * z % n
            if z2 == 1:
                g = gcd(z - 1, n)
                return tuple(sorted((g, n // g)))
            if z2 == n - 1:
                if i == s - 1:
                    raise BadWitness("y*y_inv - 1 is not a multiple of the group order")
                break
            z = z2
        else:
            # a^k != 1 for a unit a, so k cannot be a multiple of phi(n)
            raise BadWitness("y*y_inv - 1 is not a multiple of the group order")
    raise BudgetExceeded(f"no splitting base among {budget} tries")


def rsaplus_oracle(priv: RsaPlusPrivateKey) -> Oracle:
    """Honest RSA+ decryption box: ``(c, y) -> candidate plaintexts``."""

    def oracle(c: int, y: int) -> List[int]:
        return [cand.m for cand in rsaplus_decrypt(RsaPlusCiphertext(c, y), priv)]

    return oracle


def rsa_break_via_rsaplus_oracle(c: int, e: int, n: int, oracle: Oracle) -> int:
    """Decrypt an RSA ciphertext by posing it as the RSA+ ciphertext ``(c, e^2)``.

    The box may return a second plaintext; the one satisfying ``m^e = c`` is
    the answer.
    """
    for m in oracle(c, e * e % n):
        if pow(m, e, n) == c % n:
            return m
    raise OracleFailure("no oracle output re-encrypts to c")


def jacobi_leak_check(m: int, ct: RsaPlusCiphertext, n: int) -> bool:
    return jacobi(m, n) == jacobi(ct.c, n)


def root_pairs(roots: Sequence[int], n: int) -> List[Tuple[int, int]]:
    """All pairs of roots that are not negatives of each other."""
    return [
        (a, b)
        for i, a in enumerate(roots)
        for b in roots[i + 1 :]
        if (a + b) % n
    ]


def _rsa_exponent_for(priv: RsaPlusPrivateKey) -> int:
    e = 65537
    while e < priv.n:
        if gcd(e, priv.phi) == 1 and is_probable_prime(e, rng=random.Random(e)):
            return e
        e += 2
    e = 3
    while gcd(e, priv.phi) != 1:
        e += 2
    return e


def reduction_suite(priv: RsaPlusPrivateKey, trials: int, rng: random.Random) -> Dict[str, int]:
    """Run each reduction ``trials`` times against ``priv``; count successes.

    Only success counts are returned, never the recovered factors.
    """
    n = priv.n
    target = (priv.p, priv.q) if priv.p < priv.q else (priv.q, priv.p)
    pub = priv.public
    oracle = rsaplus_oracle(priv)
    e = _rsa_exponent_for(priv)
    counts = {"two_roots": 0, "exponent_multiple": 0, "rsa_via_oracle": 0}
    for _ in range(trials):
        r = random_unit(n, rng)
        roots = list(sqrt_mod_n(r * r % n, priv.p, priv.q, priv.q_inv_p))
        a, b = root_pairs(roots, n)[0]
        counts["two_roots"] += factor_from_two_roots(a, b, n) == target

        x = sample_exponent(pub, rng).x
        try:
            u = mod_inv(x, priv.phi)
        except NotInvertible:
            continue
        try:
            found = factor_from_exponent_multiple(x * x, u * u, n, rng)
        except BudgetExceeded:
            found = None
        counts["exponent_multiple"] += found == target

        m = random_unit(n, rng)
        try:
            got = rsa_break_via_rsaplus_oracle(pow(m, e, n), e, n, oracle)
        except OracleFailure:
            got = None
        counts["rsa_via_oracle"] += got == m
    return counts
