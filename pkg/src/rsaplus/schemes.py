"""Encryption and decryption for textbook RSA, Rabin and RSA+.

RSA+ encrypts ``m`` as ``(c, y) = (m^x mod n, x^2 mod n)`` with a fresh
secret exponent ``x`` per message. The key holder recovers ``x`` (up to the
square-root ambiguity) from ``y`` and inverts it modulo phi(n).

Three exponent samplers are provided:

* ``naive``: a probable prime in ``(sqrt(n), n)``.
* ``fast``: ``x = l0 * l1^k`` with a moderately small prime ``l0`` and the
  public small prime ``l1`` raised far enough to land in ``(sqrt(n), n)``.
* ``williams``: ``x = w^2`` is itself a square, so for Blum moduli exactly one
  root of ``y`` is a square and decryption is unambiguous.
"""

import logging
import random
from dataclasses import dataclass
from math import floor, gcd, isqrt, log2
from typing import List, Optional, Tuple

from .errors import (
    Exhausted,
    NoInvertibleRoot,
    NotAResidue,
    NotCoprime,
    NotInvertible,
    RangeEmpty,
    WrongKeyShape,
)
from .keys import (
    RabinKeyPair,
    RsaKeyPair,
    RsaPlusCiphertext,
    RsaPlusPrivateKey,
    RsaPlusPublicKey,
)
from .modarith import crt_combine, crt_pow, mod_inv, sqrt_mod_n
from .primes import DEFAULT_ROUNDS, random_prime_in

log = logging.getLogger(__name__)

MODES = ("naive", "fast", "williams")


@dataclass(frozen=True)
class ExponentProfile:
    """Bit range ``[2^lo, 2^hi]`` of the fast sampler's base prime ``l0``."""

    ell0_lo_bits: int
    ell0_hi_bits: int

    def __post_init__(self):
        if not 2 <= self.ell0_lo_bits < self.ell0_hi_bits:
            raise ValueError("need 2 <= lo < hi")


PRODUCTION = ExponentProfile(150, 190)


def exponent_b(n: int) -> int:
    """Bit-size parameter of the fast sampler, derived from the public modulus."""
    return n.bit_length() // 2 - 1


def toy_profile(n: int) -> ExponentProfile:
    # every odd prime factor of phi(n) is at most (q-1)/2 < 2^(b+2), so a
    # prime l0 >= 2^(b+2) can never divide phi(n)
    b = exponent_b(n)
    return ExponentProfile(b + 2, b + 3)


def k_range(n: int, ell1: int, profile: ExponentProfile = PRODUCTION) -> Tuple[int, int]:
    """Inclusive range of ``k`` placing ``l0 * l1^k`` strictly inside ``(sqrt(n), n)``.

    With ``b = exponent_b(n)`` the bounds are
    ``floor((b - lo + 2) / log2 l1) + 1`` and ``floor((1.5 b - hi + 2) / log2 l1)``;
    for the production profile these are the constants 148 and 188. The
    lower bound is clamped to 1 so that ``l1`` always contributes.
    """
    b = exponent_b(n)
    width = log2(ell1)
    lo = floor((b - profile.ell0_lo_bits + 2) / width) + 1
    hi = floor((1.5 * b - profile.ell0_hi_bits + 2) / width)
    return max(lo, 1), hi


def fast_profile_for(n: int, ell1: int) -> Optional[ExponentProfile]:
    """Production profile when it fits the modulus, else the toy profile, else None."""
    for profile in (PRODUCTION, toy_profile(n)):
        lo, hi = k_range(n, ell1, profile)
        if lo <= hi:
            return profile
    return None


def default_mode(n: int, ell1: int) -> str:
    return "fast" if fast_profile_for(n, ell1) else "naive"


@dataclass(frozen=True)
class ExponentSample:
    x: int
    mode: str
    ell0: Optional[int] = None
    k: Optional[int] = None


@dataclass(frozen=True)
class DecryptionCandidate:
    m: int
    x_used: int
    u: int


def _require_unit(value: int, n: int, what: str) -> None:
    if gcd(value, n) != 1:
        raise NotCoprime(f"{what} is not coprime with n")


def _in_window(x: int, n: int) -> bool:
    return isqrt(n) < x < n


# ---------------------------------------------------------------------------
# textbook RSA


def rsa_encrypt(m: int, key) -> int:
    _require_unit(m, key.n, "message")
    return pow(m, key.e, key.n)


def rsa_decrypt(c: int, key: RsaKeyPair) -> int:
    _require_unit(c, key.n, "ciphertext")
    return crt_pow(c, key.d, key.p, key.q, key.q_inv_p)


# ---------------------------------------------------------------------------
# Rabin


def rabin_encrypt(m: int, n: int) -> int:
    _require_unit(m, n, "message")
    return m * m % n


def rabin_decrypt(c: int, key: RabinKeyPair, parity: Optional[int] = None) -> List[int]:
    """All square roots of ``c``; with a parity hint only the two of that parity."""
    roots = list(sqrt_mod_n(c, key.p, key.q, key.q_inv_p))
    if parity is not None:
        roots = [r for r in roots if r % 2 == parity]
    return roots


# ---------------------------------------------------------------------------
# RSA+ exponent sampling


def sample_exponent_naive(n: int, rng: random.Random, rounds: int = DEFAULT_ROUNDS) -> ExponentSample:
    if n < 10:
        raise ValueError("modulus too small")
    x = random_prime_in(isqrt(n) + 1, n - 1, rng, lambda k: gcd(k, n) == 1, rounds)
    return ExponentSample(x, "naive")


def sample_exponent_fast(
    n: int,
    ell1: int,
    rng: random.Random,
    profile: Optional[ExponentProfile] = None,
    rounds: int = DEFAULT_ROUNDS,
    budget: int = 64,
) -> ExponentSample:
    profile = profile or PRODUCTION
    k_lo, k_hi = k_range(n, ell1, profile)
    if k_lo > k_hi:
        raise RangeEmpty(f"no admissible k for a {n.bit_length()}-bit modulus with {profile}")
    for _ in range(budget):
        k = rng.randint(k_lo, k_hi)
        ell0 = random_prime_in(1 << profile.ell0_lo_bits, 1 << profile.ell0_hi_bits, rng, rounds=rounds)
        x = ell0 * ell1**k
        # guards against float rounding in the k bounds
        if _in_window(x, n) and gcd(x, n) == 1:
            return ExponentSample(x, "fast", ell0, k)
    raise Exhausted("fast sampler kept leaving (sqrt(n), n)")


def _iroot4(n: int) -> int:
    return isqrt(isqrt(n))


def sample_exponent_williams(
    n: int, rng: random.Random, rounds: int = DEFAULT_ROUNDS, budget: int = 1000
) -> ExponentSample:
    """``x = w^2`` for a prime ``w`` in ``(n^(1/4), sqrt(n))``.

    Then ``x`` is a square below ``n``, odd, above ``sqrt(n)``, and coprime
    with phi(n) unless ``w`` happens to divide it.
    """
    for _ in range(budget):
        w = random_prime_in(_iroot4(n) + 1, isqrt(n), rng, lambda k: gcd(k, n) == 1, rounds)
        x = w * w % n
        if _in_window(x, n) and x % 2 == 1:
            return ExponentSample(x, "williams")
    raise Exhausted("no square exponent found in (sqrt(n), n)")


def sample_exponent(
    pub: RsaPlusPublicKey,
    rng: random.Random,
    mode: Optional[str] = None,
    profile: Optional[ExponentProfile] = None,
    rounds: int = DEFAULT_ROUNDS,
) -> ExponentSample:
    n = pub.n
    mode = mode or default_mode(n, pub.ell1)
    if mode == "naive":
        return sample_exponent_naive(n, rng, rounds)
    if mode == "fast":
        profile = profile or fast_profile_for(n, pub.ell1) or PRODUCTION
        return sample_exponent_fast(n, pub.ell1, rng, profile, rounds)
    if mode == "williams":
        return sample_exponent_williams(n, rng, rounds)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# RSA+


def rsaplus_encrypt(
    m: int,
    pub: RsaPlusPublicKey,
    rng: Optional[random.Random] = None,
    mode: Optional[str] = None,
    profile: Optional[ExponentProfile] = None,
    x: Optional[int] = None,
) -> RsaPlusCiphertext:
    """Encrypt ``m`` under ``pub`` with a fresh exponent.

    ``x`` injects a fixed exponent (tests only). Without it, ``mode`` picks
    the sampler; by default the fast sampler whenever the modulus is large
    enough for it.
    """
    n = pub.n
    _require_unit(m, n, "message")
    if x is None:
        x = sample_exponent(pub, rng or random.SystemRandom(), mode, profile).x
    _require_unit(x, n, "exponent")
    return RsaPlusCiphertext(pow(m, x, n), x * x % n)


def rsaplus_encrypt_qr(m: int, pub: RsaPlusPublicKey, rng: Optional[random.Random] = None) -> RsaPlusCiphertext:
    return rsaplus_encrypt(m, pub, rng, mode="williams")


def _candidate(c: int, root: int, priv: RsaPlusPrivateKey) -> Optional[DecryptionCandidate]:
    try:
        u = mod_inv(root, priv.phi)
    except NotInvertible:
        return None
    return DecryptionCandidate(crt_pow(c, u, priv.p, priv.q, priv.q_inv_p), root, u)


def rsaplus_decrypt(ct: RsaPlusCiphertext, priv: RsaPlusPrivateKey) -> List[DecryptionCandidate]:
    """Candidates from the odd square roots of ``y`` that are invertible mod phi(n).

    Even roots are never invertible since phi(n) is even, which leaves at
    most two candidates. Returned in ascending order of the root used.
    """
    n = priv.n
    _require_unit(ct.c, n, "c")
    _require_unit(ct.y, n, "y")
    roots = sqrt_mod_n(ct.y, priv.p, priv.q, priv.q_inv_p)
    out = []
    for r in roots:
        if r % 2 == 1:
            cand = _candidate(ct.c, r, priv)
            if cand is not None:
                out.append(cand)
    if not out:
        raise NoInvertibleRoot("no odd root of y is invertible modulo phi(n)")
    return out


def rsaplus_decrypt_qr(ct: RsaPlusCiphertext, priv: RsaPlusPrivateKey) -> DecryptionCandidate:
    """Decrypt a square-exponent ciphertext to its single candidate.

    For a prime ``p = 3 (mod 4)`` the root ``y^((p+1)/4)`` is a power of a
    residue, hence itself a residue, while its negative is not. Combining the
    two residue roots by CRT gives the unique root of ``y`` that is a square
    modulo n.
    """
    p, q = priv.p, priv.q
    if p % 4 != 3 or q % 4 != 3:
        raise WrongKeyShape("square-exponent decryption needs p = q = 3 (mod 4)")
    n = priv.n
    _require_unit(ct.c, n, "c")
    _require_unit(ct.y, n, "y")
    rp = pow(ct.y, (p + 1) // 4, p)
    rq = pow(ct.y, (q + 1) // 4, q)
    if rp * rp % p != ct.y % p or rq * rq % q != ct.y % q:
        raise NotAResidue("y is not a square modulo n")
    root = crt_combine(rp, rq, p, q, priv.q_inv_p)
    cand = _candidate(ct.c, root, priv)
    if cand is None:
        raise NoInvertibleRoot("the square root of y is not invertible modulo phi(n)")
    return cand
