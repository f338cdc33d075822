"""Probable-prime testing and constrained random prime generation."""

import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from .errors import Exhausted

DEFAULT_ROUNDS = 40
DEFAULT_BUDGET = 10**6
# intervals at most this wide are enumerated instead of sampled
_ENUMERATION_WIDTH = 1 << 16
_NARROW_DRAWS = 256


def _sieve(limit: int) -> List[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i, f in enumerate(flags) if f]


SMALL_PRIMES = _sieve(1000)
_SMALL_PRIME_SET = frozenset(SMALL_PRIMES)
_TRIAL_LIMIT_SQUARED = 1000 * 1000


@dataclass(frozen=True)
class PrimalityConfig:
    rounds: int = DEFAULT_ROUNDS
    rng_seed: Optional[int] = None

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")

    def make_rng(self) -> random.Random:
        """A fresh RNG: seeded and reproducible, or OS entropy if unseeded."""
        if self.rng_seed is None:
            return random.SystemRandom()
        return random.Random(self.rng_seed)


def is_strong_probable_prime(n: int, base: int) -> bool:
    """Single strong-pseudoprime (Miller-Rabin) round for odd ``n > 3``."""
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = DEFAULT_ROUNDS, rng: Optional[random.Random] = None) -> bool:
    if n < 2:
        return False
    if n in _SMALL_PRIME_SET:
        return True
    for p in SMALL_PRIMES:
        if n % p == 0:
            return False
    if n < _TRIAL_LIMIT_SQUARED:
        return True
    if rng is None:
        rng = random.SystemRandom()
    for _ in range(rounds):
        if not is_strong_probable_prime(n, rng.randrange(2, n - 1)):
            return False
    return True


def random_prime_in(
    lo: int,
    hi: int,
    rng: random.Random,
    constraint: Optional[Callable[[int], bool]] = None,
    rounds: int = DEFAULT_ROUNDS,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Uniformly sample a probable prime in ``[lo, hi]`` accepted by ``constraint``.

    Candidates are drawn uniformly at random. If the interval is narrow and a
    short run of draws finds nothing, it is enumerated outright, so an
    interval without an admissible prime fails fast instead of burning the
    budget.
    """
    lo = max(lo, 2)
    if lo > hi:
        raise Exhausted(f"empty interval [{lo}, {hi}]")
    ok = constraint or (lambda _: True)
    narrow = hi - lo <= _ENUMERATION_WIDTH

    odd_lo = lo | 1
    odd_count = max(0, (hi - odd_lo) // 2 + 1)
    extra = 1 if lo == 2 else 0  # 2 is the only even prime
    if odd_count + extra == 0:
        raise Exhausted(f"no admissible prime in [{lo}, {hi}]")
    for _ in range(_NARROW_DRAWS if narrow else budget):
        i = rng.randrange(odd_count + extra)
        k = 2 if i == odd_count else odd_lo + 2 * i
        if ok(k) and is_probable_prime(k, rounds, rng):
            return k
    if narrow:
        found = [k for k in range(lo, hi + 1) if ok(k) and is_probable_prime(k, rounds, rng)]
        if found:
            return rng.choice(found)
        raise Exhausted(f"no admissible prime in [{lo}, {hi}]")
    raise Exhausted(f"no admissible prime in [{lo}, {hi}] after {budget} draws")


def not_one_mod_8(k: int) -> bool:
    return k % 8 != 1


def three_mod_4(k: int) -> bool:
    return k % 4 == 3


def gen_prime_pair(
    b: int,
    rng: random.Random,
    constraint: Callable[[int], bool] = not_one_mod_8,
    rounds: int = DEFAULT_ROUNDS,
) -> Tuple[int, int]:
    """Return primes ``p in [2^b, 2^(b+1)]``, ``q in [2^(b+2), 2^(b+3)]`` with ``4p <= q <= 8p``.

    Both primes satisfy ``constraint``; by default that excludes the class
    1 mod 8, leaving only primes with a closed-form square root.
    """
    if b < 3:
        raise ValueError("bit length must be >= 3")
    p = random_prime_in(1 << b, 1 << (b + 1), rng, constraint, rounds)
    q_lo = max(1 << (b + 2), 4 * p)
    q_hi = min(1 << (b + 3), 8 * p)
    q = random_prime_in(q_lo, q_hi, rng, constraint, rounds)
    return p, q


def pick_ell1(p: int, q: int, rng: random.Random, bound: int = 100) -> int:
    """Random odd prime ``<= bound`` dividing neither ``p-1`` nor ``q-1``, and not p or q."""
    choices = [
        l for l in SMALL_PRIMES if l <= bound and (p - 1) % l and (q - 1) % l and l not in (p, q)
    ]
    if not choices:
        raise Exhausted(f"every prime <= {bound} divides phi(n)")
    return rng.choice(choices)
