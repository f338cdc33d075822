"""Timing harness comparing RSA+, textbook RSA and Rabin.

Each timed unit is one encryption immediately followed by its decryption.
Key generation happens before any timing starts. Every message is
round-trip checked; a mismatch aborts the run.
"""

import csv
import io
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .analysis import random_unit
from .errors import InvalidKey, NoInvertibleRoot, RoundTripFailure
from .keys import ELL1_BOUND, RabinKeyPair, RsaKeyPair, RsaPlusPrivateKey, rsa_key_from_primes
from .primes import DEFAULT_ROUNDS, gen_prime_pair, pick_ell1
from .schemes import (
    ExponentProfile,
    fast_profile_for,
    rabin_decrypt,
    rabin_encrypt,
    rsa_decrypt,
    rsa_encrypt,
    rsaplus_decrypt,
    rsaplus_encrypt,
    sample_exponent_fast,
    sample_exponent_naive,
)

log = logging.getLogger(__name__)

SCHEMES = ("rsaplus", "rsa", "rabin")
LABELS = {"rsaplus": "RSA+", "rsa": "RSA", "rabin": "Rabin"}

Clock = Callable[[], int]


@dataclass
class BenchReport:
    bit_length: int
    mean_ms: Dict[str, float]
    keys: int
    msgs_per_key: int
    stdev_ms: Dict[str, float] = field(default_factory=dict)

    def ratio(self, num: str, den: str) -> Optional[float]:
        if num in self.mean_ms and den in self.mean_ms:
            return self.mean_ms[num] / self.mean_ms[den]
        return None

    @property
    def rsaplus_over_rsa(self) -> Optional[float]:
        return self.ratio("rsaplus", "rsa")

    @property
    def rsaplus_over_rabin(self) -> Optional[float]:
        return self.ratio("rsaplus", "rabin")


@dataclass(frozen=True)
class KeySet:
    """One prime pair shared by all three schemes."""

    rsaplus: RsaPlusPrivateKey
    rsa: RsaKeyPair
    rabin: RabinKeyPair


def keygen_shared(b: int, rng: random.Random, rounds: int = DEFAULT_ROUNDS) -> KeySet:
    """Key set whose primes satisfy every scheme's constraints at once."""
    while True:
        p, q = gen_prime_pair(b, rng, rounds=rounds)
        try:
            rsa = rsa_key_from_primes(p, q)
        except InvalidKey:
            continue
        ell1 = pick_ell1(p, q, rng, ELL1_BOUND)
        return KeySet(RsaPlusPrivateKey(p, q, ell1), rsa, RabinKeyPair(p * q, p, q))


def _round_trip(
    scheme: str,
    keys: KeySet,
    m: int,
    rng: random.Random,
    mode: Optional[str],
    profile: Optional[ExponentProfile],
) -> bool:
    if scheme == "rsa":
        return rsa_decrypt(rsa_encrypt(m, keys.rsa), keys.rsa) == m
    if scheme == "rabin":
        return m in rabin_decrypt(rabin_encrypt(m, keys.rabin.n), keys.rabin)
    priv = keys.rsaplus
    ct = rsaplus_encrypt(m, priv.public, rng, mode, profile)
    return any(c.m == m for c in rsaplus_decrypt(ct, priv))


def _timed(fn: Callable[[], bool], clock: Clock) -> Tuple[int, bool]:
    t0 = clock()
    ok = fn()
    return clock() - t0, ok


def run_benchmark(
    bit_lengths: Iterable[int],
    keys: int,
    msgs_per_key: int,
    schemes: Sequence[str] = SCHEMES,
    rng: Optional[random.Random] = None,
    mode: Optional[str] = None,
    profile: Optional[ExponentProfile] = None,
    warmup: int = 3,
    clock: Clock = time.perf_counter_ns,
) -> List[BenchReport]:
    """Mean enc+dec time per scheme for each bit length.

    ``mode=None`` uses the fast RSA+ sampler whenever the modulus admits it.
    ``clock`` returns nanoseconds; it is injectable so tests can decouple the
    bookkeeping from real hardware timing.
    """
    if keys < 1 or msgs_per_key < 1:
        raise ValueError("keys and msgs_per_key must be >= 1")
    unknown = set(schemes) - set(SCHEMES)
    if unknown:
        raise ValueError(f"unknown scheme(s): {sorted(unknown)}")
    rng = rng or random.SystemRandom()
    schemes = [s for s in SCHEMES if s in schemes]

    reports = []
    for b in bit_lengths:
        keysets = [keygen_shared(b, rng) for _ in range(keys)]
        samples: Dict[str, List[int]] = {s: [] for s in schemes}
        for scheme in schemes:
            for _ in range(warmup):
                ks = keysets[0]
                _round_trip(scheme, ks, random_unit(ks.rsa.n, rng), rng, mode, profile)
        for ks in keysets:
            for _ in range(msgs_per_key):
                m = random_unit(ks.rsa.n, rng)
                for scheme in schemes:
                    while True:
                        try:
                            ns, ok = _timed(lambda: _round_trip(scheme, ks, m, rng, mode, profile), clock)
                        except NoInvertibleRoot:
                            log.warning("b=%d: exponent not coprime with phi(n); resampling", b)
                            continue
                        break
                    if not ok:
                        raise RoundTripFailure(f"{scheme} failed to round-trip a message at b={b}")
                    samples[scheme].append(ns)
        mean = {s: sum(v) / len(v) / 1e6 for s, v in samples.items()}
        stdev = {s: _stdev(v) / 1e6 for s, v in samples.items()}
        reports.append(BenchReport(b, mean, keys, msgs_per_key, stdev))
    return reports


def _stdev(values: List[int]) -> float:
    if len(values) < 2:
        return 0.0
    mu = sum(values) / len(values)
    return (sum((v - mu) ** 2 for v in values) / (len(values) - 1)) ** 0.5


def sampler_speedup(
    b: int, draws: int, rng: Optional[random.Random] = None, clock: Clock = time.perf_counter_ns
) -> Tuple[float, float]:
    """Mean milliseconds per exponent for the naive and the fast sampler."""
    rng = rng or random.SystemRandom()
    priv = keygen_shared(b, rng).rsaplus
    profile = fast_profile_for(priv.n, priv.ell1)
    totals = []
    for draw in (
        lambda: sample_exponent_naive(priv.n, rng),
        lambda: sample_exponent_fast(priv.n, priv.ell1, rng, profile),
    ):
        t0 = clock()
        for _ in range(draws):
            draw()
        totals.append((clock() - t0) / draws / 1e6)
    return totals[0], totals[1]


def _fmt(report: BenchReport, scheme: str) -> str:
    v = report.mean_ms.get(scheme)
    return "-" if v is None else f"{v:.3f}"


def emit_report(reports: Sequence[BenchReport], fmt: str = "table") -> str:
    if not reports:
        raise ValueError("nothing to report")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["bit_length", "scheme", "mean_ms", "keys", "msgs_per_key"])
        for r in reports:
            for s in SCHEMES:
                if s in r.mean_ms:
                    writer.writerow([r.bit_length, s, f"{r.mean_ms[s]:.3f}", r.keys, r.msgs_per_key])
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    rows = [["bit length"] + [LABELS[s] for s in SCHEMES]]
    rows += [[str(r.bit_length)] + [_fmt(r, s) for s in SCHEMES] for r in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "".join(" | ".join(c.rjust(w) for c, w in zip(row, widths)) + "\n" for row in rows)
