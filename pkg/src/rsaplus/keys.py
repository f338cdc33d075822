"""Key material for textbook RSA, Rabin and RSA+, plus the text codec.

All key and ciphertext types are frozen dataclasses that validate their
invariants on construction, so a value that exists is a valid value.
"""

import random
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, Optional, Tuple, Union

from .errors import Exhausted, InvalidKey, ParseError
from .modarith import mod_inv
from .primes import (
    DEFAULT_ROUNDS,
    SMALL_PRIMES,
    gen_prime_pair,
    is_probable_prime,
    not_one_mod_8,
    pick_ell1,
    three_mod_4,
)

RSA_PUBLIC_EXPONENT = 65537
ELL1_BOUND = 100
# sanity check on parsed/constructed keys, not a security boundary
_VALIDATION_ROUNDS = 8


def _looks_prime(k: int) -> bool:
    return is_probable_prime(k, _VALIDATION_ROUNDS, random.Random(k))


def _check_key_primes(p: int, q: int) -> None:
    if p == q:
        raise InvalidKey("p and q must be distinct")
    for name, v in (("p", p), ("q", q)):
        if v < 3 or v % 2 == 0 or not _looks_prime(v):
            raise InvalidKey(f"{name} is not an odd prime")


def _check_fast_sqrt_class(p: int, q: int) -> None:
    for name, v in (("p", p), ("q", q)):
        if v % 8 == 1:
            raise InvalidKey(f"{name} is 1 mod 8")


def _check_ell1(ell1: int) -> None:
    if ell1 > ELL1_BOUND or ell1 == 2 or ell1 not in SMALL_PRIMES:
        raise InvalidKey(f"ell1 must be an odd prime <= {ELL1_BOUND}, got {ell1}")


def _check_public_modulus(n: int) -> None:
    if n < 9 or n % 2 == 0:
        raise InvalidKey("n must be an odd composite")
    if _looks_prime(n):
        raise InvalidKey("n is prime")


def _derived(cls, **values):
    """Build a public key from an already validated private key, skipping the
    checks (the composite test on a large n costs a full exponentiation)."""
    obj = object.__new__(cls)
    for name, value in values.items():
        object.__setattr__(obj, name, value)
    return obj


@dataclass(frozen=True)
class RsaPlusPublicKey:
    n: int
    ell1: int

    def __post_init__(self):
        _check_public_modulus(self.n)
        _check_ell1(self.ell1)
        if self.n % self.ell1 == 0:
            raise InvalidKey("ell1 divides n")


@dataclass(frozen=True)
class RsaPlusPrivateKey:
    p: int
    q: int
    ell1: int
    n: int = field(init=False)
    phi: int = field(init=False)
    q_inv_p: int = field(init=False, repr=False)
    p_inv_q: int = field(init=False, repr=False)
    public: RsaPlusPublicKey = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_key_primes(self.p, self.q)
        _check_fast_sqrt_class(self.p, self.q)
        _check_ell1(self.ell1)
        if (self.p - 1) % self.ell1 == 0 or (self.q - 1) % self.ell1 == 0:
            raise InvalidKey("ell1 divides phi(n)")
        object.__setattr__(self, "n", self.p * self.q)
        object.__setattr__(self, "phi", (self.p - 1) * (self.q - 1))
        object.__setattr__(self, "q_inv_p", mod_inv(self.q, self.p))
        object.__setattr__(self, "p_inv_q", mod_inv(self.p, self.q))
        object.__setattr__(self, "public", _derived(RsaPlusPublicKey, n=self.n, ell1=self.ell1))


@dataclass(frozen=True)
class RsaPublicKey:
    n: int
    e: int

    def __post_init__(self):
        _check_public_modulus(self.n)
        if self.e < 3 or self.e % 2 == 0:
            raise InvalidKey("e must be odd and >= 3")


@dataclass(frozen=True)
class RsaKeyPair:
    n: int
    e: int
    d: int
    p: int
    q: int
    phi: int = field(init=False, repr=False)
    q_inv_p: int = field(init=False, repr=False)
    public: RsaPublicKey = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_key_primes(self.p, self.q)
        if self.p * self.q != self.n:
            raise InvalidKey("n != p*q")
        phi = (self.p - 1) * (self.q - 1)
        if gcd(self.e, phi) != 1:
            raise InvalidKey("e is not coprime with phi(n)")
        if not 1 <= self.d < phi or self.e * self.d % phi != 1:
            raise InvalidKey("d is not the inverse of e modulo phi(n)")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "q_inv_p", mod_inv(self.q, self.p))
        object.__setattr__(self, "public", _derived(RsaPublicKey, n=self.n, e=self.e))


@dataclass(frozen=True)
class RabinPublicKey:
    n: int

    def __post_init__(self):
        _check_public_modulus(self.n)


@dataclass(frozen=True)
class RabinKeyPair:
    n: int
    p: int
    q: int
    q_inv_p: int = field(init=False, repr=False)
    public: RabinPublicKey = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_key_primes(self.p, self.q)
        _check_fast_sqrt_class(self.p, self.q)
        if self.p * self.q != self.n:
            raise InvalidKey("n != p*q")
        object.__setattr__(self, "q_inv_p", mod_inv(self.q, self.p))
        object.__setattr__(self, "public", _derived(RabinPublicKey, n=self.n))


@dataclass(frozen=True)
class RsaPlusCiphertext:
    c: int
    y: int

    def __post_init__(self):
        if self.c < 1 or self.y < 1:
            raise InvalidKey("ciphertext components must be positive residues")


@dataclass(frozen=True)
class Ciphertext:
    """Single-integer ciphertext of textbook RSA or Rabin."""

    scheme: str
    c: int

    def __post_init__(self):
        if self.scheme not in ("rsa", "rabin"):
            raise InvalidKey(f"unknown single-integer scheme {self.scheme!r}")
        if self.c < 1:
            raise InvalidKey("ciphertext must be a positive residue")


# ---------------------------------------------------------------------------
# key generation


def keygen_rsaplus(
    b: int, rng: random.Random, rounds: int = DEFAULT_ROUNDS, blum: bool = False
) -> Tuple[RsaPlusPublicKey, RsaPlusPrivateKey]:
    """Generate an RSA+ key pair with ``p ~ 2^b``.

    ``blum=True`` restricts both primes to 3 mod 4, as needed by the
    square-exponent (Williams) variant.
    """
    constraint = three_mod_4 if blum else not_one_mod_8
    p, q = gen_prime_pair(b, rng, constraint, rounds)
    ell1 = pick_ell1(p, q, rng, ELL1_BOUND)
    priv = RsaPlusPrivateKey(p, q, ell1)
    return priv.public, priv


def keygen_rabin(b: int, rng: random.Random, rounds: int = DEFAULT_ROUNDS) -> RabinKeyPair:
    p, q = gen_prime_pair(b, rng, not_one_mod_8, rounds)
    return RabinKeyPair(p * q, p, q)


def rsa_key_from_primes(p: int, q: int, e: int = RSA_PUBLIC_EXPONENT) -> RsaKeyPair:
    if (p - 1) % e == 0 or (q - 1) % e == 0:
        raise InvalidKey(f"e={e} divides p-1 or q-1")
    phi = (p - 1) * (q - 1)
    return RsaKeyPair(p * q, e, mod_inv(e, phi), p, q)


def keygen_rsa(
    b: int, rng: random.Random, rounds: int = DEFAULT_ROUNDS, max_attempts: int = 1000
) -> RsaKeyPair:
    if b < 10:
        raise ValueError("RSA keys need b >= 10")
    for _ in range(max_attempts):
        p, q = gen_prime_pair(b, rng, not_one_mod_8, rounds)
        try:
            return rsa_key_from_primes(p, q)
        except InvalidKey:
            continue
    raise Exhausted(f"no prime pair coprime with e after {max_attempts} attempts")


# ---------------------------------------------------------------------------
# text codec

AnyKey = Union[
    RsaPlusPublicKey,
    RsaPlusPrivateKey,
    RsaPublicKey,
    RsaKeyPair,
    RabinPublicKey,
    RabinKeyPair,
    RsaPlusCiphertext,
    Ciphertext,
]

SCHEMAS: Dict[Tuple[str, str], Tuple[str, ...]] = {
    ("rsa", "public"): ("n", "e"),
    ("rsa", "private"): ("n", "e", "d", "p", "q"),
    ("rsa", "ciphertext"): ("c",),
    ("rabin", "public"): ("n",),
    ("rabin", "private"): ("n", "p", "q"),
    ("rabin", "ciphertext"): ("c",),
    ("rsaplus", "public"): ("n", "ell1"),
    ("rsaplus", "private"): ("n", "ell1", "p", "q"),
    ("rsaplus", "ciphertext"): ("c", "y"),
}

_LINE = re.compile(r"^([a-z0-9]+) = (.*)$")
_HEX = re.compile(r"^[0-9a-f]+$")


def _header(obj) -> Tuple[str, str]:
    if isinstance(obj, RsaPlusPublicKey):
        return "rsaplus", "public"
    if isinstance(obj, RsaPlusPrivateKey):
        return "rsaplus", "private"
    if isinstance(obj, RsaPlusCiphertext):
        return "rsaplus", "ciphertext"
    if isinstance(obj, RsaPublicKey):
        return "rsa", "public"
    if isinstance(obj, RsaKeyPair):
        return "rsa", "private"
    if isinstance(obj, RabinPublicKey):
        return "rabin", "public"
    if isinstance(obj, RabinKeyPair):
        return "rabin", "private"
    if isinstance(obj, Ciphertext):
        return obj.scheme, "ciphertext"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def encode(obj: AnyKey) -> str:
    scheme, kind = _header(obj)
    lines = [f"scheme = {scheme}", f"kind = {kind}"]
    for name in SCHEMAS[scheme, kind]:
        lines.append(f"{name} = {getattr(obj, name):x}")
    return "\n".join(lines) + "\n"


def _build(scheme: str, kind: str, v: Dict[str, int]) -> AnyKey:
    if kind == "ciphertext":
        if scheme == "rsaplus":
            return RsaPlusCiphertext(v["c"], v["y"])
        return Ciphertext(scheme, v["c"])
    if scheme == "rsaplus":
        if kind == "public":
            return RsaPlusPublicKey(v["n"], v["ell1"])
        key = RsaPlusPrivateKey(v["p"], v["q"], v["ell1"])
    elif scheme == "rsa":
        if kind == "public":
            return RsaPublicKey(v["n"], v["e"])
        return RsaKeyPair(v["n"], v["e"], v["d"], v["p"], v["q"])
    else:
        if kind == "public":
            return RabinPublicKey(v["n"])
        key = RabinKeyPair(v["n"], v["p"], v["q"])
    if key.n != v["n"]:
        raise InvalidKey("n != p*q")
    return key


def decode(text: str) -> AnyKey:
    if not text.endswith("\n"):
        raise ParseError("missing trailing newline")
    values: Dict[str, str] = {}
    line_of: Dict[str, int] = {}
    for lineno, line in enumerate(text[:-1].split("\n"), start=1):
        match = _LINE.match(line)
        if not match:
            raise ParseError("expected 'field = value'", line=lineno)
        name, value = match.groups()
        if name in values:
            raise ParseError("duplicate field", line=lineno, field=name)
        values[name] = value
        line_of[name] = lineno

    scheme = values.pop("scheme", None)
    kind = values.pop("kind", None)
    if scheme is None or kind is None:
        raise ParseError("'scheme' and 'kind' are required")
    fields = SCHEMAS.get((scheme, kind))
    if fields is None:
        raise ParseError(f"unsupported scheme/kind {scheme}/{kind}", line=line_of["scheme"])

    ints: Dict[str, int] = {}
    for name, raw in values.items():
        if name not in fields:
            raise ParseError("unknown field", line=line_of[name], field=name)
        if not _HEX.match(raw):
            raise ParseError("expected lowercase hexadecimal", line=line_of[name], field=name)
        ints[name] = int(raw, 16)
    missing = [f for f in fields if f not in ints]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}")

    try:
        return _build(scheme, kind, ints)
    except InvalidKey as exc:
        raise ParseError(str(exc)) from exc


def load(path) -> AnyKey:
    with open(path, encoding="utf-8") as fh:
        return decode(fh.read())


def save(obj: AnyKey, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(encode(obj))


def public_part(key) -> Optional[AnyKey]:
    """Public counterpart of a private key; public keys are returned as-is."""
    return getattr(key, "public", key)
