"""Modular arithmetic primitives.

Residues are plain Python ints; functions validate their moduli and reduce
their inputs. Square-root routines return a :class:`RootSet`, always sorted
ascending.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Optional, Tuple

from .errors import (
    InvalidModulus,
    NotAResidue,
    NotCoprime,
    NotInvertible,
    WrongResidueClass,
)


@dataclass(frozen=True)
class RootSet:
    roots: Tuple[int, ...]
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(sorted(set(self.roots))))

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __contains__(self, r):
        return r in self.roots

    def __getitem__(self, i):
        return self.roots[i]


def _check_modulus(modulus: int) -> None:
    if modulus < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {modulus}")


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    _check_modulus(modulus)
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    return pow(base, exponent, modulus)


def mod_inv(a: int, modulus: int) -> int:
    """Return ``u`` with ``a*u == 1 (mod modulus)``.

    Raises :class:`NotInvertible` carrying the gcd when no inverse exists;
    RSA+ decryption relies on that gcd to discard roots that share a factor
    with phi(n).
    """
    _check_modulus(modulus)
    g = gcd(a, modulus)
    if g != 1:
        raise NotInvertible(a, modulus, g)
    return pow(a, -1, modulus)


def jacobi(a: int, n: int) -> int:
    if n < 1 or n % 2 == 0:
        raise InvalidModulus(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _reduce_unit(y: int, p: int) -> int:
    y %= p
    if y == 0:
        raise NotCoprime(f"{y} is not a unit modulo {p}")
    return y


def _pair(r: int, p: int) -> RootSet:
    return RootSet((r, p - r), p)


def sqrt_mod_p_3mod4(y: int, p: int) -> RootSet:
    """Square roots of ``y`` modulo a prime ``p = 3 (mod 4)``: ``+-y^((p+1)/4)``."""
    if p % 4 != 3:
        raise WrongResidueClass(f"{p} is not 3 mod 4")
    y = _reduce_unit(y, p)
    r = pow(y, (p + 1) // 4, p)
    # r^2 = y * y^((p-1)/2), so this is Euler's criterion without a second power
    if r * r % p != y:
        raise NotAResidue(f"{y} is not a quadratic residue modulo {p}")
    return _pair(r, p)


@lru_cache(maxsize=64)
def _sqrt_minus_one_5mod8(p: int) -> int:
    # 2 is a non-residue for p = 5 (mod 8), so 2^((p-1)/4) squares to -1
    return pow(2, (p - 1) // 4, p)


def sqrt_mod_p_5mod8(y: int, p: int) -> RootSet:
    """Square roots of ``y`` modulo a prime ``p = 5 (mod 8)``.

    With ``r = y^((p+3)/8)`` we have ``r^2 = eps * y`` where
    ``eps = y^((p-1)/4)`` is +1 or -1 for a residue. If ``eps = -1`` the root
    is corrected by the square root of -1, ``2^((p-1)/4)``.
    """
    if p % 8 != 5:
        raise WrongResidueClass(f"{p} is not 5 mod 8")
    y = _reduce_unit(y, p)
    r = pow(y, (p + 3) // 8, p)
    r2 = r * r % p
    if r2 == y:
        return _pair(r, p)
    if r2 == p - y:
        return _pair(r * _sqrt_minus_one_5mod8(p) % p, p)
    raise NotAResidue(f"{y} is not a quadratic residue modulo {p}")


def _tonelli_shanks(y: int, p: int) -> int:
    if pow(y, (p - 1) // 2, p) != 1:
        raise NotAResidue(f"{y} is not a quadratic residue modulo {p}")
    s, t = 0, p - 1
    while t % 2 == 0:
        s += 1
        t //= 2
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, t, p)
    r = pow(y, (t + 1) // 2, p)
    u = pow(y, t, p)
    m = s
    while u != 1:
        i, u2 = 0, u
        while u2 != 1:
            u2 = u2 * u2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        u = u * c % p
        m = i
    return r


def sqrt_mod_p_general(y: int, p: int) -> RootSet:
    if p < 3 or p % 2 == 0:
        raise InvalidModulus(f"need an odd prime, got {p}")
    if p % 4 == 3:
        return sqrt_mod_p_3mod4(y, p)
    if p % 8 == 5:
        return sqrt_mod_p_5mod8(y, p)
    y = _reduce_unit(y, p)
    return _pair(_tonelli_shanks(y, p), p)


def crt_combine(r_p: int, r_q: int, p: int, q: int, q_inv_p: Optional[int] = None) -> int:
    """Unique ``r mod p*q`` with ``r = r_p (mod p)`` and ``r = r_q (mod q)``."""
    if p == q:
        raise ValueError("CRT needs distinct moduli")
    if q_inv_p is None:
        q_inv_p = mod_inv(q, p)
    h = (r_p - r_q) * q_inv_p % p
    return (r_q + q * h) % (p * q)


def sqrt_mod_n(y: int, p: int, q: int, q_inv_p: Optional[int] = None) -> RootSet:
    n = p * q
    if gcd(y, n) != 1:
        raise NotCoprime(f"{y} shares a factor with the modulus")
    rp = sqrt_mod_p_general(y, p)[0]
    rq = sqrt_mod_p_general(y, q)[0]
    if q_inv_p is None:
        q_inv_p = mod_inv(q, p)
    a = crt_combine(rp, rq, p, q, q_inv_p)
    b = crt_combine(rp, q - rq, p, q, q_inv_p)
    return RootSet((a, n - a, b, n - b), n)


def crt_pow(base: int, exponent: int, p: int, q: int, q_inv_p: Optional[int] = None) -> int:
    """``base^exponent mod p*q`` via half-size exponentiations.

    Exponents are reduced mod p-1 and q-1, which is only valid for bases
    coprime to the respective prime; other bases take the direct route.
    """
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    n = p * q
    base %= n
    if base % p == 0 or base % q == 0:
        return pow(base, exponent, n)
    mp = pow(base % p, exponent % (p - 1), p)
    mq = pow(base % q, exponent % (q - 1), q)
    return crt_combine(mp, mq, p, q, q_inv_p)
