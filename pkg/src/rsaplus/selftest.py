"""Known-answer checks on the 7*19 toy modulus, run by ``rsaplus selftest``."""

import random
from fractions import Fraction

from .analysis import factor_from_two_roots, unique_decryption_probability
from .keys import RsaPlusPrivateKey
from .modarith import crt_combine, crt_pow, jacobi, mod_inv, sqrt_mod_n, sqrt_mod_p_general
from .primes import is_probable_prime
from .schemes import rabin_decrypt, rsaplus_decrypt, rsaplus_encrypt


def _checks():
    key = RsaPlusPrivateKey(7, 19, 5)
    ct = rsaplus_encrypt(2, key.public, x=13)
    yield "pow", pow(2, 13, 133) == 79
    yield "inverse", mod_inv(13, 108) == 25
    yield "jacobi", jacobi(2, 133) == -1
    yield "sqrt mod 17", list(sqrt_mod_p_general(2, 17)) == [6, 11]
    yield "sqrt mod 13", list(sqrt_mod_p_general(4, 13)) == [2, 11]
    yield "crt", crt_combine(2, 17, 7, 19) == 93
    yield "sqrt mod n", list(sqrt_mod_n(36, 7, 19)) == [6, 13, 120, 127]
    yield "crt pow", crt_pow(79, 25, 7, 19) == 2
    yield "rsa+ encrypt", (ct.c, ct.y) == (79, 36)
    cands = rsaplus_decrypt(ct, key)
    yield "rsa+ decrypt", [c.x_used for c in cands] == [13, 127] and cands[0].m == 2
    yield "rabin parity", rabin_decrypt(4, key, parity=0) == [2, 40]
    yield "factor", factor_from_two_roots(13, 127, 133) == (7, 19)
    yield "heuristic", unique_decryption_probability([3, 5, 7]) == Fraction(57, 105)
    yield "primality", is_probable_prime(65537, rng=random.Random(0)) and not is_probable_prime(561)


def run(out) -> int:
    failures = 0
    for name, ok in _checks():
        failures += not ok
        out.write(f"{'PASS' if ok else 'FAIL'} {name}\n")
    return failures
