import json
import random
from fractions import Fraction
from math import gcd

import pytest

from rsaplus.analysis import (
    MultiplicityReport,
    estimate_two_preimage_rate,
    factor_from_exponent_multiple,
    factor_from_two_roots,
    jacobi_leak_check,
    measure_decryption_multiplicity,
    phi_odd_prime_divisors,
    reduction_suite,
    root_pairs,
    rsa_break_via_rsaplus_oracle,
    rsaplus_oracle,
    unique_decryption_probability,
)
from rsaplus.errors import (
    BadWitness,
    BudgetExceeded,
    DuplicatePrime,
    FactoringIncomplete,
    OracleFailure,
    TrivialPair,
)
from rsaplus.keys import RsaPlusCiphertext, RsaPlusPrivateKey, keygen_rsaplus, rsa_key_from_primes
from rsaplus.modarith import jacobi

from oracles import is_prime_td, jacobi_bf


def test_unique_decryption_probability_examples():
    assert unique_decryption_probability([]) == 0
    assert unique_decryption_probability([3, 5, 7]) == Fraction(57, 105)
    assert unique_decryption_probability([3]) == Fraction(1, 3)
    with pytest.raises(DuplicatePrime):
        unique_decryption_probability([3, 3])
    with pytest.raises(ValueError):
        unique_decryption_probability([2])


def test_phi_divisors():
    assert phi_odd_prime_divisors(7, 19) == ([3], True)
    assert phi_odd_prime_divisors(11, 47) == ([5, 23], True)
    # bound 2 leaves 18 / 2 = 9 unfactored
    assert phi_odd_prime_divisors(7, 19, bound=2) == ([3], False)
    # a prime cofactor above the bound still counts: 2 * 1000151 + 1 is a safe prime
    assert is_prime_td(1000151) and is_prime_td(2000303)
    assert phi_odd_prime_divisors(7, 2000303, bound=100) == ([3, 1000151], True)


def test_multiplicity_toy(toy_key):
    report = measure_decryption_multiplicity(toy_key, 1, random.Random(0))
    assert report.observed in (0.0, 1.0) and report.predicted == Fraction(1, 3)
    assert report.primes_used == (3,)
    report = measure_decryption_multiplicity(toy_key, 500, random.Random(1))
    assert report.predicted == Fraction(1, 3) and 0 <= report.observed <= 1


def test_multiplicity_report_formats():
    report = MultiplicityReport(Fraction(1, 3), 0.25, 4, (3,))
    data = json.loads(report.to_json())
    assert data == {"predicted_num": 1, "predicted_den": 3, "observed": 0.25, "trials": 4, "primes": [3]}
    assert report.to_csv().splitlines()[1] == "1,3,0.25,4,3"
    assert "1/3" in report.to_table()
    with pytest.raises(ValueError):
        MultiplicityReport(Fraction(1, 3), 1.5, 4, (3,))
    with pytest.raises(ValueError):
        MultiplicityReport(Fraction(1, 3), 0.5, 0, (3,))


def test_two_preimage_rate_partition(toy_key):
    a = estimate_two_preimage_rate(toy_key, 400, random.Random(5))
    single = measure_decryption_multiplicity(toy_key, 400, random.Random(5)).observed
    assert 0 <= a <= 1 and a + single == pytest.approx(1.0)


def test_multiplicity_b16_matches_formula():
    _, priv = keygen_rsaplus(16, random.Random(21))
    report = measure_decryption_multiplicity(priv, 3000, random.Random(22), strict=True)
    assert not report.lower_bound
    assert report.absolute_deviation < 0.05


def test_strict_factoring():
    # p - 1 and q - 1 with a large composite cofactor and a tiny trial bound
    _, priv = keygen_rsaplus(64, random.Random(23))
    primes, complete = phi_odd_prime_divisors(priv.p, priv.q, bound=3)
    if not complete:
        with pytest.raises(FactoringIncomplete):
            measure_decryption_multiplicity(priv, 1, random.Random(0), factor_bound=3, strict=True)
        report = measure_decryption_multiplicity(priv, 1, random.Random(0), factor_bound=3)
        assert report.lower_bound


def test_factor_from_two_roots_examples():
    assert factor_from_two_roots(13, 127, 133) == (7, 19)
    assert gcd(13 + 127, 133) == 7
    with pytest.raises(TrivialPair):
        factor_from_two_roots(2, 131, 133)
    assert factor_from_two_roots(2, 93, 133) == (7, 19)
    assert gcd(95, 133) == 19
    with pytest.raises(ValueError):
        factor_from_two_roots(2, 3, 133)


def test_root_pairs():
    assert root_pairs([2, 40, 93, 131], 133) == [(2, 40), (2, 93), (40, 131), (93, 131)]


def test_factor_from_exponent_multiple_examples():
    assert 13 * 25 - 1 == 3 * 108
    assert factor_from_exponent_multiple(13, 25, 133, random.Random(0)) == (7, 19)
    with pytest.raises((BadWitness, BudgetExceeded)):
        factor_from_exponent_multiple(1, 1, 133, random.Random(0))


def test_factor_from_exponent_multiple_not_a_multiple():
    # 13 * 5 - 1 = 64 is not a multiple of 108
    with pytest.raises((BadWitness, BudgetExceeded)):
        factor_from_exponent_multiple(13, 5, 133, random.Random(1))


def test_rsa_break_examples():
    rsa = rsa_key_from_primes(1031, 4703)
    priv = RsaPlusPrivateKey(1031, 4703, 3)
    oracle = rsaplus_oracle(priv)
    c = pow(2, rsa.e, rsa.n)
    assert rsa_break_via_rsaplus_oracle(c, rsa.e, rsa.n, oracle) == 2
    assert rsa_break_via_rsaplus_oracle(1, rsa.e, rsa.n, oracle) == 1
    with pytest.raises(OracleFailure):
        rsa_break_via_rsaplus_oracle(c, rsa.e, rsa.n, lambda c, y: [5, 7])


def test_jacobi_leak_examples(toy_key):
    ct = RsaPlusCiphertext(79, 36)
    assert jacobi_bf(2, 133) == jacobi_bf(79, 133) == -1
    assert jacobi_leak_check(2, ct, 133)
    assert jacobi_leak_check(1, RsaPlusCiphertext(1, 36), 133)


def test_reduction_suite_counts_only():
    _, priv = keygen_rsaplus(16, random.Random(24))
    counts = reduction_suite(priv, 20, random.Random(25))
    assert set(counts) == {"two_roots", "exponent_multiple", "rsa_via_oracle"}
    assert counts["two_roots"] == 20 and counts["rsa_via_oracle"] == 20
    assert counts["exponent_multiple"] >= 19
    assert all(isinstance(v, int) for v in counts.values())
