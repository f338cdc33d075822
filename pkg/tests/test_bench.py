import csv
import io
import itertools
import random
import re
from pathlib import Path

import pytest

from rsaplus.bench import BenchReport, emit_report, keygen_shared, run_benchmark, sampler_speedup

GOLDEN = Path(__file__).parent / "data" / "bench_table.txt"


def step_clock(step=1000):
    counter = itertools.count(0, step)
    return lambda: next(counter)


def mask(table):
    return re.sub(r"\d+\.\d{3}", "#.###", table)


def test_smoke_single_scheme():
    [report] = run_benchmark([64], 2, 3, ["rsa"], random.Random(0))
    assert list(report.mean_ms) == ["rsa"] and report.mean_ms["rsa"] > 0
    assert report.rsaplus_over_rsa is None


def test_step_clock_gives_unit_ratios():
    [report] = run_benchmark([24], 2, 4, rng=random.Random(1), clock=step_clock())
    assert report.mean_ms == {"rsaplus": 0.001, "rsa": 0.001, "rabin": 0.001}
    assert report.rsaplus_over_rsa == 1.0 and report.rsaplus_over_rabin == 1.0
    assert report.keys == 2 and report.msgs_per_key == 4


def test_golden_table():
    reports = run_benchmark([16, 32], 2, 3, rng=random.Random(0), clock=step_clock())
    assert emit_report(reports) == GOLDEN.read_text()
    real = run_benchmark([16, 32], 2, 3, rng=random.Random(0))
    assert mask(emit_report(real)) == mask(GOLDEN.read_text())


def test_single_report_table_has_two_lines():
    table = emit_report([BenchReport(64, {"rsa": 1.5}, 1, 1)])
    assert table.splitlines() == ["bit length | RSA+ |   RSA | Rabin", "        64 |    - | 1.500 |     -"]


def test_csv():
    reports = run_benchmark([16], 1, 2, rng=random.Random(2), clock=step_clock(2_000_000))
    rows = list(csv.DictReader(io.StringIO(emit_report(reports, "csv"))))
    assert [r["scheme"] for r in rows] == ["rsaplus", "rsa", "rabin"]
    assert all(float(r["mean_ms"]) == 2.0 and r["bit_length"] == "16" for r in rows)


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        run_benchmark([16], 0, 1)
    with pytest.raises(ValueError):
        run_benchmark([16], 1, 1, ["elgamal"])
    with pytest.raises(ValueError):
        emit_report([])
    with pytest.raises(ValueError):
        emit_report([BenchReport(64, {"rsa": 1.0}, 1, 1)], "xml")


def test_keygen_shared_consistent():
    ks = keygen_shared(32, random.Random(3))
    assert ks.rsa.n == ks.rabin.n == ks.rsaplus.n
    assert (ks.rsa.p, ks.rsa.q) == (ks.rsaplus.p, ks.rsaplus.q)


def test_sampler_speedup_step_clock():
    naive, fast = sampler_speedup(64, 3, random.Random(4), clock=step_clock(3_000_000))
    assert naive == fast == 1.0
