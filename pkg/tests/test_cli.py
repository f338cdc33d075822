import json
import subprocess
import sys
from pathlib import Path

import pytest

from rsaplus import keys
from rsaplus.cli import main

TOY = str(Path(__file__).parent / "data" / "toy_7x19.key")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def private_fragments(path):
    key = keys.load(path)
    return [format(v, "x") for v in (key.p, key.q)] + [str(key.p), str(key.q)]


def test_keygen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for target in (a, b):
        code, out, _ = run(capsys, "keygen", "--scheme", "rsaplus", "--bits", "64", "--seed", "7", "--out", str(target))
        assert code == 0
        assert "wrote" in out
    assert a.read_text() == b.read_text()
    assert Path(str(a) + ".pub").read_text() == Path(str(b) + ".pub").read_text()
    assert keys.load(str(a) + ".pub") == keys.load(a).public


@pytest.mark.parametrize("scheme", ["rsaplus", "rsa", "rabin"])
def test_encrypt_decrypt_round_trip(tmp_path, capsys, scheme):
    key = str(tmp_path / "k")
    ct = str(tmp_path / "ct")
    assert run(capsys, "keygen", "--scheme", scheme, "--bits", "64", "--seed", "7", "--out", key)[0] == 0
    code, out, _ = run(capsys, "encrypt", "--key", key + ".pub", "2", "--seed", "1", "--out", ct)
    assert code == 0 and out == ""
    code, out, _ = run(capsys, "decrypt", "--key", key, "--in", ct)
    assert code == 0
    assert any(line.endswith(": 2") for line in out.splitlines())
    assert all(line.startswith("candidate ") for line in out.splitlines())


def test_encrypt_deterministic_and_hex_input(tmp_path, capsys):
    msg = tmp_path / "m"
    msg.write_text("0x2\n")
    outs = [run(capsys, "encrypt", "--key", TOY, "--in", str(msg), "--seed", "3")[1] for _ in range(2)]
    assert outs[0] == outs[1] and outs[0].startswith("scheme = rsaplus\nkind = ciphertext\n")


def test_williams_round_trip(tmp_path, capsys):
    key, ct = str(tmp_path / "k"), str(tmp_path / "ct")
    run(capsys, "keygen", "--bits", "32", "--seed", "5", "--mode", "williams", "--out", key)
    run(capsys, "encrypt", "--key", key, "--mode", "williams", "--seed", "6", "--out", ct, "12345")
    code, out, _ = run(capsys, "decrypt", "--key", key, "--in", ct, "--mode", "williams")
    assert code == 0 and out == "candidate 1/1: 12345\n"


def test_analyze_multiplicity_toy(capsys):
    code, out, _ = run(capsys, "analyze", "multiplicity", "--key", TOY, "--trials", "10000", "--seed", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert (data["predicted_num"], data["predicted_den"]) == (1, 3)
    assert data["trials"] == 10000 and data["primes"] == [3]
    code, out, _ = run(capsys, "analyze", "multiplicity", "--key", TOY, "--trials", "100", "--seed", "1")
    assert "1/3" in out


def test_analyze_other(capsys):
    code, out, _ = run(capsys, "analyze", "jacobi", "--key", TOY, "--trials", "50", "--seed", "2")
    assert code == 0 and out == "jacobi(m/n) == jacobi(c/n): 50/50\n"
    code, out, _ = run(capsys, "analyze", "reductions", "--key", TOY, "--trials", "20", "--seed", "2")
    assert code == 0 and "two_roots: 20/20" in out and "rsa_via_oracle: 20/20" in out


def test_no_private_material_on_stdout(tmp_path, capsys):
    key = str(tmp_path / "k")
    run(capsys, "keygen", "--bits", "64", "--seed", "11", "--out", key)
    secrets = private_fragments(key)
    outputs = [
        run(capsys, "encrypt", "--key", key, "77", "--seed", "1")[1],
        run(capsys, "analyze", "multiplicity", "--key", key, "--trials", "20", "--seed", "1", "--format", "csv")[1],
        run(capsys, "analyze", "jacobi", "--key", key, "--trials", "20", "--seed", "1")[1],
        run(capsys, "analyze", "reductions", "--key", key, "--trials", "5", "--seed", "1")[1],
        run(capsys, "bench", "--bits", "64", "--keys", "1", "--msgs", "2", "--seed", "1")[1],
    ]
    for out in outputs:
        assert out
        for frag in secrets:
            assert frag not in out


def test_bench_formats(capsys):
    code, out, _ = run(capsys, "bench", "--bits", "32", "--keys", "1", "--msgs", "2", "--seed", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "bit_length,scheme,mean_ms,keys,msgs_per_key"
    code, out, _ = run(capsys, "bench", "--bits", "32", "--keys", "1", "--msgs", "2", "--scheme", "rsa", "--scheme", "rsaplus")
    assert code == 0 and "# b=32 RSA+/RSA" in out


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


def test_domain_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad"
    bad.write_text("scheme = rsaplus\nkind = public\nn = 86\nell1 = 5\n")
    code, _, err = run(capsys, "encrypt", "--key", str(bad), "2")
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "encrypt", "--key", TOY, "7")  # 7 | n
    assert code == 1
    code, _, _ = run(capsys, "decrypt", "--key", TOY, "--in", str(tmp_path / "missing"))
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["keygen"],
        ["keygen", "--bits", "0"],
        ["keygen", "--bits", "16", "--scheme", "rsa", "--mode", "williams"],
        ["encrypt", "--key", TOY],
        ["encrypt", "--key", TOY, "2", "--in", "x"],
        ["analyze", "jacobi", "--key", TOY, "--format", "json"],
        ["bench", "--format", "xml"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rsaplus", "encrypt", "--key", TOY], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "rsaplus", "selftest"], capture_output=True, text=True)
    assert proc.returncode == 0
