"""Command-line interface.

Exit status: 0 on success, 1 on a domain error (bad key, non-residue,
non-invertible root, failed round trip, ...), 2 on a usage error.
"""

import argparse
import logging
import random
import sys
from typing import List, Optional

from . import analysis, bench, keys, schemes
from .errors import RsaPlusError
from .keys import (
    Ciphertext,
    RabinKeyPair,
    RabinPublicKey,
    RsaKeyPair,
    RsaPlusCiphertext,
    RsaPlusPrivateKey,
    RsaPlusPublicKey,
    RsaPublicKey,
)

log = logging.getLogger("rsaplus")


def _rng(args) -> random.Random:
    return random.SystemRandom() if args.seed is None else random.Random(args.seed)


def _profile(args, n: int) -> Optional[schemes.ExponentProfile]:
    if args.profile == "production":
        return schemes.PRODUCTION
    if args.profile == "toy":
        return schemes.toy_profile(n)
    return None


def _parse_int(text: str) -> int:
    text = text.strip()
    try:
        return int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal or 0x-hex integer: {text!r}")


def _write(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_kind(path: str, *types):
    obj = keys.load(path)
    if types and not isinstance(obj, types):
        names = ", ".join(t.__name__ for t in types)
        raise RsaPlusError(f"{path}: expected {names}, got {type(obj).__name__}")
    return obj


def cmd_keygen(args) -> int:
    rng = _rng(args)
    if args.scheme == "rsaplus":
        _, key = keys.keygen_rsaplus(args.bits, rng, blum=args.mode == "williams")
    elif args.scheme == "rsa":
        key = keys.keygen_rsa(args.bits, rng)
    else:
        key = keys.keygen_rabin(args.bits, rng)
    if args.out:
        keys.save(key, args.out)
        keys.save(key.public, args.out + ".pub")
        print(f"wrote {args.out} and {args.out}.pub")
    else:
        sys.stdout.write(keys.encode(key))
    return 0


def _read_message(args) -> int:
    if args.message is not None:
        return args.message
    with open(args.input, encoding="utf-8") as fh:
        return _parse_int(fh.read())


def cmd_encrypt(args) -> int:
    key = keys.public_part(keys.load(args.key))
    m = _read_message(args)
    if isinstance(key, RsaPlusPublicKey):
        ct = schemes.rsaplus_encrypt(m, key, _rng(args), args.mode, _profile(args, key.n))
    elif isinstance(key, RsaPublicKey):
        ct = Ciphertext("rsa", schemes.rsa_encrypt(m, key))
    elif isinstance(key, RabinPublicKey):
        ct = Ciphertext("rabin", schemes.rabin_encrypt(m, key.n))
    else:
        raise RsaPlusError(f"{args.key}: not a key")
    _write(keys.encode(ct), args.out)
    return 0


def cmd_decrypt(args) -> int:
    key = _load_kind(args.key, RsaPlusPrivateKey, RsaKeyPair, RabinKeyPair)
    ct = _load_kind(args.input, RsaPlusCiphertext, Ciphertext)
    if isinstance(key, RsaPlusPrivateKey):
        if not isinstance(ct, RsaPlusCiphertext):
            raise RsaPlusError("RSA+ key needs an RSA+ ciphertext")
        if args.mode == "williams":
            found = [schemes.rsaplus_decrypt_qr(ct, key).m]
        else:
            found = [cand.m for cand in schemes.rsaplus_decrypt(ct, key)]
    else:
        scheme = "rsa" if isinstance(key, RsaKeyPair) else "rabin"
        if not isinstance(ct, Ciphertext) or ct.scheme != scheme:
            raise RsaPlusError(f"{scheme} key needs a {scheme} ciphertext")
        if scheme == "rsa":
            found = [schemes.rsa_decrypt(ct.c, key)]
        else:
            found = schemes.rabin_decrypt(ct.c, key)
    text = "".join(f"candidate {i}/{len(found)}: {m}\n" for i, m in enumerate(found, 1))
    _write(text, args.out)
    return 0


def cmd_bench(args) -> int:
    bits = args.bits or [64]
    chosen = args.scheme or list(bench.SCHEMES)
    profile = schemes.PRODUCTION if args.profile == "production" else None
    reports = bench.run_benchmark(
        bits, args.keys, args.msgs, chosen, _rng(args), mode=args.mode, profile=profile
    )
    text = bench.emit_report(reports, args.format)
    if args.format == "table":
        for r in reports:
            for name, value in (("RSA+/RSA", r.rsaplus_over_rsa), ("RSA+/Rabin", r.rsaplus_over_rabin)):
                if value is not None:
                    text += f"# b={r.bit_length} {name} = {value:.3f}\n"
    _write(text, args.out)
    return 0


def cmd_analyze(args) -> int:
    rng = _rng(args)
    if args.what == "multiplicity":
        priv = _load_kind(args.key, RsaPlusPrivateKey)
        report = analysis.measure_decryption_multiplicity(
            priv, args.trials, rng, args.mode, _profile(args, priv.n)
        )
        fmt = args.format or "table"
        text = {"table": report.to_table, "csv": report.to_csv, "json": lambda: report.to_json() + "\n"}[fmt]()
    elif args.what == "jacobi":
        pub = keys.public_part(_load_kind(args.key, RsaPlusPrivateKey, RsaPlusPublicKey))
        agree = 0
        for _ in range(args.trials):
            m = analysis.random_unit(pub.n, rng)
            ct = schemes.rsaplus_encrypt(m, pub, rng, args.mode, _profile(args, pub.n))
            agree += analysis.jacobi_leak_check(m, ct, pub.n)
        text = f"jacobi(m/n) == jacobi(c/n): {agree}/{args.trials}\n"
    else:
        priv = _load_kind(args.key, RsaPlusPrivateKey)
        counts = analysis.reduction_suite(priv, args.trials, rng)
        text = "".join(f"{name}: {ok}/{args.trials}\n" for name, ok in counts.items())
    _write(text, args.out)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run

    failures = run(sys.stdout)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsaplus", description="RSA+, textbook RSA and Rabin toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, scheme=False, key=False, seed=True, out=True, mode=False, profile=False):
        if scheme:
            p.add_argument("--scheme", choices=["rsa", "rabin", "rsaplus"], default="rsaplus")
        if key:
            p.add_argument("--key", required=True, metavar="PATH")
        if seed:
            p.add_argument("--seed", type=int)
        if out:
            p.add_argument("--out", metavar="PATH")
        if mode:
            p.add_argument("--mode", choices=schemes.MODES)
        if profile:
            p.add_argument("--profile", choices=["production", "toy"])

    p = sub.add_parser("keygen", help="generate a key pair")
    common(p, scheme=True, mode=True)
    p.add_argument("--bits", type=int, required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt an integer message")
    common(p, key=True, mode=True, profile=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("message", nargs="?", type=_parse_int)
    src.add_argument("--in", dest="input", metavar="PATH")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt and list every candidate plaintext")
    common(p, key=True, seed=False, mode=True)
    p.add_argument("--in", dest="input", metavar="PATH", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("bench", help="time enc+dec for the three schemes")
    common(p, mode=True, profile=True)
    p.add_argument("--scheme", action="append", choices=list(bench.SCHEMES))
    p.add_argument("--bits", type=int, action="append")
    p.add_argument("--keys", type=int, default=5)
    p.add_argument("--msgs", type=int, default=10)
    p.add_argument("--format", choices=["table", "csv"], default="table")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("analyze", help="multiplicity statistics and reductions")
    p.add_argument("what", choices=["multiplicity", "jacobi", "reductions"])
    common(p, key=True, mode=True, profile=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--format", choices=["table", "csv", "json"])
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("selftest", help="run built-in known-answer checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def _validate(parser, args) -> None:
    for name in ("bits", "trials", "keys", "msgs"):
        value = getattr(args, name, None)
        values = value if isinstance(value, list) else [value]
        if any(v is not None and v < 1 for v in values):
            parser.error(f"--{name} must be positive")
    if args.command == "keygen" and args.mode == "williams" and args.scheme != "rsaplus":
        parser.error("--mode williams only applies to --scheme rsaplus")
    if args.command == "analyze" and args.what != "multiplicity" and args.format:
        parser.error("--format only applies to 'analyze multiplicity'")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (RsaPlusError, OSError, ValueError) as exc:
        print(f"rsaplus: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
