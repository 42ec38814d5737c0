"""pkeetfa command-line tool.

Exit codes: 0 success (and EQUAL for ``test``), 1 NOT-EQUAL, 2 invalid
parameters or misuse, 3 I/O or parse failure, 4 decryption rejected.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import codec, scheme
from .bench import MIN_TRIALS, run_bench, write_csv
from .errors import CodecError, InvalidParams, PkeetError, Rejected
from .hashing import message_bytes, message_from_bytes
from .params import PRESETS, preset, validate
from .rng import Rng

EXIT_OK, EXIT_NOT_EQUAL, EXIT_USAGE, EXIT_IO, EXIT_REJECT = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _seed(args):
    env = os.environ.get("PKEET_SEED")
    return env if env is not None else args.seed


def _rng(args, label: str) -> Rng:
    seed = _seed(args)
    return Rng() if seed is None else Rng(f"{seed}/{label}")


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, data: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror}") from None


def _load(path: str, kind: codec.Kind):
    try:
        return codec.decode(_read(path), expect=kind)
    except CodecError as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from None


def _same_params(*objs) -> None:
    if len({o.params.fingerprint for o in objs}) > 1:
        raise CliError(EXIT_USAGE, "inputs were made under different parameters")


def _params(name: str):
    try:
        return preset(name)
    except InvalidParams as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None


def cmd_keygen(args) -> int:
    p = _params(args.preset)
    if p.insecure:
        print(f"warning: preset {args.preset} is INSECURE and for tests only", file=sys.stderr)
    pk, sk = scheme.setup(p, _rng(args, "keygen"))
    _write(args.out_pk, codec.encode(pk))
    _write(args.out_sk, codec.encode(sk))
    return EXIT_OK


def cmd_encrypt(args) -> int:
    pk = _load(args.pk, codec.Kind.PK)
    p = pk.params
    problems = validate(p)
    if (problems or p.insecure) and not args.allow_insecure:
        reason = "; ".join(problems) or f"preset {p.label} is insecure"
        raise CliError(EXIT_USAGE, f"refusing to encrypt: {reason} (use --allow-insecure to override)")
    try:
        msg = message_from_bytes(_read(args.input), p.n)
    except ValueError as exc:
        raise CliError(EXIT_IO, f"{args.input}: {exc}") from None
    _write(args.out, codec.encode(scheme.encrypt(pk, msg, _rng(args, "encrypt"))))
    return EXIT_OK


def cmd_decrypt(args) -> int:
    pk = _load(args.pk, codec.Kind.PK)
    sk = _load(args.sk, codec.Kind.SK)
    ct = _load(args.input, codec.Kind.CT)
    _same_params(pk, sk, ct)
    try:
        msg = scheme.decrypt(sk, pk, ct, _rng(args, "decrypt"))
    except Rejected:
        print("REJECT", file=sys.stderr)
        return EXIT_REJECT
    _write(args.out, message_bytes(msg))
    return EXIT_OK


def cmd_td(args) -> int:
    sk = _load(args.sk, codec.Kind.SK)
    pk = _load(args.pk, codec.Kind.PK)
    _same_params(sk, pk)
    if args.type in ("1", "3j"):
        td = (scheme.td1 if args.type == "1" else scheme.td3_j)(sk, pk)
    else:
        if args.ct is None:
            raise CliError(EXIT_USAGE, f"--type {args.type} needs --ct")
        ct = _load(args.ct, codec.Kind.CT)
        _same_params(sk, ct)
        fn = scheme.td2 if args.type == "2" else scheme.td3_i
        td = fn(sk, pk, ct, _rng(args, "td"))
    _write(args.out, codec.encode(td))
    return EXIT_OK


def cmd_test(args) -> int:
    td_i = _load(args.td_i, codec.Kind.TD)
    td_j = _load(args.td_j, codec.Kind.TD)
    ct_i = _load(args.ct_i, codec.Kind.CT)
    ct_j = _load(args.ct_j, codec.Kind.CT)
    _same_params(td_i, td_j, ct_i, ct_j)
    rng = _rng(args, "test")
    if args.type == "1":
        equal = scheme.test1(td_i, td_j, ct_i, ct_j, rng)
    elif args.type == "2":
        equal = scheme.test2(td_i, td_j, ct_i, ct_j)
    else:
        equal = scheme.test3(td_i, td_j, ct_i, ct_j, rng)
    print("EQUAL" if equal else "NOT-EQUAL")
    return EXIT_OK if equal else EXIT_NOT_EQUAL


def cmd_bench(args) -> int:
    p = _params(args.preset)
    if args.trials < MIN_TRIALS:
        raise CliError(EXIT_USAGE, f"--trials must be at least {MIN_TRIALS}")
    seed = _seed(args)
    records = run_bench(p, args.trials, seed=0 if seed is None else seed, jobs=args.jobs)
    if args.out == "-":
        write_csv(records, sys.stdout)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                write_csv(records, fh)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {args.out}: {exc.strerror}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pkeetfa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--seed", default=None, help="deterministic seed (PKEET_SEED overrides)")
        p.set_defaults(func=fn)
        return p

    p = add("keygen", cmd_keygen, "generate a key pair")
    p.add_argument("--preset", required=True, help=f"one of {', '.join(PRESETS)}")
    p.add_argument("--out-pk", required=True)
    p.add_argument("--out-sk", required=True)

    p = add("encrypt", cmd_encrypt, "encrypt an n-bit message file")
    p.add_argument("--pk", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--allow-insecure", action="store_true", help="permit insecure or invalid parameters")

    p = add("decrypt", cmd_decrypt, "decrypt a ciphertext (exit 4 on reject)")
    p.add_argument("--pk", required=True)
    p.add_argument("--sk", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)

    p = add("td", cmd_td, "issue an authorization trapdoor")
    p.add_argument("--type", required=True, choices=["1", "2", "3i", "3j"])
    p.add_argument("--sk", required=True)
    p.add_argument("--pk", required=True, help="the owner's public key (b and u travel with the trapdoor)")
    p.add_argument("--ct", help="ciphertext to bind (types 2 and 3i)")
    p.add_argument("--out", required=True)

    p = add("test", cmd_test, "equality test on two ciphertexts")
    p.add_argument("--type", required=True, choices=["1", "2", "3"])
    p.add_argument("--td-i", required=True)
    p.add_argument("--td-j", required=True)
    p.add_argument("--ct-i", required=True)
    p.add_argument("--ct-j", required=True)

    p = add("bench", cmd_bench, "time every operation, CSV output")
    p.add_argument("--preset", required=True)
    p.add_argument("--trials", type=int, default=MIN_TRIALS)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except PkeetError as exc:  # VariantMismatch, BindingMismatch, InvalidParams, ...
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
