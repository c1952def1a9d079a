"""Command-line front end for the two-group workflow.

Group A::

    rotorcrypt keygen --wav voice.wav --out group.key
    rotorcrypt encrypt --key group.key --in plain.pgm --out cipher.pgm
    rotorcrypt split --key group.key --out-dir shares/

Group B::

    rotorcrypt reconstruct --share shares/share1.rsh --share shares/share3.rsh \\
        --share shares/share5.rsh --out group.key
    rotorcrypt decrypt --key group.key --in cipher.pgm --out plain.pgm
    rotorcrypt analyze --in cipher.pgm --compare plain.pgm --report report.json

Exit status: 0 success, 1 usage error, 2 I/O or format error, 3 domain error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import analysis, imaging, keystream, sharing
from .errors import FormatError, RotorCryptError
from .fileio import atomic_write_bytes, read_key, write_key

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _selection(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rotorcrypt", description="Rotor-machine image cryptosystem.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("keygen", help="derive a key file from a voice sample")
    p.add_argument("--wav", required=True, type=Path)
    p.add_argument("--offset", type=int, default=0, help="first sample of the 256-sample frame")
    p.add_argument("--select", type=_selection, default=keystream.DEFAULT_SELECTION,
                   help="7 distinct PLP coefficient indices in 0..13 (default 0,...,6)")
    p.add_argument("--out", required=True, type=Path)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} a PGM (or PPM, reduced to gray) image")
        p.add_argument("--key", required=True, type=Path)
        p.add_argument("--in", dest="input", required=True, type=Path)
        p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("split", help="split a key file into Shamir shares")
    p.add_argument("--key", required=True, type=Path)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--prime", type=int, default=sharing.DEFAULT_PRIME)
    p.add_argument("--seed", type=int, help="seed the coefficient RNG (reproducible shares)")
    p.add_argument("--out-dir", required=True, type=Path)

    p = sub.add_parser("reconstruct", help="recover a key file from shares")
    p.add_argument("--share", action="append", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("analyze", help="entropy, histogram and column means of an image")
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--compare", type=Path, help="second image for the pixel change rate")
    p.add_argument("--report", required=True, type=Path)
    p.add_argument("--histogram-csv", type=Path)
    return parser


def cmd_keygen(args) -> None:
    key = keystream.keystream_from_wav(args.wav, offset=args.offset, selection=args.select)
    write_key(args.out, key)


def cmd_encrypt(args) -> None:
    key = read_key(args.key)
    imaging.write_pgm(args.out, imaging.encrypt_image(key, imaging.read_gray(args.input)))


def cmd_decrypt(args) -> None:
    key = read_key(args.key)
    imaging.write_pgm(args.out, imaging.decrypt_image(key, imaging.read_gray(args.input)))


def cmd_split(args) -> None:
    key = read_key(args.key)
    try:
        params = sharing.SharingParams(args.n, args.k, args.prime)
    except ValueError as exc:
        raise UsageError(str(exc))
    rng = random.Random(args.seed) if args.seed is not None else None
    shares = sharing.split(key, params, rng=rng)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for share in shares:
        sharing.write_share(args.out_dir / f"share{share.x}.rsh", share)


def cmd_reconstruct(args) -> None:
    shares = [sharing.read_share(path) for path in args.share]
    write_key(args.out, sharing.reconstruct(shares))


def cmd_analyze(args) -> None:
    img = imaging.read_gray(args.input)
    other = imaging.read_gray(args.compare) if args.compare else None
    report = analysis.analyze(img, other)
    atomic_write_bytes(args.report, (report.to_json() + "\n").encode())
    if args.histogram_csv:
        atomic_write_bytes(args.histogram_csv, report.histogram_csv().encode())


COMMANDS = {
    "keygen": cmd_keygen,
    "encrypt": cmd_encrypt,
    "decrypt": cmd_decrypt,
    "split": cmd_split,
    "reconstruct": cmd_reconstruct,
    "analyze": cmd_analyze,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RotorCryptError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:
        # argparse --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
