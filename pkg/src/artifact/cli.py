"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 capacity, 3 parse or corrupt data, 4 I/O.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import baselines, bench, metrics, sim, steganalysis, stego
from .bitstream import BitStream, zero_ratio
from .decomp import BINARY, EXTENDED_BINARY, EXTENDED_VARIANTS, FIBONACCI, LUCAS, zero_lsb_ratio
from .errors import CapacityExceeded, StegoError
from .image import read_pgm, write_pgm
from .iwsim import iwsim_encode

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3, 4

STREAM_FORMAT = "artifact.bitstream/1"

FORMATS = f"""\
formats:
  images          binary PGM (P5), maxval 255, even width and height
  {STREAM_FORMAT}  32-bit big-endian bit count, then the bits packed MSB first
  payload files   raw bytes, each byte hidden MSB first
  CSV schemas     {bench.SCHEMA_TRANSFORM}, {bench.SCHEMA_EMBEDDING},
                  {bench.SCHEMA_DETECTOR}, artifact.decompose-stats/1,
                  artifact.analyze/1 (first line "# schema: <id>")

exit codes: 0 ok, 1 usage, 2 capacity, 3 parse/corrupt data, 4 I/O
"""

STATS_SCHEMES = {"binary": BINARY, "extended-binary": EXTENDED_BINARY,
                 "fibonacci": FIBONACCI, "lucas": LUCAS,
                 **{name: s for name, s in EXTENDED_VARIANTS.items()}}

log = logging.getLogger("artifact")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand default from clobbering a global value
    p = Parser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="traversal seed (default 0)")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    return p


def _csv_list(text: str) -> list[str]:
    return [t for t in text.replace(" ", ",").split(",") if t]


def build_parser() -> Parser:
    common = _common()
    parser = Parser(prog="artifact", description="Reversible-mapping LSB steganography toolkit.",
                    epilog=FORMATS, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--seed", type=int, default=0, help="traversal seed (default 0)")
    parser.add_argument("--quiet", action="store_true", help="suppress progress messages")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("transform", parents=[common], help="dump a SIM or IWSIM stream")
    p.add_argument("kind", choices=["sim", "iwsim"])
    p.add_argument("--in", dest="src", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("decompose-stats", parents=[common], help="zero-LSB ratio per scheme")
    p.add_argument("directory")
    p.add_argument("--out")

    methods = sorted(stego.PIPELINES) + sorted(baselines.EMBEDDERS)
    p = sub.add_parser("embed", parents=[common], help="hide a secret image or payload file")
    p.add_argument("--method", required=True, choices=methods)
    p.add_argument("--cover", required=True)
    p.add_argument("--secret", help="secret PGM (mapping methods)")
    p.add_argument("--payload", help="payload file (lsbr, lsbm, lsbmr)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("extract", parents=[common], help="recover a secret image or payload")
    p.add_argument("--method", required=True, choices=methods)
    p.add_argument("--stego", required=True)
    p.add_argument("--nbits", type=int, help="payload length in bits (lsbr, lsbm, lsbmr)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("analyze", parents=[common], help="run one detector on an image")
    p.add_argument("--detector", required=True, choices=list(steganalysis.DETECTORS))
    p.add_argument("--in", dest="src", required=True)
    p.add_argument("--threshold", type=float, default=steganalysis.LSBMS_THRESHOLD)

    p = sub.add_parser("bench", parents=[common], help="corpus experiments to CSV")
    p.add_argument("--kind", choices=["embedding", "detector", "transform"], default="embedding")
    p.add_argument("--covers")
    p.add_argument("--secrets", required=True)
    p.add_argument("--methods", type=_csv_list, default=list(bench.ALL_METHODS))
    p.add_argument("--rates", type=lambda s: [float(x) for x in _csv_list(s)],
                   default=list(bench.DEFAULT_RATES))
    p.add_argument("--detectors", type=_csv_list, default=list(bench.ALL_DETECTORS))
    p.add_argument("--threshold", type=float, default=steganalysis.LSBMS_THRESHOLD)
    p.add_argument("--jobs", type=int, default=bench.default_jobs())
    p.add_argument("--out", required=True)
    return parser


# -- commands --------------------------------------------------------------------

def cmd_transform(args) -> int:
    secret = read_pgm(args.src)
    if args.kind == "sim":
        side_info, payload = sim.sim_forward(secret)
        stream, side = BitStream().extend(side_info).extend(payload), len(side_info)
    else:
        stream, side = iwsim_encode(secret)
    Path(args.out).write_bytes(stream.to_bytes())
    print(f"{args.src},{args.kind},{len(stream)},{side},{zero_ratio(stream):.6f}")
    return EXIT_OK


def cmd_decompose_stats(args) -> int:
    paths = bench.list_images(args.directory)
    lines = ["# schema: artifact.decompose-stats/1", "file,scheme,ratio"]
    for path in paths:
        img = read_pgm(path)
        for name, scheme in STATS_SCHEMES.items():
            lines.append(f"{path.name},{name},{zero_lsb_ratio(scheme, img):.6f}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _payload_bits(path) -> np.ndarray:
    return np.unpackbits(np.frombuffer(Path(path).read_bytes(), dtype=np.uint8))


def cmd_embed(args) -> int:
    cover = read_pgm(args.cover)
    if args.method in stego.PIPELINES:
        if not args.secret:
            raise UsageError(f"--secret is required for {args.method}")
        result = stego.embed_detailed(cover, read_pgm(args.secret),
                                      stego.EmbedConfig(args.method, args.seed))
        img, n = result.stego, result.payload_bits
    else:
        if not args.payload:
            raise UsageError(f"--payload is required for {args.method}")
        bits = _payload_bits(args.payload)
        img, n = baselines.EMBEDDERS[args.method](cover, bits, args.seed), bits.size
    write_pgm(args.out, img)
    changed = metrics.modified_pixels(cover, img)
    print(f"{args.out},{args.method},{n},{changed},{metrics.psnr(cover, img):.4f}")
    return EXIT_OK


def cmd_extract(args) -> int:
    img = read_pgm(args.stego)
    if args.method in stego.PIPELINES:
        secret = stego.extract(img, stego.EmbedConfig(args.method, args.seed))
        write_pgm(args.out, secret)
        print(f"{args.out},{args.method},{secret.height},{secret.width}")
        return EXIT_OK
    if args.nbits is None:
        raise UsageError(f"--nbits is required for {args.method}")
    if args.nbits < 0 or args.nbits % 8:
        raise UsageError("--nbits must be a nonnegative multiple of 8")
    bits = baselines.EXTRACTORS[args.method](img, args.nbits, args.seed)
    Path(args.out).write_bytes(np.packbits(bits).tobytes())
    print(f"{args.out},{args.method},{args.nbits}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    img = read_pgm(args.src)
    try:
        rep = steganalysis.analyze(img, args.detector, args.threshold)
        estimate = f"{rep.estimate:.6f}"
        verdict, variant = rep.verdict, rep.variant
        if rep.flags:
            log.warning("%s: %s", args.src, ",".join(rep.flags))
    except steganalysis.NoEstimate as exc:
        log.warning("%s: %s", args.src, exc)
        estimate, verdict = "", "no-estimate"
        variant = steganalysis.DIH_VARIANT if args.detector == "dih" else ""
    print(f"{args.src},{args.detector},{estimate},{verdict},{variant}")
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        cfg = bench.BenchConfig(cover_dir=args.covers, secret_dir=args.secrets,
                                methods=tuple(args.methods), rates=tuple(args.rates),
                                seed=args.seed, detectors=tuple(args.detectors),
                                output=args.out, jobs=max(1, args.jobs),
                                lsbms_threshold=args.threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.kind != "transform" and not args.covers:
        raise UsageError("--covers is required")
    runner = {"embedding": bench.run_embedding_bench, "detector": bench.run_detector_bench,
              "transform": bench.run_transform_stats}[args.kind]
    text = runner(cfg)
    rows = sum(1 for ln in text.splitlines() if not ln.startswith("#")) - 1
    log.info("wrote %d rows to %s", rows, args.out)
    print(f"{args.out},{args.kind},{rows}")
    return EXIT_OK


COMMANDS = {"transform": cmd_transform, "decompose-stats": cmd_decompose_stats,
            "embed": cmd_embed, "extract": cmd_extract, "analyze": cmd_analyze,
            "bench": cmd_bench}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityExceeded as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except StegoError as exc:
        print(f"invalid data: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"invalid data: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
