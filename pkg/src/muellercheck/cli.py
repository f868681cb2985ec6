"""Command-line front end.

Exit status for ``classify``: 0 all physical, 2 any pre-Mueller-only,
3 any non-pre-Mueller, 1 usage or parse errors. ``decompose`` and ``witness``
return 2 when H(M) is not positive semidefinite.
"""
import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import formats
from .cone import ConeScanConfig, MatrixKind, classify, diag_region_scan
from .entanglement import witness_negativity
from .errors import InvalidInputError, NotPhysicalError
from .mueller import decompose_convex, mueller_jones_from_jones
from .polarization import DEFAULT_TOL, coherency_from_stokes, stokes_from_coherency


EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PRE_MUELLER = 2
EXIT_NON_PRE_MUELLER = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _precision(value):
    if value == "full":
        return formats.FULL_PRECISION
    try:
        p = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("precision must be an integer or 'full'") from None
    if not 1 <= p <= formats.FULL_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must be in 1..{formats.FULL_PRECISION}")
    return p


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _looks_like_batch(path, text):
    if path.endswith(".csv"):
        return True
    for _, line in formats._data_lines(text):
        return "," in line
    return False


def _load_single_mueller(path):
    return formats.parse_mueller(_read_text(path), source=path)


def _fmt(args, x):
    return formats.format_real(x, args.precision)


def cmd_classify(args, out):
    text = _read_text(args.input)
    if args.batch or _looks_like_batch(args.input, text):
        records, failures = formats.parse_batch(text, source=args.input)
        for err in failures:
            print(f"skipped: {err}", file=sys.stderr)
        if failures:
            print(f"{len(failures)} row(s) failed to parse, {len(records)} classified",
                  file=sys.stderr)
        if not records:
            print("no parseable rows", file=sys.stderr)
            return EXIT_ERROR
    else:
        records = [(None, formats.parse_mueller(text, source=args.input))]

    cfg = ConeScanConfig.from_grid(args.grid, tol=args.tol)
    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            results = list(pool.map(lambda rec: classify(rec[1], cfg), records))
    else:
        results = [classify(m, cfg) for _, m in records]

    if args.format == "csv":
        out.write("id,kind,mueller_jones,min_h_eig,cone_min\n")
    for (ident, _), res in zip(records, results):
        mj = "true" if res.is_mueller_jones else "false"
        if args.format == "csv":
            ident = "" if ident is None else ident
            out.write(f"{ident},{res.kind.value},{mj},{_fmt(args, res.min_h_eigenvalue)},"
                      f"{_fmt(args, res.cone_min_value)}\n")
        else:
            prefix = "" if ident is None else f"{ident}: "
            out.write(f"{prefix}{res.kind.value}, mueller_jones={mj}, "
                      f"min_h_eig={_fmt(args, res.min_h_eigenvalue)}, "
                      f"cone_min={_fmt(args, res.cone_min_value)}\n")

    kinds = {res.kind for res in results}
    if MatrixKind.NON_PRE_MUELLER in kinds:
        return EXIT_NON_PRE_MUELLER
    if MatrixKind.PRE_MUELLER_ONLY in kinds:
        return EXIT_PRE_MUELLER
    return EXIT_OK


def cmd_decompose(args, out):
    m = _load_single_mueller(args.input)
    try:
        dec = decompose_convex(m, tol=args.tol)
    except NotPhysicalError as exc:
        out.write(f"not physical: min_h_eig={_fmt(args, exc.min_eigenvalue)}\n")
        return EXIT_PRE_MUELLER
    norm = np.linalg.norm(m)
    residual = np.linalg.norm(dec.reconstruct() - m) / norm if norm > 0 else 0.0
    out.write(f"terms={len(dec)}\n")
    for k, (w, j) in enumerate(dec, start=1):
        out.write(f"# term {k} weight={_fmt(args, w)}\n")
        out.write(formats.format_complex_matrix(j, args.precision))
    out.write(f"residual={_fmt(args, residual)}\n")
    return EXIT_OK


def cmd_witness(args, out):
    m = _load_single_mueller(args.input)
    min_eig, state = witness_negativity(m)
    tr = float(np.trace(state).real)
    physical = min_eig >= -args.tol * tr
    out.write(f"witness_min_eig={_fmt(args, min_eig)}\n")
    if physical:
        out.write("verdict=physical: output BCP matrix of the entangled beam is PSD\n")
    else:
        out.write("verdict=unphysical: output BCP matrix of the entangled beam is not PSD\n")
    if args.dump_state:
        Path(args.dump_state).write_text(formats.format_complex_matrix(state, args.precision))
    return EXIT_OK if physical else EXIT_PRE_MUELLER


def cmd_diag_scan(args, out):
    rows = diag_region_scan(args.resolution, extent=args.extent, tol=args.tol)
    lines = ["d1,d2,d3,region\n"]
    for d1, d2, d3, region in rows:
        lines.append(f"{_fmt(args, d1)},{_fmt(args, d2)},{_fmt(args, d3)},{region.value}\n")
    if args.out in (None, "-"):
        out.writelines(lines)
    else:
        with open(args.out, "w", newline="\n") as fh:
            fh.writelines(lines)
    return EXIT_OK


def _convert_tokens(args, count):
    if args.file:
        text = _read_text(args.file)
        tokens = [t for _, line in formats._data_lines(text) for t in line.split()]
    else:
        tokens = args.values
    if len(tokens) != count:
        raise InvalidInputError(f"expected {count} entries, got {len(tokens)}")
    return tokens


def cmd_convert(args, out):
    p = args.precision
    tokens = _convert_tokens(args, 4)
    if args.kind == "stokes":
        s = np.array([formats.parse_real(t) for t in tokens])
        out.write(formats.format_complex_matrix(coherency_from_stokes(s), p))
        return EXIT_OK
    mat = np.array([formats.parse_complex(t) for t in tokens]).reshape(2, 2)
    if args.kind == "coherency":
        s = stokes_from_coherency(mat, tol=args.tol)
        out.write(" ".join(formats.format_real(x, p) for x in s) + "\n")
    else:
        out.write(formats.format_real_matrix(mueller_jones_from_jones(mat), p))
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="relative tolerance for all PSD / cone decisions (default 1e-9)")
    common.add_argument("--grid", type=int, default=181,
                        help="cone-scan polar samples; azimuth uses 2*grid-1 (default 181)")
    common.add_argument("--precision", type=_precision, default=formats.DEFAULT_PRECISION,
                        help="significant digits, or 'full' for 17 (default 6)")

    parser = _Parser(prog="muellercheck",
                     description="Physicality tests for 4x4 Mueller matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common],
                       help="classify Mueller matrices (single file or batch CSV)")
    p.add_argument("input", help="Mueller matrix file, batch CSV, or '-' for stdin")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--batch", action="store_true", help="treat input as batch CSV")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for batch input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", parents=[common],
                       help="convex decomposition into Jones systems")
    p.add_argument("input")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("witness", parents=[common],
                       help="apply M to the entangled two-mode beam")
    p.add_argument("input")
    p.add_argument("--dump-state", metavar="PATH", help="write the output BCP matrix here")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("diag-scan", parents=[common],
                       help="region map of diag(1, d1, d2, d3) as CSV")
    p.add_argument("resolution", type=int)
    p.add_argument("out", nargs="?", default=None, help="output CSV path (default stdout)")
    p.add_argument("--extent", type=float, default=1.1,
                   help="half-width of the scanned box (default 1.1)")
    p.set_defaults(func=cmd_diag_scan)

    p = sub.add_parser("convert", parents=[common], help="convert between representations")
    p.add_argument("kind", choices=("stokes", "coherency", "jones-to-mueller"),
                   help="stokes -> coherency, coherency -> stokes, jones -> Mueller")
    p.add_argument("values", nargs="*", help="inline entries, row-major")
    p.add_argument("-f", "--file", help="read the input matrix/vector from a file")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (InvalidInputError, OSError) as exc:
        print(f"muellercheck: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
