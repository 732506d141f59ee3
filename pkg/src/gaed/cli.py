"""Command-line entry point: ``gaed {sim,oracle,transform,inspect,plot}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .automorphism import automorphism_powers, verify_automorphism
from .code import LinearCode, format_dense, load_matrix
from .gf2 import MAX_ENUM_DIM, gf2_inverse, min_distance_bruteforce
from .graph_transform import build_extended_pcm, prune_extended
from .sim import ML, SimConfig, format_csv, run_sweep

log = logging.getLogger("gaed")


def _setup_logging():
    level = os.environ.get("ENSEMBLE_LOG", "WARNING").upper()
    if level.isdigit():
        level = int(level)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)


def _matrix_arg(path: str, fmt: str | None):
    return load_matrix(Path(path), fmt)


def _run_sim(args, decoder_kind=None) -> int:
    cfg = SimConfig.load(args.config)
    cfg = cfg.with_overrides(seed=args.seed, workers=args.workers,
                             max_frames=args.max_frames,
                             min_frame_errors=args.min_frame_errors,
                             decoder_kind=decoder_kind)
    if args.no_timing:
        cfg = cfg.with_overrides(record_timing=False)
    rows = run_sweep(cfg, progress=lambda r: log.info("done %.2f dB", r.ebn0_db))
    text = format_csv(rows)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    out = Path(args.out)
    out.write_text(text)
    if not args.no_plot:
        from .plotting import plot_error_rates

        fig = plot_error_rates([out], out.with_suffix(".png"))
        log.info("figure written to %s", fig)
    return 0


def cmd_sim(args) -> int:
    return _run_sim(args)


def cmd_oracle(args) -> int:
    return _run_sim(args, decoder_kind=ML)


def cmd_transform(args) -> int:
    t = _matrix_arg(args.t, "dense")
    h = _matrix_arg(args.h, args.h_format)
    ext = build_extended_pcm(t, h)
    pruned = prune_extended(t, h)
    vn_lines = []
    for i, rec in enumerate(pruned.vn_map):
        line = f"v{i} {rec.kind} {rec.index}"
        if rec.merged:
            line += " merged " + " ".join(str(j) for j in rec.merged)
        vn_lines.append(line)
    sections = {
        "extended.txt": format_dense(ext),
        "pruned.txt": format_dense(pruned.h_pruned),
        "vnmap.txt": "\n".join(vn_lines) + "\n",
    }
    sys.stdout.write("# extended PCM [[T, I], [0, H]]\n" + sections["extended.txt"])
    sys.stdout.write("# pruned PCM\n" + sections["pruned.txt"])
    sys.stdout.write("# VN map\n" + sections["vnmap.txt"])
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in sections.items():
            (out_dir / name).write_text(text)
    return 0


def cmd_inspect(args) -> int:
    h = _matrix_arg(args.h, args.h_format)
    code = LinearCode.from_pcm(h)
    print(f"n = {code.n}")
    print(f"k = {code.k}")
    print(f"rank = {code.rank}")
    print(f"checks = {h.rows}")
    if code.k <= MAX_ENUM_DIM:
        print(f"d_min = {min_distance_bruteforce(code)}")
    else:
        print(f"d_min = skipped (k > {MAX_ENUM_DIM})")
    if args.t is None:
        return 0
    t = _matrix_arg(args.t, "dense")
    if t.shape != (code.n, code.n):
        raise ValueError(f"T is {t.shape}, code length is {code.n}")
    if gf2_inverse(t) is None:
        print("T: singular")
        return 1
    for exp, aut in zip(args.exponents, automorphism_powers(t, args.exponents)):
        verdict = "automorphism" if verify_automorphism(aut.t, code) else "not an automorphism"
        print(f"T^{exp}: delta = {aut.delta}, {verdict}")
    return 0


def cmd_plot(args) -> int:
    from .plotting import plot_error_rates

    plot_error_rates(args.csv, Path(args.out), args.labels, args.metric, args.title)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaed", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in (("sim", cmd_sim, "FER/BER sweep of a BP ensemble"),
                              ("oracle", cmd_oracle, "FER/BER sweep of brute-force ML")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON sweep configuration")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--max-frames", type=int)
        p.add_argument("--min-frame-errors", type=int)
        p.add_argument("--out", help="CSV output (default: stdout)")
        p.add_argument("--no-timing", action="store_true",
                       help="write wall_seconds as 0 for byte-reproducible CSVs")
        p.add_argument("--no-plot", action="store_true",
                       help="skip the PNG figure written next to --out")
        p.set_defaults(func=func)

    p = sub.add_parser("transform", help="print extended and pruned PCMs for (T, H)")
    p.add_argument("--t", required=True, help="dense T file")
    p.add_argument("--h", required=True, help="PCM file (.alist or dense)")
    p.add_argument("--h-format", choices=["alist", "dense"])
    p.add_argument("--out-dir", help="also write extended.txt, pruned.txt, vnmap.txt here")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("inspect", help="code parameters and automorphism checks")
    p.add_argument("--h", required=True, help="PCM file (.alist or dense)")
    p.add_argument("--h-format", choices=["alist", "dense"])
    p.add_argument("--t", help="dense T file")
    p.add_argument("--exponents", type=int, nargs="+", default=[1, -1, 2, -2])
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("plot", help="render sweep CSVs into one figure")
    p.add_argument("csv", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--labels", nargs="+")
    p.add_argument("--metric", choices=["fer", "ber"], default="fer")
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"gaed {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
