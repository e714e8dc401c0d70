"""``conebits`` command line.

Subcommands: generate, convert, certify, encode, test, experiment, report.
Exit codes: 0 success, 1 usage error, 2 data/format error, 3 threshold or
certification failure under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bitcodec import (
    encode_vector,
    encode_vector_byte_aligned,
    read_stream,
    write_stream,
)
from .combinatorics import (
    FVector,
    HVector,
    RngConfig,
    f_of_graph,
    f_to_h,
    h_to_f,
    is_symmetrical,
    iterate_cone,
    palindromic_h,
    random_graph,
    read_vector,
    simplex_dual_f,
    write_vector,
)
from .experiments import EXPERIMENTS, ExperimentConfig, aggregate, load_config, load_tables, run_experiment
from .gtheorem import (
    check_dehn_sommerville,
    check_mcmullen,
    cone_failure_threshold,
    polytope_profile,
    vertex_equation_holds,
)
from .sts import SuiteParams, run_suite

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_THRESHOLD = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _write_json(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _sidecar(path) -> Path:
    # vector and report files keep their suffix so they never collide with a
    # stream sidecar sharing the same stem
    path = Path(path)
    return path.with_name(path.name + ".manifest.json")


def _manifest(path, command: str, argv: list[str], **extra) -> Path:
    mpath = _sidecar(path)
    _write_json({"command": command, "argv": argv, "generator": f"conebits {__version__}", **extra}, mpath)
    return mpath


# --- subcommands ---------------------------------------------------------------


def _cmd_generate(args, argv):
    c = args.construction
    given = {
        "length": args.length is not None,
        "pattern_value": args.pattern_value is not None,
        "graph_n": args.graph_n is not None,
        "graph_p": args.graph_p is not None,
        "seed": args.seed is not None,
    }
    needs = {
        "simplex-dual": {"length"},
        "pattern": {"length", "pattern_value"},
        "random-graph": {"graph_n", "graph_p", "seed"},
    }[c]
    missing = sorted(k for k in needs if not given[k])
    extra = sorted(k for k, v in given.items() if v and k not in needs)
    if missing:
        raise UsageError(f"--construction {c} requires --{', --'.join(m.replace('_', '-') for m in missing)}")
    if extra:
        raise UsageError(f"--construction {c} does not take --{', --'.join(m.replace('_', '-') for m in extra)}")
    if args.cones < 0:
        raise UsageError("--cones must be non-negative")

    info = {"construction": c, "cones": args.cones}
    try:
        if c == "simplex-dual":
            info["length"] = args.length
            f = simplex_dual_f(args.length)
        elif c == "pattern":
            info.update(length=args.length, pattern_value=args.pattern_value)
            f = h_to_f(palindromic_h(args.length, args.pattern_value))
        else:
            p = Fraction(args.graph_p)
            g = random_graph(args.graph_n, p, RngConfig(args.seed))
            info.update(n=args.graph_n, p=str(p), seed=args.seed, rng="pcg64")
            info["graph"] = {"num_vertices": g.num_vertices, "num_edges": g.num_edges}
            f = f_of_graph(g)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    f = iterate_cone(f, args.cones)
    out = write_vector(f, args.out)
    return _manifest(out, "generate", argv, is_symmetrical=is_symmetrical(f), **info)


def _cmd_convert(args, argv):
    v = read_vector(args.inp)
    if args.direction == "f2h":
        if not isinstance(v, FVector):
            raise ValueError(f"{args.inp}: f2h needs an f-vector file")
        out_v = f_to_h(v)
    else:
        if not isinstance(v, HVector):
            raise ValueError(f"{args.inp}: h2f needs an h-vector file")
        out_v = h_to_f(v)
    out = write_vector(out_v, args.out)
    return _manifest(out, "convert", argv, direction=args.direction)


def _certify_report(f_complex: FVector, d: int, convention: str) -> dict:
    f_poly = f_complex if convention == "polytope" else polytope_profile(f_complex)
    f_cx = polytope_profile(f_poly)
    rep = check_mcmullen(f_poly, d)
    threshold = None
    if len(f_cx) == 2 and f_cx[1] >= 1:
        thr = cone_failure_threshold(f_cx[0], f_cx[1])
        threshold = None if thr is None else str(thr)
    return {
        "conditions": {
            "symmetric": rep.symmetric_ok,
            "monotone": rep.monotone_ok,
            "growth": rep.growth_ok,
        },
        "passed": rep.passed,
        "first_violation": None if rep.first_violation is None else list(rep.first_violation),
        "threshold": threshold,
        "dehn_sommerville": check_dehn_sommerville(f_to_h(f_cx)),
        "vertex_equation": vertex_equation_holds(f_poly, d),
        "is_symmetrical": is_symmetrical(f_cx),
        "dimension": d,
        "m_index": rep.m_index,
        "half_index": rep.half_index,
    }


def _cmd_certify(args, argv):
    v = read_vector(args.inp)
    f = h_to_f(v) if isinstance(v, HVector) else v
    if len(f) != args.dimension:
        raise ValueError(
            f"{args.inp}: a {args.dimension}-polytope needs {args.dimension} components, found {len(f)}"
        )
    report = _certify_report(f, args.dimension, args.convention)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    mpath = None
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        mpath = _manifest(out, "certify", argv)
    else:
        sys.stdout.write(text)
    code = EXIT_THRESHOLD if (args.strict and not report["passed"]) else EXIT_OK
    return mpath, code


def _cmd_encode(args, argv):
    v = read_vector(args.inp)
    comps = v.components
    if any(c < 0 for c in comps):
        raise ValueError(f"{args.inp}: negative components cannot be encoded")
    enc = encode_vector if args.mode == "bitwise" else encode_vector_byte_aligned
    stream = enc(comps)
    source = {"kind": "fvector" if isinstance(v, FVector) else "hvector", "components": len(v), "path": str(args.inp)}
    meta = {"command": "encode", "argv": argv, "mode": args.mode, "source_vector": source}
    src_manifest = _sidecar(args.inp)
    if src_manifest.exists():
        meta["construction"] = json.loads(src_manifest.read_text())
    meta["parameters"] = {"mode": args.mode, "format": args.format}
    return write_stream(stream, args.out, args.format, meta)


def _suite_params(args) -> SuiteParams:
    return SuiteParams(
        alpha=args.alpha,
        block_frequency_M=args.block_frequency_m,
        approx_entropy_m=args.approx_entropy_m,
        serial_m=args.serial_m,
        linear_complexity_M=args.linear_complexity_m,
    )


def _cmd_test(args, argv):
    if not 0 < args.alpha < 1:
        raise UsageError("--alpha must lie in (0, 1)")
    stream = read_stream(args.inp, args.format, args.bit_length)
    report = run_suite(stream, _suite_params(args))
    data = report.to_dict()
    data["threshold"] = args.threshold
    prop = report.pass_proportion
    data["meets_threshold"] = prop is not None and prop >= args.threshold
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    mpath = None
    if args.report:
        out = Path(args.report)
        out.write_text(text)
        mpath = _manifest(out, "test", argv)
    else:
        sys.stdout.write(text)
    failed = args.strict and not data["meets_threshold"]
    return mpath, (EXIT_THRESHOLD if failed else EXIT_OK)


def _cmd_experiment(args, argv):
    if args.config:
        cfg = load_config(args.config, full=args.full)
    else:
        cfg = ExperimentConfig.preset(args.name, full=args.full)
    outdir = args.out or cfg.output_dir or "."
    table = run_experiment(cfg, outdir, args.workers)
    summary = {
        "experiment": cfg.experiment,
        "variants": len(table.variants),
        "clustering_fraction": table.clustering_fraction,
    }
    print(json.dumps(summary, sort_keys=True))
    return Path(outdir) / cfg.experiment / "experiment.ini"


def _cmd_report(args, argv):
    tables = load_tables(args.dir)
    out = Path(args.out or args.dir)
    paths = [aggregate(tables, layout, out) for layout in args.layout]
    return _manifest(out / "report", "report", argv, files=[p.name for p in paths])


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conebits", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"conebits {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("generate", help="write an f-vector file")
    g.add_argument("--construction", required=True, choices=["simplex-dual", "pattern", "random-graph"])
    g.add_argument("--length", type=int, help="h-vector component count L")
    g.add_argument("--pattern-value", type=int, help="non-end h value c")
    g.add_argument("--graph-n", type=int)
    g.add_argument("--graph-p", help="edge probability, e.g. 1/2 or 0.3")
    g.add_argument("--seed", type=int)
    g.add_argument("--cones", type=int, default=0)
    g.add_argument("--out", required=True)

    c = sub.add_parser("convert", help="f-vector <-> h-vector")
    c.add_argument("--direction", required=True, choices=["f2h", "h2f"])
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--out", required=True)

    ce = sub.add_parser("certify", help="McMullen / Dehn-Sommerville report")
    ce.add_argument("--in", dest="inp", required=True)
    ce.add_argument("--dimension", type=int, required=True)
    ce.add_argument("--convention", choices=["complex", "polytope"], default="complex")
    ce.add_argument("--out")
    ce.add_argument("--strict", action="store_true")

    e = sub.add_parser("encode", help="vector file -> bit stream")
    e.add_argument("--in", dest="inp", required=True)
    e.add_argument("--format", choices=["raw", "ascii"], default="raw")
    e.add_argument("--mode", choices=["bitwise", "byte-aligned"], default="bitwise")
    e.add_argument("--out", required=True)

    t = sub.add_parser("test", help="run the statistical suite on a stream")
    t.add_argument("--in", dest="inp", required=True)
    t.add_argument("--format", choices=["raw", "ascii"], default="raw")
    t.add_argument("--bit-length", type=int, help="raw stream length if no manifest")
    d = SuiteParams()
    t.add_argument("--alpha", type=float, default=d.alpha)
    t.add_argument("--block-frequency-m", type=int, default=d.block_frequency_M)
    t.add_argument("--approx-entropy-m", type=int, default=d.approx_entropy_m)
    t.add_argument("--serial-m", type=int, default=d.serial_m)
    t.add_argument("--linear-complexity-m", type=int, default=d.linear_complexity_M)
    t.add_argument("--threshold", type=float, default=0.94, help="minimum pass proportion")
    t.add_argument("--report")
    t.add_argument("--strict", action="store_true", help="exit 3 below --threshold")

    x = sub.add_parser("experiment", help="run an experiment sweep")
    src = x.add_mutually_exclusive_group(required=True)
    src.add_argument("--config")
    src.add_argument("--name", choices=EXPERIMENTS, help="use the built-in preset")
    x.add_argument("--full", action="store_true", help="full-scale parameters")
    x.add_argument("--out")
    x.add_argument("--workers", type=int)

    r = sub.add_parser("report", help="aggregate experiment reports")
    r.add_argument("--dir", required=True)
    r.add_argument(
        "--layout",
        action="append",
        choices=["scatter_csv", "sparkline_csv", "json"],
        help="repeatable; default all three",
    )
    r.add_argument("--out")
    return p


_COMMANDS = {
    "generate": _cmd_generate,
    "convert": _cmd_convert,
    "certify": _cmd_certify,
    "encode": _cmd_encode,
    "test": _cmd_test,
    "experiment": _cmd_experiment,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "report" and not args.layout:
            args.layout = ["scatter_csv", "sparkline_csv", "json"]
        result = _COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    if result is not None:
        print(f"manifest: {result}")
    return code


if __name__ == "__main__":
    sys.exit(main())
