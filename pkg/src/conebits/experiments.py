"""Config-driven experiment sweeps and p-value aggregation.

Four sweeps are available:

``coning_sweep``
    all-ones h of length L -> dual f-vector -> j cones, j over a range
``length_sweep``
    all-ones h, L over a range, no cones
``pattern_sweep``
    palindromic h ``(1, c, ..., c, 1)``, c over a range
``random_graph``
    seeded random graph -> j cones, j over a range

Every variant is encoded to a bit stream and run through the native suite.
Output layout::

    <outdir>/<experiment>/experiment.ini
    <outdir>/<experiment>/<variant>/stream.bin
    <outdir>/<experiment>/<variant>/stream.manifest.json
    <outdir>/<experiment>/<variant>/report.json
    <outdir>/<experiment>/scatter.csv, sparkline.csv, reports.json

A variant manifest holds everything needed to regenerate its directory
byte for byte (see :func:`replay_variant`).  Nothing time- or
host-dependent is written.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional

from . import __version__
from .bitcodec import BitStream, encode_vector, encode_vector_byte_aligned, write_stream
from .combinatorics import (
    FVector,
    HVector,
    RngConfig,
    cone_h,
    dumps_vector,
    f_of_graph,
    f_to_h,
    h_to_f,
    is_symmetrical,
    iterate_cone,
    palindromic_h,
    random_graph,
)
from .gtheorem import (
    check_dehn_sommerville,
    cone_failure_threshold,
    polytope_profile,
    vertex_equation_holds,
)
from .sts import SuiteParams, run_suite

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "PValueRow",
    "PValueTable",
    "load_config",
    "dump_config",
    "experiment_coning",
    "experiment_lengths",
    "experiment_patterns",
    "experiment_random_graph",
    "run_experiment",
    "replay_variant",
    "aggregate",
    "load_tables",
    "WORKERS_ENV",
]

EXPERIMENTS = ("coning_sweep", "length_sweep", "pattern_sweep", "random_graph")
WORKERS_ENV = "CONEBITS_WORKERS"

# fields each experiment needs, besides the shared ones
_REQUIRED = {
    "coning_sweep": ("base_length", "cone_min", "cone_max"),
    "length_sweep": ("length_min", "length_max"),
    "pattern_sweep": ("base_length", "pattern_min", "pattern_max"),
    "random_graph": ("graph_n", "graph_p", "seed", "cone_min", "cone_max"),
}

# desk-scale defaults; serial m = 14 is the largest value valid for 2**17 bits
_DESK = {
    "coning_sweep": dict(base_length=551, cone_min=0, cone_max=19),
    "length_sweep": dict(length_min=551, length_max=600),
    "pattern_sweep": dict(base_length=551, pattern_min=1, pattern_max=20),
    "random_graph": dict(graph_n=50, graph_p=Fraction(1, 2), seed=20240501, cone_min=0, cone_max=19),
}
_DESK_SUITE = SuiteParams(serial_m=14)

_FULL = {
    "coning_sweep": dict(base_length=3751, cone_min=0, cone_max=99),
    "length_sweep": dict(length_min=3750, length_max=3849),
    "pattern_sweep": dict(base_length=3750, pattern_min=1, pattern_max=100),
    "random_graph": dict(graph_n=50, graph_p=Fraction(1, 2), seed=20240501, cone_min=0, cone_max=99),
}
_FULL_SUITE = SuiteParams()


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    base_length: Optional[int] = None
    cone_min: Optional[int] = None
    cone_max: Optional[int] = None
    length_min: Optional[int] = None
    length_max: Optional[int] = None
    pattern_min: Optional[int] = None
    pattern_max: Optional[int] = None
    graph_n: Optional[int] = None
    graph_p: Optional[Fraction] = None
    seed: Optional[int] = None
    suite: SuiteParams = field(default_factory=SuiteParams)
    mode: str = "bitwise"
    output_dir: Optional[str] = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.mode not in ("bitwise", "byte-aligned"):
            raise ValueError(f"unknown encoding mode {self.mode!r}")
        missing = [k for k in _REQUIRED[self.experiment] if getattr(self, k) is None]
        if missing:
            raise ValueError(f"{self.experiment} needs {', '.join(missing)}")
        exp = self.experiment
        if exp in ("coning_sweep", "pattern_sweep") and self.base_length < 2:
            raise ValueError("base_length must be at least 2")
        if exp in ("coning_sweep", "random_graph"):
            _check_range("cone", self.cone_min, self.cone_max, 0)
        if exp == "length_sweep":
            _check_range("length", self.length_min, self.length_max, 2)
        if exp == "pattern_sweep":
            _check_range("pattern", self.pattern_min, self.pattern_max, 1)
        if exp == "random_graph":
            if self.graph_n < 2:
                raise ValueError("graph_n must be at least 2")
            if not 0 < Fraction(self.graph_p) <= 1:
                raise ValueError("graph_p must lie in (0, 1]")
            object.__setattr__(self, "graph_p", Fraction(self.graph_p))

    @classmethod
    def preset(cls, experiment: str, full: bool = False, **overrides) -> "ExperimentConfig":
        """Desk-scale (default) or full-scale (``full=True``) configuration."""
        base = dict((_FULL if full else _DESK)[experiment])
        base["suite"] = _FULL_SUITE if full else _DESK_SUITE
        base.update(overrides)
        return cls(experiment=experiment, **base)

    def relevant(self) -> dict:
        """The fields that define this experiment's output, JSON-ready."""
        out = {"experiment": self.experiment, "mode": self.mode}
        for k in _REQUIRED[self.experiment]:
            v = getattr(self, k)
            out[k] = str(v) if isinstance(v, Fraction) else v
        out["suite"] = self.suite.to_dict()
        return out

    def variants(self) -> list[tuple[str, int]]:
        exp = self.experiment
        if exp in ("coning_sweep", "random_graph"):
            return [(f"j{j:03d}", j) for j in range(self.cone_min, self.cone_max + 1)]
        if exp == "length_sweep":
            return [(f"L{L:05d}", L) for L in range(self.length_min, self.length_max + 1)]
        return [(f"c{c:03d}", c) for c in range(self.pattern_min, self.pattern_max + 1)]


def _check_range(name, lo, hi, floor):
    if lo < floor:
        raise ValueError(f"{name} range must start at {floor} or above")
    if hi < lo:
        raise ValueError(f"{name} range [{lo}, {hi}] is empty")


# --- config files --------------------------------------------------------------

_INT_FIELDS = {f.name for f in fields(ExperimentConfig)} - {
    "experiment", "graph_p", "suite", "mode", "output_dir"
}


def load_config(path, full: bool = False) -> ExperimentConfig:
    """Read an INI config: an ``[experiment]`` section plus optional ``[suite]``.

    Keys absent from the file fall back to the desk preset, or to the full-scale
    preset when ``full`` is true.
    """
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror}") from exc
    except configparser.Error as exc:
        raise ValueError(f"{path}: {exc}") from None
    if not parser.has_section("experiment"):
        raise ValueError(f"{path}: missing [experiment] section")
    sec = dict(parser["experiment"])
    try:
        exp = sec.pop("experiment")
    except KeyError:
        raise ValueError(f"{path}: missing 'experiment' key") from None
    overrides = {}
    for key, raw in sec.items():
        if key in _INT_FIELDS:
            overrides[key] = int(raw)
        elif key == "graph_p":
            overrides[key] = Fraction(raw)
        elif key in ("mode", "output_dir"):
            overrides[key] = raw
        else:
            raise ValueError(f"{path}: unknown key {key!r} in [experiment]")
    if exp not in EXPERIMENTS:
        raise ValueError(f"{path}: unknown experiment {exp!r}")
    suite = _FULL_SUITE if full else _DESK_SUITE
    if parser.has_section("suite"):
        kw = {}
        # configparser lowercases keys; suite fields such as block_frequency_M do not
        names = {name.lower(): name for name in SuiteParams.__dataclass_fields__}
        for key, raw in parser["suite"].items():
            if key not in names:
                raise ValueError(f"{path}: unknown key {key!r} in [suite]")
            kw[names[key]] = float(raw) if key == "alpha" else int(raw)
        suite = replace(suite, **kw)
    overrides["suite"] = suite
    return ExperimentConfig.preset(exp, full=full, **overrides)


def dump_config(cfg: ExperimentConfig) -> str:
    """INI text that :func:`load_config` reads back to an equal config."""
    parser = configparser.ConfigParser()
    rel = cfg.relevant()
    suite = rel.pop("suite")
    parser["experiment"] = {k: str(v) for k, v in rel.items()}
    parser["suite"] = {k: str(v) for k, v in suite.items()}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


# --- variants ------------------------------------------------------------------


@lru_cache(maxsize=2)
def _dual_of_ones(length: int) -> FVector:
    return h_to_f(HVector([1] * length))


@lru_cache(maxsize=4)
def _graph(n: int, p: Fraction, seed: int):
    return random_graph(n, p, RngConfig(seed))


def _vector_digest(v) -> str:
    return hashlib.sha256(dumps_vector(v).encode("ascii")).hexdigest()


def build_variant(construction: dict) -> tuple[FVector, dict]:
    """Source f-vector and certificates for one variant description.

    ``construction`` is the ``construction`` block of a variant manifest.
    """
    kind = construction["kind"]
    extra = {}
    if kind == "simplex_dual_cone":
        L, j = construction["length"], construction["cones"]
        f = iterate_cone(_dual_of_ones(L), j)
        h = cone_h(HVector([1] * L), j)
    elif kind == "palindromic_dual":
        h = palindromic_h(construction["length"], construction["pattern_value"])
        f = h_to_f(h)
    elif kind == "random_graph_cone":
        g = _graph(construction["n"], Fraction(construction["p"]), construction["seed"])
        j = construction["cones"]
        f = iterate_cone(f_of_graph(g), j)
        h = f_to_h(f)
        extra["graph"] = {"num_vertices": g.num_vertices, "num_edges": g.num_edges}
        if g.num_edges >= 1:
            thr = cone_failure_threshold(g.num_vertices, g.num_edges)
            extra["cone_failure_threshold"] = None if thr is None else str(thr)
            if len(f) >= 2:
                d = len(f)
                extra["vertex_equation_holds"] = vertex_equation_holds(polytope_profile(f), d)
    else:
        raise ValueError(f"unknown construction {kind!r}")
    certificate = {
        "is_symmetrical": is_symmetrical(f),
        "dehn_sommerville": check_dehn_sommerville(h),
    }
    extra["certificate"] = certificate
    return f, extra


def _construction(cfg: ExperimentConfig, value: int) -> dict:
    exp = cfg.experiment
    if exp == "coning_sweep":
        return {"kind": "simplex_dual_cone", "length": cfg.base_length, "cones": value}
    if exp == "length_sweep":
        return {"kind": "simplex_dual_cone", "length": value, "cones": 0}
    if exp == "pattern_sweep":
        return {"kind": "palindromic_dual", "length": cfg.base_length, "pattern_value": value}
    return {
        "kind": "random_graph_cone",
        "n": cfg.graph_n,
        "p": str(cfg.graph_p),
        "seed": cfg.seed,
        "rng": "pcg64",
        "cones": value,
    }


def _encode(f: FVector, mode: str) -> BitStream:
    if mode == "bitwise":
        return encode_vector(f.components)
    return encode_vector_byte_aligned(f.components)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _run_variant_job(job) -> dict:
    manifest, vdir = job
    return _materialise(manifest, Path(vdir))


def _materialise(manifest: dict, vdir: Path) -> dict:
    f, extra = build_variant(manifest["construction"])
    stream = _encode(f, manifest["mode"])
    suite = SuiteParams(**manifest["suite"])
    report = run_suite(stream, suite)
    manifest = dict(manifest)
    manifest.update(extra)
    manifest["source_vector"] = {
        "kind": "fvector",
        "components": len(f),
        "sha256": _vector_digest(f),
    }
    vdir.mkdir(parents=True, exist_ok=True)
    write_stream(stream, vdir / "stream.bin", "raw", manifest)
    rdict = report.to_dict()
    rdict["variant"] = manifest["variant"]
    rdict["certificate"] = manifest["certificate"]
    (vdir / "report.json").write_text(_dump_json(rdict))
    return rdict


def _variant_manifest(cfg: ExperimentConfig, vid: str, value: int) -> dict:
    return {
        "experiment": cfg.experiment,
        "variant": vid,
        "construction": _construction(cfg, value),
        "parameters": cfg.relevant(),
        "mode": cfg.mode,
        "suite": cfg.suite.to_dict(),
        "generator": f"conebits {__version__}",
    }


def _workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    return max(1, workers)


def run_experiment(
    cfg: ExperimentConfig, outdir=None, workers: Optional[int] = None
) -> "PValueTable":
    """Run every variant of ``cfg`` and write the output tree.

    Variants are independent; with ``workers > 1`` they run in separate
    processes.  Results are always collected in variant order.
    """
    outdir = Path(outdir if outdir is not None else (cfg.output_dir or "."))
    root = outdir / cfg.experiment
    root.mkdir(parents=True, exist_ok=True)
    (root / "experiment.ini").write_text(dump_config(cfg))
    jobs = [
        (_variant_manifest(cfg, vid, value), str(root / vid)) for vid, value in cfg.variants()
    ]
    nworkers = _workers(workers)
    if nworkers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            reports = list(pool.map(_run_variant_job, jobs))
    else:
        reports = [_run_variant_job(job) for job in jobs]
    table = PValueTable.from_reports(cfg.experiment, reports)
    aggregate([table], "scatter_csv", root)
    aggregate([table], "sparkline_csv", root)
    aggregate([table], "json", root)
    return table


def experiment_coning(cfg: ExperimentConfig, outdir=None, workers=None) -> "PValueTable":
    _expect(cfg, "coning_sweep")
    return run_experiment(cfg, outdir, workers)


def experiment_lengths(cfg: ExperimentConfig, outdir=None, workers=None) -> "PValueTable":
    _expect(cfg, "length_sweep")
    return run_experiment(cfg, outdir, workers)


def experiment_patterns(cfg: ExperimentConfig, outdir=None, workers=None) -> "PValueTable":
    _expect(cfg, "pattern_sweep")
    return run_experiment(cfg, outdir, workers)


def experiment_random_graph(cfg: ExperimentConfig, outdir=None, workers=None) -> "PValueTable":
    _expect(cfg, "random_graph")
    return run_experiment(cfg, outdir, workers)


def _expect(cfg, name):
    if cfg.experiment != name:
        raise ValueError(f"config is for {cfg.experiment}, expected {name}")


def replay_variant(manifest_path, outdir) -> dict:
    """Regenerate one variant directory from its ``stream.manifest.json``."""
    manifest = json.loads(Path(manifest_path).read_text())
    keys = ("experiment", "variant", "construction", "parameters", "mode", "suite", "generator")
    return _materialise({k: manifest[k] for k in keys}, Path(outdir))


# --- tables and aggregation -----------------------------------------------------


@dataclass(frozen=True)
class PValueRow:
    variant: str
    test: str
    p_index: int
    p_value: Optional[float]
    status: str


@dataclass
class PValueTable:
    experiment: str
    rows: list[PValueRow]
    aggregates: dict  # variant -> {pass_proportion, clustering_fraction, bit_length}
    reports: dict = field(default_factory=dict)

    @classmethod
    def from_reports(cls, experiment: str, reports: Iterable[dict]) -> "PValueTable":
        rows, aggs, full = [], {}, {}
        for rep in sorted(reports, key=lambda r: r["variant"]):
            vid = rep["variant"]
            full[vid] = rep
            for res in rep["results"]:
                if res["status"] == "skipped":
                    rows.append(PValueRow(vid, res["test_name"], 0, None, "skipped"))
                    continue
                for k, p in enumerate(res["p_values"]):
                    rows.append(PValueRow(vid, res["test_name"], k, p, res["status"]))
            aggs[vid] = {
                "pass_proportion": rep["pass_proportion"],
                "clustering_fraction": rep["clustering_fraction"],
                "bit_length": rep["bit_length"],
            }
        return cls(experiment, rows, aggs, full)

    @property
    def variants(self) -> list[str]:
        return list(self.aggregates)

    @property
    def p_values(self) -> list[float]:
        return [r.p_value for r in self.rows if r.p_value is not None]

    @property
    def clustering_fraction(self) -> Optional[float]:
        from .sts import clustering_fraction

        return clustering_fraction(self.p_values)

    def test_pass_rates(self, alpha: float = 0.01) -> dict:
        """Per (test, p-value index): share of variants with p >= alpha."""
        buckets: dict = {}
        for r in self.rows:
            if r.p_value is None:
                continue
            buckets.setdefault((r.test, r.p_index), []).append(r.p_value >= alpha)
        return {f"{t}[{k}]": sum(v) / len(v) for (t, k), v in sorted(buckets.items())}


def _fmt(p: Optional[float]) -> str:
    return "" if p is None else repr(float(p))


def aggregate(tables: list[PValueTable], layout: str, outdir) -> Path:
    """Write tables as ``scatter.csv``, ``sparkline.csv`` or ``reports.json``."""
    if not tables:
        raise ValueError("nothing to aggregate")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if layout == "scatter_csv":
        path = outdir / "scatter.csv"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["experiment", "variant", "test", "p_index", "p_value", "status"])
        for t in tables:
            for r in t.rows:
                w.writerow([t.experiment, r.variant, r.test, r.p_index, _fmt(r.p_value), r.status])
    elif layout == "sparkline_csv":
        path = outdir / "sparkline.csv"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        columns = sorted({(r.test, r.p_index) for t in tables for r in t.rows})
        w.writerow(["experiment", "variant"] + [f"{n}[{k}]" for n, k in columns])
        for t in tables:
            series: dict = {}
            for r in t.rows:
                series.setdefault(r.variant, {})[(r.test, r.p_index)] = r.p_value
            for vid in t.variants:
                vals = series.get(vid, {})
                w.writerow([t.experiment, vid] + [_fmt(vals.get(c)) for c in columns])
    elif layout == "json":
        path = outdir / "reports.json"
        obj = {
            t.experiment: {
                "variants": t.reports,
                "clustering_fraction": t.clustering_fraction,
                "test_pass_rates": t.test_pass_rates(),
            }
            for t in tables
        }
        path.write_text(_dump_json(obj))
        return path
    else:
        raise ValueError(f"unknown layout {layout!r}")
    path.write_text(buf.getvalue())
    return path


def load_tables(directory) -> list[PValueTable]:
    """Rebuild tables from the ``report.json`` files under an output tree.

    ``directory`` may be a single experiment directory or a parent holding
    several of them.
    """
    directory = Path(directory)
    exp_dirs = [directory] if (directory / "experiment.ini").exists() else sorted(
        p for p in directory.iterdir() if (p / "experiment.ini").exists()
    )
    if not exp_dirs:
        raise ValueError(f"{directory}: no experiment output found")
    tables = []
    for d in exp_dirs:
        reports = [json.loads(p.read_text()) for p in sorted(d.glob("*/report.json"))]
        tables.append(PValueTable.from_reports(d.name, reports))
    return tables
