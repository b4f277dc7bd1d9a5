"""Command-line front end.

Subcommands: propagate, gs, sample, sa, compare-fm, metric, report.
Exit codes: 0 success, 1 usage error, 2 data error.  All randomness flows
from the config master seed or --seed; nothing reads an entropy source or
an environment variable.  Every run writes a `run_manifest.json` into the
output directory recording the config snapshot, input hashes, output file
hashes and timings.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from ._version import __version__
from .exceptions import DegenerateInputError, MalformedHeaderError, VarianceZeroError
from .experiment import (
    CampaignConfig,
    default_optics_bounds,
    load_results_csv,
    run_forward_model_comparison,
    run_sensitivity_campaign,
)
from .field import field_from_target, resize_bilinear
from .metrics import METRIC_NAMES, minmax_normalize
from .pgm import load_grayscale, save_grayscale
from .propagation import OpticsConfig, propagate_asm, propagate_fourier
from .retrieval import GsConfig, gs_run
from .rng import random_phase
from .scoring import CompositeWeights, composite_metric, generalization_metric, gs_weighted_metric, resilience_metric
from .sensitivity import Parameter, ParameterBounds, saltelli_design, sobol_indices

_DATA_ERRORS = (
    MalformedHeaderError,
    DegenerateInputError,
    VarianceZeroError,
    FileNotFoundError,
    IsADirectoryError,
    NotADirectoryError,
    PermissionError,
    ValueError,
    KeyError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def load_config(path) -> dict:
    """Parse a config file: JSON object, or flat `key = value` lines with
    `#` comments.  Values are JSON literals where possible, else strings."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("JSON config must be an object")
        return data
    config = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        value = value.strip()
        try:
            config[key.strip()] = json.loads(value)
        except json.JSONDecodeError:
            config[key.strip()] = value
    return config


def _bounds_from_config(config: dict) -> ParameterBounds:
    full = default_optics_bounds()
    ranges = {
        "lambda_m": ("lambda_min", "lambda_max"),
        "pitch_m": ("pitch_min", "pitch_max"),
        "M": ("m_min", "m_max"),
        "d_m": ("d_min", "d_max"),
    }
    params = []
    for p in full.parameters:
        lo_key, hi_key = ranges[p.name]
        params.append(
            Parameter(
                p.name,
                float(config.get(lo_key, p.lower)),
                float(config.get(hi_key, p.upper)),
                p.integer,
            )
        )
    return ParameterBounds(params)


def _campaign_config(args) -> CampaignConfig:
    config = load_config(args.config) if args.config else {}
    corpus = config.get("corpus")
    if getattr(args, "corpus", None):
        corpus = args.corpus
    if not corpus:
        raise ValueError("a corpus directory is required (config key 'corpus' or --corpus)")
    return CampaignConfig(
        bounds=_bounds_from_config(config),
        n_base=int(config.get("n_base", 64)),
        corpus_dir=str(corpus),
        second_order=bool(config.get("second_order", True)),
        forward_model=str(config.get("forward_model", "asm")),
        iterations=int(config.get("iterations", 30)),
        image_limit=int(config.get("image_limit", 10)),
        master_seed=args.seed if args.seed is not None else int(config.get("master_seed", 0)),
        workers=args.workers if args.workers is not None else int(config.get("workers", 1)),
    ), config


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class _RunManifest:
    """Collects provenance during a subcommand and writes run_manifest.json."""

    def __init__(self, command: str, args, config_snapshot: dict | None = None):
        self.started = time.perf_counter()
        self.data = {
            "tool": f"holosens {__version__}",
            "command": command,
            "config": config_snapshot or {},
            "master_seed": getattr(args, "seed", None),
            "inputs": {},
            "outputs": {},
            "timings_s": {},
        }

    def add_input(self, label: str, path) -> None:
        self.data["inputs"][label] = {"path": str(path), "sha256": _sha256(path)}

    def add_output(self, label: str, path) -> None:
        self.data["outputs"][label] = {"path": str(path), "sha256": _sha256(path)}

    def phase(self, label: str) -> None:
        now = time.perf_counter()
        self.data["timings_s"][label] = round(now - self.started, 3)

    def write(self, out_dir) -> None:
        self.data["timings_s"]["total"] = round(time.perf_counter() - self.started, 3)
        path = Path(out_dir) / "run_manifest.json"
        with open(path, "w") as fh:
            json.dump(self.data, fh, indent=2, default=str)
            fh.write("\n")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_intensity_pgm(path, intensity: np.ndarray) -> float:
    """Write an intensity grid as 16-bit PGM, rescaling only if it exceeds 1."""
    scale = float(max(1.0, intensity.max()))
    save_grayscale(path, intensity / scale, maxval=65535)
    return scale


def _cmd_propagate(args) -> None:
    out = _out_dir(args)
    manifest = _RunManifest("propagate", args)
    manifest.add_input("image", args.input)
    image = load_grayscale(args.input)
    resolution = args.m if args.m else image.shape[0]
    if image.shape != (resolution, resolution):
        image = resize_bilinear(image, resolution)
    if args.phase == "random":
        phase = random_phase(resolution, args.seed or 0)
    else:
        phase = np.zeros((resolution, resolution))
    field = field_from_target(image, args.pitch, phase)
    if args.fm == "fourier":
        result = propagate_fourier(field, args.direction)
    else:
        optics = OpticsConfig(args.wavelength, args.pitch, resolution, args.distance)
        result = propagate_asm(field, optics, args.direction)
    out_path = out / "intensity.pgm"
    scale = _write_intensity_pgm(out_path, result.intensity())
    manifest.data["intensity_scale"] = scale
    manifest.phase("propagate")
    manifest.add_output("intensity", out_path)
    manifest.write(out)


def _cmd_gs(args) -> None:
    out = _out_dir(args)
    manifest = _RunManifest("gs", args)
    manifest.add_input("target", args.target)
    image = load_grayscale(args.target)
    resolution = args.m if args.m else image.shape[0]
    target = resize_bilinear(image, resolution) if image.shape != (resolution, resolution) else image
    optics = OpticsConfig(args.wavelength, args.pitch, resolution, args.distance)
    config = GsConfig(
        forward_model=args.fm,
        optics=optics,
        iterations=args.iters,
        seed=args.seed or 0,
    )
    trace = gs_run(target, config)
    trace_path = out / "trace.csv"
    with open(trace_path, "w") as fh:
        fh.write("iteration,psnr_db,ssim,accuracy\n")
        for t, p, s, a in trace.records():
            fh.write(f"{t},{p!r},{s!r},{a!r}\n")
    recon_path = out / "reconstruction.pgm"
    scale = _write_intensity_pgm(recon_path, trace.final_reconstruction)
    manifest.data["intensity_scale"] = scale
    manifest.phase("retrieval")
    manifest.add_output("trace", trace_path)
    manifest.add_output("reconstruction", recon_path)
    manifest.write(out)


def _cmd_sample(args) -> None:
    out = _out_dir(args)
    manifest = _RunManifest("sample", args)
    if args.config:
        manifest.add_input("config", args.config)
        bounds = _bounds_from_config(load_config(args.config))
    elif args.k:
        bounds = ParameterBounds([Parameter(f"x{i + 1}", 0.0, 1.0) for i in range(args.k)])
    else:
        raise ValueError("either --k or --config with bounds is required")
    design = saltelli_design(bounds, args.n, args.second_order)
    design_path = out / "design.csv"
    design.to_csv(design_path)
    manifest.data["design_sha256"] = design.sha256()
    manifest.data["rows"] = design.row_count
    manifest.phase("sample")
    manifest.add_output("design", design_path)
    manifest.write(out)


def _cmd_sa(args) -> None:
    out = _out_dir(args)
    config, snapshot = _campaign_config(args)
    manifest = _RunManifest("sa", args, snapshot)
    if args.config:
        manifest.add_input("config", args.config)
    result = run_sensitivity_campaign(config, out_dir=out, resume=args.resume)
    manifest.phase("campaign")
    iteration = int(snapshot.get("index_iteration", config.iterations))
    bootstrap = int(snapshot.get("bootstrap_resamples", 1000))
    for metric in METRIC_NAMES:
        y = result.metric_values(metric, iteration)
        indices = sobol_indices(result.design, y, bootstrap_resamples=bootstrap, seed=config.master_seed)
        csv_path = out / f"indices_{metric}.csv"
        json_path = out / f"indices_{metric}.json"
        indices.to_csv(csv_path)
        indices.to_json(json_path)
        manifest.add_output(f"indices_{metric}_csv", csv_path)
        manifest.add_output(f"indices_{metric}_json", json_path)
    manifest.data["index_iteration"] = iteration
    manifest.phase("indices")
    manifest.add_output("results", out / "results.csv")
    manifest.add_output("campaign_manifest", out / "manifest.json")
    manifest.write(out)


def _cmd_compare_fm(args) -> None:
    out = _out_dir(args)
    config, snapshot = _campaign_config(args)
    manifest = _RunManifest("compare-fm", args, snapshot)
    if args.config:
        manifest.add_input("config", args.config)
    result = run_forward_model_comparison(config, out_dir=out)
    manifest.phase("comparison")
    iterations = [int(t) for t in args.report_iterations.split(",")] if args.report_iterations else None
    report = result.report(metric="psnr", iterations=iterations)
    report_path = out / "fm_report.json"
    with open(report_path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    manifest.phase("report")
    manifest.add_output("comparison", out / "comparison.csv")
    manifest.add_output("fm_report", report_path)
    manifest.write(out)


def _score_column(path, metric: str, iteration: int | None) -> np.ndarray:
    data = load_results_csv(path)
    t = int(data["iteration"].max()) if iteration is None else iteration
    mask = data["iteration"] == t
    if not mask.any():
        raise ValueError(f"{path} has no rows for iteration {t}")
    order = np.argsort(data["row"][mask], kind="stable")
    return data["metrics"][mask][order][:, METRIC_NAMES.index(metric)]


def _cmd_metric(args) -> None:
    out = _out_dir(args)
    manifest = _RunManifest("metric", args)
    weights = CompositeWeights(args.alpha, args.beta, args.gamma)
    manifest.add_input("results", args.results)
    candidate = _score_column(args.results, args.metric, args.iteration)
    lo, hi = float(candidate.min()), float(candidate.max())
    candidate_norm = minmax_normalize(candidate)

    def _norm_against_candidate(values: np.ndarray) -> np.ndarray:
        # anchors/perturbations are tiny populations; normalize them on the
        # candidate campaign's range so scores stay comparable
        if hi == lo:
            return np.full_like(values, 0.5)
        return (values - lo) / (hi - lo)

    components = {"gsw": None, "gm": None, "resilience": None}
    if weights.alpha > 0:
        if not args.baseline:
            raise ValueError("--baseline is required when alpha > 0")
        manifest.add_input("baseline", args.baseline)
        baseline = _score_column(args.baseline, args.metric, args.iteration)
        if baseline.size != candidate.size:
            raise ValueError("results and baseline must cover the same configuration rows")
        components["gsw"] = gs_weighted_metric(candidate_norm, minmax_normalize(baseline))
    if weights.beta > 0:
        if not args.anchor_results:
            raise ValueError("--anchor-results is required when beta > 0")
        manifest.add_input("anchor_results", args.anchor_results)
        anchors = _norm_against_candidate(_score_column(args.anchor_results, args.metric, args.iteration))
        if anchors.size != 3:
            raise ValueError("anchor results must carry exactly 3 rows (inner, mid, outer)")
        components["gm"] = generalization_metric(*anchors)
    if weights.gamma > 0:
        if not args.perturbed_results:
            raise ValueError("--perturbed-results is required when gamma > 0")
        manifest.add_input("perturbed_results", args.perturbed_results)
        perturbed = _norm_against_candidate(
            _score_column(args.perturbed_results, args.metric, args.iteration)
        )
        reference = perturbed[args.reference_index]
        rest = np.delete(perturbed, args.reference_index)
        components["resilience"] = resilience_metric(reference, rest)

    score = composite_metric(
        weights,
        components["gsw"] or 0.0,
        components["gm"] or 0.0,
        components["resilience"] or 0.0,
    )
    payload = {
        "metric": args.metric,
        "iteration": args.iteration,
        "weights": {"alpha": args.alpha, "beta": args.beta, "gamma": args.gamma},
        "normalization_range": [lo, hi],
        "components": components,
        "composite": score,
    }
    out_path = out / "composite.json"
    with open(out_path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    manifest.phase("metric")
    manifest.add_output("composite", out_path)
    manifest.write(out)


def _cmd_report(args) -> None:
    out = _out_dir(args)
    manifest = _RunManifest("report", args)
    out_path = out / "report.csv"
    with open(out_path, "w") as fh:
        fh.write("source,row,block,lambda_m,pitch_m,M,d_m,iteration,metric,value\n")
        for path in args.inputs:
            manifest.add_input(Path(path).name, path)
            data = load_results_csv(path)
            source = Path(path).stem
            for i in range(len(data["row"])):
                lam, pitch, m, d = data["params"][i]
                prefix = (
                    f"{source},{data['row'][i]},{data['block'][i]},"
                    f"{lam!r},{pitch!r},{int(m)},{d!r},{data['iteration'][i]}"
                )
                for metric, value in zip(METRIC_NAMES, data["metrics"][i]):
                    fh.write(f"{prefix},mean_{metric},{value!r}\n")
    manifest.phase("report")
    manifest.add_output("report", out_path)
    manifest.write(out)


def _add_common(parser) -> None:
    parser.add_argument("--config", help="config file (flat key=value or JSON)")
    parser.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
    parser.add_argument("--workers", type=int, default=None, help="worker processes (overrides config)")
    parser.add_argument("--out", required=True, help="output directory")


def _add_optics_flags(parser) -> None:
    parser.add_argument("--wavelength", type=float, default=1e-6, help="wavelength in meters")
    parser.add_argument("--pitch", type=float, default=4.2e-5, help="pixel pitch in meters")
    parser.add_argument("--distance", type=float, default=0.75, help="propagation distance in meters")


def build_parser() -> _Parser:
    parser = _Parser(prog="holosens", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"holosens {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("propagate", help="propagate one field through a forward model")
    _add_common(p)
    _add_optics_flags(p)
    p.add_argument("--input", required=True, help="input PGM image")
    p.add_argument("--fm", choices=("fourier", "asm"), required=True)
    p.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    p.add_argument("--m", type=int, default=None, help="resize to this resolution first")
    p.add_argument("--phase", choices=("zero", "random"), default="zero")
    p.set_defaults(handler=_cmd_propagate)

    p = sub.add_parser("gs", help="one seeded retrieval run with a metric trace")
    _add_common(p)
    _add_optics_flags(p)
    p.add_argument("--target", required=True, help="target PGM image")
    p.add_argument("--fm", choices=("fourier", "asm"), required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--iters", type=int, default=30)
    p.set_defaults(handler=_cmd_gs)

    p = sub.add_parser("sample", help="emit a Saltelli design CSV")
    _add_common(p)
    p.add_argument("--k", type=int, default=None, help="dimensions (unit hypercube mode)")
    p.add_argument("--n", type=int, required=True, help="base sample count")
    p.add_argument("--second-order", action="store_true")
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("sa", help="full sensitivity campaign with Sobol index report")
    _add_common(p)
    p.add_argument("--corpus", help="corpus directory (overrides config)")
    p.add_argument("--resume", action="store_true", help="continue an interrupted campaign")
    p.set_defaults(handler=_cmd_sa)

    p = sub.add_parser("compare-fm", help="paired forward-model comparison over the M axis")
    _add_common(p)
    p.add_argument("--corpus", help="corpus directory (overrides config)")
    p.add_argument("--report-iterations", help="comma-separated iterations for the report")
    p.set_defaults(handler=_cmd_compare_fm)

    p = sub.add_parser("metric", help="composite benchmarking metric from result CSVs")
    _add_common(p)
    p.add_argument("--results", required=True, help="candidate results CSV")
    p.add_argument("--baseline", help="baseline results CSV (for alpha)")
    p.add_argument("--anchor-results", help="3-row anchor results CSV (for beta)")
    p.add_argument("--perturbed-results", help="perturbation-neighborhood results CSV (for gamma)")
    p.add_argument("--reference-index", type=int, default=0)
    p.add_argument("--metric", choices=METRIC_NAMES, default="psnr")
    p.add_argument("--iteration", type=int, default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.set_defaults(handler=_cmd_metric)

    p = sub.add_parser("report", help="merge result CSVs into plot-ready long format")
    _add_common(p)
    p.add_argument("--inputs", nargs="+", required=True, help="result CSV files")
    p.set_defaults(handler=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if getattr(args, "handler", None) is None:
        parser.print_usage(sys.stderr)
        print("error: a subcommand is required", file=sys.stderr)
        return 1
    try:
        args.handler(args)
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


#: spec-facing alias: dispatch(argv) -> exit code
dispatch = main

if __name__ == "__main__":
    sys.exit(main())
