"""Campaign orchestration: hyperparameter sweeps of the retrieval algorithm.

A sensitivity campaign evaluates the Gerchberg-Saxton algorithm on every
row of a Saltelli design, averaging metrics over a fixed image corpus, and
yields one mean metric record per (row, iteration).  Rows align 1:1 with
the design so any metric column at any iteration can feed the Sobol
estimators directly.  A forward-model comparison sweeps the resolution
axis only, running both forward models per sample with the remaining
parameters frozen at the mid anchor, which makes per-sample paired tests
valid.

Determinism contract: per-run seeds derive from
combine_seeds(master_seed, row_index, image_index), never from worker
state, so identical configurations produce byte-identical result files at
any worker count.  Results stream to CSV in row order (append-only), and
interrupted campaigns resume from the first missing row.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._version import __version__ as _version
from .exceptions import DegenerateInputError
from .field import resize_bilinear
from .metrics import METRIC_NAMES
from .pgm import load_grayscale
from .propagation import OpticsConfig
from .retrieval import GsConfig, gs_run
from .rng import combine_seeds
from .scoring import anchor_points
from .sensitivity import Parameter, ParameterBounds, SaltelliDesign, saltelli_design, sobol_points
from .stats import pearson, spearman, wilcoxon_signed_rank

OPTICS_PARAM_NAMES = ("lambda_m", "pitch_m", "M", "d_m")

RESULT_HEADER = [
    "row", "block", "lambda_m", "pitch_m", "M", "d_m",
    "iteration", "mean_psnr_db", "mean_ssim", "mean_accuracy",
]

COMPARISON_HEADER = [
    "m_index", "M", "forward_model",
    "iteration", "mean_psnr_db", "mean_ssim", "mean_accuracy",
]

METRIC_COLUMNS = {name: i for i, name in enumerate(METRIC_NAMES)}


def default_optics_bounds() -> ParameterBounds:
    """Full hyperparameter box: wavelength 200-1800 nm, pitch 4-80 um,
    resolution 128-4000 px, distance 0-1.5 m."""
    return ParameterBounds([
        Parameter("lambda_m", 200e-9, 1800e-9),
        Parameter("pitch_m", 4e-6, 80e-6),
        Parameter("M", 128, 4000, integer=True),
        Parameter("d_m", 0.0, 1.5),
    ])


def optics_from_params(params: dict) -> OpticsConfig:
    return OpticsConfig(
        wavelength=float(params["lambda_m"]),
        pixel_pitch=float(params["pitch_m"]),
        resolution=int(round(params["M"])),
        distance=float(params["d_m"]),
    )


@dataclass
class CampaignConfig:
    """Inputs of one campaign; see module docstring for the seeding rule."""

    bounds: ParameterBounds
    n_base: int
    corpus_dir: str
    second_order: bool = True
    forward_model: str = "asm"
    iterations: int = 30
    image_limit: int = 10
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if tuple(self.bounds.names) != OPTICS_PARAM_NAMES:
            raise ValueError(f"campaign bounds must name exactly {OPTICS_PARAM_NAMES} in order")
        if self.image_limit < 1:
            raise ValueError("image_limit must be at least 1")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def to_dict(self) -> dict:
        return {
            "bounds": self.bounds.to_dict(),
            "n_base": self.n_base,
            "corpus_dir": str(self.corpus_dir),
            "second_order": self.second_order,
            "forward_model": self.forward_model,
            "iterations": self.iterations,
            "image_limit": self.image_limit,
            "master_seed": self.master_seed,
            "workers": self.workers,
        }


def load_corpus(corpus_dir, image_limit: int) -> tuple[list[np.ndarray], list[dict]]:
    """Load up to `image_limit` PGM images (sorted by filename) with hashes."""
    paths = sorted(Path(corpus_dir).glob("*.pgm"))[:image_limit]
    if not paths:
        raise ValueError(f"no .pgm images found in {corpus_dir}")
    images = [load_grayscale(p) for p in paths]
    records = [
        {"file": p.name, "sha256": hashlib.sha256(p.read_bytes()).hexdigest()}
        for p in paths
    ]
    return images, records


# worker-global corpus; populated once per process by _init_worker
_CORPUS: list[np.ndarray] = []


def _init_worker(corpus_paths: list[str], image_limit: int) -> None:
    global _CORPUS
    _CORPUS = [load_grayscale(p) for p in sorted(corpus_paths)[:image_limit]]


def _mean_metrics(optics: OpticsConfig, forward_model: str, iterations: int,
                  master_seed: int, row_index: int) -> np.ndarray:
    totals = np.zeros((iterations, 3))
    for image_index, image in enumerate(_CORPUS):
        target = resize_bilinear(image, optics.resolution)
        cfg = GsConfig(
            forward_model=forward_model,
            optics=optics,
            iterations=iterations,
            seed=combine_seeds(master_seed, row_index, image_index),
        )
        trace = gs_run(target, cfg)
        totals[:, 0] += trace.psnr_db
        totals[:, 1] += trace.ssim
        totals[:, 2] += trace.accuracy
    return totals / len(_CORPUS)


def _campaign_task(task) -> tuple[int, np.ndarray]:
    row_index, lam, pitch, m, d, forward_model, iterations, master_seed = task
    optics = OpticsConfig(lam, pitch, int(m), d)
    return row_index, _mean_metrics(optics, forward_model, iterations, master_seed, row_index)


def _comparison_task(task) -> tuple[int, np.ndarray, np.ndarray]:
    m_index, m, lam, pitch, d, iterations, master_seed = task
    optics = OpticsConfig(lam, pitch, int(m), d)
    by_model = {}
    for forward_model in ("fourier", "asm"):
        # identical (m_index, image) seeds for both models: paired design
        by_model[forward_model] = _mean_metrics(optics, forward_model, iterations, master_seed, m_index)
    return m_index, by_model["fourier"], by_model["asm"]


def _map_tasks(task_fn, tasks, workers: int, corpus_paths: list[str], image_limit: int):
    if workers <= 1 or len(tasks) <= 1:
        _init_worker(corpus_paths, image_limit)
        for task in tasks:
            yield task_fn(task)
        return
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(corpus_paths, image_limit)
    ) as pool:
        yield from pool.map(task_fn, tasks, chunksize=1)


@dataclass
class CampaignResult:
    """Mean metrics per (design row, iteration), aligned with the design."""

    design: SaltelliDesign
    metrics: np.ndarray  # (rows, iterations, 3): psnr_db, ssim, accuracy
    provenance: dict = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return self.metrics.shape[1]

    def metric_values(self, metric: str = "psnr", iteration: int | None = None) -> np.ndarray:
        """One output per design row: the mean metric at an iteration (1-based,
        default last), ready for `sobol_indices`."""
        column = METRIC_COLUMNS[metric]
        t = self.iterations if iteration is None else iteration
        if not 1 <= t <= self.iterations:
            raise ValueError(f"iteration must be in [1, {self.iterations}]")
        return self.metrics[:, t - 1, column].copy()

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RESULT_HEADER)
            for row in range(self.metrics.shape[0]):
                writer.writerows(_result_lines(self.design, row, self.metrics[row]))

    def write(self, out_dir) -> dict:
        """Persist results.csv and manifest.json; returns output paths."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        results = out / "results.csv"
        manifest = out / "manifest.json"
        self.to_csv(results)
        with open(manifest, "w") as fh:
            json.dump(self.provenance, fh, indent=2, default=str)
            fh.write("\n")
        return {"results": str(results), "manifest": str(manifest)}


def _result_lines(design: SaltelliDesign, row: int, metrics_row: np.ndarray) -> list[list[str]]:
    lam, pitch, m, d = design.scaled_rows[row]
    lines = []
    for t in range(metrics_row.shape[0]):
        lines.append([
            str(row), design.blocks[row], repr(float(lam)), repr(float(pitch)),
            str(int(m)), repr(float(d)), str(t + 1),
            repr(float(metrics_row[t, 0])), repr(float(metrics_row[t, 1])), repr(float(metrics_row[t, 2])),
        ])
    return lines


def _read_completed_rows(path: Path, iterations: int) -> dict[int, np.ndarray]:
    """Rows of an interrupted results file that carry all their iterations."""
    if not path.exists():
        return {}
    partial: dict[int, list] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RESULT_HEADER:
            raise ValueError(f"{path} does not look like a campaign results file")
        for line in reader:
            if len(line) != len(RESULT_HEADER):
                continue  # tolerate a truncated trailing line
            row = int(line[0])
            partial.setdefault(row, []).append(
                (int(line[6]), float(line[7]), float(line[8]), float(line[9]))
            )
    done = {}
    for row, records in partial.items():
        if len(records) == iterations:
            records.sort()
            done[row] = np.array([[p, s, a] for _, p, s, a in records])
    return done


def run_sensitivity_campaign(config: CampaignConfig, out_dir=None, resume: bool = False) -> CampaignResult:
    """Evaluate the retrieval algorithm over a full Saltelli design.

    When `out_dir` is given, results stream to `<out_dir>/results.csv` in
    row order as rows complete, and `manifest.json` records the config,
    seeds, design hash and corpus hashes on success.  With `resume=True`
    an existing results file is continued from its first missing row.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    design = saltelli_design(config.bounds, config.n_base, config.second_order)
    timings["design"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    corpus_paths = [str(p) for p in sorted(Path(config.corpus_dir).glob("*.pgm"))[: config.image_limit]]
    _, corpus_records = load_corpus(config.corpus_dir, config.image_limit)
    timings["corpus"] = time.perf_counter() - t0

    rows = design.row_count
    metrics = np.zeros((rows, config.iterations, 3))
    done: dict[int, np.ndarray] = {}
    results_path = None
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        results_path = out / "results.csv"
        if resume:
            done = _read_completed_rows(results_path, config.iterations)
            expected = set(range(len(done)))
            if set(done) != expected:
                raise ValueError(f"{results_path} has non-contiguous rows; cannot resume")
            for row, values in done.items():
                metrics[row] = values

    pending = [
        (
            row,
            float(design.scaled_rows[row, 0]),
            float(design.scaled_rows[row, 1]),
            float(design.scaled_rows[row, 2]),
            float(design.scaled_rows[row, 3]),
            config.forward_model,
            config.iterations,
            config.master_seed,
        )
        for row in range(rows)
        if row not in done
    ]

    t0 = time.perf_counter()
    writer = None
    fh = None
    if results_path is not None:
        fresh = not (resume and results_path.exists())
        fh = open(results_path, "w" if fresh else "a", newline="")
        writer = csv.writer(fh, lineterminator="\n")
        if fresh:
            writer.writerow(RESULT_HEADER)
    try:
        for row, values in _map_tasks(_campaign_task, pending, config.workers, corpus_paths, config.image_limit):
            metrics[row] = values
            if writer is not None:
                writer.writerows(_result_lines(design, row, values))
                fh.flush()
    finally:
        if fh is not None:
            fh.close()
    timings["evaluate"] = time.perf_counter() - t0

    provenance = {
        "tool": f"holosens {_version}",
        "config": config.to_dict(),
        "master_seed": config.master_seed,
        "design_sha256": design.sha256(),
        "corpus": corpus_records,
        "timings_s": {k: round(v, 3) for k, v in timings.items()},
    }
    result = CampaignResult(design=design, metrics=metrics, provenance=provenance)
    if out_dir is not None:
        result.write(out_dir)
    return result


def _try_test(run, stat_key: str):
    # tiny comparisons (or all-tied pairs) cannot support every test; the
    # report records the reason instead of failing the whole run
    try:
        result = run()
    except (ValueError, DegenerateInputError) as exc:
        return {"error": str(exc)}
    return {stat_key: result.statistic, "p": result.p_value, "n": result.n}


@dataclass
class ComparisonResult:
    """Paired per-resolution metrics for the two forward models."""

    m_values: np.ndarray  # (n,)
    fourier: np.ndarray  # (n, iterations, 3)
    asm: np.ndarray  # (n, iterations, 3)
    provenance: dict = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return self.fourier.shape[1]

    def metric_values(self, forward_model: str, metric: str = "psnr", iteration: int | None = None) -> np.ndarray:
        column = METRIC_COLUMNS[metric]
        t = self.iterations if iteration is None else iteration
        data = {"fourier": self.fourier, "asm": self.asm}[forward_model]
        return data[:, t - 1, column].copy()

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(COMPARISON_HEADER)
            for name, data in (("fourier", self.fourier), ("asm", self.asm)):
                for i in range(len(self.m_values)):
                    for t in range(data.shape[1]):
                        writer.writerow([
                            str(i), str(int(self.m_values[i])), name, str(t + 1),
                            repr(float(data[i, t, 0])), repr(float(data[i, t, 1])), repr(float(data[i, t, 2])),
                        ])

    def report(self, metric: str = "psnr", iterations=None) -> dict:
        """Paired one-sided tests and resolution correlations per iteration.

        The Wilcoxon alternative is 'greater' for the hypothesis that the
        Fourier model outperforms free-space propagation on paired rows.
        """
        if iterations is None:
            iterations = [self.iterations]
        out = {"metric": metric, "iterations": {}}
        for t in iterations:
            f = self.metric_values("fourier", metric, t)
            a = self.metric_values("asm", metric, t)
            entry = {
                "median_fourier": float(np.median(f)),
                "median_asm": float(np.median(a)),
                "wilcoxon_greater": _try_test(lambda: wilcoxon_signed_rank(f, a, alternative="greater"), "W"),
            }
            for name, scores in (("fourier", f), ("asm", a)):
                entry[f"pearson_m_vs_{name}"] = _try_test(lambda s=scores: pearson(self.m_values, s), "r")
                entry[f"spearman_m_vs_{name}"] = _try_test(lambda s=scores: spearman(self.m_values, s), "rho")
            out["iterations"][str(t)] = entry
        return out

    def write(self, out_dir) -> dict:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        comparison = out / "comparison.csv"
        manifest = out / "manifest.json"
        self.to_csv(comparison)
        with open(manifest, "w") as fh:
            json.dump(self.provenance, fh, indent=2, default=str)
            fh.write("\n")
        return {"comparison": str(comparison), "manifest": str(manifest)}


def run_forward_model_comparison(config: CampaignConfig, out_dir=None) -> ComparisonResult:
    """Run both forward models over Sobol-sampled resolutions.

    `config.n_base` resolutions are drawn from the M axis of the bounds;
    wavelength, pitch and distance are frozen at the mid anchor.  Each
    sampled resolution is evaluated under both forward models with shared
    per-(sample, image) seeds, so rows pair off exactly.
    """
    anchors = anchor_points(config.bounds)
    m_param = config.bounds["M"]
    unit = np.asarray(sobol_points(1, config.n_base))[:, 0]
    m_values = np.rint(m_param.lower + unit * (m_param.upper - m_param.lower)).astype(int)

    corpus_paths = [str(p) for p in sorted(Path(config.corpus_dir).glob("*.pgm"))[: config.image_limit]]
    _, corpus_records = load_corpus(config.corpus_dir, config.image_limit)

    tasks = [
        (
            i,
            int(m_values[i]),
            anchors.mid["lambda_m"],
            anchors.mid["pitch_m"],
            anchors.mid["d_m"],
            config.iterations,
            config.master_seed,
        )
        for i in range(len(m_values))
    ]
    n = len(tasks)
    fourier = np.zeros((n, config.iterations, 3))
    asm = np.zeros((n, config.iterations, 3))
    t0 = time.perf_counter()
    for i, f_metrics, a_metrics in _map_tasks(
        _comparison_task, tasks, config.workers, corpus_paths, config.image_limit
    ):
        fourier[i] = f_metrics
        asm[i] = a_metrics
    provenance = {
        "tool": f"holosens {_version}",
        "config": config.to_dict(),
        "master_seed": config.master_seed,
        "frozen_at_mid": {k: anchors.mid[k] for k in ("lambda_m", "pitch_m", "d_m")},
        "corpus": corpus_records,
        "timings_s": {"evaluate": round(time.perf_counter() - t0, 3)},
    }
    result = ComparisonResult(m_values=m_values.astype(float), fourier=fourier, asm=asm, provenance=provenance)
    if out_dir is not None:
        result.write(out_dir)
    return result


def load_results_csv(path) -> dict:
    """Parse a campaign results file into arrays keyed by column role."""
    rows, blocks, params, iterations, metrics = [], [], [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RESULT_HEADER:
            raise ValueError(f"{path} does not carry the campaign results header")
        for line in reader:
            rows.append(int(line[0]))
            blocks.append(line[1])
            params.append([float(line[2]), float(line[3]), float(line[4]), float(line[5])])
            iterations.append(int(line[6]))
            metrics.append([float(line[7]), float(line[8]), float(line[9])])
    return {
        "row": np.array(rows),
        "block": blocks,
        "params": np.array(params),
        "iteration": np.array(iterations),
        "metrics": np.array(metrics),
    }
