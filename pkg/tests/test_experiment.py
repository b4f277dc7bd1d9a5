import json

import numpy as np
import pytest

from holosens.experiment import (
    CampaignConfig,
    default_optics_bounds,
    load_corpus,
    load_results_csv,
    optics_from_params,
    run_forward_model_comparison,
    run_sensitivity_campaign,
)
from holosens.sensitivity import Parameter, ParameterBounds, sobol_indices

TINY_BOUNDS = ParameterBounds([
    Parameter("lambda_m", 400e-9, 800e-9),
    Parameter("pitch_m", 4e-6, 20e-6),
    Parameter("M", 16, 32, integer=True),
    Parameter("d_m", 0.001, 0.05),
])


def _tiny_config(corpus_dir, **kwargs):
    defaults = dict(
        bounds=TINY_BOUNDS,
        n_base=2,
        corpus_dir=str(corpus_dir),
        second_order=True,
        forward_model="asm",
        iterations=2,
        image_limit=3,
        master_seed=42,
        workers=1,
    )
    defaults.update(kwargs)
    return CampaignConfig(**defaults)


def test_default_bounds_cover_published_box():
    bounds = default_optics_bounds()
    assert bounds.names == ["lambda_m", "pitch_m", "M", "d_m"]
    assert bounds["lambda_m"].lower == pytest.approx(200e-9)
    assert bounds["lambda_m"].upper == pytest.approx(1800e-9)
    assert bounds["M"].integer


def test_optics_from_params_roundtrip():
    optics = optics_from_params({"lambda_m": 5e-7, "pitch_m": 1e-5, "M": 64, "d_m": 0.1})
    assert optics.wavelength == 5e-7
    assert optics.resolution == 64


def test_load_corpus_hashes(small_corpus_dir):
    images, records = load_corpus(small_corpus_dir, 2)
    assert len(images) == 2
    assert all(len(r["sha256"]) == 64 for r in records)
    with pytest.raises(ValueError):
        load_corpus(small_corpus_dir / "missing", 2)


def test_campaign_counts_and_alignment(small_corpus_dir):
    config = _tiny_config(small_corpus_dir)
    result = run_sensitivity_campaign(config)
    assert result.design.row_count == 20  # N=2, k=4, second order
    assert result.metrics.shape == (20, 2, 3)
    y = result.metric_values("psnr", 2)
    assert y.shape == (20,)
    assert np.all(np.isfinite(y))


def test_campaign_feeds_sobol_estimator(small_corpus_dir):
    config = _tiny_config(small_corpus_dir, n_base=4)
    result = run_sensitivity_campaign(config)
    indices = sobol_indices(result.design, result.metric_values("psnr"), bootstrap_resamples=20, seed=0)
    assert len(indices.s1) == 4


def test_campaign_csv_and_manifest(small_corpus_dir, tmp_path):
    out = tmp_path / "run"
    config = _tiny_config(small_corpus_dir)
    result = run_sensitivity_campaign(config, out_dir=out)
    lines = (out / "results.csv").read_text().splitlines()
    assert lines[0] == "row,block,lambda_m,pitch_m,M,d_m,iteration,mean_psnr_db,mean_ssim,mean_accuracy"
    assert len(lines) == 1 + 20 * 2  # one line per row per iteration
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["design_sha256"] == result.design.sha256()
    assert len(manifest["corpus"]) == 3
    assert manifest["config"]["n_base"] == 2


def test_campaign_determinism_across_worker_counts(small_corpus_dir, tmp_path):
    out1 = tmp_path / "w1"
    out2 = tmp_path / "w2"
    run_sensitivity_campaign(_tiny_config(small_corpus_dir, workers=1), out_dir=out1)
    run_sensitivity_campaign(_tiny_config(small_corpus_dir, workers=2), out_dir=out2)
    assert (out1 / "results.csv").read_bytes() == (out2 / "results.csv").read_bytes()


def test_campaign_resume_reproduces_full_run(small_corpus_dir, tmp_path):
    full_dir = tmp_path / "full"
    run_sensitivity_campaign(_tiny_config(small_corpus_dir), out_dir=full_dir)
    full_bytes = (full_dir / "results.csv").read_bytes()

    partial_dir = tmp_path / "partial"
    partial_dir.mkdir()
    lines = full_bytes.decode().splitlines()
    keep = [lines[0]] + lines[1 : 1 + 7 * 2]  # header + first 7 completed rows
    (partial_dir / "results.csv").write_text("\n".join(keep) + "\n")
    resumed = run_sensitivity_campaign(_tiny_config(small_corpus_dir), out_dir=partial_dir, resume=True)
    assert (partial_dir / "results.csv").read_bytes() == full_bytes
    assert np.all(np.isfinite(resumed.metrics))


def test_campaign_rejects_wrong_bounds(small_corpus_dir):
    bad = ParameterBounds([Parameter("x", 0, 1)])
    with pytest.raises(ValueError):
        CampaignConfig(bounds=bad, n_base=2, corpus_dir=str(small_corpus_dir))


def test_results_csv_round_trip(small_corpus_dir, tmp_path):
    out = tmp_path / "rt"
    result = run_sensitivity_campaign(_tiny_config(small_corpus_dir), out_dir=out)
    data = load_results_csv(out / "results.csv")
    assert len(data["row"]) == 40
    # row-major float repr round-trips exactly
    mask = data["iteration"] == 2
    assert np.array_equal(data["metrics"][mask][:, 0], result.metric_values("psnr", 2))


def test_comparison_pairing_and_counts(small_corpus_dir):
    config = _tiny_config(small_corpus_dir, n_base=2, image_limit=1)
    result = run_forward_model_comparison(config)
    assert result.m_values.shape == (2,)
    assert result.fourier.shape == (2, 2, 3)
    assert result.asm.shape == (2, 2, 3)
    report = result.report(iterations=[1, 2])
    assert set(report["iterations"]) == {"1", "2"}
    entry = report["iterations"]["2"]
    assert "wilcoxon_greater" in entry
    assert "spearman_m_vs_fourier" in entry


def test_comparison_outputs(small_corpus_dir, tmp_path):
    out = tmp_path / "cmp"
    config = _tiny_config(small_corpus_dir, n_base=2, image_limit=2)
    result = run_forward_model_comparison(config, out_dir=out)
    lines = (out / "comparison.csv").read_text().splitlines()
    assert lines[0] == "m_index,M,forward_model,iteration,mean_psnr_db,mean_ssim,mean_accuracy"
    assert len(lines) == 1 + 2 * 2 * 2  # both models, two rows, two iterations
    manifest = json.loads((out / "manifest.json").read_text())
    assert "frozen_at_mid" in manifest
    # frozen parameters sit at the mid anchor of the supplied bounds
    assert manifest["frozen_at_mid"]["lambda_m"] == pytest.approx(600e-9)
