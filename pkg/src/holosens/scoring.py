"""Anchor points and the composite benchmarking metric.

The composite score combines three views of a method's normalized
performance P over hyperparameter configurations:

* baseline-weighted consistency: mean of P_i / GS_i against the iterative
  baseline on the same configurations,
* generalization: mean performance over the three anchor configurations
  (inner, mid, outer),
* resilience: 1 - mean((P_i - P_ref)^2 / P_ref) over a sampled neighborhood
  of one configuration, where 1 means performance is flat under
  perturbation (values below 1 indicate sensitivity; large deviations can
  push the raw score negative and are reported unclipped).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInputError
from .sensitivity import ParameterBounds, sobol_points
from .stats import TestResult, pearson, spearman

GS_FLOOR = 1e-6


@dataclass(frozen=True)
class AnchorPoints:
    """Per-parameter midpoints of the lower half, full range, and upper half."""

    inner: dict
    mid: dict
    outer: dict


def anchor_points(bounds: ParameterBounds) -> AnchorPoints:
    """Anchor configurations of a parameter box.

    mid is the midpoint of [lower, upper] per parameter; inner the midpoint
    of [lower, mid]; outer the midpoint of [mid, upper].  Integer parameters
    are rounded to the nearest integer.
    """
    inner, mid, outer = {}, {}, {}
    for p in bounds.parameters:
        half = 0.5 * (p.lower + p.upper)
        lo_half = 0.5 * (p.lower + half)
        hi_half = 0.5 * (half + p.upper)
        if p.integer:
            half, lo_half, hi_half = (float(np.rint(v)) for v in (half, lo_half, hi_half))
        inner[p.name] = lo_half
        mid[p.name] = half
        outer[p.name] = hi_half
    return AnchorPoints(inner=inner, mid=mid, outer=outer)


@dataclass(frozen=True)
class CompositeWeights:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.gamma < 0:
            raise ValueError("weights must be nonnegative")
        if self.alpha + self.beta + self.gamma <= 0:
            raise ValueError("at least one weight must be positive")


def gs_weighted_metric(performance, baseline, floor: float = GS_FLOOR) -> float:
    """Mean elementwise ratio of normalized scores against the baseline.

    Baseline scores are floored at `floor` after normalization because a
    min-max normalized population contains an exact zero at its minimum.
    Negative baseline entries are rejected (not valid normalized scores).
    """
    p = np.asarray(performance, dtype=np.float64)
    gs = np.asarray(baseline, dtype=np.float64)
    if p.shape != gs.shape or p.ndim != 1 or p.size == 0:
        raise ValueError("performance and baseline must be equal-length 1-D sequences")
    if np.any(gs < 0):
        raise DegenerateInputError("baseline scores must be nonnegative normalized values")
    return float(np.mean(p / np.maximum(gs, floor)))


def generalization_metric(p_inner: float, p_mid: float, p_outer: float) -> float:
    """Arithmetic mean of the normalized scores at the three anchors."""
    return (p_inner + p_mid + p_outer) / 3.0


def resilience_metric(p_reference: float, p_perturbed) -> float:
    """1 - mean((P_i - P_ref)^2 / P_ref) over the perturbed scores."""
    if not p_reference > 0:
        raise ValueError("reference score must be positive")
    p = np.asarray(p_perturbed, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("perturbed scores must be a nonempty 1-D sequence")
    return float(1.0 - np.mean((p - p_reference) ** 2 / p_reference))


def resilience_neighborhood(
    center: dict,
    bounds: ParameterBounds,
    sigma_fraction: float = 0.05,
    count: int = 32,
) -> list[dict]:
    """Sobol-sampled configurations within +/- sigma of a center point.

    sigma per parameter is `sigma_fraction` of its global range; the
    neighborhood box is clipped to the global bounds.  Integer parameters
    are rounded after scaling.
    """
    if not 0 < sigma_fraction:
        raise ValueError("sigma_fraction must be positive")
    if count < 1:
        raise ValueError("count must be at least 1")
    unit = sobol_points(bounds.k, count)
    out = []
    for row in unit:
        point = {}
        for j, p in enumerate(bounds.parameters):
            sigma = sigma_fraction * (p.upper - p.lower)
            lo = max(p.lower, center[p.name] - sigma)
            hi = min(p.upper, center[p.name] + sigma)
            value = lo + row[j] * (hi - lo)
            point[p.name] = float(np.rint(value)) if p.integer else float(value)
        out.append(point)
    return out


def composite_metric(weights: CompositeWeights, gsw: float, gm: float, resilience: float) -> float:
    """Weighted sum alpha*gsw + beta*gm + gamma*resilience."""
    return weights.alpha * gsw + weights.beta * gm + weights.gamma * resilience


def complexity_correlation(scores_a, scores_b) -> tuple[TestResult, TestResult]:
    """Pearson and Spearman correlation between two methods' per-config scores.

    Both score vectors must be aligned on identical configuration rows.
    """
    return pearson(scores_a, scores_b), spearman(scores_a, scores_b)
