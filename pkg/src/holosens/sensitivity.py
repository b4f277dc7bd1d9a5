"""Quasi-Monte-Carlo sampling and variance-based sensitivity indices.

The Sobol sequence is generated unscrambled from the embedded Joe-Kuo
direction numbers with the zero point included, so every design is
reproducible bit-for-bit.  Saltelli's cross-sampled layout turns N base
samples into N*(2k+2) model evaluations (N*(k+2) without second order)
from which first-order, second-order and total-effect indices are
estimated:

    S1_i  = mean(f_B * (f_AB_i - f_A)) / V
    ST_i  = mean((f_A - f_AB_i)^2) / (2 V)            (Jansen)
    S2_ij = [mean(f_BA_i * f_AB_j) - mean(f_A f_B)] / V - S1_i - S1_j

with V the empirical variance over the pooled A and B evaluations.
Confidence half-widths are 1.96 times the standard deviation of each index
over bootstrap resamples of the base-sample indices (all blocks resampled
coherently).  Small negative estimates are reported raw, not clipped.
"""

from __future__ import annotations

import csv
import hashlib
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import VarianceZeroError
from .rng import random_indices
from .sobol_directions import JOE_KUO, MAX_DIM

_BITS = 32


def _direction_integers(dim: int) -> np.ndarray:
    """32-bit direction integers V[j][k], k = 1..32, for `dim` dimensions."""
    v = np.zeros((dim, _BITS + 1), dtype=np.uint64)
    v[0, 1:] = np.uint64(1) << (np.uint64(_BITS) - np.arange(1, _BITS + 1, dtype=np.uint64))
    for j in range(1, dim):
        s, a, m = JOE_KUO[j - 1]
        for k in range(1, s + 1):
            v[j, k] = np.uint64(m[k - 1]) << np.uint64(_BITS - k)
        for k in range(s + 1, _BITS + 1):
            prev = v[j, k - s]
            val = prev ^ (prev >> np.uint64(s))
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    val ^= v[j, k - i]
            v[j, k] = val
    return v


def sobol_points(dim: int, count: int) -> np.ndarray:
    """First `count` points of the Sobol sequence in [0, 1)^dim.

    Gray-code ordering starting at the all-zeros point; within any aligned
    block of 2^m points each coordinate visits a permutation of
    {0, 1/2^m, ..., (2^m - 1)/2^m}.
    """
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if dim > MAX_DIM:
        raise ValueError(f"dim {dim} exceeds the embedded direction-number table ({MAX_DIM})")
    if count < 1:
        raise ValueError("count must be at least 1")
    v = _direction_integers(dim)
    out = np.zeros((count, dim))
    state = np.zeros(dim, dtype=np.uint64)
    for i in range(1, count):
        # column index = position of the lowest zero bit of i-1, 1-based
        c = 1
        rest = i - 1
        while rest & 1:
            rest >>= 1
            c += 1
        state ^= v[:, c]
        out[i] = state * 2.0**-_BITS
    return out


@dataclass(frozen=True)
class Parameter:
    """One model input: name, inclusive bounds, and integer-valued flag."""

    name: str
    lower: float
    upper: float
    integer: bool = False

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"{self.name}: lower bound {self.lower} must be below upper {self.upper}")


class ParameterBounds:
    """Axis-aligned box over k named parameters."""

    def __init__(self, parameters):
        params = tuple(
            p if isinstance(p, Parameter) else Parameter(*p) for p in parameters
        )
        if not params:
            raise ValueError("at least one parameter is required")
        names = [p.name for p in params]
        if len(set(names)) != len(names):
            raise ValueError("parameter names must be unique")
        self.parameters = params

    @property
    def k(self) -> int:
        return len(self.parameters)

    @property
    def names(self) -> list[str]:
        return [p.name for p in self.parameters]

    def __getitem__(self, name: str) -> Parameter:
        for p in self.parameters:
            if p.name == name:
                return p
        raise KeyError(name)

    def scale(self, unit: np.ndarray) -> np.ndarray:
        """Map unit-hypercube coordinates affinely into the box; integer
        parameters are rounded to the nearest integer after scaling."""
        unit = np.atleast_2d(np.asarray(unit, dtype=np.float64))
        if unit.shape[1] != self.k:
            raise ValueError(f"expected {self.k} columns, got {unit.shape[1]}")
        out = np.empty_like(unit)
        for j, p in enumerate(self.parameters):
            col = p.lower + unit[:, j] * (p.upper - p.lower)
            out[:, j] = np.rint(col) if p.integer else col
        return out

    def to_dict(self) -> list[dict]:
        return [
            {"name": p.name, "lower": p.lower, "upper": p.upper, "integer": p.integer}
            for p in self.parameters
        ]

    @classmethod
    def from_dict(cls, rows) -> "ParameterBounds":
        return cls([Parameter(r["name"], r["lower"], r["upper"], r.get("integer", False)) for r in rows])


@dataclass
class SaltelliDesign:
    """Cross-sampled design over the unit hypercube plus its physical image.

    Rows are laid out in contiguous blocks: A, AB_1..AB_k, (BA_1..BA_k when
    second order), B, each of `base_samples` rows.  AB_i equals A with
    column i replaced from B row-wise; BA_i is the converse.
    """

    bounds: ParameterBounds
    base_samples: int
    second_order: bool
    unit_rows: np.ndarray
    scaled_rows: np.ndarray
    blocks: list[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.bounds.k

    @property
    def row_count(self) -> int:
        return self.unit_rows.shape[0]

    def block_rows(self, label: str) -> np.ndarray:
        """Row indices of one block ('A', 'B', 'AB3', 'BA1', ...)."""
        order = self.block_order()
        if label not in order:
            raise KeyError(label)
        start = order.index(label) * self.base_samples
        return np.arange(start, start + self.base_samples)

    def block_order(self) -> list[str]:
        k = self.k
        order = ["A"] + [f"AB{i + 1}" for i in range(k)]
        if self.second_order:
            order += [f"BA{i + 1}" for i in range(k)]
        return order + ["B"]

    def sha256(self) -> str:
        digest = hashlib.sha256()
        digest.update(self.scaled_rows.tobytes())
        digest.update(",".join(self.blocks).encode())
        return digest.hexdigest()

    def to_csv(self, path_or_file) -> None:
        """Write `block,base_index,<parameter columns>` rows (scaled values)."""
        _write_csv(
            path_or_file,
            ["block", "base_index"] + self.bounds.names,
            (
                [self.blocks[r], str(r % self.base_samples)]
                + [repr(float(x)) for x in self.scaled_rows[r]]
                for r in range(self.row_count)
            ),
        )


def _write_csv(path_or_file, header, rows) -> None:
    if hasattr(path_or_file, "write"):
        writer = csv.writer(path_or_file, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(path_or_file, "w", newline="") as fh:
        _write_csv(fh, header, rows)


def saltelli_design(bounds: ParameterBounds, base_samples: int, second_order: bool = True) -> SaltelliDesign:
    """Build Saltelli's cross-sampled design from a 2k-dimensional Sobol draw.

    Columns 1..k of the draw form block A and columns k+1..2k form block B;
    AB_i / BA_i substitute single columns across the two.  Row count is
    N*(2k+2) with second order, N*(k+2) without.
    """
    if base_samples < 2:
        raise ValueError("base_samples must be at least 2")
    if base_samples & (base_samples - 1):
        warnings.warn(
            f"base_samples={base_samples} is not a power of two; Sobol balance properties degrade",
            UserWarning,
            stacklevel=2,
        )
    k = bounds.k
    draw = sobol_points(2 * k, base_samples)
    a = draw[:, :k]
    b = draw[:, k:]

    parts = [a]
    labels = ["A"] * base_samples
    for i in range(k):
        ab = a.copy()
        ab[:, i] = b[:, i]
        parts.append(ab)
        labels += [f"AB{i + 1}"] * base_samples
    if second_order:
        for i in range(k):
            ba = b.copy()
            ba[:, i] = a[:, i]
            parts.append(ba)
            labels += [f"BA{i + 1}"] * base_samples
    parts.append(b)
    labels += ["B"] * base_samples

    unit = np.vstack(parts)
    return SaltelliDesign(
        bounds=bounds,
        base_samples=base_samples,
        second_order=second_order,
        unit_rows=unit,
        scaled_rows=bounds.scale(unit),
        blocks=labels,
    )


@dataclass
class SobolIndices:
    """Point estimates with 95% bootstrap confidence half-widths.

    `s2` and `s2_conf` map parameter-index pairs (i, j) with i < j to the
    second-order estimates; they are empty for first-order-only designs.
    """

    names: list[str]
    s1: np.ndarray
    s1_conf: np.ndarray
    st: np.ndarray
    st_conf: np.ndarray
    s2: dict  # {(i, j): estimate} with i < j
    s2_conf: dict
    confidence: float = 0.95

    def to_rows(self) -> list[tuple[str, str, float, float]]:
        rows = []
        for i, name in enumerate(self.names):
            rows.append((name, "S1", float(self.s1[i]), float(self.s1_conf[i])))
        for i, name in enumerate(self.names):
            rows.append((name, "ST", float(self.st[i]), float(self.st_conf[i])))
        for (i, j), value in self.s2.items():
            rows.append((f"{self.names[i]}*{self.names[j]}", "S2", float(value), float(self.s2_conf[(i, j)])))
        return rows

    def to_csv(self, path_or_file) -> None:
        _write_csv(
            path_or_file,
            ["param", "order", "S", "conf"],
            ([p, o, repr(s), repr(c)] for p, o, s, c in self.to_rows()),
        )

    def to_json(self, path) -> None:
        payload = {
            "confidence": self.confidence,
            "indices": [
                {"param": p, "order": o, "S": s, "conf": c} for p, o, s, c in self.to_rows()
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _split_outputs(design: SaltelliDesign, y: np.ndarray):
    k = design.k
    f_a = y[design.block_rows("A")]
    f_b = y[design.block_rows("B")]
    f_ab = np.stack([y[design.block_rows(f"AB{i + 1}")] for i in range(k)])
    f_ba = (
        np.stack([y[design.block_rows(f"BA{i + 1}")] for i in range(k)])
        if design.second_order
        else None
    )
    return f_a, f_b, f_ab, f_ba


def _estimate(f_a, f_b, f_ab, f_ba):
    pooled = np.concatenate([f_a, f_b], axis=-1)
    var = np.var(pooled, axis=-1)
    s1 = np.mean(f_b[..., None, :] * (f_ab - f_a[..., None, :]), axis=-1) / var[..., None]
    st = np.mean((f_a[..., None, :] - f_ab) ** 2, axis=-1) / (2.0 * var[..., None])
    s2 = None
    if f_ba is not None:
        k = f_ab.shape[-2]
        f0sq = np.mean(f_a * f_b, axis=-1)
        s2 = {}
        for i in range(k):
            for j in range(i + 1, k):
                vij = np.mean(f_ba[..., i, :] * f_ab[..., j, :], axis=-1) - f0sq
                s2[(i, j)] = vij / var - s1[..., i] - s1[..., j]
    return s1, st, s2


def sobol_indices(
    design: SaltelliDesign,
    y,
    bootstrap_resamples: int = 1000,
    seed: int = 0,
) -> SobolIndices:
    """Estimate Sobol indices from model outputs aligned with the design rows.

    Parameters
    ----------
    design : SaltelliDesign
    y : array-like, shape (design.row_count,)
        One model output per design row, in design row order.
    bootstrap_resamples : int
        Resamples (with replacement) of the N base-sample indices used for
        the confidence half-widths; 0 disables the bootstrap (half-widths
        are reported as 0).
    seed : int
        Seed for the bootstrap index stream.

    Raises
    ------
    VarianceZeroError
        If the pooled A/B outputs are constant.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.size != design.row_count:
        raise ValueError(f"y must have {design.row_count} entries, got shape {y.shape}")
    f_a, f_b, f_ab, f_ba = _split_outputs(design, y)
    if np.var(np.concatenate([f_a, f_b])) == 0.0:
        raise VarianceZeroError("model outputs over the A and B blocks are constant")

    s1, st, s2 = _estimate(f_a, f_b, f_ab, f_ba)
    k = design.k
    n = design.base_samples

    s2_conf = {} if s2 is None else {key: 0.0 for key in s2}
    if bootstrap_resamples > 0:
        idx = random_indices(seed, bootstrap_resamples * n, n).reshape(bootstrap_resamples, n)
        s1_b, st_b, s2_b = _estimate(
            f_a[idx],
            f_b[idx],
            np.swapaxes(f_ab[:, idx], 0, 1),
            None if f_ba is None else np.swapaxes(f_ba[:, idx], 0, 1),
        )
        s1_conf = 1.96 * np.std(s1_b, axis=0, ddof=1)
        st_conf = 1.96 * np.std(st_b, axis=0, ddof=1)
        if s2_b is not None:
            s2_conf = {key: float(1.96 * np.std(values, ddof=1)) for key, values in s2_b.items()}
    else:
        s1_conf = np.zeros(k)
        st_conf = np.zeros(k)

    return SobolIndices(
        names=design.bounds.names,
        s1=s1,
        s1_conf=s1_conf,
        st=st,
        st_conf=st_conf,
        s2={} if s2 is None else {key: float(val) for key, val in s2.items()},
        s2_conf=s2_conf,
    )
