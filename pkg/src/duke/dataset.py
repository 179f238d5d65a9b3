"""Ground-set containers, file ingestion, distance metrics, margin weights.

All distance computation funnels through :func:`metric_row` so that every part
of the package (graph construction, selection, oracle, cost evaluation) sees
bitwise-identical values for the same point pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    EmptyInput,
    MalformedValue,
    NonFiniteValue,
    ProbabilityOutOfRange,
    RaggedRow,
    RowSumError,
    SizeMismatch,
    TooFewClasses,
    TruncatedInput,
    UnknownMetric,
    ZeroVectorCosine,
)

# DistanceMetric values accepted everywhere a metric is passed.
METRICS = ("cosine-distance", "euclidean", "manhattan")


def _as_readonly_f64(values, ndim: int) -> np.ndarray:
    arr = np.ascontiguousarray(np.asarray(values, dtype=np.float64))
    if arr.ndim != ndim:
        raise MalformedValue(expected_ndim=ndim, got=arr.ndim)
    arr.setflags(write=False)
    return arr


@dataclass
class EmbeddingSet:
    """Feature matrix of shape (n, dim), float64, read-only after init.

    Optional integer labels ride along for synthetic instances; nothing in the
    selection path reads them.
    """

    features: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        feats = _as_readonly_f64(self.features, 2)
        if feats.shape[0] < 1 or feats.shape[1] < 1:
            raise EmptyInput(rows=feats.shape[0], cols=feats.shape[1])
        if not np.isfinite(feats).all():
            bad = int(np.argwhere(~np.isfinite(feats).all(axis=1))[0, 0])
            raise NonFiniteValue(row=bad)
        self.features = feats
        if self.labels is not None:
            lab = np.ascontiguousarray(np.asarray(self.labels, dtype=np.int64))
            if lab.shape != (feats.shape[0],):
                raise SizeMismatch(expected=feats.shape[0], got=lab.shape)
            lab.setflags(write=False)
            self.labels = lab
        self._norms = None

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def norms(self) -> np.ndarray:
        """Row L2 norms, computed once and cached."""
        if self._norms is None:
            f = self.features
            nrm = np.sqrt(np.einsum("ij,ij->i", f, f))
            nrm.setflags(write=False)
            self._norms = nrm
        return self._norms

    def subset(self, indices) -> "EmbeddingSet":
        idx = np.asarray(indices, dtype=np.int64)
        lab = self.labels[idx] if self.labels is not None else None
        return EmbeddingSet(self.features[idx], lab)


@dataclass
class ProbabilityMatrix:
    """Per-point class probabilities, shape (n, L), rows summing to 1.

    Row sums are checked within ``row_sum_tol``; entries must lie in [0, 1].
    """

    values: np.ndarray
    row_sum_tol: float = 1e-6

    def __post_init__(self):
        vals = _as_readonly_f64(self.values, 2)
        if vals.shape[0] < 1:
            raise EmptyInput(rows=0)
        if vals.shape[1] < 2:
            raise TooFewClasses(classes=vals.shape[1])
        if not np.isfinite(vals).all():
            bad = int(np.argwhere(~np.isfinite(vals).all(axis=1))[0, 0])
            raise NonFiniteValue(row=bad)
        out = (vals < 0.0) | (vals > 1.0)
        if out.any():
            bad = int(np.argwhere(out.any(axis=1))[0, 0])
            raise ProbabilityOutOfRange(row=bad)
        sums = vals.sum(axis=1)
        off = np.abs(sums - 1.0) > self.row_sum_tol
        if off.any():
            bad = int(np.argmax(off))
            raise RowSumError(row=bad, sum=float(sums[bad]))
        self.values = vals

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def classes(self) -> int:
        return self.values.shape[1]


@dataclass
class WeightVector:
    """Per-point selection weights in [0, 1], shape (n,)."""

    values: np.ndarray

    def __post_init__(self):
        vals = _as_readonly_f64(self.values, 1)
        if vals.shape[0] < 1:
            raise EmptyInput(rows=0)
        if not np.isfinite(vals).all():
            raise NonFiniteValue(row=int(np.argmax(~np.isfinite(vals))))
        if (vals < 0.0).any() or (vals > 1.0).any():
            bad = int(np.argmax((vals < 0.0) | (vals > 1.0)))
            raise ProbabilityOutOfRange(row=bad)
        self.values = vals

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def subset(self, indices) -> "WeightVector":
        return WeightVector(self.values[np.asarray(indices, dtype=np.int64)])


def margin_weights(probs: ProbabilityMatrix) -> WeightVector:
    """Weight each point by top probability minus second probability.

    A confidently classified point gets weight near 1, a point whose top two
    classes tie gets weight 0. Invariant to permuting columns within a row.
    """
    v = probs.values
    if v.shape[1] < 2:
        raise TooFewClasses(classes=v.shape[1])
    part = np.partition(v, v.shape[1] - 2, axis=1)
    return WeightVector(part[:, -1] - part[:, -2])


def _check_metric(metric: str) -> None:
    if metric not in METRICS:
        raise UnknownMetric(metric=metric)


def _cosine_norm_check(norms: np.ndarray) -> None:
    zero = norms == 0.0
    if zero.any():
        raise ZeroVectorCosine(index=int(np.argmax(zero)))


def metric_row(emb: EmbeddingSet, metric: str, i: int) -> np.ndarray:
    """Distances from point i to every point, d[i] forced to exactly 0.

    Cosine mode validates that no row of the set is the zero vector, so any
    operation built on this kernel is total or raises ZeroVectorCosine.
    """
    _check_metric(metric)
    f = emb.features
    if metric == "cosine-distance":
        norms = emb.norms()
        _cosine_norm_check(norms)
        sims = f @ f[i]
        sims /= norms * norms[i]
        np.clip(sims, -1.0, 1.0, out=sims)
        d = 1.0 - sims
    elif metric == "euclidean":
        diff = f - f[i]
        d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    else:
        d = np.abs(f - f[i]).sum(axis=1)
    d[i] = 0.0
    return d


def pairwise_distance(a: int, b: int, emb: EmbeddingSet, metric: str) -> float:
    """Distance between rows a and b.

    Computed through the same row kernel as everything else, so any value
    stored elsewhere in the package recomputes here bitwise-equal. Cosine mode
    only requires rows a and b to be nonzero; other zero rows are masked out
    rather than rejected.
    """
    _check_metric(metric)
    if a == b:
        return 0.0
    if metric == "cosine-distance":
        norms = emb.norms()
        for idx in (a, b):
            if norms[idx] == 0.0:
                raise ZeroVectorCosine(index=int(idx))
        f = emb.features
        safe = np.where(norms == 0.0, 1.0, norms)
        sims = f @ f[a]
        sims /= safe * safe[a]
        np.clip(sims, -1.0, 1.0, out=sims)
        d = 1.0 - sims
        d[a] = 0.0
        return float(d[b])
    return float(metric_row(emb, metric, a)[b])


def distance_matrix(emb: EmbeddingSet, metric: str) -> np.ndarray:
    """Full (n, n) matrix assembled from metric_row. Small instances only."""
    return np.stack([metric_row(emb, metric, i) for i in range(emb.n)])


# ---------------------------------------------------------------------------
# file ingestion

def _parse_csv(path: Path, header: bool) -> np.ndarray:
    rows: list[list[float]] = []
    arity = -1
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    start = 1 if header else 0
    for lineno, line in enumerate(lines[start:], start=start):
        stripped = line.strip()
        if not stripped:
            continue
        tokens = stripped.split(",")
        if arity == -1:
            arity = len(tokens)
        elif len(tokens) != arity:
            raise RaggedRow(row=lineno - start)
        vals = []
        for tok in tokens:
            try:
                vals.append(float(tok))
            except ValueError:
                raise MalformedValue(row=lineno - start, token=tok.strip()) from None
        rows.append(vals)
    if not rows:
        raise EmptyInput(path=str(path))
    arr = np.array(rows, dtype=np.float64)
    if not np.isfinite(arr).all():
        bad = int(np.argwhere(~np.isfinite(arr).all(axis=1))[0, 0])
        raise NonFiniteValue(row=bad)
    return arr


def _parse_raw_float32(path: Path, dim: int) -> np.ndarray:
    if dim is None or dim < 1:
        raise MalformedValue(dim=dim)
    raw = np.fromfile(path, dtype="<f4")
    if raw.size == 0:
        raise EmptyInput(path=str(path))
    if raw.size % dim != 0:
        raise TruncatedInput(values=raw.size, dim=dim)
    arr = raw.reshape(-1, dim).astype(np.float64)
    if not np.isfinite(arr).all():
        bad = int(np.argwhere(~np.isfinite(arr).all(axis=1))[0, 0])
        raise NonFiniteValue(row=bad)
    return arr


def load_matrix(path, fmt: str = "csv", dim: int | None = None,
                header: bool = False) -> np.ndarray:
    """Shared loader for embeddings, probabilities and weight columns."""
    p = Path(path)
    if fmt == "csv":
        return _parse_csv(p, header)
    if fmt == "raw-float32":
        return _parse_raw_float32(p, dim)
    raise MalformedValue(format=fmt)


def load_embeddings(path, fmt: str = "csv", dim: int | None = None,
                    header: bool = False) -> EmbeddingSet:
    return EmbeddingSet(load_matrix(path, fmt, dim, header))


def load_probabilities(path, fmt: str = "csv", classes: int | None = None,
                       header: bool = False) -> ProbabilityMatrix:
    return ProbabilityMatrix(load_matrix(path, fmt, classes, header))


def load_weights(path, fmt: str = "csv", header: bool = False) -> WeightVector:
    arr = load_matrix(path, fmt, 1, header)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise MalformedValue(cols=arr.shape[1])
        arr = arr[:, 0]
    return WeightVector(arr)
