"""Structure recovery from the input-layer weights of trained conditional nets."""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .conditional import TrainConfig, neurise_fit_all
from .errors import InvalidInputError
from .model import EnergyModel, SampleSet
from .neural import MlpSpec

MANUAL = "manual"
RULE_OF_THUMB = "rule-of-thumb"
STDDEV_OUTLIER = "stddev-outlier"


def input_weight_norms(models) -> np.ndarray:
    """``norms[u, v]``: l2 norm of the first-layer weights of net ``u`` fed by site ``v``.

    The diagonal is NaN.  Centers without a model keep NaN rows.
    """
    p = models[0].p
    norms = np.full((p, p), np.nan)
    for m in models:
        w = m.net.input_weights()
        for v in range(p):
            if v != m.u:
                norms[m.u, v] = float(np.linalg.norm(w[:, m.input_columns(v)]))
    return norms


def structure_fit(samples: SampleSet, spec: MlpSpec, config: TrainConfig, threads: int = 1,
                  zero_init: bool = True):
    """Fit every conditional with an input l1 penalty; returns (models, norms, histories).

    The input layer starts at exact zero unless ``zero_init`` is False, in
    which case it keeps the standard random init.  The zero start is a
    stationary point when the center has no pairwise correlation with a
    neighbour (pure three-body and higher terms), so such models need the
    random start.
    """
    if config.l1_input <= 0:
        warnings.warn("structure_fit without an input-weight penalty; norms may not separate cleanly",
                      stacklevel=2)
    if config.zero_input_init != zero_init:
        config = replace(config, zero_input_init=zero_init)
    models, histories = neurise_fit_all(samples, spec, config, threads=threads)
    return models, input_weight_norms(models), histories


def _pooled(norms):
    norms = np.asarray(norms, dtype=np.float64)
    vals = norms[~np.isnan(norms)] if norms.ndim == 2 else norms
    return vals


def select_threshold(norms, method: str = RULE_OF_THUMB, *, tau: float | None = None, c: float = 1.0,
                     p: int | None = None, n: int | None = None, fraction: float | None = None) -> float:
    """Edge threshold from pooled norms.

    ``manual`` returns ``tau``; ``rule-of-thumb`` returns ``c * sqrt(ln p / n)``;
    ``stddev-outlier`` returns ``mean + fraction * std`` of the pooled norms.
    """
    vals = _pooled(norms)
    if vals.size < 2:
        raise InvalidInputError("need at least two norm values")
    if method == MANUAL:
        if tau is None:
            raise InvalidInputError("manual threshold needs tau")
        return float(tau)
    if method == RULE_OF_THUMB:
        if p is None:
            p = np.shape(norms)[0] if np.ndim(norms) == 2 else None
        if p is None or n is None:
            raise InvalidInputError("rule-of-thumb threshold needs p and n")
        return c * math.sqrt(math.log(p) / n)
    if method == STDDEV_OUTLIER:
        if fraction is None:
            raise InvalidInputError("stddev-outlier threshold needs a fraction")
        std = float(vals.std())
        if std == 0.0:
            raise InvalidInputError("all norms are equal; choose a manual threshold")
        return float(vals.mean() + fraction * std)
    raise InvalidInputError(f"unknown threshold method {method!r}")


@dataclass
class StructureResult:
    norms: np.ndarray = field(repr=False)
    threshold: float
    method: str
    adjacency: np.ndarray = field(repr=False)
    neighborhoods: dict

    @property
    def p(self):
        return self.adjacency.shape[0]

    def edges(self):
        return [(a, b) for a, b in itertools.combinations(range(self.p), 2) if self.adjacency[a, b]]

    def to_dict(self):
        return {
            "norms": [[None if np.isnan(x) else float(x) for x in row] for row in self.norms],
            "threshold": self.threshold,
            "method": self.method,
            "adjacency": self.adjacency.astype(int).tolist(),
            "neighborhoods": {str(u): sorted(v) for u, v in self.neighborhoods.items()},
        }

    @classmethod
    def from_dict(cls, d):
        norms = np.array([[np.nan if x is None else x for x in row] for row in d["norms"]], dtype=np.float64)
        return cls(norms, float(d["threshold"]), d["method"], np.asarray(d["adjacency"], dtype=bool),
                   {int(k): set(v) for k, v in d["neighborhoods"].items()})


def reconstruct_graph(norms, threshold: float, method: str = MANUAL) -> StructureResult:
    """OR-rule adjacency: ``u ~ v`` iff ``max(norms[u, v], norms[v, u]) > threshold``."""
    norms = np.asarray(norms, dtype=np.float64)
    above = np.where(np.isnan(norms), False, norms > threshold)
    adj = above | above.T
    np.fill_diagonal(adj, False)
    hoods = {u: {int(v) for v in np.flatnonzero(above[u])} for u in range(norms.shape[0])}
    return StructureResult(norms, float(threshold), method, adj, hoods)


def structure_metrics(result: StructureResult, truth: EnergyModel) -> dict:
    """Confusion counts over unordered pairs against the true interaction graph."""
    if truth.p != result.p:
        raise InvalidInputError(f"p mismatch: result {result.p}, truth {truth.p}")
    true_adj = truth.adjacency()
    iu = np.triu_indices(truth.p, 1)
    t, pr = true_adj[iu], result.adjacency[iu]
    pairs = list(zip(iu[0].tolist(), iu[1].tolist()))
    n_edges, n_non = int(t.sum()), int((~t).sum())
    tp, tn = int((t & pr).sum()), int((~t & ~pr).sum())
    return {
        "edge_accuracy": tp / n_edges if n_edges else 1.0,
        "non_edge_accuracy": tn / n_non if n_non else 1.0,
        "total_accuracy": (tp + tn) / len(pairs) if pairs else 1.0,
        "false_positives": [pr_ for pr_, a, b in zip(pairs, t, pr) if b and not a],
        "false_negatives": [pr_ for pr_, a, b in zip(pairs, t, pr) if a and not b],
    }


def ranking_auc(norms, truth: EnergyModel) -> float:
    """Probability that a true edge outscores a non-edge (ties count 1/2), using symmetrized norms."""
    norms = np.asarray(norms, dtype=np.float64)
    score = np.fmax(norms, norms.T)
    iu = np.triu_indices(truth.p, 1)
    t = truth.adjacency()[iu]
    pos, neg = score[iu][t], score[iu][~t]
    if pos.size == 0 or neg.size == 0:
        return 1.0
    diff = pos[:, None] - neg[None, :]
    return float(((diff > 0).sum() + 0.5 * (diff == 0).sum()) / diff.size)


def perfect_threshold_exists(norms, truth: EnergyModel) -> bool:
    return ranking_auc(norms, truth) == 1.0


def write_structure(result: StructureResult, path):
    Path(path).write_text(json.dumps(result.to_dict(), indent=1) + "\n")


def read_structure(path) -> StructureResult:
    return StructureResult.from_dict(json.loads(Path(path).read_text()))


def write_norm_histogram(norms, path):
    """Pooled norms, one value per line, for external histogram plotting."""
    vals = _pooled(norms)
    Path(path).write_text("".join(f"{v!r}\n" for v in vals.tolist()))
