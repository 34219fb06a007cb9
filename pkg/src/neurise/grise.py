"""Interaction screening with a linear basis (GRISE).

For a center variable ``u`` the objective is the sample average of
``exp(-sum_k theta_k g_k(sigma))`` over the basis terms containing ``u``.
It is minimized either under an l1-ball constraint (projected gradient) or
with an l1 penalty (proximal gradient).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapacityError, InvalidInputError, ParseError
from .model import PartialBasis, SampleSet, build_partial_basis
from .sampling import ExactDistribution

DEFAULT_CACHE_ENTRIES = 50_000_000
_STREAM_ROWS = 4096


class GriseProblem:
    """Weighted configurations plus the (cached) design matrix of a partial basis.

    Repeated sample rows are merged into weights, which leaves every
    objective value unchanged.  When the design matrix would exceed
    ``max_cache`` entries it is recomputed in row blocks on every call.
    """

    def __init__(self, basis: PartialBasis, configs, weights, max_cache: int = DEFAULT_CACHE_ENTRIES):
        configs = np.asarray(configs)
        weights = np.asarray(weights, dtype=np.float64)
        if configs.ndim != 2 or configs.shape[1] != basis.p or weights.shape != (configs.shape[0],):
            raise InvalidInputError("configs/weights do not match the basis dimension")
        self.basis = basis
        self.configs = configs
        self.weights = weights / weights.sum()
        self.cached = configs.shape[0] * len(basis) <= max_cache
        self._design = basis.design(configs) if self.cached else None

    @classmethod
    def from_samples(cls, basis: PartialBasis, samples: SampleSet, **kw):
        if samples.p != basis.p or samples.q != basis.q:
            raise InvalidInputError("sample set does not match the basis alphabet/size")
        rows, weights = samples.compressed()
        return cls(basis, rows, weights, **kw)

    @classmethod
    def from_distribution(cls, basis: PartialBasis, dist: ExactDistribution, **kw):
        """Population objective: expectation under an enumerated distribution."""
        return cls(basis, dist.configs(), dist.probabilities, **kw)

    @property
    def n_terms(self):
        return len(self.basis)

    def blocks(self):
        if self.cached:
            yield self._design, self.weights
            return
        for start in range(0, self.configs.shape[0], _STREAM_ROWS):
            sl = slice(start, start + _STREAM_ROWS)
            yield self.basis.design(self.configs[sl]), self.weights[sl]

    def design(self):
        if not self.cached:
            raise CapacityError("design matrix not cached; iterate blocks() instead")
        return self._design

    def _check(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.n_terms,):
            raise InvalidInputError(f"theta has length {theta.size}, basis has {self.n_terms} terms")
        return theta

    def value_and_gradient(self, theta):
        theta = self._check(theta)
        value = 0.0
        grad = np.zeros(self.n_terms)
        for g, w in self.blocks():
            e = w * np.exp(-(g @ theta))
            value += e.sum()
            grad -= g.T @ e
        return float(value), grad


def iso_value(problem: GriseProblem, theta) -> float:
    theta = problem._check(theta)
    return float(sum(np.dot(w, np.exp(-(g @ theta))) for g, w in problem.blocks()))


def iso_gradient(problem: GriseProblem, theta):
    return problem.value_and_gradient(theta)[1]


def soft_threshold(x, threshold):
    return np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)


def project_l1_ball(v, radius: float):
    """Euclidean projection onto ``{x : ||x||_1 <= radius}`` (sort-based)."""
    v = np.asarray(v, dtype=np.float64)
    if radius <= 0:
        raise InvalidInputError("l1 radius must be positive")
    a = np.abs(v)
    if a.sum() <= radius:
        return v.copy()
    mu = np.sort(a)[::-1]
    css = np.cumsum(mu)
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(mu * k > css - radius)[0][-1]
    shift = (css[rho] - radius) / (rho + 1.0)
    return np.sign(v) * np.maximum(a - shift, 0.0)


@dataclass(frozen=True)
class Constrained:
    gamma: float


@dataclass(frozen=True)
class Penalized:
    lam: float


@dataclass(frozen=True)
class SolverSettings:
    tol: float = 1e-7
    max_iter: int = 50_000
    initial_step: float = 1.0
    min_step: float = 1e-20


@dataclass
class GriseSolution:
    u: int
    basis: PartialBasis = field(repr=False)
    theta: np.ndarray
    objective: float
    iterations: int
    converged: bool
    mode: str
    regularization: float
    settings: SolverSettings

    def to_dict(self):
        return {
            "u": self.u,
            "basis": self.basis.to_dict(),
            "theta": self.theta.tolist(),
            "objective": self.objective,
            "converged": self.converged,
            "iterations": self.iterations,
            "mode": self.mode,
            "regularization": self.regularization,
            "settings": asdict(self.settings),
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(int(d["u"]), PartialBasis.from_dict(d["basis"]), np.asarray(d["theta"], dtype=np.float64),
                       float(d["objective"]), int(d.get("iterations", 0)), bool(d["converged"]),
                       d.get("mode", "penalized"), float(d.get("regularization", 0.0)),
                       SolverSettings(**d.get("settings", {})))
        except KeyError as exc:
            raise ParseError("missing required field", field=exc.args[0]) from None


def write_solution(sol: GriseSolution, path):
    Path(path).write_text(json.dumps(sol.to_dict()) + "\n")


def read_solution(path) -> GriseSolution:
    try:
        return GriseSolution.from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, path=path) from exc


def default_penalty(p: int, n: int, c: float = 1.0) -> float:
    """Rule-of-thumb penalty ``c * sqrt(ln p / n)``."""
    return c * math.sqrt(math.log(p) / n)


def grise_fit(problem: GriseProblem, mode=None, settings: SolverSettings = SolverSettings(),
              theta0=None) -> GriseSolution:
    """Minimize the ISO under ``mode`` (``Constrained`` or ``Penalized``).

    Both modes share one loop: a gradient step followed by the mode's
    proximal map (l1-ball projection or soft threshold), with the step halved
    until the composite sufficient-decrease test holds.  Termination uses the
    gradient-mapping norm ``||theta_new - theta|| / step``.
    """
    if mode is None:
        mode = Penalized(0.0)
    if isinstance(mode, Constrained):
        if mode.gamma <= 0:
            raise InvalidInputError("constraint radius gamma must be > 0")
        prox = lambda x, t: project_l1_ball(x, mode.gamma)  # noqa: E731
        reg = lambda x: 0.0  # noqa: E731
        name, strength = "constrained", mode.gamma
    elif isinstance(mode, Penalized):
        if mode.lam < 0:
            raise InvalidInputError("penalty lambda must be >= 0")
        prox = lambda x, t: soft_threshold(x, t * mode.lam)  # noqa: E731
        reg = lambda x: mode.lam * np.abs(x).sum()  # noqa: E731
        name, strength = "penalized", mode.lam
    else:
        raise InvalidInputError(f"unknown GRISE mode {mode!r}")

    theta = np.zeros(problem.n_terms) if theta0 is None else prox(np.asarray(theta0, dtype=np.float64), 0.0)
    f, grad = problem.value_and_gradient(theta)
    step = settings.initial_step
    converged = False
    it = 0
    for it in range(1, settings.max_iter + 1):
        while True:
            cand = prox(theta - step * grad, step)
            diff = cand - theta
            f_cand, grad_cand = problem.value_and_gradient(cand)
            if f_cand <= f + grad @ diff + (diff @ diff) / (2.0 * step) + 1e-15 * abs(f):
                break
            step *= 0.5
            if step < settings.min_step:
                break
        if step < settings.min_step:
            break
        progress = math.sqrt(diff @ diff) / step
        theta, f, grad = cand, f_cand, grad_cand
        if progress < settings.tol:
            converged = True
            break
        step = min(step * 2.0, settings.initial_step)
    return GriseSolution(problem.basis.u, problem.basis, theta, float(f + reg(theta)), it, converged, name,
                         float(strength), settings)


def grise_fit_all(samples: SampleSet, max_order: int, mode=None, settings: SolverSettings = SolverSettings(),
                  kind: str | None = None, centers=None):
    """Fit every center variable (or those in ``centers``); default mode is the rule-of-thumb penalty."""
    if mode is None:
        mode = Penalized(default_penalty(samples.p, samples.n))
    rows, weights = samples.compressed()
    out = []
    for u in range(samples.p) if centers is None else centers:
        basis = build_partial_basis(samples.p, samples.alphabet, max_order, u, kind)
        out.append(grise_fit(GriseProblem(basis, rows, weights), mode, settings))
    return out
