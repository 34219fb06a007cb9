"""Per-variable conditional models and the neural interaction screening objective.

A net for center ``u`` sees every other variable.  Binary alphabets feed
spins (one input per site); larger alphabets feed the centered indicator
vector of each site (``q`` inputs per site).  Binary nets have one output
``NN`` and partial energy ``spin_u * NN``; general nets have ``q`` outputs
and partial energy ``<Phi(sigma_u), NN>``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import softmax

from .errors import InvalidInputError, ParseError, SolverError
from .grise import GriseSolution, soft_threshold
from .model import Alphabet, PartialBasis, SampleSet, as_alphabet, check_configs
from .neural import Mlp, MlpSpec, Optimizer, init_mlp, mlp_backward, mlp_forward

LINEAR = "linear"
BINARY_NET = "binary-net"
GENERAL_NET = "general-net"


def input_dim(p: int, q: int) -> int:
    return (p - 1) if q == 2 else (p - 1) * q


def conditional_net_spec(p: int, q: int, depth: int, width: int, flavor: str | None = None) -> MlpSpec:
    flavor = flavor or (BINARY_NET if q == 2 else GENERAL_NET)
    return MlpSpec(input_dim(p, q), depth, width, 1 if flavor == BINARY_NET else q)


def encode_context(configs, u: int, q: int):
    """Net inputs for center ``u``: spins (q = 2) or flattened centered indicators."""
    others = np.delete(np.asarray(configs), u, axis=1)
    if q == 2:
        return 1.0 - 2.0 * others
    return Alphabet(q).centered_indicator(others).reshape(others.shape[0], -1)


@dataclass
class ConditionalModel:
    u: int
    p: int
    alphabet: Alphabet
    flavor: str
    net: Mlp | None = None
    theta: np.ndarray | None = field(default=None, repr=False)
    basis: PartialBasis | None = field(default=None, repr=False)

    def __post_init__(self):
        self.alphabet = as_alphabet(self.alphabet)
        q = self.alphabet.q
        if self.flavor == LINEAR:
            if self.theta is None or self.basis is None or len(self.basis) != len(self.theta):
                raise InvalidInputError("linear conditional needs a basis and a matching theta")
            self.theta = np.asarray(self.theta, dtype=np.float64)
        elif self.flavor in (BINARY_NET, GENERAL_NET):
            if self.net is None:
                raise InvalidInputError("net conditional needs a net")
            if self.flavor == BINARY_NET and q != 2:
                raise InvalidInputError("binary-net conditionals require q = 2")
            want = conditional_net_spec(self.p, q, 1, 1, self.flavor)
            if (self.net.spec.input_dim, self.net.spec.output_dim) != (want.input_dim, want.output_dim):
                raise InvalidInputError(
                    f"net dims {self.net.spec.input_dim}->{self.net.spec.output_dim} do not match "
                    f"{want.input_dim}->{want.output_dim} for p={self.p}, q={q}")
        else:
            raise InvalidInputError(f"unknown flavor {self.flavor!r}")

    @property
    def q(self) -> int:
        return self.alphabet.q

    @classmethod
    def from_grise(cls, sol: GriseSolution) -> "ConditionalModel":
        return cls(sol.u, sol.basis.p, Alphabet(sol.basis.q), LINEAR, theta=sol.theta, basis=sol.basis)

    def input_columns(self, v: int):
        """Net input indices fed by site ``v``."""
        if v == self.u or not 0 <= v < self.p:
            raise InvalidInputError(f"site {v} is not an input of center {self.u}")
        k = v if v < self.u else v - 1
        return [k] if self.q == 2 else list(range(k * self.q, (k + 1) * self.q))

    def inputs(self, configs):
        return encode_context(configs, self.u, self.q)

    def logits(self, configs):
        """Partial energy with ``sigma_u`` set to each symbol; shape (m, q)."""
        configs = check_configs(configs, self.p, self.q)
        if self.flavor == LINEAR:
            out = np.empty((configs.shape[0], self.q))
            work = configs.astype(np.int64)
            for s in range(self.q):
                work[:, self.u] = s
                out[:, s] = self.basis.design(work) @ self.theta
            return out
        nn = mlp_forward(self.net, self.inputs(configs))
        if self.flavor == BINARY_NET:
            return np.concatenate([nn, -nn], axis=1)
        return nn - nn.mean(axis=1, keepdims=True)

    def partial_energy(self, configs):
        configs = check_configs(configs, self.p, self.q)
        return np.take_along_axis(self.logits(configs), configs[:, [self.u]].astype(np.intp), axis=1)[:, 0]

    def conditional(self, configs):
        single = np.ndim(configs) == 1
        probs = softmax(self.logits(configs), axis=1)
        return probs[0] if single else probs

    def to_dict(self):
        d = {"u": self.u, "flavor": self.flavor, "p": self.p, "q": self.q}
        if self.flavor == LINEAR:
            d.update(theta=self.theta.tolist(), basis=self.basis.to_dict())
        else:
            d.update(self.net.to_dict())
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            if d["flavor"] == LINEAR:
                return cls(int(d["u"]), int(d["p"]), Alphabet(int(d["q"])), LINEAR,
                           theta=np.asarray(d["theta"], dtype=np.float64), basis=PartialBasis.from_dict(d["basis"]))
            return cls(int(d["u"]), int(d["p"]), Alphabet(int(d["q"])), d["flavor"], net=Mlp.from_dict(d))
        except KeyError as exc:
            raise ParseError("missing required field", field=exc.args[0]) from None


def learned_conditional(model: ConditionalModel, configs):
    return model.conditional(configs)


def write_conditional(model: ConditionalModel, path):
    Path(path).write_text(json.dumps(model.to_dict()) + "\n")


def read_conditional(path) -> ConditionalModel:
    try:
        return ConditionalModel.from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, path=path) from exc


def conditional_provider(models):
    """Gibbs provider built from one conditional model per site."""
    by_u = {m.u: m for m in models}
    return lambda u, configs: by_u[u].conditional(configs)


# ---------------------------------------------------------------------------
# objective


def _weighted(samples, weights=None):
    if isinstance(samples, SampleSet):
        if weights is not None:
            raise InvalidInputError("weights are implied by a SampleSet")
        return samples.compressed()
    configs = np.asarray(samples)
    if weights is None:
        weights = np.full(configs.shape[0], 1.0 / configs.shape[0])
    weights = np.asarray(weights, dtype=np.float64)
    return configs, weights / weights.sum()


def _target(configs, u: int, q: int, output_dim: int):
    """Coefficients of the net outputs in the partial energy: spin_u or Phi(sigma_u)."""
    col = np.asarray(configs)[:, u]
    if output_dim == 1:
        return (1.0 - 2.0 * col)[:, None]
    return Alphabet(q).centered_indicator(col)


class NeurisoObjective:
    """NeurISO over fixed weighted rows: ``sum_t w_t exp(-<target_t, NN(x_t)>)``."""

    def __init__(self, u: int, q: int, spec: MlpSpec, configs, weights):
        self.spec = spec
        self.x = encode_context(configs, u, q)
        self.target = _target(configs, u, q, spec.output_dim)
        self.weights = np.asarray(weights, dtype=np.float64)

    @property
    def n_rows(self):
        return self.x.shape[0]

    def value(self, params, rows=None):
        net = Mlp(self.spec, params)
        x, t, w = self._rows(rows)
        e = np.exp(-np.sum(t * mlp_forward(net, x), axis=1))
        return float(np.dot(w, e))

    def value_and_grad(self, params, rows=None):
        net = Mlp(self.spec, params)
        x, t, w = self._rows(rows)
        e = w * np.exp(-np.sum(t * mlp_forward(net, x), axis=1))
        grad, _ = mlp_backward(net, x, -t * e[:, None])
        return float(e.sum()), grad

    def _rows(self, rows):
        if rows is None:
            return self.x, self.target, self.weights
        return self.x[rows], self.target[rows], np.full(len(rows), 1.0 / len(rows))


def _model_objective(model: ConditionalModel, samples, weights=None):
    if isinstance(samples, SampleSet) and (samples.p != model.p or samples.q != model.q):
        raise InvalidInputError("sample alphabet/size differs from the model's")
    configs, w = _weighted(samples, weights)
    configs = check_configs(configs, model.p, model.q)
    return NeurisoObjective(model.u, model.q, model.net.spec, configs, w)


def neuriso_value(model: ConditionalModel, samples, weights=None) -> float:
    """Screening objective of ``model`` on a SampleSet or weighted configurations."""
    if model.flavor == LINEAR:
        configs, w = _weighted(samples, weights)
        return float(np.dot(w, np.exp(-model.basis.design(configs) @ model.theta)))
    return _model_objective(model, samples, weights).value(model.net.params)


def neuriso_gradient(model: ConditionalModel, samples, weights=None):
    """Gradient of ``neuriso_value`` w.r.t. the net's flat parameters."""
    if model.flavor == LINEAR:
        raise InvalidInputError("use grise.iso_gradient for linear conditionals")
    return _model_objective(model, samples, weights).value_and_grad(model.net.params)[1]


# ---------------------------------------------------------------------------
# training


@dataclass(frozen=True)
class TrainConfig:
    """Training settings.

    ``batch_size=None`` trains full-batch on the merged distinct rows, so one
    epoch is one optimizer step.  ``l1_input`` adds an elementwise l1 penalty
    on the input layer, applied as a soft threshold after every step.
    """

    epochs: int = 200
    batch_size: int | None = 256
    optimizer: str = "adam"
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    l1_input: float = 0.0
    zero_input_init: bool = False
    validation_fraction: float = 0.0
    log_every: int = 1

    def __post_init__(self):
        if self.batch_size is not None and self.batch_size < 1:
            raise InvalidInputError("batch_size must be >= 1 (or None for full batch)")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise InvalidInputError("validation_fraction must lie in [0, 1)")
        if self.epochs < 0 or self.log_every < 1:
            raise InvalidInputError("epochs must be >= 0 and log_every >= 1")

    def make_optimizer(self):
        return Optimizer(self.optimizer, self.lr, self.beta1, self.beta2, self.eps)

    def to_dict(self):
        return asdict(self)


def split_validation(data, fraction: float, rng):
    """Shuffle-split raw rows into (train, validation); validation may be empty."""
    if fraction <= 0:
        return data, data[:0]
    perm = rng.permutation(data.shape[0])
    k = int(round(fraction * data.shape[0]))
    k = min(max(k, 1), data.shape[0] - 1)
    return data[perm[k:]], data[perm[:k]]


def merge_rows(data):
    rows, counts = np.unique(data, axis=0, return_counts=True)
    return rows, counts / data.shape[0]


def run_training(params, make_objective, train_rows, val_rows, config: TrainConfig, rng, l1_slice=None):
    """Shared minibatch/full-batch loop used by conditional and energy fits.

    ``make_objective(configs, weights)`` builds an objective with
    ``value(params, rows)`` / ``value_and_grad(params, rows)``.  Returns the
    per-epoch history (list of dicts).
    """
    merged = make_objective(*merge_rows(train_rows))
    raw = make_objective(train_rows, np.full(train_rows.shape[0], 1.0 / train_rows.shape[0])) \
        if config.batch_size is not None else None
    val = make_objective(*merge_rows(val_rows)) if val_rows.shape[0] else None
    opt = config.make_optimizer()
    history = []

    def penalty():
        return config.l1_input * float(np.abs(params[l1_slice]).sum()) if (l1_slice is not None and config.l1_input) else 0.0

    def log(epoch):
        rec = {"epoch": epoch, "loss": merged.value(params), "penalty": penalty()}
        if val is not None:
            rec["val_loss"] = val.value(params)
        if not math.isfinite(rec["loss"]):
            raise SolverError(f"non-finite loss at epoch {epoch}; lower the learning rate (lr={config.lr})")
        history.append(rec)

    def step(value, grad, epoch):
        if not (math.isfinite(value) and np.all(np.isfinite(grad))):
            raise SolverError(f"non-finite loss at epoch {epoch}; lower the learning rate (lr={config.lr})")
        opt.step(params, grad)
        if l1_slice is not None and config.l1_input > 0:
            scale = opt.last_scale if np.isscalar(opt.last_scale) else opt.last_scale[l1_slice]
            params[l1_slice] = soft_threshold(params[l1_slice], config.l1_input * scale)

    # overflow surfaces as a non-finite loss, reported as SolverError
    with np.errstate(over="ignore", invalid="ignore"):
        log(0)
        for epoch in range(1, config.epochs + 1):
            if raw is None:
                value, grad = merged.value_and_grad(params)
                step(value, grad, epoch)
            else:
                perm = rng.permutation(raw.n_rows)
                for start in range(0, raw.n_rows, config.batch_size):
                    value, grad = raw.value_and_grad(params, perm[start:start + config.batch_size])
                    step(value, grad, epoch)
            if epoch % config.log_every == 0 or epoch == config.epochs:
                log(epoch)
    return history


def neurise_fit(u: int, samples: SampleSet, spec: MlpSpec, config: TrainConfig = TrainConfig()):
    """Train the conditional net of variable ``u``; returns (model, history).

    All randomness (initialization, validation split, shuffles) comes from
    ``config.seed + u``.
    """
    q = samples.q
    flavor = BINARY_NET if (q == 2 and spec.output_dim == 1) else GENERAL_NET
    want = conditional_net_spec(samples.p, q, spec.depth, spec.width, flavor)
    if (spec.input_dim, spec.output_dim) != (want.input_dim, want.output_dim):
        raise InvalidInputError(f"net spec {spec} does not fit p={samples.p}, q={q}; expected {want}")
    rng = np.random.default_rng(config.seed + u)
    net = init_mlp(spec, rng, zero_input=config.zero_input_init)
    train_rows, val_rows = split_validation(np.asarray(samples.data), config.validation_fraction, rng)

    def make_objective(configs, weights):
        return NeurisoObjective(u, q, spec, configs, weights)

    history = run_training(net.params, make_objective, train_rows, val_rows, config, rng,
                           l1_slice=net.input_weight_slice())
    return ConditionalModel(u, samples.p, samples.alphabet, flavor, net=net), history


def neurise_fit_all(samples: SampleSet, spec: MlpSpec, config: TrainConfig = TrainConfig(), threads: int = 1,
                    centers=None):
    """Fit every variable; results are independent of ``threads``."""
    centers = list(range(samples.p)) if centers is None else list(centers)
    if threads <= 1:
        results = [neurise_fit(u, samples, spec, config) for u in centers]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda u: neurise_fit(u, samples, spec, config), centers))
    return [r[0] for r in results], [r[1] for r in results]
