"""Learning one network for the complete energy of a binary model.

The loss sums, over every site ``u`` and sample, ``exp((NN(flip_u s) - NN(s)) / 2)``.
It depends on energy differences only, so the learned net is defined up to
an additive constant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit

from .conditional import TrainConfig, run_training, split_validation
from .errors import InvalidInputError, ParseError
from .model import Alphabet, EnergyModel, SampleSet, check_configs
from .neural import Mlp, MlpSpec, init_mlp, mlp_backward, mlp_forward
from .sampling import DEFAULT_MAX_BITS, all_configs


def flip(configs, u: int, q: int = 2):
    """Negate the spin at ``u`` (symbols 0 <-> 1) in one configuration or a batch."""
    if q != 2:
        raise InvalidInputError("flips are only defined for binary alphabets")
    out = np.array(configs, copy=True)
    out[..., u] = 1 - out[..., u]
    return out


@dataclass
class EnergyNet:
    """Scalar net on the spins of all ``p`` sites."""

    net: Mlp
    p: int

    def __post_init__(self):
        if self.net.spec.input_dim != self.p or self.net.spec.output_dim != 1:
            raise InvalidInputError(f"energy net must map {self.p} spins to one output")

    @property
    def q(self):
        return 2

    @property
    def alphabet(self):
        return Alphabet(2)

    def energy(self, configs):
        configs = check_configs(configs, self.p, 2)
        return mlp_forward(self.net, 1.0 - 2.0 * configs)[:, 0]

    def __call__(self, configs):
        return self.energy(configs)

    def to_dict(self):
        d = self.net.to_dict()
        d.update(p=self.p, q=2)
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(Mlp.from_dict(d), int(d["p"]))
        except KeyError as exc:
            raise ParseError("missing required field", field=exc.args[0]) from None


def energy_net_spec(p: int, depth: int, width: int) -> MlpSpec:
    return MlpSpec(p, depth, width, 1)


def write_energy_net(net: EnergyNet, path):
    Path(path).write_text(json.dumps(net.to_dict()) + "\n")


def read_energy_net(path) -> EnergyNet:
    try:
        return EnergyNet.from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, path=path) from exc


class FlipObjective:
    """Full-energy loss over fixed weighted rows.

    Each row is evaluated together with its ``p`` single-site flips as one
    stacked forward pass of ``p + 1`` configurations.
    """

    def __init__(self, spec: MlpSpec, configs, weights):
        self.spec = spec
        spins = 1.0 - 2.0 * np.asarray(configs, dtype=np.float64)
        self.spins = spins
        self.weights = np.asarray(weights, dtype=np.float64)

    @property
    def n_rows(self):
        return self.spins.shape[0]

    def _stack(self, rows):
        s = self.spins if rows is None else self.spins[rows]
        w = self.weights if rows is None else np.full(s.shape[0], 1.0 / s.shape[0])
        m, p = s.shape
        flipped = np.repeat(s[:, None, :], p, axis=1)
        idx = np.arange(p)
        flipped[:, idx, idx] *= -1.0
        return np.concatenate([s, flipped.reshape(m * p, p)]), w, m, p

    def _terms(self, params, rows):
        net = Mlp(self.spec, params)
        x, w, m, p = self._stack(rows)
        out = mlp_forward(net, x)[:, 0]
        base, flips = out[:m], out[m:].reshape(m, p)
        e = np.exp((flips - base[:, None]) / 2.0) * w[:, None]
        return net, x, e, m, p

    def value(self, params, rows=None):
        return float(self._terms(params, rows)[2].sum())

    def value_and_grad(self, params, rows=None):
        net, x, e, m, p = self._terms(params, rows)
        ct = np.concatenate([-0.5 * e.sum(axis=1), 0.5 * e.reshape(-1)])[:, None]
        grad, _ = mlp_backward(net, x, ct)
        return float(e.sum()), grad


def _weighted(samples, weights=None):
    if isinstance(samples, SampleSet):
        if samples.q != 2:
            raise InvalidInputError("full-energy learning needs a binary alphabet")
        return samples.compressed()
    configs = np.asarray(samples)
    if weights is None:
        weights = np.full(configs.shape[0], 1.0)
    weights = np.asarray(weights, dtype=np.float64)
    return configs, weights / weights.sum()


def full_energy_loss(net: EnergyNet, samples, weights=None) -> float:
    configs, w = _weighted(samples, weights)
    configs = check_configs(configs, net.p, 2)
    return FlipObjective(net.net.spec, configs, w).value(net.net.params)


def full_energy_gradient(net: EnergyNet, samples, weights=None):
    configs, w = _weighted(samples, weights)
    configs = check_configs(configs, net.p, 2)
    return FlipObjective(net.net.spec, configs, w).value_and_grad(net.net.params)[1]


def induced_partial_energy(net: EnergyNet, u: int, configs):
    """``(NN(s) - NN(flip_u s)) / 2``: the part of the net's energy that depends on ``s_u``."""
    configs = check_configs(configs, net.p, 2)
    return 0.5 * (net.energy(configs) - net.energy(flip(configs, u)))


def site_losses(net: EnergyNet, samples, weights=None):
    """Per-site screening losses ``E[exp(-induced_partial_energy(u))]``; they sum to ``full_energy_loss``."""
    configs, w = _weighted(samples, weights)
    return np.array([float(np.dot(w, np.exp(-induced_partial_energy(net, u, configs)))) for u in range(net.p)])


def energy_provider(net: EnergyNet):
    """Gibbs provider for the distribution ``exp(NN) / Z`` of an energy net."""
    def provider(u, configs):
        h = induced_partial_energy(net, u, configs)
        up = expit(2.0 * h * (1.0 - 2.0 * np.asarray(configs)[:, u]))
        return np.stack([up, 1.0 - up], axis=1)
    return provider


def energy_fit(samples: SampleSet, spec: MlpSpec, config: TrainConfig = TrainConfig()):
    """Train an energy net on the full-energy loss; returns (EnergyNet, history)."""
    if samples.q != 2:
        raise InvalidInputError("full-energy learning needs a binary alphabet")
    if spec.input_dim != samples.p or spec.output_dim != 1:
        raise InvalidInputError(f"energy net spec must be {samples.p} -> 1, got {spec}")
    rng = np.random.default_rng(config.seed)
    net = init_mlp(spec, rng, zero_input=config.zero_input_init)
    train_rows, val_rows = split_validation(np.asarray(samples.data), config.validation_fraction, rng)
    history = run_training(net.params, lambda c, w: FlipObjective(spec, c, w), train_rows, val_rows, config, rng,
                           l1_slice=net.input_weight_slice())
    return EnergyNet(net, samples.p), history


def energy_compare(learned, truth: EnergyModel, max_bits: float = DEFAULT_MAX_BITS) -> dict:
    """Mean and max absolute energy gap after subtracting each function's mean over all states."""
    if truth.q != 2 or learned.p != truth.p:
        raise InvalidInputError("energy comparison needs binary models of equal size")
    configs = all_configs(truth.p, 2, max_bits)
    a = np.asarray(learned.energy(configs), dtype=np.float64)
    b = truth.energy(configs)
    gap = np.abs((a - a.mean()) - (b - b.mean()))
    return {"mean_gap": float(gap.mean()), "max_gap": float(gap.max())}
