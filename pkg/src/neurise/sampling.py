"""Exact enumeration sampling and Gibbs sampling.

Configurations are indexed in mixed radix with site 0 as the most
significant digit: ``index = sum_i sigma_i * q**(p - 1 - i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import logsumexp, softmax

from .errors import CapacityError, ContractError, InvalidInputError
from .model import Alphabet, EnergyModel, SampleSet, as_alphabet, check_configs

DEFAULT_MAX_BITS = 24
_CHUNK = 1 << 16


def check_capacity(p: int, q: int, max_bits: float = DEFAULT_MAX_BITS) -> None:
    if p * math.log2(q) > max_bits + 1e-9:
        raise CapacityError(f"{q}^{p} states exceed the enumeration cap of 2^{max_bits}")


def encode(configs, q: int):
    configs = np.asarray(configs, dtype=np.int64)
    p = configs.shape[-1]
    weights = q ** np.arange(p - 1, -1, -1, dtype=np.int64)
    return configs @ weights


def decode(indices, p: int, q: int):
    indices = np.asarray(indices, dtype=np.int64)
    powers = q ** np.arange(p - 1, -1, -1, dtype=np.int64)
    return ((indices[..., None] // powers) % q).astype(np.int8)


def all_configs(p: int, q: int, max_bits: float = DEFAULT_MAX_BITS):
    check_capacity(p, q, max_bits)
    return decode(np.arange(q**p), p, q)


def _energy_fn(energy):
    if isinstance(energy, EnergyModel):
        return energy.energy
    if hasattr(energy, "energy"):
        return energy.energy
    return energy


@dataclass(frozen=True)
class ExactDistribution:
    p: int
    alphabet: Alphabet
    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", as_alphabet(self.alphabet))
        probs = np.asarray(self.probabilities, dtype=np.float64)
        if probs.shape != (self.alphabet.q**self.p,):
            raise InvalidInputError(f"need {self.alphabet.q**self.p} probabilities, got {probs.shape}")
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)

    @property
    def q(self):
        return self.alphabet.q

    def configs(self):
        return decode(np.arange(self.probabilities.size), self.p, self.q)

    def expectation(self, values):
        return float(np.dot(self.probabilities, values))


def exact_distribution(energy, p: int, alphabet, max_bits: float = DEFAULT_MAX_BITS) -> ExactDistribution:
    """Enumerate ``mu(sigma) ~ exp(H(sigma))`` over all ``q**p`` states.

    ``energy`` is an ``EnergyModel`` or any callable mapping an (m, p) array
    of symbols to m energies.
    """
    alphabet = as_alphabet(alphabet)
    check_capacity(p, alphabet.q, max_bits)
    fn = _energy_fn(energy)
    size = alphabet.q**p
    logits = np.empty(size)
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(size, start + _CHUNK))
        logits[idx] = np.asarray(fn(decode(idx, p, alphabet.q)), dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(logits)):
        raise ContractError("energy function returned non-finite values")
    probs = np.exp(logits - logsumexp(logits))
    return ExactDistribution(p, alphabet, probs / probs.sum())


def exact_sample(dist: ExactDistribution, n: int, seed: int = 0) -> SampleSet:
    """``n`` i.i.d. draws by inverse CDF on the cumulative probability vector."""
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(dist.probabilities)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(int(n)), side="right")
    idx = np.minimum(idx, cdf.size - 1)
    return SampleSet(dist.p, dist.alphabet, decode(idx, dist.p, dist.q))


def true_conditional(model: EnergyModel, u: int, configs):
    """``mu(sigma_u = s | rest)`` for each row; shape (m, q) (or (q,) for one row).

    The value at position ``u`` of each configuration is ignored.
    """
    single = np.ndim(configs) == 1
    configs = check_configs(configs, model.p, model.q).astype(np.int64)
    partial = EnergyModel(model.p, model.alphabet, tuple(model.partial_terms(u)))
    logits = np.empty((configs.shape[0], model.q))
    work = configs.copy()
    for s in range(model.q):
        work[:, u] = s
        logits[:, s] = partial.energy(work)
    probs = softmax(logits, axis=1)
    return probs[0] if single else probs


def conditional_from_distribution(dist: ExactDistribution, u: int):
    """Conditionals of ``u`` for every state, from the enumerated joint; shape (q**p, q)."""
    q, p = dist.q, dist.p
    table = dist.probabilities.reshape((q,) * p)
    table = np.moveaxis(table, u, -1)
    cond = table / table.sum(axis=-1, keepdims=True)
    cond = np.moveaxis(cond[..., None, :] * np.ones((q, 1)), -2, u)
    return cond.reshape(q**p, q)


@dataclass(frozen=True)
class GibbsConfig:
    """Chain settings; ``None`` burn-in/thinning resolve to 10*p and p sweeps.

    ``n_chains`` chains advance in lockstep (vectorized) and retained rows are
    interleaved round by round.
    """

    burn_in: int | None = None
    thinning: int | None = None
    n_chains: int = 1
    seed: int = 0

    def resolved(self, p: int):
        burn_in = 10 * p if self.burn_in is None else self.burn_in
        thinning = p if self.thinning is None else self.thinning
        if burn_in < 0 or thinning < 1 or self.n_chains < 1:
            raise InvalidInputError("need burn_in >= 0, thinning >= 1, n_chains >= 1")
        return burn_in, thinning


ConditionalProvider = Callable[[int, np.ndarray], np.ndarray]


def _draw(probs, rng):
    cdf = np.cumsum(probs, axis=1)
    r = rng.random(probs.shape[0])[:, None]
    return np.minimum((cdf <= r * cdf[:, -1:]).sum(axis=1), probs.shape[1] - 1)


def gibbs_sample(provider: ConditionalProvider, p: int, alphabet, n: int,
                 config: GibbsConfig = GibbsConfig()) -> SampleSet:
    """Systematic-scan Gibbs sampling.

    ``provider(u, configs)`` returns an (m, q) array of conditionals of site
    ``u`` for each of the m current chain states.
    """
    q = as_alphabet(alphabet).q
    burn_in, thinning = config.resolved(p)
    rng = np.random.default_rng(config.seed)
    m = config.n_chains
    state = rng.integers(0, q, size=(m, p)).astype(np.int8)

    def sweep():
        for u in range(p):
            probs = np.asarray(provider(u, state), dtype=np.float64).reshape(m, q)
            if (not np.all(np.isfinite(probs)) or np.any(probs <= 0.0)
                    or np.max(np.abs(probs.sum(axis=1) - 1.0)) > 1e-8):
                raise ContractError(f"provider returned an invalid distribution for site {u}")
            state[:, u] = _draw(probs, rng)

    for _ in range(burn_in):
        sweep()
    rows = []
    collected = 0
    while collected < n:
        for _ in range(thinning):
            sweep()
        rows.append(state.copy())
        collected += m
    return SampleSet(p, Alphabet(q), np.concatenate(rows)[:n])


def model_provider(model: EnergyModel) -> ConditionalProvider:
    """Gibbs provider using the exact conditionals of an explicit model."""
    return lambda u, configs: true_conditional(model, u, configs)
