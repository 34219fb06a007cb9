"""Experiment recipes shared by ``scripts/`` and the acceptance suite.

Each recipe takes a frozen dataclass config whose defaults are the
reference settings, builds the ground-truth model from fixed seeds, and
returns a plain dict of results.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .conditional import ConditionalModel, TrainConfig, conditional_net_spec, conditional_provider, neurise_fit_all
from .energy import energy_compare, energy_fit, energy_net_spec
from .grise import grise_fit_all
from .metrics import avg_conditional_error, leading_coefficients, partial_energy_spectrum, tvd_empirical
from .model import gen_er_pairwise, gen_hypergraph_model, gen_one_d_model, gen_random_hypergraph, random_one_d_theta
from .sampling import GibbsConfig, exact_distribution, exact_sample, gibbs_sample, model_provider
from .structure import (STDDEV_OUTLIER, input_weight_norms, ranking_auc, reconstruct_graph, select_threshold,
                        structure_fit, structure_metrics)

# one-d strengths are drawn from this interval; wider draws make the chain nearly frozen
ONE_D_INTERVAL = (-0.3, 0.3)


def one_d_truth(p: int, order: int = 6, seed: int = 0, interval=ONE_D_INTERVAL):
    theta = random_one_d_theta(order, seed, interval)
    return gen_one_d_model(p, order, theta), theta


def full_batch(epochs: int, lr: float, **kw) -> TrainConfig:
    return TrainConfig(epochs=epochs, batch_size=None, lr=lr, log_every=max(1, epochs // 20), **kw)


@dataclass(frozen=True)
class ConditionalTrend:
    p: int = 10
    order: int = 6
    theta_seed: int = 0
    sizes: tuple = (1_000, 100_000)
    depth: int = 2
    width: int = 10
    epochs: int = 3000
    lr: float = 1e-2
    grise_orders: tuple = (5,)
    sample_seed: int = 1
    train_seed: int = 0
    threads: int = 1


def conditional_trend(cfg: ConditionalTrend = ConditionalTrend()):
    """Average conditional error of NeurISE and GRISE at each sample size.

    Returns ``{"theta", "errors": {n: {"neurise": e, "grise5": e, ...}}, "models": {n: [...]}}``.
    """
    model, theta = one_d_truth(cfg.p, cfg.order, cfg.theta_seed)
    dist = exact_distribution(model, cfg.p, 2)
    spec = conditional_net_spec(cfg.p, 2, cfg.depth, cfg.width)
    out = {"theta": theta, "errors": {}, "models": {}, "seconds": {}}
    for n in cfg.sizes:
        samples = exact_sample(dist, n, seed=cfg.sample_seed)
        t = time.perf_counter()
        models, _ = neurise_fit_all(samples, spec, full_batch(cfg.epochs, cfg.lr, seed=cfg.train_seed),
                                    threads=cfg.threads)
        out["seconds"][n] = time.perf_counter() - t
        errs = {"neurise": avg_conditional_error(models, model)}
        for L in cfg.grise_orders:
            sols = grise_fit_all(samples, L)
            errs[f"grise{L}"] = avg_conditional_error([ConditionalModel.from_grise(s) for s in sols], model)
        out["errors"][n] = errs
        out["models"][n] = models
    return out


def leading_profile(models, max_order: int = 9):
    """Per net, the leading |coefficient| of each order 1..max_order; shape (len(models), max_order)."""
    return np.array([[v for _, v, _ in leading_coefficients(partial_energy_spectrum(m), max_order)]
                     for m in models])


@dataclass(frozen=True)
class TvdExperiment:
    p: int = 15
    order: int = 6
    theta_seed: int = 0
    n: int = 100_000
    depth: int = 2
    width: int = 12
    epochs: int = 1500
    lr: float = 1e-2
    sample_seed: int = 1
    gibbs_seed: int = 5
    draw_seeds: tuple = (11, 12)
    threads: int = 1


def tvd_experiment(cfg: TvdExperiment = TvdExperiment()):
    """Learned-vs-true and true-vs-true empirical TVD at draw size ``n``.

    Learned samples come from Gibbs chains on the trained conditionals, one
    retained state per chain after the default burn-in.
    """
    model, theta = one_d_truth(cfg.p, cfg.order, cfg.theta_seed)
    dist = exact_distribution(model, cfg.p, 2)
    samples = exact_sample(dist, cfg.n, seed=cfg.sample_seed)
    models, _ = neurise_fit_all(samples, conditional_net_spec(cfg.p, 2, cfg.depth, cfg.width),
                                full_batch(cfg.epochs, cfg.lr), threads=cfg.threads)
    learned = gibbs_sample(conditional_provider(models), cfg.p, 2, cfg.n,
                           GibbsConfig(n_chains=cfg.n, seed=cfg.gibbs_seed))
    a = exact_sample(dist, cfg.n, seed=cfg.draw_seeds[0])
    b = exact_sample(dist, cfg.n, seed=cfg.draw_seeds[1])
    return {"theta": theta, "learned_vs_true": tvd_empirical(learned, a), "baseline": tvd_empirical(a, b),
            "models": models}


@dataclass(frozen=True)
class StructureExperiment:
    p: int = 20
    mean_degree: float = 2.6
    interval: tuple = (0.3, 1.3)
    model_seed: int = 0
    n: int = 400_000
    depth: int = 2
    width: int = 10
    epochs: int = 300
    lr: float = 1e-2
    fraction: float = 0.5
    sample_seed: int = 1
    control: bool = True
    # "zero" keeps the zero input layer and only drops the penalty; "random" also uses the standard init
    control_init: str = "zero"
    threads: int = 1


def structure_experiment(cfg: StructureExperiment = StructureExperiment()):
    """Regularized structure fit plus an optional unregularized control.

    Returns accuracies, ranking AUCs, the norm matrices and the threshold.
    """
    if cfg.control_init not in ("zero", "random"):
        raise ValueError(f"control_init must be 'zero' or 'random', got {cfg.control_init!r}")
    truth = gen_er_pairwise(cfg.p, mean_degree=cfg.mean_degree, interval=cfg.interval, seed=cfg.model_seed)
    samples = exact_sample(exact_distribution(truth, cfg.p, 2), cfg.n, seed=cfg.sample_seed)
    spec = conditional_net_spec(cfg.p, 2, cfg.depth, cfg.width)
    lam = math.sqrt(math.log(cfg.p) / cfg.n)
    _, norms, _ = structure_fit(samples, spec, full_batch(cfg.epochs, cfg.lr, l1_input=lam), threads=cfg.threads)
    tau = select_threshold(norms, STDDEV_OUTLIER, fraction=cfg.fraction)
    result = reconstruct_graph(norms, tau, STDDEV_OUTLIER)
    out = {"truth": truth, "lambda": lam, "norms": norms, "threshold": tau, "result": result,
           "metrics": structure_metrics(result, truth), "auc": ranking_auc(norms, truth)}
    if cfg.control:
        models, _ = neurise_fit_all(samples, spec,
                                    full_batch(cfg.epochs, cfg.lr, zero_input_init=cfg.control_init == "zero"),
                                    threads=cfg.threads)
        control = input_weight_norms(models)
        out["control_norms"] = control
        out["control_auc"] = ranking_auc(control, truth)
    return out


@dataclass(frozen=True)
class HypergraphExperiment:
    p: int = 15
    interval: tuple = (0.3, 1.3)
    model_seed: int = 0
    n: int = 1_000_000
    depth: int = 2
    width: int = 15
    epochs: int = 1000
    lr: float = 3e-3
    # fixed on a held-out instance (model_seed=1, sample_seed=2); edges are a minority of the pooled norms
    fraction: float = -0.2
    sample_seed: int = 1
    zero_input_init: bool = True
    threads: int = 1


def hypergraph_experiment(cfg: HypergraphExperiment = HypergraphExperiment()):
    """Structure fit on the ring-plus-five-body model; compares neighbourhoods with the truth.

    ``neighborhoods_match`` compares the rows of the OR-rule graph with the true
    neighbourhoods; ``directed_match`` compares the one-sided sets read off
    each net separately.
    """
    truth = gen_hypergraph_model(cfg.p, cfg.interval, cfg.model_seed)
    samples = exact_sample(exact_distribution(truth, cfg.p, 2), cfg.n, seed=cfg.sample_seed)
    lam = math.sqrt(math.log(cfg.p) / cfg.n)
    _, norms, _ = structure_fit(samples, conditional_net_spec(cfg.p, 2, cfg.depth, cfg.width),
                                full_batch(cfg.epochs, cfg.lr, l1_input=lam), threads=cfg.threads,
                                zero_init=cfg.zero_input_init)
    tau = select_threshold(norms, STDDEV_OUTLIER, fraction=cfg.fraction)
    result = reconstruct_graph(norms, tau, STDDEV_OUTLIER)
    true_hoods = {u: set(truth.neighbors(u)) for u in range(cfg.p)}
    graph_hoods = {u: set(np.flatnonzero(result.adjacency[u]).tolist()) for u in range(cfg.p)}
    return {"truth": truth, "norms": norms, "threshold": tau, "result": result,
            "metrics": structure_metrics(result, truth), "auc": ranking_auc(norms, truth),
            "true_neighborhoods": true_hoods, "neighborhoods": graph_hoods,
            "neighborhoods_match": graph_hoods == true_hoods, "directed_match": result.neighborhoods == true_hoods}


@dataclass(frozen=True)
class EnergyTrend:
    p: int = 10
    order: int = 6
    theta_seed: int = 0
    sizes: tuple = (1_000, 100_000)
    depth: int = 2
    width: int = 20
    epochs: int = 2000
    lr: float = 3e-3
    sample_seed: int = 1
    train_seed: int = 0


def energy_trend(cfg: EnergyTrend = EnergyTrend()):
    """Gauge-aligned energy gap of a single full-energy net at each sample size."""
    model, theta = one_d_truth(cfg.p, cfg.order, cfg.theta_seed)
    dist = exact_distribution(model, cfg.p, 2)
    gaps = {}
    for n in cfg.sizes:
        samples = exact_sample(dist, n, seed=cfg.sample_seed)
        net, _ = energy_fit(samples, energy_net_spec(cfg.p, cfg.depth, cfg.width),
                            full_batch(cfg.epochs, cfg.lr, seed=cfg.train_seed))
        gaps[n] = energy_compare(net, model)
    return {"theta": theta, "gaps": gaps}


@dataclass(frozen=True)
class RandomizedAccuracy:
    p: int = 30
    order: int = 4
    mean_degree: float = 2.0
    interval: tuple = (0.3, 1.3)
    n: int = 1_000_000
    runs: int = 5
    depth: int = 2
    width: int = 10
    epochs: int = 300
    lr: float = 1e-2
    fraction: float = 0.5
    gibbs_chains: int = 10_000
    zero_input_init: bool = False
    threads: int = 1
    seeds: tuple = field(default=())


def randomized_accuracy(cfg: RandomizedAccuracy = RandomizedAccuracy()):
    """Structure accuracy over random higher-order models, sampled by Gibbs (too large to enumerate).

    The input layer keeps its random init by default; see ``structure_fit``.
    """
    seeds = cfg.seeds or tuple(range(cfg.runs))
    rows = []
    for seed in seeds:
        truth = gen_random_hypergraph(cfg.p, cfg.order, cfg.mean_degree, cfg.interval, seed=seed)
        samples = gibbs_sample(model_provider(truth), cfg.p, 2, cfg.n,
                               GibbsConfig(n_chains=cfg.gibbs_chains, seed=seed + 1))
        lam = math.sqrt(math.log(cfg.p) / cfg.n)
        _, norms, _ = structure_fit(samples, conditional_net_spec(cfg.p, 2, cfg.depth, cfg.width),
                                    full_batch(cfg.epochs, cfg.lr, l1_input=lam), threads=cfg.threads,
                                    zero_init=cfg.zero_input_init)
        tau = select_threshold(norms, STDDEV_OUTLIER, fraction=cfg.fraction)
        m = structure_metrics(reconstruct_graph(norms, tau, STDDEV_OUTLIER), truth)
        rows.append({"seed": seed, **{k: m[k] for k in ("edge_accuracy", "non_edge_accuracy", "total_accuracy")}})
    return rows


def config_dict(cfg) -> dict:
    return asdict(cfg)
