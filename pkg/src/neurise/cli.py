"""Command-line pipeline: ``generate``, ``sample``, ``fit``, ``eval`` and ``expand``.

Every command reads an optional JSON config (``--config``), overlays the
flags given on the command line, and writes its outputs plus a
``manifest.json`` with the fully resolved config into ``--out``.  A manifest
is itself a valid ``--config``, so any run can be repeated from it.

Seeds: ``generate`` draws the model from ``seed`` and the samples from
``seed + 1``; every other command uses ``seed`` directly (per-variable fits
use ``seed + u``).  In ``eval --metric tvd`` the learned chains use ``seed``
and the two true sample sets ``seed + 1`` and ``seed + 2``.

Exit codes: 0 success, 2 configuration or input error, 3 capacity error,
4 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .conditional import (ConditionalModel, TrainConfig, conditional_net_spec, conditional_provider, neurise_fit,
                          read_conditional, write_conditional)
from .energy import energy_compare, energy_fit, energy_net_spec, energy_provider, read_energy_net, \
    write_energy_net
from .errors import CapacityError, ContractError, InvalidInputError, NeuriseError, SolverError
from .grise import Constrained, Penalized, SolverSettings, default_penalty, grise_fit_all, read_solution, \
    write_solution
from .metrics import (avg_conditional_error, energy_spectrum, leading_coefficients, mean_leading_coefficients,
                      partial_energy_spectrum, tvd_empirical, write_metrics_csv, write_spectrum_csv)
from .model import (EnergyModel, gen_er_pairwise, gen_hypergraph_model, gen_one_d_model,
                    gen_random_hypergraph, random_one_d_theta, read_model, read_samples, write_model, write_samples)
from .sampling import (DEFAULT_MAX_BITS, GibbsConfig, check_capacity, exact_distribution, exact_sample, gibbs_sample,
                       model_provider)
from .structure import (STDDEV_OUTLIER, input_weight_norms, ranking_auc, read_structure, reconstruct_graph,
                        select_threshold, structure_metrics, write_norm_histogram, write_structure)

EXIT_OK, EXIT_CONFIG, EXIT_CAPACITY, EXIT_SOLVER = 0, 2, 3, 4

GENERATORS = ("one-d", "er", "hypergraph", "random-hypergraph")
METHODS = ("grise", "neurise", "structure", "energy")
METRICS = ("conditional-error", "tvd", "spectrum", "structure", "energy-gap")

_SAMPLER = {"n": 10_000, "sampler": "exact", "burn_in": None, "thinning": None, "n_chains": 1}
_TRAIN = {"depth": 2, "width": 10, "epochs": 200, "batch_size": 256, "optimizer": "adam", "lr": 1e-3,
          "validation_fraction": 0.0, "log_every": 1}

DEFAULTS = {
    "generate": {"generator": "one-d", "p": 10, "order": 2, "theta": None, "theta_interval": [-0.3, 0.3],
                 "edge_probability": None, "mean_degree": None, "interval": [-1.0, 1.0], "random_sign": False,
                 "high_order_strength": 0.5, **_SAMPLER},
    "sample": {"model": None, "learned": None, **_SAMPLER},
    "fit": {"samples": None, "method": "neurise", "order": 2, "lambda": "auto", "gamma": None, "tol": 1e-7,
            "max_iter": 50_000, "l1_input": "auto", "zero_input_init": None, "threshold_method": STDDEV_OUTLIER,
            "fraction": 0.5, "tau": None, "c": 1.0, **_TRAIN},
    "eval": {"metric": "conditional-error", "truth": None, "learned": None, "n_draw": 100_000, "n_chains": None,
             "burn_in": None, "thinning": None, "max_order": 6, "n": None},
    "expand": {"model": None, "learned": None, "center": 0, "atol": 0.0, "max_order": None},
}
for _d in DEFAULTS.values():
    _d.update(seed=0, out=None, threads=None)

REQUIRED = {"generate": ("out",), "sample": ("out", "n"), "fit": ("samples", "out"),
            "eval": ("truth", "learned", "out"), "expand": ("out",)}


class ConfigError(InvalidInputError):
    pass


# ---------------------------------------------------------------------------
# argument parsing


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _auto_float(text):
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


def _batch(text):
    if text in ("full", "none", "None"):
        return None
    return int(text)


def _bool(text):
    if text.lower() in ("1", "true", "yes"):
        return True
    if text.lower() in ("0", "false", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _add(parser, name, **kw):
    parser.add_argument("--" + name.replace("_", "-"), dest=name, default=argparse.SUPPRESS, **kw)


def _common(parser):
    _add(parser, "config", help="JSON config or manifest; flags override its values")
    _add(parser, "out", help="output directory")
    _add(parser, "seed", type=int, help="root seed")
    _add(parser, "threads", type=int, help="worker threads for per-variable fits (default NEURISE_THREADS or 1)")


def _sampler_flags(parser):
    _add(parser, "n", type=int, help="number of samples")
    _add(parser, "sampler", choices=("exact", "gibbs"))
    _add(parser, "burn_in", type=int)
    _add(parser, "thinning", type=int)
    _add(parser, "n_chains", type=int)


def build_parser():
    parser = argparse.ArgumentParser(prog="neurise", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"neurise {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a model and samples drawn from it")
    _common(g)
    _add(g, "generator", choices=GENERATORS)
    _add(g, "p", type=int)
    _add(g, "order", type=int, help="interaction order L (one-d, random-hypergraph)")
    _add(g, "theta", type=_floats, help="one-d strengths per order, comma-separated")
    _add(g, "theta_interval", type=_floats, help="interval for random one-d strengths")
    _add(g, "edge_probability", type=float)
    _add(g, "mean_degree", type=float)
    _add(g, "interval", type=_floats, help="strength interval a,b")
    _add(g, "random_sign", type=_bool)
    _add(g, "high_order_strength", type=float)
    _sampler_flags(g)

    s = sub.add_parser("sample", help="draw samples from a model file or learned conditionals")
    _common(s)
    _add(s, "model")
    _add(s, "learned", help="fit output directory (conditionals or energy net)")
    _sampler_flags(s)

    f = sub.add_parser("fit", help="fit GRISE, NeurISE, structure or a full-energy net")
    _common(f)
    _add(f, "samples")
    _add(f, "method", choices=METHODS)
    _add(f, "order", type=int, help="GRISE interaction order L")
    _add(f, "lambda", type=_auto_float, help="GRISE l1 penalty or 'auto'")
    _add(f, "gamma", type=float, help="GRISE l1-ball radius (constrained mode)")
    _add(f, "tol", type=float)
    _add(f, "max_iter", type=int)
    _add(f, "depth", type=int)
    _add(f, "width", type=int)
    _add(f, "epochs", type=int)
    _add(f, "batch_size", type=_batch, help="minibatch size or 'full'")
    _add(f, "optimizer", choices=("adam", "sgd"))
    _add(f, "lr", type=float)
    _add(f, "validation_fraction", type=float)
    _add(f, "log_every", type=int)
    _add(f, "l1_input", type=_auto_float, help="input-layer l1 penalty or 'auto'")
    _add(f, "zero_input_init", type=_bool)
    _add(f, "threshold_method", choices=("manual", "rule-of-thumb", STDDEV_OUTLIER))
    _add(f, "fraction", type=float)
    _add(f, "tau", type=float)
    _add(f, "c", type=float)

    e = sub.add_parser("eval", help="compare learned artifacts with the true model")
    _common(e)
    _add(e, "metric", choices=METRICS)
    _add(e, "truth", help="true model JSON")
    _add(e, "learned", help="fit output directory")
    _add(e, "n_draw", type=int)
    _add(e, "n_chains", type=int)
    _add(e, "burn_in", type=int)
    _add(e, "thinning", type=int)
    _add(e, "max_order", type=int)
    _add(e, "n", type=int, help="sample size recorded in the metric rows")

    x = sub.add_parser("expand", help="Fourier spectrum of a model, energy net or learned conditional")
    _common(x)
    _add(x, "model")
    _add(x, "learned")
    _add(x, "center", type=int)
    _add(x, "atol", type=float)
    _add(x, "max_order", type=int)
    return parser


def resolve_config(command: str, flags: dict) -> dict:
    """Defaults, then the config file, then flags."""
    cfg = dict(DEFAULTS[command])
    path = flags.pop("config", None)
    if path is not None:
        try:
            loaded = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if isinstance(loaded, dict) and "config" in loaded:
            if loaded.get("command", command) != command:
                raise ConfigError(f"config {path} is for command {loaded['command']!r}, not {command!r}")
            loaded = loaded["config"]
        if not isinstance(loaded, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        unknown = sorted(set(loaded) - set(cfg))
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {', '.join(unknown)}")
        cfg.update(loaded)
    cfg.update(flags)
    missing = [k for k in REQUIRED[command] if cfg.get(k) is None]
    if missing:
        raise ConfigError(f"{command} needs: {', '.join('--' + k.replace('_', '-') for k in missing)}")
    if cfg["threads"] is None:
        env = os.environ.get("NEURISE_THREADS")
        try:
            cfg["threads"] = int(env) if env else 1
        except ValueError:
            raise ConfigError(f"NEURISE_THREADS must be an integer, got {env!r}") from None
    if cfg["threads"] < 1:
        raise ConfigError("threads must be >= 1")
    return cfg


# ---------------------------------------------------------------------------
# helpers


class Run:
    """Output directory plus manifest bookkeeping."""

    def __init__(self, command, cfg):
        self.command = command
        self.cfg = cfg
        self.out = Path(cfg["out"])
        self.out.mkdir(parents=True, exist_ok=True)
        self.outputs = []
        self.info = {}

    def path(self, name):
        self.outputs.append(name)
        return self.out / name

    def finish(self, status="ok", error=None, **extra):
        manifest = {"command": self.command, "version": __version__, "config": self.cfg, "status": status,
                    "outputs": self.outputs, **self.info, **extra}
        if error is not None:
            manifest["error"] = error
        (self.out / "manifest.json").write_text(json.dumps(manifest, indent=1, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x)}")


def _gibbs(cfg, seed, n_chains=None):
    return GibbsConfig(burn_in=cfg["burn_in"], thinning=cfg["thinning"],
                       n_chains=n_chains or cfg["n_chains"] or 1, seed=seed)


def _draw(target, n, cfg, seed, sampler=None, n_chains=None):
    """Samples from an EnergyModel (exact or Gibbs) or from a (provider, p, q) triple (Gibbs)."""
    sampler = sampler or cfg["sampler"]
    if isinstance(target, EnergyModel):
        if sampler == "exact":
            return exact_sample(exact_distribution(target, target.p, target.alphabet), n, seed=seed)
        return gibbs_sample(model_provider(target), target.p, target.alphabet, n, _gibbs(cfg, seed, n_chains))
    provider, p, q = target
    return gibbs_sample(provider, p, q, n, _gibbs(cfg, seed, n_chains))


def load_learned(path):
    """A fit directory (or single file) as ``("energy", EnergyNet)`` or ``("conditionals", [models])``."""
    path = Path(path)
    if path.is_file():
        d = json.loads(path.read_text())
        if "flavor" in d:
            return "conditionals", [read_conditional(path)]
        if "basis" in d:
            return "conditionals", [ConditionalModel.from_grise(read_solution(path))]
        return "energy", read_energy_net(path)
    if not path.is_dir():
        raise ConfigError(f"no learned artifacts at {path}")
    if (path / "energy_net.json").exists():
        return "energy", read_energy_net(path / "energy_net.json")
    models = [read_conditional(f) for f in sorted(path.glob("conditional_*.json"))]
    models += [ConditionalModel.from_grise(read_solution(f)) for f in sorted(path.glob("grise_*.json"))]
    if not models:
        raise ConfigError(f"no conditional models in {path}")
    return "conditionals", sorted(models, key=lambda m: m.u)


def _provider_of(kind, learned):
    if kind == "energy":
        return energy_provider(learned), learned.p, 2
    models = learned
    if sorted(m.u for m in models) != list(range(models[0].p)):
        raise InvalidInputError("learned conditionals do not cover every variable")
    return conditional_provider(models), models[0].p, models[0].q


def _write_history(path, history):
    keys = ["epoch", "loss", "penalty"] + (["val_loss"] if history and "val_loss" in history[0] else [])
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(keys)
        for rec in history:
            w.writerow([rec[k] if k == "epoch" else repr(float(rec[k])) for k in keys])


def _train_config(cfg, n, p, structure):
    l1 = cfg["l1_input"]
    if l1 == "auto":
        l1 = math.sqrt(math.log(p) / n) if structure else 0.0
    zero = cfg["zero_input_init"]
    if zero is None:
        zero = structure
    return TrainConfig(epochs=cfg["epochs"], batch_size=cfg["batch_size"], optimizer=cfg["optimizer"], lr=cfg["lr"],
                       seed=cfg["seed"], l1_input=float(l1), zero_input_init=bool(zero),
                       validation_fraction=cfg["validation_fraction"], log_every=cfg["log_every"])


# ---------------------------------------------------------------------------
# commands


def cmd_generate(cfg):
    run = Run("generate", cfg)
    gen, p, seed = cfg["generator"], cfg["p"], cfg["seed"]
    if gen == "one-d":
        theta = cfg["theta"]
        if theta is None:
            theta = random_one_d_theta(cfg["order"], seed, cfg["theta_interval"]).tolist()
            cfg["theta"] = theta
        model = gen_one_d_model(p, len(theta), theta)
    elif gen == "er":
        if (cfg["edge_probability"] is None) == (cfg["mean_degree"] is None):
            raise ConfigError("er needs exactly one of --edge-probability / --mean-degree")
        model = gen_er_pairwise(p, cfg["edge_probability"], cfg["interval"], seed, cfg["mean_degree"],
                                cfg["random_sign"])
    elif gen == "hypergraph":
        model = gen_hypergraph_model(p, cfg["interval"], seed, high_order_strength=cfg["high_order_strength"])
    elif gen == "random-hypergraph":
        if cfg["mean_degree"] is None:
            raise ConfigError("random-hypergraph needs --mean-degree")
        model = gen_random_hypergraph(p, cfg["order"], cfg["mean_degree"], cfg["interval"], seed,
                                      cfg["random_sign"])
    else:
        raise ConfigError(f"unknown generator {gen!r}; choose one of {', '.join(GENERATORS)}")
    if cfg["sampler"] == "exact":
        check_capacity(model.p, model.q, DEFAULT_MAX_BITS)
    write_model(model, run.path("model.json"))
    write_samples(_draw(model, cfg["n"], cfg, seed + 1), run.path("samples.txt"))
    run.finish(n_terms=len(model.terms))
    return EXIT_OK


def cmd_sample(cfg):
    if (cfg["model"] is None) == (cfg["learned"] is None):
        raise ConfigError("sample needs exactly one of --model / --learned")
    run = Run("sample", cfg)
    if cfg["model"] is not None:
        target = read_model(cfg["model"])
    else:
        if cfg["sampler"] == "exact":
            raise ConfigError("learned models are sampled with --sampler gibbs")
        target = _provider_of(*load_learned(cfg["learned"]))
    write_samples(_draw(target, cfg["n"], cfg, cfg["seed"]), run.path("samples.txt"))
    run.finish()
    return EXIT_OK


def _fit_neural(run, samples, cfg, structure):
    spec = conditional_net_spec(samples.p, samples.q, cfg["depth"], cfg["width"])
    tc = _train_config(cfg, samples.n, samples.p, structure)
    run.info["train_config"] = tc.to_dict()
    run.info["net_params"] = spec.n_params

    def job(u):
        try:
            return u, neurise_fit(u, samples, spec, tc), None
        except SolverError as exc:
            return u, None, str(exc)

    if cfg["threads"] > 1:
        with ThreadPoolExecutor(max_workers=cfg["threads"]) as pool:
            results = list(pool.map(job, range(samples.p)))
    else:
        results = [job(u) for u in range(samples.p)]
    models, failed = [], {}
    for u, res, err in results:
        if err is not None:
            failed[u] = err
            continue
        model, history = res
        write_conditional(model, run.path(f"conditional_{u}.json"))
        _write_history(run.path(f"loss_{u}.csv"), history)
        models.append(model)
    if failed:
        run.finish(status="failed", error="; ".join(f"u={u}: {m}" for u, m in failed.items()), partial=True,
                   failed_centers=sorted(failed))
        raise SolverError(f"training failed for centers {sorted(failed)}")
    return models


def cmd_fit(cfg):
    method = cfg["method"]
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}")
    samples = read_samples(cfg["samples"])
    run = Run("fit", cfg)
    run.info["n_samples"] = samples.n
    if method == "grise":
        if cfg["gamma"] is not None:
            mode = Constrained(cfg["gamma"])
        else:
            lam = default_penalty(samples.p, samples.n) if cfg["lambda"] == "auto" else float(cfg["lambda"])
            mode = Penalized(lam)
        sols = grise_fit_all(samples, cfg["order"], mode, SolverSettings(tol=cfg["tol"], max_iter=cfg["max_iter"]))
        with run.path("grise_summary.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["u", "objective", "iterations", "converged"])
            for sol in sols:
                write_solution(sol, run.path(f"grise_{sol.u}.json"))
                w.writerow([sol.u, repr(sol.objective), sol.iterations, sol.converged])
        run.info["converged"] = all(s.converged for s in sols)
    elif method in ("neurise", "structure"):
        models = _fit_neural(run, samples, cfg, method == "structure")
        if method == "structure":
            norms = input_weight_norms(models)
            tm = cfg["threshold_method"]
            tau = select_threshold(norms, tm, tau=cfg["tau"], c=cfg["c"], p=samples.p, n=samples.n,
                                   fraction=cfg["fraction"])
            result = reconstruct_graph(norms, tau, tm)
            write_structure(result, run.path("structure.json"))
            with run.path("norms.csv").open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["u", "v", "norm"])
                for u in range(samples.p):
                    for v in range(samples.p):
                        if u != v:
                            w.writerow([u, v, repr(float(norms[u, v]))])
            write_norm_histogram(norms, run.path("norm_histogram.txt"))
            run.info["threshold"] = tau
    else:
        spec = energy_net_spec(samples.p, cfg["depth"], cfg["width"])
        tc = _train_config(cfg, samples.n, samples.p, False)
        run.info["train_config"] = tc.to_dict()
        net, history = energy_fit(samples, spec, tc)
        write_energy_net(net, run.path("energy_net.json"))
        _write_history(run.path("loss.csv"), history)
    run.finish()
    return EXIT_OK


def _sample_size(cfg):
    if cfg["n"] is not None:
        return cfg["n"]
    manifest = Path(cfg["learned"]) / "manifest.json"
    if manifest.exists():
        return json.loads(manifest.read_text()).get("n_samples", "")
    return ""


def cmd_eval(cfg):
    metric = cfg["metric"]
    if metric not in METRICS:
        raise ConfigError(f"unknown metric {metric!r}")
    truth = read_model(cfg["truth"])
    run = Run("eval", cfg)
    seed, n = cfg["seed"], _sample_size(cfg)
    rows = []
    if metric == "structure":
        learned = Path(cfg["learned"])
        result = read_structure(learned / "structure.json" if learned.is_dir() else learned)
        m = structure_metrics(result, truth)
        rows += [(k, n, m[k], seed) for k in ("edge_accuracy", "non_edge_accuracy", "total_accuracy")]
        rows.append(("ranking_auc", n, ranking_auc(result.norms, truth), seed))
        run.info["false_positives"] = m["false_positives"]
        run.info["false_negatives"] = m["false_negatives"]
    else:
        kind, learned = load_learned(cfg["learned"])
        p = learned.p if kind == "energy" else learned[0].p
        if p != truth.p:
            raise InvalidInputError(f"learned models have p={p}, truth has p={truth.p}")
        if metric == "conditional-error":
            provider, p, q = _provider_of(kind, learned)
            rows.append(("avg_conditional_error", n, avg_conditional_error(provider, truth, p, q), seed))
        elif metric == "tvd":
            nd = cfg["n_draw"]
            chains = cfg["n_chains"] or nd
            sampler = "exact" if truth.p * math.log2(truth.q) <= DEFAULT_MAX_BITS else "gibbs"
            a = _draw(truth, nd, cfg, seed + 1, sampler, chains)
            b = _draw(truth, nd, cfg, seed + 2, sampler, chains)
            g = _draw(_provider_of(kind, learned), nd, cfg, seed, "gibbs", chains)
            rows.append(("tvd_learned_vs_true", nd, tvd_empirical(g, a), seed))
            rows.append(("tvd_true_vs_true", nd, tvd_empirical(a, b), seed))
        elif metric == "spectrum":
            if kind == "energy":
                lead = [v for _, v, _ in leading_coefficients(energy_spectrum(learned, p), cfg["max_order"])]
            else:
                lead = mean_leading_coefficients(learned, cfg["max_order"])
            rows += [(f"leading_order_{k + 1}", n, v, seed) for k, v in enumerate(lead)]
        else:
            if kind != "energy":
                raise ConfigError("energy-gap needs a fitted energy net")
            gaps = energy_compare(learned, truth)
            rows += [("mean_gap", n, gaps["mean_gap"], seed), ("max_gap", n, gaps["max_gap"], seed)]
    write_metrics_csv(rows, run.path("metrics.csv"))
    run.finish()
    return EXIT_OK


def cmd_expand(cfg):
    if (cfg["model"] is None) == (cfg["learned"] is None):
        raise ConfigError("expand needs exactly one of --model / --learned")
    run = Run("expand", cfg)
    if cfg["model"] is not None:
        model = read_model(cfg["model"])
        if model.q != 2:
            raise InvalidInputError("spectra need a binary alphabet")
        spectrum = energy_spectrum(model, model.p)
    else:
        kind, learned = load_learned(cfg["learned"])
        if kind == "energy":
            spectrum = energy_spectrum(learned, learned.p)
        else:
            by_u = {m.u: m for m in learned}
            if cfg["center"] not in by_u:
                raise ConfigError(f"no conditional for center {cfg['center']}")
            spectrum = partial_energy_spectrum(by_u[cfg["center"]])
    write_spectrum_csv(spectrum, run.path("spectrum.csv"), atol=cfg["atol"])
    max_order = cfg["max_order"] or spectrum.p
    run.info["leading"] = [{"order": o, "value": v, "subset": list(s)}
                           for o, v, s in leading_coefficients(spectrum, max_order)]
    run.finish()
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "sample": cmd_sample, "fit": cmd_fit, "eval": cmd_eval,
            "expand": cmd_expand}


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    try:
        cfg = resolve_config(command, args)
        return COMMANDS[command](cfg)
    except CapacityError as exc:
        code, msg = EXIT_CAPACITY, str(exc)
    except (SolverError, ContractError) as exc:
        code, msg = EXIT_SOLVER, str(exc)
    except (InvalidInputError, OSError, KeyError, TypeError) as exc:
        code, msg = EXIT_CONFIG, str(exc)
    except NeuriseError as exc:
        code, msg = EXIT_CONFIG, str(exc)
    print(f"neurise {command}: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
