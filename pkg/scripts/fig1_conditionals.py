"""Conditional-error trend and coefficient spectra on the one-d chain model.

Writes ``conditionals.csv`` (metric, n, value, seed) and ``spectrum.csv``
with the leading coefficient of each order averaged over the nets.
"""

import sys

import numpy as np

from _common import config_from, out_dir, parser_for, save_config
from neurise.experiments import ConditionalTrend, conditional_trend, leading_profile
from neurise.metrics import write_metrics_csv


def main(argv=None):
    ap = parser_for(ConditionalTrend, __doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=9)
    args = ap.parse_args(argv)
    cfg = config_from(args, ConditionalTrend)
    out = out_dir(args)
    save_config(out, "fig1", cfg)
    res = conditional_trend(cfg)
    rows = [(f"avg_cond_err_{method}", n, err, cfg.sample_seed)
            for n, errs in res["errors"].items() for method, err in errs.items()]
    write_metrics_csv(rows, out / "conditionals.csv")
    n_max = max(cfg.sizes)
    profile = leading_profile(res["models"][n_max], args.max_order)
    rows = [(f"leading_order_{k + 1}", n_max, v, cfg.sample_seed) for k, v in enumerate(profile.mean(axis=0))]
    rows += [(f"abs_theta_{k + 1}", n_max, abs(t), cfg.theta_seed) for k, t in enumerate(res["theta"])]
    write_metrics_csv(rows, out / "spectrum.csv")
    for n, errs in res["errors"].items():
        print(n, {k: round(v, 4) for k, v in errs.items()})
    print("leading coefficients:", np.round(profile.mean(axis=0), 4))
    print("|theta|:", np.round(np.abs(res["theta"]), 4))


if __name__ == "__main__":
    sys.exit(main())
