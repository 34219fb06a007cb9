"""Learned-vs-true and true-vs-true TVD on the 15-site one-d chain model."""

import sys

from _common import config_from, out_dir, parser_for, save_config
from neurise.experiments import TvdExperiment, tvd_experiment
from neurise.metrics import write_metrics_csv


def main(argv=None):
    args = parser_for(TvdExperiment, __doc__).parse_args(argv)
    cfg = config_from(args, TvdExperiment)
    out = out_dir(args)
    save_config(out, "fig2", cfg)
    res = tvd_experiment(cfg)
    write_metrics_csv([("tvd_learned_vs_true", cfg.n, res["learned_vs_true"], cfg.gibbs_seed),
                       ("tvd_true_vs_true", cfg.n, res["baseline"], cfg.draw_seeds[0])], out / "tvd.csv")
    print(f"learned vs true {res['learned_vs_true']:.4f}, baseline {res['baseline']:.4f}")


if __name__ == "__main__":
    sys.exit(main())
