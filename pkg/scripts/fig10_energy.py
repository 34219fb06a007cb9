"""Full-energy learning: gauge-aligned energy gap versus sample size on the one-d chain model."""

import sys

from _common import config_from, out_dir, parser_for, save_config
from neurise.experiments import EnergyTrend, energy_trend
from neurise.metrics import write_metrics_csv


def main(argv=None):
    args = parser_for(EnergyTrend, __doc__).parse_args(argv)
    cfg = config_from(args, EnergyTrend)
    out = out_dir(args)
    save_config(out, "fig10", cfg)
    res = energy_trend(cfg)
    rows = [(k, n, g[k], cfg.sample_seed) for n, g in res["gaps"].items() for k in ("mean_gap", "max_gap")]
    write_metrics_csv(rows, out / "energy.csv")
    for n, g in res["gaps"].items():
        print(n, round(g["mean_gap"], 4), round(g["max_gap"], 4))


if __name__ == "__main__":
    sys.exit(main())
