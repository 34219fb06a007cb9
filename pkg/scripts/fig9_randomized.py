"""Structure accuracy over randomized fourth-order models (reduced replication)."""

import sys

import numpy as np

from _common import config_from, out_dir, parser_for, save_config
from neurise.experiments import RandomizedAccuracy, randomized_accuracy
from neurise.metrics import write_metrics_csv


def main(argv=None):
    args = parser_for(RandomizedAccuracy, __doc__).parse_args(argv)
    cfg = config_from(args, RandomizedAccuracy)
    out = out_dir(args)
    save_config(out, "fig9", cfg)
    runs = randomized_accuracy(cfg)
    rows = [(k, cfg.n, r[k], r["seed"]) for r in runs for k in ("edge_accuracy", "non_edge_accuracy",
                                                                 "total_accuracy")]
    write_metrics_csv(rows, out / "randomized.csv")
    acc = np.array([r["total_accuracy"] for r in runs])
    print(f"total accuracy over {len(acc)} runs: mean {acc.mean():.4f}, min {acc.min():.4f}")


if __name__ == "__main__":
    sys.exit(main())
