"""Shared argument handling for the experiment scripts."""

import argparse
import dataclasses
import json
from pathlib import Path


def parser_for(config_cls, description):
    """Parser with one ``--field`` flag per dataclass field plus ``--out``."""
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--out", default="results", help="output directory")
    for f in dataclasses.fields(config_cls):
        default = f.default if f.default is not dataclasses.MISSING else None
        if isinstance(default, tuple):
            ap.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None,
                            help=f"comma-separated (default {','.join(map(str, default))})")
        else:
            ap.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None, type=type(default),
                            help=f"default {default}")
    return ap


def config_from(args, config_cls):
    kw = {}
    for f in dataclasses.fields(config_cls):
        value = getattr(args, f.name)
        if value is None:
            continue
        if isinstance(f.default, tuple):
            cast = type(f.default[0]) if f.default else float
            value = tuple(cast(float(x)) if cast is int else cast(x) for x in value.split(","))
        kw[f.name] = value
    return config_cls(**kw)


def out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def save_config(out, name, cfg):
    (out / f"{name}_config.json").write_text(json.dumps(dataclasses.asdict(cfg), indent=1) + "\n")
