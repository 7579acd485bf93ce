"""Command-line entry point: ``bichroma {simulate,map,surface,boundaries,classify}``."""
from __future__ import annotations

import argparse
import json
import sys

from .errors import BichromaError, ValidationError
from .scan import (PRESETS, ScanConfig, run_boundary_overlays, run_classification,
                   run_simulation, run_surface_dump, run_transfer_map, write_map_csv)


def build_parser():
    p = argparse.ArgumentParser(prog="bichroma",
                                description="Bichromatic adiabatic transfer in a spin ladder.")
    sub = p.add_subparsers(dest="mode", required=True)
    for mode in ("simulate", "map", "surface", "boundaries", "classify"):
        s = sub.add_parser(mode)
        s.add_argument("--config", help="JSON file with ScanConfig fields")
        s.add_argument("--out", help="output path (stdout for JSON reports when omitted)")
        s.add_argument("--workers", type=int)
        s.add_argument("--sequence", type=int, choices=(1, 2))
        s.add_argument("--n-modes", type=int, dest="n_modes")
        s.add_argument("--delta1", type=float, help="Delta1 / delta")
        s.add_argument("--delta2", type=float, help="Delta2 / delta (defaults to Delta1)")
        s.add_argument("--omega0", type=float, help="peak Rabi frequency / delta")
        s.add_argument("--beta-z", type=float, dest="beta_z", help="also run the lab-frame model")
        s.add_argument("--preset", choices=sorted(PRESETS), help="named map window")
    return p


def config_from_args(args):
    """Merge the config file (if any) with command-line overrides."""
    data = {}
    if args.config:
        data = ScanConfig.from_file(args.config).to_dict()
    if args.preset:
        data.update(PRESETS[args.preset])
    data["mode"] = args.mode
    for key in ("workers", "sequence", "n_modes", "delta1", "delta2", "omega0", "beta_z"):
        v = getattr(args, key)
        if v is not None:
            data[key] = v
    if args.out:
        data["output"] = args.out
    return ScanConfig.from_dict(data)


def _emit(report, cfg):
    if not cfg.output:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.mode == "map":
            tmap = run_transfer_map(cfg)
            if not cfg.output:
                raise ValidationError("map mode needs --out")
            write_map_csv(cfg.output, tmap)
        elif cfg.mode == "surface":
            if not cfg.output:
                raise ValidationError("surface mode needs --out")
            run_surface_dump(cfg)
        elif cfg.mode == "boundaries":
            if not cfg.output:
                raise ValidationError("boundaries mode needs --out")
            run_boundary_overlays(cfg)
        elif cfg.mode == "simulate":
            _emit(run_simulation(cfg), cfg)
        else:
            _emit(run_classification(cfg), cfg)
    except ValidationError as exc:
        json.dump({"error": "ValidationError", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except BichromaError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
