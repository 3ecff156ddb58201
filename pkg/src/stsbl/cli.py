"""Command-line front end: gen-matrix, compress, recover, synth, bench.

Settings resolve in three layers: built-in defaults, then a JSON config file
given with --config, then explicit flags.  Every subcommand exits 0 on
success and nonzero with a single diagnostic line on any error; output files
are written atomically.  The STSBL_LOG environment variable (off|info|debug)
controls logging.
"""

import argparse
import json
import logging
import os
import statistics
import sys
import time

import numpy as np

from . import io as stio
from .metrics import BenchRecord, bench_channels, nmse
from .model import uniform_partition
from .sensing import compression_ratio, make_measurement_matrix
from .solver import RecoveryConfig, recover
from .synth import SynthSpec, gen_block_sparse

logger = logging.getLogger(__name__)

_RECOVERY_DEFAULTS = {
    "block_size": 16,
    "max_iters": 40,
    "tol": 1e-6,
    "noiseless": True,
    "low_snr": True,
    "prune_threshold": 0.0,
    "use_dictionary": True,
}


def _setup_logging():
    level = os.environ.get("STSBL_LOG", "off").lower()
    if level == "debug":
        logging.basicConfig(level=logging.DEBUG)
    elif level == "info":
        logging.basicConfig(level=logging.INFO)


def _merge_settings(args):
    """defaults < JSON config file < explicit CLI flags."""
    settings = dict(_RECOVERY_DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path) as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(settings)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        settings.update(loaded)
    for key in settings:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _recovery_config(settings, checkpoints=False):
    return RecoveryConfig(
        block_size=int(settings["block_size"]),
        max_iters=int(settings["max_iters"]),
        tol=float(settings["tol"]),
        noiseless=bool(settings["noiseless"]),
        low_snr=bool(settings["low_snr"]),
        prune_threshold=float(settings["prune_threshold"]),
        use_dictionary=bool(settings["use_dictionary"]),
        keep_checkpoints=checkpoints,
    )


def _rows_from_cr(m, cr):
    n = round(m * (1.0 - cr / 100.0))
    if not 0 < n <= m:
        raise ValueError(f"cr={cr} gives infeasible row count {n} for m={m}")
    return n


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok]


def cmd_gen_matrix(args):
    if args.n is None and args.cr is None:
        raise ValueError("give --n or --cr")
    n = args.n if args.n is not None else _rows_from_cr(args.m, args.cr)
    phi = make_measurement_matrix(n, args.m, args.seed)
    stio.save_matrix_csv(phi, args.out)
    logger.info("wrote %dx%d matrix to %s", phi.rows, phi.cols, args.out)
    return 0


def cmd_compress(args):
    phi = stio.load_matrix_csv(args.matrix)
    frame = stio.load_frame_csv(args.frame)
    if phi.cols != frame.shape[0]:
        raise ValueError(
            f"matrix has {phi.cols} columns but frame has {frame.shape[0]} rows"
        )
    stio.save_frame_csv(phi.entries @ frame, args.out)
    logger.info(
        "compressed %s at cr=%.2f", args.frame, compression_ratio(phi.rows, phi.cols)
    )
    return 0


def cmd_recover(args):
    settings = _merge_settings(args)
    phi = stio.load_matrix_csv(args.matrix)
    y = stio.load_frame_csv(args.data)
    config = _recovery_config(settings, checkpoints=args.checkpoints)
    result = recover(y, phi, config=config)
    stio.save_frame_csv(result.x_hat, args.out)
    if args.checkpoints:
        ckpt_path = os.path.splitext(args.out)[0] + ".checkpoints.json"
        stio.save_json(result.checkpoints, ckpt_path)
    logger.info(
        "recovered %s in %d iterations (converged=%s)",
        args.data,
        result.iters,
        result.converged,
    )
    return 0


def cmd_synth(args):
    settings = _merge_settings(args)
    part = uniform_partition(args.m, int(settings["block_size"]))
    spec = SynthSpec(
        partition=part,
        active_count=args.active,
        r_intra=args.r_intra,
        rho_inter=args.rho_inter,
        channels=args.l,
        seed=args.seed,
    )
    x, support = gen_block_sparse(spec)
    stio.save_frame_csv(x, args.out)
    sidecar = {
        "m": part.m,
        "channels": args.l,
        "block_sizes": list(part.sizes),
        "active_count": args.active,
        "r_intra": args.r_intra,
        "rho_inter": args.rho_inter,
        "seed": args.seed,
        "support": list(support),
    }
    stio.save_json(sidecar, os.path.splitext(args.out)[0] + ".json")
    logger.info("wrote synthetic frame to %s (support=%s)", args.out, support)
    return 0


def cmd_bench(args):
    if args.channels is None and args.cr is None:
        raise ValueError("give --channels and/or --cr to choose a sweep")
    if args.channels is not None and args.n is None:
        raise ValueError("the channel sweep needs --n")
    settings = _merge_settings(args)
    records = []
    long_rows = []
    if args.channels:
        chan_records = bench_channels(
            args.m, args.n, args.channels, args.trials, args.seed
        )
        records.extend(chan_records)
        for l in args.channels:
            times = [r.wall_time_seconds for r in chan_records if r.l == l]
            long_rows.append(
                ("channels", l, "median_wall_time_seconds", statistics.median(times))
            )
    if args.cr:
        part = uniform_partition(args.m, int(settings["block_size"]))
        config = _recovery_config(settings)
        for cr in args.cr:
            n = _rows_from_cr(args.m, cr)
            phi = make_measurement_matrix(n, args.m, args.seed)
            cr_exact = compression_ratio(n, args.m)
            errs = []
            for trial in range(args.trials):
                spec = SynthSpec(
                    partition=part,
                    active_count=min(3, part.g),
                    r_intra=0.9,
                    rho_inter=0.9,
                    channels=args.l,
                    seed=args.seed + trial,
                )
                x_true, _ = gen_block_sparse(spec)
                start = time.perf_counter()
                result = recover(phi.entries @ x_true, phi, config=config)
                elapsed = time.perf_counter() - start
                err = nmse(result.x_hat, x_true)
                errs.append(err)
                records.append(
                    BenchRecord(
                        m=args.m,
                        n=n,
                        l=args.l,
                        cr=cr_exact,
                        seed=args.seed + trial,
                        nmse=err,
                        wall_time_seconds=elapsed,
                        iters=result.iters,
                    )
                )
            long_rows.append(("cr", cr_exact, "median_nmse", statistics.median(errs)))
    stio.save_bench_csv(records, args.out)
    stio.save_long_csv(long_rows, os.path.splitext(args.out)[0] + "_long.csv")
    logger.info("wrote %d benchmark records to %s", len(records), args.out)
    return 0


def _add_recovery_flags(sub):
    sub.add_argument("--block-size", dest="block_size", type=int, default=None)
    sub.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    sub.add_argument("--tol", type=float, default=None)
    mode = sub.add_mutually_exclusive_group()
    mode.add_argument(
        "--noiseless", dest="noiseless", action="store_const", const=True, default=None
    )
    mode.add_argument("--noisy", dest="noiseless", action="store_const", const=False)
    snr = sub.add_mutually_exclusive_group()
    snr.add_argument(
        "--low-snr", dest="low_snr", action="store_const", const=True, default=None
    )
    snr.add_argument("--no-low-snr", dest="low_snr", action="store_const", const=False)
    sub.add_argument(
        "--prune-threshold", dest="prune_threshold", type=float, default=None
    )
    sub.add_argument(
        "--no-dict",
        dest="use_dictionary",
        action="store_const",
        const=False,
        default=None,
    )
    sub.add_argument("--config", default=None, help="JSON file with defaults")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stsbl",
        description="Compress and recover multichannel signal frames.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen-matrix", help="write a sparse binary measurement matrix")
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("--cr", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen_matrix)

    comp = subs.add_parser("compress", help="compress a frame CSV with a matrix CSV")
    comp.add_argument("--matrix", required=True)
    comp.add_argument("--frame", required=True)
    comp.add_argument("--out", required=True)
    comp.set_defaults(func=cmd_compress)

    rec = subs.add_parser("recover", help="recover a frame from compressed data")
    rec.add_argument("--matrix", required=True)
    rec.add_argument("--data", required=True)
    rec.add_argument("--out", required=True)
    rec.add_argument(
        "--checkpoints",
        action="store_true",
        help="also write per-iteration progress next to --out",
    )
    _add_recovery_flags(rec)
    rec.set_defaults(func=cmd_recover)

    syn = subs.add_parser("synth", help="write a synthetic block-sparse frame")
    syn.add_argument("--m", type=int, required=True)
    syn.add_argument("--l", type=int, required=True)
    syn.add_argument("--active", type=int, required=True)
    syn.add_argument("--r-intra", dest="r_intra", type=float, default=0.9)
    syn.add_argument("--rho-inter", dest="rho_inter", type=float, default=0.9)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--out", required=True)
    _add_recovery_flags(syn)
    syn.set_defaults(func=cmd_synth)

    ben = subs.add_parser("bench", help="run accuracy/timing sweeps")
    ben.add_argument("--m", type=int, required=True)
    ben.add_argument("--n", type=int, default=None)
    ben.add_argument("--l", type=int, default=4)
    ben.add_argument("--channels", type=_int_list, default=None)
    ben.add_argument("--cr", type=_float_list, default=None)
    ben.add_argument("--trials", type=int, default=1)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--out", required=True)
    _add_recovery_flags(ben)
    ben.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
