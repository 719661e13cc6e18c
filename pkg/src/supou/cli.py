"""Command-line front end: ``supou classify | simulate | verify``.

Exit codes: 0 success, 1 invalid input or configuration, 2 boundary regime,
3 simulation failure, 4 verification failure.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .asymptotics import BoundaryError, InvalidParameters, classify_regime, regime_for
from .config import ConfigError, load_config
from .simulate import run_ensemble, write_csv
from .verify import verify_regime

EXIT_OK, EXIT_INVALID, EXIT_BOUNDARY, EXIT_SIM, EXIT_VERIFY = 0, 1, 2, 3, 4


def _err(msg):
    print(f"supou: {msg}", file=sys.stderr)


def _atomic_write(path, text):
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _resolve_seed(flag, cfg_seed):
    if flag is not None:
        return flag
    if cfg_seed is not None:
        return cfg_seed
    seed = int(np.random.SeedSequence().entropy % (2**63))
    _err(f"no seed given; using generated seed {seed}")
    return seed


def cmd_classify(args) -> int:
    beta = args.beta
    try:
        rep = classify_regime(args.gamma, args.alpha, beta, args.gaussian, bg=args.bg_index)
    except InvalidParameters as exc:
        _err(str(exc))
        return EXIT_INVALID
    print(rep.to_json(indent=2))
    return EXIT_OK if rep.definite else EXIT_BOUNDARY


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
        seed = _resolve_seed(args.seed, cfg.seed)
        sim = cfg.sim_config(seed)
    except ConfigError as exc:
        _err(f"config error at {exc}")
        return EXIT_INVALID
    out = args.out or cfg.output.get("csv")
    if not out:
        _err("no output path (--out or output.csv)")
        return EXIT_INVALID
    t0 = time.perf_counter()
    try:
        ens = run_ensemble(cfg.quad, sim, threads=args.threads)
    except Exception as exc:  # noqa: BLE001
        _err(f"simulation failed: {type(exc).__name__}: {exc}")
        return EXIT_SIM
    buf = io.StringIO()
    write_csv(ens, buf)
    _atomic_write(out, buf.getvalue())
    wall = time.perf_counter() - t0
    _err(f"wrote {out}: {sim.n_rep} replications, {len(sim.grid)} grid points, {wall:.2f} s")
    if ens.failures:
        _err(f"{len(ens.failures)} replication(s) failed; the CSV holds the remaining ones (partial output)")
        for f in ens.failures[:5]:
            _err(f"  replication {f['replication']}: {f['error']}")
        return EXIT_SIM
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cfg = load_config(args.config)
        seed = _resolve_seed(args.seed, cfg.seed)
        sim = cfg.sim_config(seed)
    except ConfigError as exc:
        _err(f"config error at {exc}")
        return EXIT_INVALID
    out = args.out or cfg.output.get("report")
    if not out:
        _err("no output path (--out or output.report)")
        return EXIT_INVALID
    try:
        rep = regime_for(cfg.quad)
    except (InvalidParameters, ValueError) as exc:
        _err(str(exc))
        return EXIT_INVALID
    if not rep.definite:
        _err(f"boundary regime {rep.boundary}; nothing to verify")
        print(rep.to_json(indent=2))
        return EXIT_BOUNDARY
    v = cfg.verification
    t0 = time.perf_counter()
    try:
        report = verify_regime(cfg.quad, sim, cfg.T_ladder, cfg.thresholds, threads=args.threads,
                               hill_k=v.get("hill_k"), quantile=v.get("quantile", 0.5))
    except BoundaryError as exc:
        _err(str(exc))
        return EXIT_BOUNDARY
    except (ValueError, RuntimeError) as exc:
        _err(f"verification failed to run: {type(exc).__name__}: {exc}")
        return EXIT_SIM
    _atomic_write(out, report.to_json(indent=2, sort_keys=True) + "\n")
    wall = time.perf_counter() - t0
    for c in report.checks:
        _err(f"{'PASS' if c.passed else 'FAIL'} {c.name}: measured {c.measured:.4g}, target {c.target:.4g}, "
             f"threshold {c.threshold:g}")
    _err(f"wrote {out} ({report.regime.label}, {wall:.1f} s)")
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="supou", description="Integrated supOU limits: classify, simulate, verify.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="limit regime from tail indices")
    c.add_argument("--gamma", type=float, required=True, help="tail index of the marginal at infinity")
    c.add_argument("--alpha", type=float, required=True, help="regular-variation index of pi at zero")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--beta", type=float, help="power-law index of mu at zero")
    g.add_argument("--bg-index", type=float, help="Blumenthal-Getoor index when no power law holds")
    c.add_argument("--gaussian", action="store_true", help="the BDLP has a Gaussian part")
    c.set_defaults(func=cmd_classify)

    for name, func, help_ in (("simulate", cmd_simulate, "simulate an ensemble to CSV"),
                              ("verify", cmd_verify, "run the limit diagnostics to a JSON report")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("config", help="JSON experiment configuration")
        s.add_argument("--out", help="output path (overrides the config)")
        s.add_argument("--seed", type=int, help="master seed (overrides the config)")
        s.add_argument("--threads", type=int, help="worker threads (default: SUPOU_THREADS or 1)")
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
