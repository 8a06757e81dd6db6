"""Command-line entry point.

    nomaidnc run --config exp.cfg --out results/ [--override key=value ...]
    nomaidnc oracle-check --config exp.cfg

Exit codes: 0 success, 1 configuration error, 2 internal invariant violation.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, ContractError
from .experiment import (ExperimentConfig, InvariantViolation, emit_results, format_config,
                         load_config, parse_config_text, run_sweep)
from .schemes import Scheme

log = logging.getLogger("nomaidnc")


def _build_config(args) -> ExperimentConfig:
    overrides = list(args.override or [])
    if args.seed is not None:
        overrides.append(f"base_seed={args.seed}")
    if args.trials is not None:
        overrides.append(f"trials={args.trials}")
    if args.schemes is not None:
        overrides.append(f"schemes={args.schemes}")
    if args.config is None:
        return parse_config_text("", overrides)
    return load_config(args.config, overrides)


def cmd_run(args) -> int:
    cfg = _build_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(format_config(cfg))

    def progress(k, n):
        if k % max(n // 20, 1) == 0 or k == n:
            log.info("%d/%d trials", k, n)

    rows = run_sweep(cfg, progress=progress)
    path = emit_results(rows, out / "results.csv")
    log.info("wrote %d rows to %s", len(rows), path)
    return 0


def cmd_oracle_check(args) -> int:
    from . import oracles

    cfg = _build_config(args)
    seed = cfg.base_seed
    ok = True
    st = oracles.clique_dominance(args.instances, seed)
    print(f"clique dominance: {st.instances} graphs, {st.violations} violations, "
          f"mean ratio MWV {st.ratio_mwv:.4f} MWP-MWV {st.ratio_mwp:.4f}")
    ok &= st.violations == 0
    bad = oracles.two_stage_exactness(args.instances, seed)
    print(f"two-stage exactness: {len(bad)} mismatches")
    for b in bad[:10]:
        print("  ", b)
    ok &= not bad
    ps = oracles.power_vs_grid(args.instances, seed, steps=args.grid_steps)
    print(f"power control vs grid: value ok {ps.value_ok}/{ps.instances}, "
          f"argument ok {ps.argument_ok}/{ps.instances}")
    ok &= ps.value_ok >= 0.99 * ps.instances
    print("PASS" if ok else "FAIL")
    return 0 if ok else 2


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nomaidnc", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--override", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.add_argument("--seed", type=int, help="shortcut for base_seed")
        p.add_argument("--trials", type=int)
        p.add_argument("--schemes", help="comma-separated scheme names: "
                       + ",".join(s.value for s in Scheme))

    run = sub.add_parser("run", help="run a Monte Carlo sweep")
    common(run)
    run.add_argument("--out", required=True, help="output directory")
    run.set_defaults(func=cmd_run)

    oc = sub.add_parser("oracle-check", help="run the small-instance oracle suites")
    common(oc)
    oc.add_argument("--instances", type=int, default=100)
    oc.add_argument("--grid-steps", type=int, default=10**5)
    oc.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (InvariantViolation, ContractError, AssertionError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
