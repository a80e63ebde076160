"""Command-line entry point.

Exit codes: 0 all assertions hold, 1 a verification mismatch, 2 a
configuration error, 3 a numerical or solver failure, 4 any other
package error.
"""

import argparse
import logging
import sys
from pathlib import Path

from .config import ExperimentConfig, KINDS, load_config
from .errors import (AllSeedsFailed, BrakeIndexError, ConfigError, CountMismatch,
                     NoConvergence, NumericalFailure, SolverFailure, VerificationFailure)
from .runner import emit_csv, emit_json, run

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OTHER = 0, 1, 2, 3, 4

log = logging.getLogger("brake_index")


def build_parser():
    p = argparse.ArgumentParser(prog="brake-index",
                                description="Index theory and brake orbits of Hamiltonian systems.")
    sub = p.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        s = sub.add_parser(kind)
        s.add_argument("--config", type=Path, help="INI experiment file")
        s.add_argument("--seed", type=int)
        s.add_argument("--out", type=Path, default=Path("runs"), help="output directory")
        s.add_argument("--grid", type=int, help="integration steps per unit time")
        s.add_argument("--modes", type=int, help="Galerkin truncation m")
        s.add_argument("--json", action="store_true", help="write JSON record")
        s.add_argument("--csv", action="store_true", help="write CSV rows")
        s.add_argument("--system", help="system name (built-in)")
        s.add_argument("--n", type=int, help="half dimension")
        s.add_argument("--count", type=int, help="number of random systems")
        s.add_argument("-k", "--k", dest="k", help="comma-separated iteration counts")
        s.add_argument("-j", "--j", dest="j", help="comma-separated period multipliers")
        s.add_argument("--samples", type=int, help="audit samples")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args):
    if args.config:
        cfg = load_config(args.config)
        if cfg.kind != args.kind:
            raise ConfigError(f"config kind {cfg.kind!r} does not match subcommand {args.kind!r}")
        system, numerics, output, seed = cfg.system, cfg.numerics, cfg.output, cfg.seed
    else:
        system, numerics, output, seed = {}, {}, {}, 7
    if args.seed is not None:
        seed = args.seed
    if args.system:
        system["name"] = args.system
    if args.n is not None:
        system["n"] = args.n
    for key, attr in (("grid", "grid"), ("m", "modes"), ("count", "count"), ("k", "k"),
                      ("j", "j"), ("samples", "samples")):
        value = getattr(args, attr)
        if value is not None:
            numerics[key] = value
    return ExperimentConfig(args.kind, dict(system), dict(numerics), dict(output), seed)


def _exit_code(exc):
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, (VerificationFailure, CountMismatch)):
        return EXIT_MISMATCH
    if isinstance(exc, (NumericalFailure, NoConvergence, AllSeedsFailed, SolverFailure)):
        return EXIT_NUMERIC
    return EXIT_OTHER


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        record = run(cfg)
    except BrakeIndexError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)
    stem = f"{cfg.kind}-{record.config_hash[:10]}"
    if args.json:
        log.info("wrote %s", emit_json(record, args.out / f"{stem}.json"))
    if args.csv:
        log.info("wrote %s", emit_csv(record, args.out / f"{stem}.csv"))
    status = "PASS" if record.passed else "FAIL"
    print(f"{cfg.kind}: {status} ({len(record.rows)} rows, "
          f"{record.timing['wall_time']:.1f}s, config {record.config_hash[:10]})")
    for row in record.rows[:20] if cfg.kind != "solve" else []:
        print("  " + "  ".join(str(v) for v in row))
    return EXIT_OK if record.passed else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
