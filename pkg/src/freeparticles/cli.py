"""Command line front end.

    freeparticles {moments|converge|oracle|partitions} --config PATH
                  [--out PATH] [--format csv|json] [--threads K] [--seedless]

Exit codes: 0 success, 2 config error, 3 resource cap, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import experiments
from .config import MODES, load_config
from .errors import ConfigError, OracleMismatch, ResourceLimitError, TailBoundError, TruncationError

log = logging.getLogger("freeparticles")

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE, EXIT_MISMATCH = 0, 2, 3, 4


def render(table: experiments.Table, fmt: str, mode: str) -> str:
    if fmt == "json":
        doc = {
            "mode": mode,
            "columns": table.columns,
            "rows": [dict(zip(table.columns, r)) for r in table.rows],
            "summary": table.summary,
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.columns)
    writer.writerows(table.rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freeparticles",
        description="Moments of freely independent particle systems and their free Poisson / free Levy limits.")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--out", help="output file (default: config output.path, else stdout)")
    parser.add_argument("--format", choices=["csv", "json"], help="output format (default csv)")
    parser.add_argument("--threads", type=int, default=1, help="workers for schedule points")
    parser.add_argument("--seedless", action="store_true",
                        help="no-op: runs are always deterministic, no randomness is used")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(mode: str, cfg, threads: int = 1) -> experiments.Table:
    if mode == "moments":
        return experiments.run_moments(cfg)
    if mode == "converge":
        return experiments.run_converge(cfg, threads=threads)
    if mode == "oracle":
        return experiments.run_oracle_check(cfg)
    return experiments.run_partitions(cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config, args.mode)
        table = run(args.mode, cfg, args.threads)
    except (ConfigError, OSError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (ResourceLimitError, TailBoundError, TruncationError) as err:
        print(f"resource limit: {err}", file=sys.stderr)
        return EXIT_RESOURCE

    fmt = args.format or cfg.output_format
    text = render(table, fmt, args.mode)
    out = args.out or cfg.output_path
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if table.summary:
        summary = " ".join(f"{k}={v}" for k, v in table.summary.items())
        print(summary, file=sys.stderr)
    if args.mode == "oracle" and not table.summary["ok"]:
        err = OracleMismatch(f"oracle discrepancy: {table.summary}")
        print(err, file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
