#!/usr/bin/env python3
"""Run the complete claim-verification suite and save the JSON report.

Usage:
    python scripts/reproduce_paper.py [--fast] [--seed SEED] [--out report.json]

Equivalent to ``mabkcert reproduce-paper --format json`` with the report also
written to a file.  Exits with the CLI's code (0 = all verdicts pass).
"""

import argparse
import json
import sys
from pathlib import Path

from mabkcert import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fast", action="store_true")
    parser.add_argument("--seed", type=int, default=cli.SEED_DEFAULT)
    parser.add_argument("--out", type=Path, default=Path("reproduction_report.json"))
    args = parser.parse_args()

    report = cli.cmd_reproduce(args.seed, args.fast)
    payload = report.payload()
    args.out.write_text(json.dumps(payload, indent=2) + "\n")

    n_pass = sum(1 for v in report.verdicts if v["pass"])
    print(f"report written to {args.out}")
    print(f"verdicts: {n_pass}/{len(report.verdicts)} pass")
    for v in report.verdicts:
        status = "PASS" if v["pass"] else "FAIL"
        print(f"  [{status}] {v['claim']}")
    return cli.EXIT_OK if report.all_pass() else cli.EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
