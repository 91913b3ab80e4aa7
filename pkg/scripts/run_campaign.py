#!/usr/bin/env python3
"""Run a conformance campaign and print the summary.

Example:
    python3 scripts/run_campaign.py --rank 8 --trials 50 --family closure \
        --checks L0iii,L1,L2,L3,L4,rebase --out campaign.csv
"""

import argparse
import sys

from boolnorm.campaign import CHECK_NAMES, CampaignConfig, run_campaign, write_csv


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rank", type=int, default=8)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--family", default="closure", choices=("weighted", "graev", "closure"))
    parser.add_argument("--checks", default="L0iii,L1,L2,L3,L4")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default="campaign.csv")
    return parser.parse_args()


def main():
    args = parse_args()
    checks = tuple(name for name in args.checks.split(",") if name)
    for name in checks:
        if name not in CHECK_NAMES:
            sys.exit(f"unknown check {name!r}")
    cfg = CampaignConfig(
        rank=args.rank,
        trials=args.trials,
        family=args.family,
        checks=checks,
        seed=args.seed,
        threads=args.threads,
    )
    rows, summary = run_campaign(cfg)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, fh)
    print(
        "trials={trials} failures={failures} pass_rate={pass_rate:.2f}% "
        "worst_l1_ratio={worst_l1_ratio:.6f} min_epsilon={min_epsilon:.3e}".format(**summary)
    )
    print(f"rows written to {args.out}")
    return 1 if summary["failures"] else 0


if __name__ == "__main__":
    sys.exit(main())
