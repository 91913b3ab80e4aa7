"""Randomized conformance campaigns over seeded norm instances.

Each trial draws a norm, reduces a basis, runs the requested checkers, and
contributes one fixed-column CSV row; trials are independent and seeded per
index, so results do not depend on the worker count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, IO

from .instances import NORM_FAMILIES, random_norm, random_sequence, rng_from
from .norms import NormOracle
from .rebasing import build_second_basis, verify_independence, witness_nonvanishing
from .reduction import reduce_basis
from .verification import (
    check_closedness,
    check_discreteness,
    check_geometric_bound,
    check_monotone_tail,
    check_null_tail,
    merge_reports,
    min_separation,
    worst_geometric_ratio,
)

CHECK_NAMES = ("L0iii", "L1", "L2", "L3", "L4", "rebase")

CSV_COLUMNS = (
    "trial",
    "family",
    "rank",
    "pass",
    "l0iii_pass",
    "l1_pass",
    "l2_pass",
    "l3_pass",
    "l4_pass",
    "rebase_pass",
    "violations",
    "worst_l1_ratio",
    "min_epsilon",
)

REBASE_COMBO_SAMPLES = 64


@dataclass(frozen=True)
class CampaignConfig:
    rank: int
    trials: int
    family: str = "closure"
    norm_loader: Callable[[], NormOracle] | None = field(default=None, compare=False)
    checks: tuple[str, ...] = ("L0iii", "L1", "L2", "L3", "L4")
    seed: int = 0
    threads: int = 1
    out: str | None = None

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if not self.checks:
            raise ValueError("at least one check is required")
        for name in self.checks:
            if name not in CHECK_NAMES:
                raise ValueError(f"unknown check {name!r} (choose from {', '.join(CHECK_NAMES)})")
        if self.family not in NORM_FAMILIES:
            raise ValueError(f"unknown norm family {self.family!r}")
        if "rebase" in self.checks and self.rank < 3:
            raise ValueError("the rebase check needs rank >= 3")


def _fmt_bool(value: bool | None) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def _rebase_trial(rng, basis, oracle) -> bool:
    seq = random_sequence(rng, basis, oracle)
    built = build_second_basis(basis, seq)
    res = verify_independence(built)
    if not (res.independent and res.rank == len(built.rows)):
        return False
    nrows = len(built.rows)
    if nrows <= 8:
        combos = range(1, 1 << nrows)
    else:
        combos = (int(rng.integers(1, 1 << nrows)) for _ in range(REBASE_COMBO_SAMPLES))
    for combo_mask in combos:
        labels = [i for i in range(nrows) if combo_mask >> i & 1]
        wit = witness_nonvanishing(labels, basis, seq)
        total = 0
        for lab in labels:
            total ^= built.rows[lab]
        if not total >> (wit - 1) & 1:
            return False
    return True


def run_trial(cfg: CampaignConfig, trial: int) -> dict:
    rng = rng_from(cfg.seed, trial)
    if cfg.norm_loader is not None:
        oracle = cfg.norm_loader()
        family = oracle.kind
    else:
        _, oracle = random_norm(rng, cfg.rank, cfg.family)
        family = cfg.family
    if oracle.rank < cfg.rank:
        raise ValueError(f"norm covers rank {oracle.rank}, campaign needs {cfg.rank}")
    basis = reduce_basis(oracle, cfg.rank)

    row: dict = {name: "" for name in CSV_COLUMNS}
    row["trial"] = trial
    row["family"] = family
    row["rank"] = cfg.rank
    violations = 0
    all_ok = True
    for name in cfg.checks:
        if name == "L0iii":
            rep = check_monotone_tail(basis, oracle)
        elif name == "L1":
            rep = check_geometric_bound(basis, oracle)
        elif name == "L2":
            rep = merge_reports(
                "L2", [check_discreteness(basis, oracle, n) for n in range(cfg.rank + 1)]
            )
        elif name == "L3":
            rep = merge_reports(
                "L3", [check_closedness(basis, oracle, n) for n in range(cfg.rank + 1)]
            )
        elif name == "L4":
            rep = check_null_tail(basis, oracle, range(1, cfg.rank + 1))
        else:
            ok = _rebase_trial(rng, basis, oracle)
            row["rebase_pass"] = _fmt_bool(ok)
            all_ok &= ok
            violations += 0 if ok else 1
            continue
        key = f"{name.lower()}_pass"
        row[key] = _fmt_bool(rep.passed)
        all_ok &= rep.passed
        violations += len(rep.violations)
    row["pass"] = _fmt_bool(all_ok)
    row["violations"] = violations
    row["worst_l1_ratio"] = repr(worst_geometric_ratio(basis, oracle))
    row["min_epsilon"] = repr(min_separation(basis, oracle))
    return row


def run_campaign(cfg: CampaignConfig) -> tuple[list[dict], dict]:
    """All trial rows in trial order plus an aggregate summary."""
    if cfg.threads == 1:
        rows = [run_trial(cfg, t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(lambda t: run_trial(cfg, t), range(cfg.trials)))
    failures = sum(1 for r in rows if r["pass"] != "true")
    summary = {
        "trials": cfg.trials,
        "failures": failures,
        "pass_rate": 100.0 * (cfg.trials - failures) / cfg.trials,
        "worst_l1_ratio": max(float(r["worst_l1_ratio"]) for r in rows),
        "min_epsilon": min(float(r["min_epsilon"]) for r in rows),
    }
    return rows, summary


def write_csv(rows: list[dict], stream: IO[str]) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
