#!/usr/bin/env python3
"""Time basis reduction across ranks and norm families.

The weighted column scales to rank 20+ (memoized scalar evaluations); the
closure column stops at the exhaustive bound since it materializes the full
2**rank table.  Pruned timings use the branch-and-bound coset walk, which is
answer-identical to the plain one.
"""

import argparse
import time

from boolnorm import reduce_basis, weighted_oracle
from boolnorm.instances import random_base_table, random_weight_spec, rng_from
from boolnorm.norms import closure_norm


def timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-rank", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'rank':>4} {'weighted':>10} {'weighted+prune':>14} {'closure':>10}")
    for rank in range(4, args.max_rank + 1, 2):
        spec = random_weight_spec(rng_from(args.seed, rank), rank)
        plain = timed(lambda: reduce_basis(weighted_oracle(spec), rank))
        pruned = timed(lambda: reduce_basis(weighted_oracle(spec), rank, prune=True))
        if rank <= 14:
            base = random_base_table(rng_from(args.seed, rank, 1), rank)
            closure = timed(lambda: reduce_basis(closure_norm(base), rank))
            closure_txt = f"{closure:9.3f}s"
        else:
            closure_txt = "-"
        print(f"{rank:>4} {plain:9.3f}s {pruned:13.3f}s {closure_txt:>10}")


if __name__ == "__main__":
    main()
