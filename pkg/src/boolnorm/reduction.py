"""Greedy norm-minimizing basis construction over generator cosets.

Row k+1 of the reduced basis is the cheapest element of the coset
e_{k+1} + span(rows 1..k); ties go to the lexicographically smallest
support, so reduction is deterministic for any fixed norm.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .algebra import Element, TriangularBasis, gf2_rank, support
from .errors import SearchBoundExceededError
from .norms import NormOracle

DEFAULT_SEARCH_BOUND = 24
SEARCH_BOUND_ENV = "BOOLNORM_SEARCH_BOUND"


def search_bound(override: int | None = None) -> int:
    """Effective coset search bound: explicit override, else the
    BOOLNORM_SEARCH_BOUND environment variable, else the default."""
    if override is not None:
        return int(override)
    env = os.environ.get(SEARCH_BOUND_ENV)
    if env is not None:
        bound = int(env)
        if bound < 1:
            raise ValueError(f"{SEARCH_BOUND_ENV} must be >= 1, got {bound}")
        return bound
    return DEFAULT_SEARCH_BOUND


@dataclass(frozen=True)
class CosetSpec:
    """Coset offset + span(span_rows); the rows must be independent, so the
    coset has exactly 2**len(span_rows) members."""

    offset: Element
    span_rows: tuple[Element, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "span_rows", tuple(self.span_rows))
        if gf2_rank(self.span_rows) != len(self.span_rows):
            raise ValueError("span rows must be linearly independent")

    @property
    def size(self) -> int:
        return 1 << len(self.span_rows)


@dataclass(frozen=True)
class RowRecord:
    """Per-row search statistics emitted by reduce_basis_report."""

    index: int
    support: tuple[int, ...]
    norm: float
    coset_size: int
    candidates_evaluated: int


def _argmin_exhaustive(
    oracle: NormOracle, offset: Element, rows: tuple[Element, ...]
) -> tuple[Element, float, int]:
    # Gray-code walk over all 2**k coset members: each step flips one row.
    best = offset
    best_norm = oracle(offset)
    best_support: tuple[int, ...] | None = None
    cur = offset
    evaluated = 1
    call = oracle.__call__
    for i in range(1, 1 << len(rows)):
        cur ^= rows[(i & -i).bit_length() - 1]
        v = call(cur)
        evaluated += 1
        if v < best_norm:
            best, best_norm, best_support = cur, v, None
        elif v == best_norm:
            if best_support is None:
                best_support = support(best)
            s = support(cur)
            if s < best_support:
                best, best_support = cur, s
    return best, best_norm, evaluated


def _argmin_pruned(
    oracle: NormOracle, offset: Element, rows: tuple[Element, ...]
) -> tuple[Element, float, int]:
    # Depth-first over row subsets.  A subtree below a partial element p,
    # with undecided rows j+1.., is cut only when N(p) minus the summed
    # norms of those rows strictly exceeds the incumbent: the triangle
    # inequality then rules out improvements *and* ties, so the answer is
    # identical to the exhaustive walk.
    k = len(rows)
    row_norms = [oracle(r) for r in rows]
    suffix = [0.0] * (k + 1)
    for j in range(k - 1, -1, -1):
        suffix[j] = suffix[j + 1] + row_norms[j]

    best = offset
    best_norm = oracle(offset)
    best_support: tuple[int, ...] | None = None
    evaluated = 1

    def consider(elem: Element, v: float) -> None:
        nonlocal best, best_norm, best_support
        if v < best_norm:
            best, best_norm, best_support = elem, v, None
        elif v == best_norm:
            if best_support is None:
                best_support = support(best)
            s = support(elem)
            if s < best_support:
                best, best_support = elem, s

    def walk(start: int, cur: Element, cur_norm: float) -> None:
        nonlocal evaluated
        for j in range(start, k):
            child = cur ^ rows[j]
            v = oracle(child)
            evaluated += 1
            consider(child, v)
            if v - suffix[j + 1] <= best_norm:
                walk(j + 1, child, v)

    walk(0, offset, best_norm)
    return best, best_norm, evaluated


def coset_argmin(
    oracle: NormOracle,
    coset: CosetSpec,
    *,
    prune: bool = False,
    bound: int | None = None,
) -> Element:
    """Unique cheapest element of the coset under (norm, support) order."""
    limit = search_bound(bound)
    if len(coset.span_rows) > limit:
        raise SearchBoundExceededError(
            f"coset spans {len(coset.span_rows)} rows, search bound is {limit}"
        )
    search = _argmin_pruned if prune else _argmin_exhaustive
    return search(oracle, coset.offset, coset.span_rows)[0]


def reduce_basis_report(
    oracle: NormOracle,
    rank: int,
    *,
    prune: bool = False,
    bound: int | None = None,
) -> tuple[TriangularBasis, list[RowRecord]]:
    """Reduced basis plus per-row search statistics.

    Row 1 is the first generator; row k+1 minimizes the norm over the coset
    of generator k+1 by span(rows 1..k).  The output is unitriangular by
    construction: every coset member contains index k+1 and nothing above.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if rank > oracle.rank:
        raise ValueError(f"norm oracle covers rank {oracle.rank}, need {rank}")
    limit = search_bound(bound)
    if rank > limit:
        raise SearchBoundExceededError(f"rank {rank} exceeds search bound {limit}")
    search = _argmin_pruned if prune else _argmin_exhaustive
    rows: list[Element] = []
    records: list[RowRecord] = []
    for k in range(1, rank + 1):
        span = tuple(rows)
        elem, norm, evaluated = search(oracle, 1 << (k - 1), span)
        rows.append(elem)
        records.append(RowRecord(k, support(elem), norm, 1 << len(span), evaluated))
    return TriangularBasis(tuple(rows)), records


def reduce_basis(
    oracle: NormOracle,
    rank: int,
    *,
    prune: bool = False,
    bound: int | None = None,
) -> TriangularBasis:
    """Reduced basis of the rank-n truncation under the given norm."""
    return reduce_basis_report(oracle, rank, prune=prune, bound=bound)[0]
