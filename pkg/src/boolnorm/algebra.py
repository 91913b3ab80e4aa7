"""Bit-mask arithmetic for finite-rank Boolean groups.

An element of the rank-n truncation is a finite set of generator indices,
stored as an int bit mask with generator i on bit i-1.  Group addition is
symmetric difference of the index sets, i.e. XOR of the masks, so every
element is its own inverse, the zero element is the empty mask, and mask
equality is element equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import NotInSpanError, StratumRangeError

Element = int


def from_support(indices: Iterable[int]) -> Element:
    """Element with the given generator indices (each >= 1, no repeats)."""
    mask = 0
    for i in indices:
        i = int(i)
        if i < 1:
            raise ValueError(f"generator index must be >= 1, got {i}")
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError(f"duplicate generator index {i}")
        mask |= bit
    return mask


def support(g: Element) -> tuple[int, ...]:
    """Sorted generator indices of g; empty for the zero element."""
    out = []
    while g:
        low = g & -g
        out.append(low.bit_length())
        g ^= low
    return tuple(out)


def add(g: Element, h: Element) -> Element:
    """Sum in the Boolean group: symmetric difference of the supports."""
    return g ^ h


def reduce_word(letters: Iterable[int]) -> Element:
    """Element represented by a word: indices with odd multiplicity survive,
    paired repeats cancel."""
    mask = 0
    for i in letters:
        i = int(i)
        if i < 1:
            raise ValueError(f"generator index must be >= 1, got {i}")
        mask ^= 1 << (i - 1)
    return mask


def max_index(g: Element) -> int:
    """Largest generator index occurring in g, 0 for the zero element."""
    return g.bit_length()


@dataclass(frozen=True)
class TruncationContext:
    """Finite stage of the group: elements supported on generators 1..rank."""

    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be >= 1")

    @property
    def size(self) -> int:
        return 1 << self.rank

    def contains(self, g: Element) -> bool:
        return g >> self.rank == 0

    def elements(self) -> Iterator[Element]:
        return iter(range(1 << self.rank))


@dataclass(frozen=True)
class TriangularBasis:
    """Basis over the original generators whose row j contains index j and
    uses only indices <= j; such rows are independent by construction."""

    rows: tuple[Element, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        for j, row in enumerate(self.rows, 1):
            if not row & (1 << (j - 1)):
                raise ValueError(f"row {j} must contain index {j}")
            if row >> j:
                raise ValueError(f"row {j} uses indices above {j}")

    @property
    def rank(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class GeneralBasis:
    """Candidate basis given as arbitrary nonzero-or-zero rows; independence
    is a checked property (see rebasing.verify_independence), not enforced
    at construction."""

    rows: tuple[Element, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        for row in self.rows:
            if row < 0:
                raise ValueError("rows must be nonnegative masks")

    @property
    def size(self) -> int:
        return len(self.rows)


Basis = Union[TriangularBasis, GeneralBasis]


def express_in_basis(g: Element, basis: Basis) -> tuple[int, ...]:
    """Row positions (1-based, sorted) whose rows sum to g.

    Triangular bases are solved by back-substitution from the largest index
    down; general bases go through Gaussian elimination and fail with
    NotInSpanError when a nonzero residue remains.
    """
    if isinstance(basis, TriangularBasis):
        rows = basis.rows
        combo = 0
        vec = g
        while vec:
            j = vec.bit_length()
            if j > len(rows):
                raise NotInSpanError(f"index {j} exceeds basis rank {len(rows)}")
            combo |= 1 << (j - 1)
            vec ^= rows[j - 1]
        return support(combo)

    pivots: dict[int, tuple[int, int]] = {}
    for pos, row in enumerate(basis.rows, 1):
        vec, combo = row, 1 << (pos - 1)
        while vec:
            top = vec.bit_length()
            if top not in pivots:
                pivots[top] = (vec, combo)
                break
            pvec, pcombo = pivots[top]
            vec ^= pvec
            combo ^= pcombo
    vec, combo = g, 0
    while vec:
        top = vec.bit_length()
        if top not in pivots:
            raise NotInSpanError("element has a residue outside the row span")
        pvec, pcombo = pivots[top]
        vec ^= pvec
        combo ^= pcombo
    return support(combo)


def reduced_length(g: Element, basis: Basis) -> int:
    """Number of rows in the expansion of g, i.e. its reduced length."""
    return len(express_in_basis(g, basis))


def element_from_coordinates(basis: Basis, coords: Iterable[int]) -> Element:
    """Inverse of express_in_basis: XOR of the selected rows."""
    rows = basis.rows
    g = 0
    for pos in coords:
        pos = int(pos)
        if not 1 <= pos <= len(rows):
            raise ValueError(f"row position {pos} out of range 1..{len(rows)}")
        g ^= rows[pos - 1]
    return g


def enumerate_stratum(
    ctx: TruncationContext | int, k: int, mode: str = "exactly"
) -> Iterator[tuple[int, ...]]:
    """Coordinate sets of reduced length k ("exactly") or <= k ("at-most"),
    in lexicographic order within each size.  Validates eagerly."""
    rank = ctx.rank if isinstance(ctx, TruncationContext) else int(ctx)
    if k < 0:
        raise ValueError("stratum length must be >= 0")
    if k > rank:
        raise StratumRangeError(f"stratum length {k} exceeds rank {rank}")
    if mode not in ("exactly", "at-most"):
        raise ValueError(f"unknown mode {mode!r}")
    sizes: Iterable[int] = (k,) if mode == "exactly" else range(k + 1)

    def generate() -> Iterator[tuple[int, ...]]:
        for m in sizes:
            yield from itertools.combinations(range(1, rank + 1), m)

    return generate()


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of the given int-mask rows."""
    pivots: dict[int, int] = {}
    for vec in rows:
        while vec:
            top = vec.bit_length()
            if top not in pivots:
                pivots[top] = vec
                break
            vec ^= pivots[top]
    return len(pivots)
