"""Noncrossing partitions and the lattices ``M(w)`` of monotonically adapted partitions.

Ground sets are ``{1, ..., n}`` (1-based).  A partition is adapted to a
reduced Motzkin word ``w`` when every block has constant color in ``w`` and
that color equals the block's nesting depth.

Inside ``M(w)`` the shape is rigid: two consecutive letters of color ``j``
lying in the same maximal run of colors ``>= j`` must share a block whenever
higher letters sit between them, and may be joined or split freely when they
are adjacent.  Hence ``M(w)`` is a Boolean lattice on those free gaps, which
is what :func:`enumerate_adapted` walks through.  The brute-force filter over
``NC(n)`` remains available via ``method="filter"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Hashable, Iterable, Sequence

from .words import (
    LengthMismatch,
    MotzkinWord,
    PreconditionViolation,
    enumerate_reduced,
    validate,
)

__all__ = [
    "PartitionError",
    "NonConstantBlock",
    "DepthColorMismatch",
    "NotIrreducible",
    "WordMismatch",
    "CrossingPartition",
    "SetPartition",
    "BlockInfo",
    "AdaptedPartition",
    "is_noncrossing",
    "depth_and_outer",
    "is_irreducible",
    "adapt",
    "try_adapt",
    "enumerate_nc",
    "enumerate_adapted",
    "word_of",
    "depth_word",
    "least_element",
    "greatest_element",
    "join_adapted",
    "refines",
    "filter_by_label",
    "passes_labeling",
    "admissible_labelings",
    "catalan_decomposition",
    "catalan_number",
    "adapted_covers",
]


class PartitionError(ValueError):
    pass


class NonConstantBlock(PartitionError):
    pass


class DepthColorMismatch(PartitionError):
    pass


class NotIrreducible(PartitionError):
    pass


class WordMismatch(PartitionError):
    pass


class CrossingPartition(PartitionError):
    pass


@dataclass(frozen=True, order=True)
class SetPartition:
    """A set partition of ``{1..n}`` in canonical form.

    Blocks are sorted tuples, listed by increasing minimum, so equality and
    ordering are structural.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        seen = [x for b in blocks for x in b]
        if any(len(b) == 0 for b in blocks):
            raise PartitionError("blocks must be nonempty")
        if sorted(seen) != list(range(1, self.n + 1)):
            raise PartitionError(f"blocks {blocks} do not partition 1..{self.n}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "SetPartition":
        bl = [tuple(b) for b in blocks]
        if n is None:
            n = max((max(b) for b in bl if b), default=0)
        return cls(n, tuple(bl))

    @classmethod
    def singletons(cls, n: int) -> "SetPartition":
        return cls(n, tuple((k,) for k in range(1, n + 1)))

    @classmethod
    def one_block(cls, n: int) -> "SetPartition":
        return cls(n, (tuple(range(1, n + 1)),))

    def block_index(self) -> dict[int, int]:
        """Map each point to the index of its block."""
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def __len__(self) -> int:
        return len(self.blocks)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def is_noncrossing(p: SetPartition) -> bool:
    """No ``k < q < l < r`` with ``k, l`` in one block and ``q, r`` in another."""
    idx = p.block_index()
    # a stack scan: a block may be resumed only if every block opened after it is closed
    last = {i: max(b) for i, b in enumerate(p.blocks)}
    stack: list[int] = []
    for x in range(1, p.n + 1):
        b = idx[x]
        if stack and stack[-1] == b:
            pass
        elif b in stack:
            return False
        else:
            stack.append(b)
        if x == last[b]:
            stack.pop()
    return True


def _require_nc(p: SetPartition) -> None:
    if not is_noncrossing(p):
        raise CrossingPartition(f"{p} is crossing")


def depth_and_outer(p: SetPartition) -> list[tuple[int, int | None]]:
    """Per block (in block order) the depth and the index of the nearest outer block."""
    _require_nc(p)
    out: list[tuple[int, int | None]] = []
    for i, b in enumerate(p.blocks):
        lo = b[0]
        outer = None
        for k in range(i - 1, -1, -1):
            u = p.blocks[k]
            # earlier blocks nest b iff they straddle its minimum; the latest such is nearest
            if u[0] < lo < u[-1]:
                outer = k
                break
        depth = 1 if outer is None else out[outer][0] + 1
        out.append((depth, outer))
    return out


def is_irreducible(p: SetPartition) -> bool:
    return sum(1 for d, _ in depth_and_outer(p) if d == 1) == 1


def depth_word(p: SetPartition) -> tuple[int, ...]:
    """Color sequence assigning to each point the depth of its block."""
    info = depth_and_outer(p)
    idx = p.block_index()
    return tuple(info[idx[x]][0] for x in range(1, p.n + 1))


def word_of(p: SetPartition) -> MotzkinWord:
    """The unique reduced Motzkin word to which an irreducible ``p`` is adapted."""
    if not is_irreducible(p):
        raise NotIrreducible(f"{p} has more than one covering block")
    return validate(depth_word(p))


@dataclass(frozen=True)
class BlockInfo:
    points: tuple[int, ...]
    color: int
    depth: int
    outer: int | None


@dataclass(frozen=True, order=True)
class AdaptedPartition:
    """A noncrossing partition together with the word it is adapted to.

    Construct through :func:`adapt`, which checks the invariants.
    """

    word: MotzkinWord
    partition: SetPartition
    info: tuple[BlockInfo, ...] = field(compare=False, repr=False)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self.partition.blocks

    def __str__(self) -> str:
        return str(self.partition)

    def to_json(self) -> list[list[int]]:
        return self.partition.to_json()


def adapt(p: SetPartition, w: MotzkinWord) -> AdaptedPartition:
    if p.n != len(w):
        raise LengthMismatch(f"partition of {p.n} points vs word of length {len(w)}")
    _require_nc(p)
    dao = depth_and_outer(p)
    info = []
    for b, (depth, outer) in zip(p.blocks, dao):
        colors = {w[x - 1] for x in b}
        if len(colors) != 1:
            raise NonConstantBlock(f"block {b} carries colors {sorted(colors)} in {w}")
        (color,) = colors
        if color != depth:
            raise DepthColorMismatch(f"block {b} has color {color} but depth {depth}")
        info.append(BlockInfo(b, color, depth, outer))
    return AdaptedPartition(w, p, tuple(info))


def try_adapt(p: SetPartition, w: MotzkinWord) -> AdaptedPartition | None:
    try:
        return adapt(p, w)
    except (PartitionError, LengthMismatch):
        return None


# ---------------------------------------------------------------- NC(n)

@lru_cache(maxsize=None)
def _nc_blocks(lo: int, hi: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All noncrossing partitions of ``lo..hi`` as block tuples (unsorted)."""
    if lo > hi:
        return ((),)
    out = []
    rest = list(range(lo + 1, hi + 1))
    # choose the block of lo; the gaps between its points are filled independently
    for r in range(len(rest) + 1):
        for tail in itertools.combinations(rest, r):
            block = (lo,) + tail
            bounds = list(block) + [hi + 1]
            pieces = [_nc_blocks(bounds[t] + 1, bounds[t + 1] - 1) for t in range(len(block))]
            for combo in itertools.product(*pieces):
                out.append((block,) + tuple(b for part in combo for b in part))
    return tuple(out)


def enumerate_nc(n: int, variant: str = "all") -> list[SetPartition]:
    """``NC(n)``, ``NC_irr(n)`` or ``I(n)`` in canonical (sorted block tuple) order."""
    if n < 1:
        raise PreconditionViolation("n must be at least 1")
    if variant == "interval":
        parts = []
        for cuts in itertools.product((False, True), repeat=n - 1):
            blocks, cur = [], [1]
            for x, cut in zip(range(2, n + 1), cuts):
                if cut:
                    blocks.append(tuple(cur))
                    cur = []
                cur.append(x)
            blocks.append(tuple(cur))
            parts.append(SetPartition(n, tuple(blocks)))
        return sorted(parts)
    if variant not in ("all", "irreducible"):
        raise ValueError(f"unknown variant {variant!r}")
    parts = [SetPartition(n, blocks) for blocks in _nc_blocks(1, n)]
    if variant == "irreducible":
        # for noncrossing partitions irreducibility means 1 and n share a block
        parts = [p for p in parts if n in p.blocks[0]]
    return sorted(parts)


def catalan_number(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------- M(w)

def _gaps(w: MotzkinWord) -> tuple[list[tuple[int, int]], list[tuple[int, int, int]]]:
    """Forced and free gaps of ``w``.

    Returns ``(forced, free)``; forced entries are point pairs ``(x, y)``, free
    entries are ``(color, x, y)`` with ``y == x + 1``.
    """
    c = w.colors
    forced: list[tuple[int, int]] = []
    free: list[tuple[int, int, int]] = []
    last_seen: dict[int, int] = {}
    for pos, col in enumerate(c, start=1):
        # letters of color > col close their runs here
        for j in [j for j in last_seen if j > col]:
            del last_seen[j]
        prev = last_seen.get(col)
        if prev is not None:
            if pos == prev + 1:
                free.append((col, prev, pos))
            else:
                forced.append((prev, pos))
        last_seen[col] = pos
    return forced, free


def _assemble(n: int, links: Iterable[tuple[int, int]]) -> SetPartition:
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in links:
        parent[find(y)] = find(x)
    groups: dict[int, list[int]] = {}
    for x in range(1, n + 1):
        groups.setdefault(find(x), []).append(x)
    return SetPartition(n, tuple(tuple(g) for g in groups.values()))


def _require_reduced(w: MotzkinWord) -> None:
    if not w.is_reduced:
        raise PreconditionViolation(f"{w} is not reduced")


def enumerate_adapted(
    w: MotzkinWord, irreducible_only: bool = False, method: str = "gaps"
) -> list[AdaptedPartition]:
    """All of ``M(w)`` (or ``M_irr(w)``) in canonical order.

    ``method="filter"`` scans ``NC(n)`` instead and is meant as a test oracle.
    """
    _require_reduced(w)
    n = len(w)
    if method == "filter":
        found = (try_adapt(p, w) for p in enumerate_nc(n))
        out = [a for a in found if a is not None]
        if irreducible_only:
            out = [a for a in out if n in a.partition.blocks[0]]
        return out
    if method != "gaps":
        raise ValueError(f"unknown method {method!r}")
    forced, free = _gaps(w)
    if irreducible_only:
        forced = forced + [(x, y) for col, x, y in free if col == 1]
        free = [g for g in free if g[0] != 1]
    out = []
    for bits in itertools.product((False, True), repeat=len(free)):
        links = forced + [(x, y) for (_, x, y), on in zip(free, bits) if on]
        out.append(adapt(_assemble(n, links), w))
    out.sort(key=lambda a: a.partition)
    return out


def least_element(w: MotzkinWord) -> AdaptedPartition:
    """``0̂_w``: join letters only across higher subwords, otherwise singletons."""
    _require_reduced(w)
    forced, _ = _gaps(w)
    return adapt(_assemble(len(w), forced), w)


def greatest_element(w: MotzkinWord) -> AdaptedPartition:
    """``1̂_w``: merge every pair of consecutive same-color letters within a run."""
    _require_reduced(w)
    forced, free = _gaps(w)
    return adapt(_assemble(len(w), forced + [(x, y) for _, x, y in free]), w)


def refines(p: SetPartition, q: SetPartition) -> bool:
    """True iff every block of ``p`` lies inside a block of ``q``."""
    if p.n != q.n:
        return False
    qi = q.block_index()
    return all(len({qi[x] for x in b}) == 1 for b in p.blocks)


def join_adapted(p1: AdaptedPartition, p2: AdaptedPartition) -> AdaptedPartition:
    """Least upper bound in ``M(w)``, color by color.

    For each color ``j`` the blocks of both partitions restrict to interval
    partitions of the subsequence of ``j``-letters; their Boolean join keeps a
    link between neighbouring ``j``-letters when either partition does.
    """
    if p1.word != p2.word:
        raise WordMismatch(f"{p1.word} vs {p2.word}")
    w = p1.word
    i1, i2 = p1.partition.block_index(), p2.partition.block_index()
    links = []
    for j in sorted(set(w.colors)):
        letters = [x for x in range(1, len(w) + 1) if w[x - 1] == j]
        for x, y in zip(letters, letters[1:]):
            if i1[x] == i1[y] or i2[x] == i2[y]:
                links.append((x, y))
    return adapt(_assemble(len(w), links), w)


def adapted_covers(w: MotzkinWord, irreducible_only: bool = False):
    """Covering pairs ``(finer, coarser)`` of ``M(w)`` under refinement.

    ``M(w)`` is graded by the number of blocks, so a cover is a refinement
    that merges exactly two blocks.
    """
    elems = enumerate_adapted(w, irreducible_only)
    by_size: dict[int, list[AdaptedPartition]] = {}
    for a in elems:
        by_size.setdefault(len(a.partition), []).append(a)
    edges = []
    for a in elems:
        for b in by_size.get(len(a.partition) - 1, []):
            if refines(a.partition, b.partition):
                edges.append((a, b))
    return edges


# ---------------------------------------------------------------- labels

def passes_labeling(
    a: AdaptedPartition | SetPartition,
    labels: Sequence[Hashable],
    mode: str = "monotone-chains",
) -> bool:
    """Label check for ``M(w,ℓ)`` (``monotone-chains``) or ``NC(n,ℓ)`` (``all-chains``).

    Labels must be constant on blocks.  In ``monotone-chains`` mode a block and
    its nearest outer block must carry different labels when the block sits
    strictly higher; ``all-chains`` demands this for every nearest-outer pair.
    """
    if isinstance(a, AdaptedPartition):
        part = a.partition
        info = [(bi.color, bi.outer) for bi in a.info]
    else:
        part = a
        info = depth_and_outer(part)
    if len(labels) != part.n:
        raise LengthMismatch(f"{len(labels)} labels for {part.n} points")
    block_labels = []
    for b in part.blocks:
        ls = {labels[x - 1] for x in b}
        if len(ls) != 1:
            return False
        block_labels.append(ls.pop())
    for k, (height, outer) in enumerate(info):
        if outer is None:
            continue
        if mode == "monotone-chains":
            if info[outer][0] >= height:
                continue
        elif mode != "all-chains":
            raise ValueError(f"unknown mode {mode!r}")
        if block_labels[k] == block_labels[outer]:
            return False
    return True


def filter_by_label(partitions, labels: Sequence[Hashable], mode: str = "monotone-chains") -> list:
    return [p for p in partitions if passes_labeling(p, labels, mode)]


def admissible_labelings(
    a: AdaptedPartition, alphabet: Sequence[Hashable], mode: str = "monotone-chains"
) -> list[tuple]:
    """``L(π)``: all labelings over ``alphabet`` that ``a`` passes."""
    n = a.partition.n
    out = []
    for choice in itertools.product(alphabet, repeat=len(a.partition)):
        labels = [None] * n
        for b, lab in zip(a.partition.blocks, choice):
            for x in b:
                labels[x - 1] = lab
        if passes_labeling(a, labels, mode):
            out.append(tuple(labels))
    return out


def catalan_decomposition(n: int) -> list[tuple[MotzkinWord, int]]:
    """``(w, c(w))`` over ``w`` in ``M_{n+1}`` where ``c(w) = |M_irr(w)|``."""
    if n < 1:
        raise PreconditionViolation("n must be at least 1")
    out = []
    for w in enumerate_reduced(n + 1):
        forced, free = _gaps(w)
        out.append((w, 2 ** sum(1 for g in free if g[0] >= 2)))
    return out
