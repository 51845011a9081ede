"""Motzkin words, their enumeration, and the pointwise lattice on ``M_n``.

A Motzkin word ``s_{j_1} ... s_{j_n}`` is stored as its color tuple
``(j_1, ..., j_n)``.  Words of height 1 are *reduced*; they index the
path-dependent functionals evaluated in :mod:`motzkin_functionals.engine`.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "MAX_LENGTH",
    "MotzkinWordError",
    "StepViolation",
    "EndpointMismatch",
    "FloorViolation",
    "LengthMismatch",
    "PreconditionViolation",
    "WordParseError",
    "MotzkinWord",
    "EmptyWord",
    "EMPTY",
    "MaybeEmptyWord",
    "Comparison",
    "validate",
    "parse_word",
    "enumerate_reduced",
    "enumerate_words",
    "motzkin_count",
    "compare",
    "lattice_join",
    "lattice_meet",
    "greatest_word",
    "constant_word",
    "first_return_decompose",
    "shift_down",
    "shift_up",
    "concatenate",
    "is_reduced_motzkin",
    "word_covers",
]

MAX_LENGTH = 64


class MotzkinWordError(ValueError):
    """Base class for invalid Motzkin word input."""


class StepViolation(MotzkinWordError):
    pass


class EndpointMismatch(MotzkinWordError):
    pass


class FloorViolation(MotzkinWordError):
    pass


class LengthMismatch(MotzkinWordError):
    pass


class PreconditionViolation(MotzkinWordError):
    pass


class WordParseError(MotzkinWordError):
    pass


def _check_colors(colors: Sequence[int]) -> tuple[int, ...]:
    cols = tuple(colors)
    if not cols:
        raise MotzkinWordError("a Motzkin word must be nonempty; use EMPTY for the empty word")
    if len(cols) > MAX_LENGTH:
        raise MotzkinWordError(f"word length {len(cols)} exceeds the limit {MAX_LENGTH}")
    for c in cols:
        if isinstance(c, bool) or not isinstance(c, int) or c < 1:
            raise MotzkinWordError(f"colors must be positive integers, got {c!r}")
    for k in range(1, len(cols)):
        if abs(cols[k] - cols[k - 1]) > 1:
            raise StepViolation(
                f"step {cols[k - 1]}->{cols[k]} at position {k + 1} exceeds 1"
            )
    if cols[0] != cols[-1]:
        raise EndpointMismatch(f"endpoints differ: first {cols[0]}, last {cols[-1]}")
    low = min(cols)
    if low < cols[0]:
        raise FloorViolation(f"color {low} drops below the height {cols[0]}")
    return cols


@dataclass(frozen=True, order=True)
class MotzkinWord:
    """A nonempty Motzkin word, validated on construction.

    >>> w = MotzkinWord((1, 2, 1))
    >>> w.height, w.is_reduced, str(w)
    (1, True, 's1.s2.s1')
    """

    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "colors", _check_colors(self.colors))

    @property
    def height(self) -> int:
        return self.colors[0]

    @property
    def is_reduced(self) -> bool:
        return self.colors[0] == 1

    @property
    def is_constant(self) -> bool:
        return len(set(self.colors)) == 1

    @property
    def max_color(self) -> int:
        return max(self.colors)

    def __len__(self) -> int:
        return len(self.colors)

    def __iter__(self) -> Iterator[int]:
        return iter(self.colors)

    def __getitem__(self, k: int) -> int:
        return self.colors[k]

    def __str__(self) -> str:
        return ".".join(f"s{c}" for c in self.colors)

    def to_json(self) -> list[int]:
        return list(self.colors)


class EmptyWord:
    """The empty word; a singleton kept apart from :class:`MotzkinWord`."""

    _instance: "EmptyWord | None" = None

    def __new__(cls) -> "EmptyWord":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    colors: tuple[int, ...] = ()
    height = None
    is_reduced = True

    def __len__(self) -> int:
        return 0

    def __iter__(self) -> Iterator[int]:
        return iter(())

    def __repr__(self) -> str:
        return "EMPTY"

    def __str__(self) -> str:
        return "∅"

    def __reduce__(self):
        return (EmptyWord, ())

    def to_json(self) -> list[int]:
        return []


EMPTY = EmptyWord()
MaybeEmptyWord = Union[MotzkinWord, EmptyWord]


def validate(colors: Sequence[int]) -> MotzkinWord:
    """Return ``colors`` as a :class:`MotzkinWord` or raise the matching error."""
    return MotzkinWord(tuple(colors))


def is_reduced_motzkin(colors: Sequence[int]) -> bool:
    """True iff ``colors`` is a nonempty reduced Motzkin word (no exception)."""
    cols = tuple(colors)
    if not cols or cols[0] != 1 or cols[-1] != 1:
        return False
    prev = 1
    for c in cols:
        if c < 1 or abs(c - prev) > 1:
            return False
        prev = c
    return True


_TOKEN = re.compile(r"s(\d+)")


def parse_word(text: str) -> MaybeEmptyWord:
    """Parse ``s1.s2.s1``; an empty string (or ``∅``) gives :data:`EMPTY`."""
    text = text.strip()
    if text in ("", "∅", "empty"):
        return EMPTY
    colors = []
    for token in text.split("."):
        m = _TOKEN.fullmatch(token.strip())
        if m is None:
            raise WordParseError(f"cannot parse letter {token!r} in {text!r}")
        colors.append(int(m.group(1)))
    return validate(colors)


@lru_cache(maxsize=None)
def _reduced_tuples(n: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []
    path = [1]

    def extend() -> None:
        k = len(path)
        if k == n:
            if path[-1] == 1:
                out.append(tuple(path))
            return
        last = path[-1]
        for c in (last - 1, last, last + 1):
            # colour c at index k must still be able to come back down to 1
            if c >= 1 and c - 1 <= n - 1 - k:
                path.append(c)
                extend()
                path.pop()

    extend()
    return tuple(out)


def enumerate_reduced(n: int) -> list[MotzkinWord]:
    """All of ``M_n`` in ascending lexicographic order of colors."""
    _require_length(n)
    return [MotzkinWord(c) for c in _reduced_tuples(n)]


def enumerate_words(n: int, height: int = 1) -> list[MotzkinWord]:
    """All Motzkin words of length ``n`` and the given height, lexicographic."""
    if height < 1:
        raise PreconditionViolation("height must be positive")
    return [shift_up(w, height - 1) for w in enumerate_reduced(n)]


@lru_cache(maxsize=None)
def motzkin_count(n: int) -> int:
    """``|M_n|`` via the first-return recursion (1, 1, 2, 4, 9, 21, ...)."""
    if n < 1:
        raise PreconditionViolation("n must be at least 1")
    if n == 1:
        return 1
    return motzkin_count(n - 1) + sum(
        motzkin_count(k) * motzkin_count(n - k - 1) for k in range(1, n - 1)
    )


def _require_length(n: int) -> None:
    if n < 1:
        raise PreconditionViolation("n must be at least 1")
    if n > MAX_LENGTH:
        raise PreconditionViolation(f"n={n} exceeds the limit {MAX_LENGTH}")


class Comparison(enum.Enum):
    LESS = "<"
    GREATER = ">"
    EQUAL = "="
    INCOMPARABLE = "incomparable"


def _same_length(w1: MotzkinWord, w2: MotzkinWord) -> None:
    if len(w1) != len(w2):
        raise LengthMismatch(f"lengths differ: {len(w1)} vs {len(w2)}")


def compare(w1: MotzkinWord, w2: MotzkinWord) -> Comparison:
    """Pointwise order on color sequences of equal length."""
    _same_length(w1, w2)
    le = all(a <= b for a, b in zip(w1.colors, w2.colors))
    ge = all(a >= b for a, b in zip(w1.colors, w2.colors))
    if le and ge:
        return Comparison.EQUAL
    if le:
        return Comparison.LESS
    if ge:
        return Comparison.GREATER
    return Comparison.INCOMPARABLE


def lattice_join(w1: MotzkinWord, w2: MotzkinWord) -> MotzkinWord:
    _same_length(w1, w2)
    return MotzkinWord(tuple(map(max, w1.colors, w2.colors)))


def lattice_meet(w1: MotzkinWord, w2: MotzkinWord) -> MotzkinWord:
    _same_length(w1, w2)
    return MotzkinWord(tuple(map(min, w1.colors, w2.colors)))


def constant_word(n: int, color: int = 1) -> MotzkinWord:
    _require_length(n)
    return MotzkinWord((color,) * n)


def greatest_word(n: int) -> MotzkinWord:
    """Top of ``M_n``: ``s_1 s_2 ... s_k ... s_2 s_1`` (a plateau of two when n is even)."""
    _require_length(n)
    return MotzkinWord(tuple(min(k + 1, n - k) for k in range(n)))


def first_return_decompose(w: MotzkinWord) -> tuple[MotzkinWord, MotzkinWord]:
    """Split ``w = s_1 w_1 w_2`` at the first return to color 1.

    ``w_1`` has height 2, ``w_2`` is reduced and starts at that return.
    """
    c = w.colors
    if len(c) < 3 or c[0] != 1 or c[1] != 2:
        raise PreconditionViolation(
            f"{w} must be reduced, of length at least 3, and start with s1.s2"
        )
    r = c.index(1, 1)
    return MotzkinWord(c[1:r]), MotzkinWord(c[r:])


def shift_down(w: MotzkinWord) -> MotzkinWord:
    if w.height < 2:
        raise PreconditionViolation(f"{w} has height 1 and cannot be shifted down")
    return MotzkinWord(tuple(c - 1 for c in w.colors))


def shift_up(w: MotzkinWord, by: int = 1) -> MotzkinWord:
    return MotzkinWord(tuple(c + by for c in w.colors))


def concatenate(*parts: Iterable[int] | MaybeEmptyWord) -> tuple[int, ...]:
    """Concatenate color sequences; the result is not validated."""
    out: list[int] = []
    for p in parts:
        out.extend(p)
    return tuple(out)


def word_covers(n: int) -> list[tuple[MotzkinWord, MotzkinWord]]:
    """Covering pairs ``(lower, upper)`` of the lattice ``M_n``.

    Covers in ``M_n`` raise exactly one letter by one color, so they are
    generated directly instead of by comparing all pairs.
    """
    edges = []
    for w in enumerate_reduced(n):
        c = w.colors
        for k in range(1, n - 1):
            if c[k - 1] >= c[k] and c[k + 1] >= c[k]:
                edges.append((w, MotzkinWord(c[:k] + (c[k] + 1,) + c[k + 1:])))
    edges.sort(key=lambda e: (e[0].colors, e[1].colors))
    return edges
