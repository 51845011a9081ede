"""Abstract noncommutative probability spaces given by finite moment tables.

An algebra ``(A_i, φ_i)`` is described by a label, a set of generator names
and the values of ``φ_i`` on every generator word up to ``max_order``.
Elements are noncommutative polynomials over one algebra with rational
coefficients; the empty word is the unit ``1_i``.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

__all__ = [
    "AlgebraError",
    "OrderExceeded",
    "LabelMismatch",
    "SchemaError",
    "Element",
    "AlgebraSpec",
    "to_fraction",
    "format_fraction",
    "moment",
    "boolean_cumulant",
    "interval_moment_sum",
    "parse_polynomial",
    "random_spec",
    "random_element",
]

Word = tuple[str, ...]


class AlgebraError(ValueError):
    pass


class OrderExceeded(AlgebraError):
    pass


class LabelMismatch(AlgebraError):
    pass


class SchemaError(AlgebraError):
    pass


def to_fraction(value) -> Fraction:
    """Accept ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SchemaError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational: {value!r}") from exc
    raise SchemaError(f"not a rational: {value!r} (use an integer or a 'p/q' string)")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Element:
    """A polynomial ``Σ c_u u`` over the generators of algebra ``label``.

    ``terms`` is a sorted tuple of ``(word, coefficient)`` with nonzero
    coefficients; the unit is the empty word.
    """

    label: Hashable
    terms: tuple[tuple[Word, Fraction], ...]

    def __post_init__(self) -> None:
        acc: dict[Word, Fraction] = {}
        for word, coef in self.terms:
            word = tuple(word)
            acc[word] = acc.get(word, Fraction(0)) + to_fraction(coef)
        clean = tuple(sorted((w, c) for w, c in acc.items() if c != 0))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def unit(cls, label: Hashable, scale=1) -> "Element":
        return cls(label, (((), to_fraction(scale)),))

    @classmethod
    def gen(cls, label: Hashable, *names: str) -> "Element":
        """The monomial ``names[0] names[1] ...`` (the unit when no names)."""
        return cls(label, ((tuple(names), Fraction(1)),))

    @classmethod
    def zero(cls, label: Hashable) -> "Element":
        return cls(label, ())

    @property
    def degree(self) -> int:
        return max((len(w) for w, _ in self.terms), default=0)

    def scalar_part(self) -> Fraction | None:
        """The scalar ``c`` if the element equals ``c·1``, else ``None``."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and self.terms[0][0] == ():
            return self.terms[0][1]
        return None

    @property
    def is_unit(self) -> bool:
        return self.scalar_part() == 1

    def _check(self, other: "Element") -> None:
        if other.label != self.label:
            raise LabelMismatch(f"cannot combine elements of {self.label!r} and {other.label!r}")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.label, self.terms + other.terms)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return self.scale(-1)

    def scale(self, c) -> "Element":
        c = to_fraction(c)
        return Element(self.label, tuple((w, c * x) for w, x in self.terms))

    def __rmul__(self, c) -> "Element":
        return self.scale(c)

    def __mul__(self, other) -> "Element":
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        return Element(
            self.label,
            tuple((u + v, a * b) for u, a in self.terms for v, b in other.terms),
        )

    def words(self) -> Iterable[Word]:
        return (w for w, _ in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            mono = "*".join(w) if w else "1"
            if c == 1:
                parts.append(mono)
            elif w:
                parts.append(f"{format_fraction(c)}*{mono}")
            else:
                parts.append(format_fraction(c))
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class AlgebraSpec:
    """Label, generator names and the moment table of ``φ_i``.

    Every generator word of length at most ``max_order`` must be tabulated,
    and the empty word must map to 1.
    """

    label: Hashable
    generators: tuple[str, ...]
    moments: Mapping[Word, Fraction] = field(hash=False, compare=False)
    max_order: int = -1

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise SchemaError(f"duplicate generator names in algebra {self.label!r}")
        if not gens:
            raise SchemaError(f"algebra {self.label!r} has no generators")
        for g in gens:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", g):
                raise SchemaError(f"bad generator name {g!r}")
        table = {tuple(w): to_fraction(v) for w, v in dict(self.moments).items()}
        for w in table:
            if any(g not in gens for g in w):
                raise SchemaError(f"moment word {w} uses unknown generators in {self.label!r}")
        if table.get(()) != 1:
            raise SchemaError(f"algebra {self.label!r}: the empty word must have moment 1")
        order = self.max_order
        if order < 0:
            order = max(len(w) for w in table)
        for k in range(order + 1):
            for w in itertools.product(gens, repeat=k):
                if w not in table:
                    raise SchemaError(
                        f"algebra {self.label!r}: missing moment for {'*'.join(w)} (order {k})"
                    )
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "moments", table)
        object.__setattr__(self, "max_order", order)

    def phi(self, x: Element) -> Fraction:
        return moment(self, x)

    def element(self, text: str) -> Element:
        return parse_polynomial(self.label, text, self.generators)


def moment(spec: AlgebraSpec, x: Element) -> Fraction:
    """Linear extension of the moment table to ``x``."""
    if x.label != spec.label:
        raise LabelMismatch(f"element of {x.label!r} evaluated in {spec.label!r}")
    total = Fraction(0)
    for w, c in x.terms:
        if len(w) > spec.max_order:
            raise OrderExceeded(
                f"word of order {len(w)} exceeds the table order {spec.max_order} of {spec.label!r}"
            )
        total += c * spec.moments[w]
    return total


def _product(xs: Sequence[Element]) -> Element:
    out = xs[0]
    for x in xs[1:]:
        out = out * x
    return out


def boolean_cumulant(spec: AlgebraSpec, args: Sequence[Element]) -> Fraction:
    """``B_n(z_1, ..., z_n)`` by inverting moments over interval partitions.

    >>> s = AlgebraSpec("A", ("x",), {(): 1, ("x",): 2, ("x", "x"): 5})
    >>> x = Element.gen("A", "x")
    >>> boolean_cumulant(s, [x, x])
    Fraction(1, 1)
    """
    n = len(args)
    if n == 0:
        raise AlgebraError("boolean cumulants need at least one argument")
    # phi[i][j] = φ(z_i ... z_{j-1})
    phi = {}
    for i in range(n):
        acc = args[i]
        phi[i, i + 1] = moment(spec, acc)
        for j in range(i + 1, n):
            acc = acc * args[j]
            phi[i, j + 1] = moment(spec, acc)
    # only prefixes of the argument list appear in the recursion
    prefix = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        prefix[m] = phi[0, m] - sum(prefix[k] * phi[k, m] for k in range(1, m))
    return prefix[n]


def interval_moment_sum(spec: AlgebraSpec, args: Sequence[Element]) -> Fraction:
    """``Σ_{π ∈ I(n)} Π_V B(V)``; equals ``φ(z_1 ⋯ z_n)`` by construction."""
    n = len(args)
    total = Fraction(0)
    for cuts in itertools.product((False, True), repeat=n - 1):
        bounds = [0] + [k + 1 for k, c in enumerate(cuts) if c] + [n]
        term = Fraction(1)
        for lo, hi in zip(bounds, bounds[1:]):
            term *= boolean_cumulant(spec, args[lo:hi])
        total += term
    return total


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*)?)?
        (?P<mono>[A-Za-z_][A-Za-z0-9_]*(?:\s*\*\s*[A-Za-z_][A-Za-z0-9_]*)*)?\s*""",
    re.VERBOSE,
)


def parse_polynomial(label: Hashable, text: str, generators: Sequence[str] | None = None) -> Element:
    """Parse ``"2*x*y - 1/3*y + 1"`` into an :class:`Element` of ``label``.

    A bare ``1`` (or a coefficient alone) is a multiple of the unit.
    """
    text = text.strip()
    if not text:
        raise SchemaError("empty polynomial")
    terms = []
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise SchemaError(f"cannot parse polynomial {text!r} near {text[pos:]!r}")
        if not first and m.group("sign") is None:
            raise SchemaError(f"missing operator in {text!r} near {text[pos:]!r}")
        coef_s, mono_s = m.group("coef"), m.group("mono")
        if coef_s is None and mono_s is None:
            raise SchemaError(f"empty term in {text!r}")
        coef = Fraction(coef_s) if coef_s else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        word: Word = ()
        if mono_s:
            word = tuple(g.strip() for g in mono_s.split("*"))
            if generators is not None:
                for g in word:
                    if g not in generators:
                        raise SchemaError(f"unknown generator {g!r} for algebra {label!r}")
        terms.append((word, coef))
        pos = m.end()
        first = False
    return Element(label, tuple(terms))


def random_spec(
    rng: random.Random,
    label: Hashable,
    generators: Sequence[str] = ("x",),
    max_order: int = 6,
    max_numerator: int = 6,
    max_denominator: int = 4,
) -> AlgebraSpec:
    """A moment table with random small rationals (no positivity is imposed)."""
    table: dict[Word, Fraction] = {(): Fraction(1)}
    for k in range(1, max_order + 1):
        for w in itertools.product(generators, repeat=k):
            table[w] = Fraction(
                rng.randint(-max_numerator, max_numerator), rng.randint(1, max_denominator)
            )
    return AlgebraSpec(label, tuple(generators), table, max_order)


def random_element(
    rng: random.Random,
    spec: AlgebraSpec,
    unit_weight: bool = True,
    max_terms: int = 2,
) -> Element:
    """A random degree-one polynomial, optionally with a unit component."""
    terms = []
    for g in rng.sample(spec.generators, k=min(len(spec.generators), rng.randint(1, max_terms))):
        terms.append(((g,), Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3))))
    if unit_weight and rng.random() < 0.4:
        terms.append(((), Fraction(rng.randint(-2, 2), rng.randint(1, 2))))
    return Element(spec.label, tuple(terms))
