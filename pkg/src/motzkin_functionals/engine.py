"""Exact evaluation of the Motzkin functionals ``φ(w)`` / ``ψ(w)``.

Everything here is multilinear in an argument tuple ``(a_1, ..., a_n)`` with
``a_k`` living in algebra ``i_k``.  Three independent algorithms are
provided:

* ``partition``: sum of ``β(π)`` over monotonically adapted labelled partitions;
* ``singleton``: inclusion-exclusion over the scalar parts of an ascending prefix;
* ``first-return``: split ``w = s_1 w_1 w_2`` at the first return to color 1.

The free and boolean products of the states are sums of these functionals
over all reduced words and over constant words, respectively.  An
independent centering recursion for the free product is included as an
oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .algebra import AlgebraError, AlgebraSpec, Element, LabelMismatch, boolean_cumulant, moment
from .partitions import (
    AdaptedPartition,
    enumerate_adapted,
    enumerate_nc,
    filter_by_label,
    passes_labeling,
)
from .words import (
    EMPTY,
    EmptyWord,
    LengthMismatch,
    MaybeEmptyWord,
    MotzkinWord,
    constant_word,
    enumerate_reduced,
    is_reduced_motzkin,
)

__all__ = [
    "NonAlternatingLabels",
    "AlgebraSystem",
    "Normalized",
    "FormalSeries",
    "ENGINES",
    "compress",
    "normalize_word",
    "beta",
    "psi",
    "psi_partition_sum",
    "psi_singleton_recursion",
    "psi_first_return",
    "psi_of_product",
    "psi_series",
    "free_product_moment",
    "boolean_product_moment",
    "free_product_oracle",
    "nc_moment_sum",
    "cumulant_B_of_word",
    "cumulant_B_by_inversion",
    "free_boolean_cumulant",
    "nc_irr_cumulant_sum",
]

ONE = Fraction(1)
ZERO = Fraction(0)


class NonAlternatingLabels(AlgebraError):
    pass


class AlgebraSystem:
    """A family of algebras ``(A_i, φ_i)`` indexed by label, with memoized evaluation."""

    def __init__(self, specs: Iterable[AlgebraSpec]):
        self.specs: dict[Hashable, AlgebraSpec] = {}
        for s in specs:
            if s.label in self.specs:
                raise AlgebraError(f"duplicate algebra label {s.label!r}")
            self.specs[s.label] = s
        self._phi: dict[Element, Fraction] = {}
        self._cum: dict[tuple[Element, ...], Fraction] = {}

    def spec(self, label: Hashable) -> AlgebraSpec:
        try:
            return self.specs[label]
        except KeyError:
            raise LabelMismatch(f"unknown algebra label {label!r}") from None

    @property
    def labels(self) -> list[Hashable]:
        return list(self.specs)

    def phi(self, x: Element) -> Fraction:
        v = self._phi.get(x)
        if v is None:
            v = self._phi[x] = moment(self.spec(x.label), x)
        return v

    def cumulant(self, args: Sequence[Element]) -> Fraction:
        key = tuple(args)
        v = self._cum.get(key)
        if v is None:
            labels = {a.label for a in key}
            if len(labels) != 1:
                raise LabelMismatch(f"boolean cumulant over several algebras {labels}")
            v = self._cum[key] = boolean_cumulant(self.spec(key[0].label), key)
        return v

    def centered(self, x: Element) -> Element:
        return x - Element.unit(x.label, self.phi(x))

    def max_order(self) -> int:
        return min(s.max_order for s in self.specs.values())


def _colors(w) -> tuple[int, ...]:
    if isinstance(w, (MotzkinWord, EmptyWord)):
        return w.colors
    return tuple(w)


def _labels(args: Sequence[Element]) -> tuple:
    return tuple(a.label for a in args)


def _alternating(args: Sequence[Element]) -> bool:
    return all(x.label != y.label for x, y in zip(args, args[1:]))


# ---------------------------------------------------------------- normalization

@dataclass(frozen=True)
class Normalized:
    """``scale · φ(colors)(args)`` with alternating labels; ``scale == 0`` means Zero."""

    colors: tuple[int, ...]
    args: tuple[Element, ...]
    scale: Fraction = ONE

    @property
    def is_zero(self) -> bool:
        return self.scale == 0


_ZERO_NORM = Normalized((), (), ZERO)


def compress(colors: Sequence[int], args: Sequence[Element]) -> Normalized:
    """Homomorphic property only: merge equal (label, color) neighbours.

    Equal neighbouring labels with different colors make the value vanish.
    """
    cols: list[int] = []
    out: list[Element] = []
    for c, a in zip(colors, args):
        if out and out[-1].label == a.label:
            if cols[-1] != c:
                return _ZERO_NORM
            out[-1] = out[-1] * a
        else:
            cols.append(c)
            out.append(a)
    return Normalized(tuple(cols), tuple(out))


def _delete(norm: Normalized, r: int, factor: Fraction) -> Normalized:
    """Drop position ``r`` and re-merge the neighbours that become adjacent."""
    cols = norm.colors[:r] + norm.colors[r + 1:]
    args = norm.args[:r] + norm.args[r + 1:]
    again = compress(cols, args)
    if again.is_zero:
        return _ZERO_NORM
    return Normalized(again.colors, again.args, norm.scale * factor)


def normalize_word(system: AlgebraSystem, w, args: Sequence[Element]) -> Normalized:
    """Compress, factor out scalar arguments, and strip units where allowed.

    Units are removed by the reduction property (unit after a centered,
    color-ascending prefix) and by its mirror image (unit before a centered,
    color-descending suffix).  The multiple reduction of leading units is the
    first rule applied repeatedly at position 1.
    """
    colors = _colors(w)
    if len(colors) != len(args):
        raise LengthMismatch(f"word of length {len(colors)} with {len(args)} arguments")
    norm = compress(colors, args)
    changed = True
    while changed and not norm.is_zero and norm.args:
        changed = False
        cols, xs = norm.colors, norm.args
        n = len(xs)
        for r, x in enumerate(xs):
            s = x.scalar_part()
            if s is None:
                continue
            if s == 0:
                return _ZERO_NORM
            if s != 1:
                # pull the scalar out and keep a genuine unit in place
                xs = xs[:r] + (Element.unit(x.label),) + xs[r + 1:]
                norm = Normalized(cols, xs, norm.scale * s)
            if all(system.phi(y) == 0 for y in xs[:r]):
                if cols[: r + 1] == tuple(range(1, r + 2)):
                    norm = _delete(norm, r, ONE)
                else:
                    return _ZERO_NORM
                changed = True
                break
            if all(system.phi(y) == 0 for y in xs[r + 1:]):
                if cols[r:][::-1] == tuple(range(1, n - r + 1)):
                    norm = _delete(norm, r, ONE)
                else:
                    return _ZERO_NORM
                changed = True
                break
    return norm


# ---------------------------------------------------------------- β and engines

def beta(system: AlgebraSystem, partition, args: Sequence[Element]) -> Fraction:
    """``β(π) = Π_V B(a_V)``; each block must stay within one algebra."""
    part = partition.partition if isinstance(partition, AdaptedPartition) else partition
    if part.n != len(args):
        raise LengthMismatch(f"partition of {part.n} points with {len(args)} arguments")
    value = ONE
    for b in part.blocks:
        block_args = [args[x - 1] for x in b]
        if len({a.label for a in block_args}) != 1:
            raise LabelMismatch(f"block {b} mixes algebras")
        value *= system.cumulant(block_args)
        if value == 0:
            break
    return value


def psi_partition_sum(system: AlgebraSystem, w, args: Sequence[Element]) -> Fraction:
    """``Σ_{π ∈ M(w,ℓ)} β(π)``; labels need not alternate."""
    colors = _colors(w)
    if len(colors) != len(args):
        raise LengthMismatch(f"word of length {len(colors)} with {len(args)} arguments")
    if not colors:
        return ONE
    if not is_reduced_motzkin(colors):
        return ZERO
    labels = _labels(args)
    total = ZERO
    for p in enumerate_adapted(MotzkinWord(colors)):
        if passes_labeling(p, labels):
            total += beta(system, p, args)
    return total


def _require_alternating(args: Sequence[Element]) -> None:
    if not _alternating(args):
        raise NonAlternatingLabels(
            f"labels {_labels(args)} repeat at neighbouring positions; compress first"
        )


def _prefix_length(colors: tuple[int, ...]) -> int:
    m = 0
    while m < len(colors) and colors[m] == m + 1:
        m += 1
    return m


def _singleton(system: AlgebraSystem, colors, args, memo) -> Fraction:
    norm = compress(colors, args)
    if norm.is_zero:
        return ZERO
    colors, args = norm.colors, norm.args
    if not colors:
        return ONE
    if not is_reduced_motzkin(colors):
        return ZERO
    key = (colors, args)
    if key in memo:
        return memo[key]
    n = len(colors)
    if n == 1:
        memo[key] = system.phi(args[0])
        return memo[key]
    phis = [system.phi(a) for a in args]
    total = ZERO
    for m in range(1, _prefix_length(colors) + 1):
        for r in range(m):
            for rest in itertools.combinations(range(m - 1), r):
                A = rest + (m - 1,)
                coef = ONE
                for k in A:
                    coef *= phis[k]
                if coef == 0:
                    continue
                sign = -1 if len(A) % 2 == 0 else 1
                B = [k for k in range(n) if k not in A]
                sub = _singleton(
                    system, tuple(colors[k] for k in B), tuple(args[k] for k in B), memo
                )
                total += sign * coef * sub
    memo[key] = total
    return total


def psi_singleton_recursion(system: AlgebraSystem, w, args: Sequence[Element]) -> Fraction:
    """Inclusion-exclusion over sets ``A`` of scalar positions in an ascending prefix.

    ``ψ(w)(a) = Σ_A (-1)^{|A|-1} Π_{k∈A} φ(a_k) ψ(w_B)(a_B)`` where the colors
    at positions ``1..max A`` are exactly ``1, 2, ..., max A``.
    """
    colors = _colors(w)
    if len(colors) != len(args):
        raise LengthMismatch(f"word of length {len(colors)} with {len(args)} arguments")
    _require_alternating(args)
    return _singleton(system, colors, tuple(args), {})


def _first_return(system: AlgebraSystem, colors, args, memo) -> Fraction:
    norm = compress(colors, args)
    if norm.is_zero:
        return ZERO
    colors, args = norm.colors, norm.args
    if not colors:
        return ONE
    if not is_reduced_motzkin(colors):
        return ZERO
    key = (colors, args)
    if key in memo:
        return memo[key]
    if len(colors) == 1:
        val = system.phi(args[0])
    elif colors[1] == 1:
        val = system.phi(args[0]) * _first_return(system, colors[1:], args[1:], memo)
    else:
        r = colors.index(1, 1)
        w1 = tuple(c - 1 for c in colors[1:r])
        lab = args[0].label
        if any(colors[t] == 2 and args[t].label == lab for t in range(1, r)):
            # conditional orthogonality: a color-2 letter sharing the outer label kills the moment
            head = ZERO
        else:
            head = _first_return(system, w1, args[1:r], memo)
        if head == 0:
            val = ZERO
        else:
            joined = _first_return(system, (1,) + colors[r:], (args[0],) + args[r:], memo)
            tail = _first_return(system, colors[r:], args[r:], memo)
            val = head * (joined - system.phi(args[0]) * tail)
    memo[key] = val
    return val


def psi_first_return(system: AlgebraSystem, w, args: Sequence[Element]) -> Fraction:
    """``ψ(w) = ψ(w̃_1)(ψ(s_1 w_2) − φ(a_1) ψ(w_2))`` for ``w = s_1 w_1 w_2``.

    The factorization needs one extra vanishing rule: if a color-2 letter of
    ``w_1`` carries the label of ``a_1``, the moment is 0 (conditional
    orthogonality of replicas).
    """
    colors = _colors(w)
    if len(colors) != len(args):
        raise LengthMismatch(f"word of length {len(colors)} with {len(args)} arguments")
    _require_alternating(args)
    return _first_return(system, colors, tuple(args), {})


ENGINES: dict[str, Callable[[AlgebraSystem, tuple, tuple], Fraction]] = {
    "partition": psi_partition_sum,
    "singleton": lambda s, c, a: _singleton(s, c, a, {}),
    "first-return": lambda s, c, a: _first_return(s, c, a, {}),
}


def psi(system: AlgebraSystem, w, args: Sequence[Element], engine: str = "partition") -> Fraction:
    """Evaluate ``φ(w)(a_1, ..., a_n)`` (equivalently ``ψ(w)(a_1 ⋯ a_n)``).

    The arguments are normalized first; words that are not reduced Motzkin
    words after normalization give 0.  ``w`` may be a :class:`MotzkinWord`,
    :data:`EMPTY`, or a raw color sequence.
    """
    try:
        run = ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}; choose from {sorted(ENGINES)}") from None
    args = tuple(args)
    colors = _colors(w)
    if not colors and not args:
        return ONE
    norm = normalize_word(system, colors, args)
    if norm.is_zero:
        return ZERO
    if not norm.colors:
        return norm.scale
    if not is_reduced_motzkin(norm.colors):
        return ZERO
    return norm.scale * run(system, norm.colors, norm.args)


def psi_of_product(system: AlgebraSystem, w, factors: Sequence[Element], engine: str = "partition") -> Fraction:
    """Linear form ``ψ(w)(x_1 x_2 ⋯)``: the product is split where labels change."""
    groups: list[Element] = []
    for x in factors:
        if groups and groups[-1].label == x.label:
            groups[-1] = groups[-1] * x
        else:
            groups.append(x)
    return psi(system, w, groups, engine)


# ---------------------------------------------------------------- series and products

class FormalSeries:
    """Finitely supported coefficients ``γ_w`` over words (including :data:`EMPTY`)."""

    def __init__(self, coefficients: Mapping[MaybeEmptyWord, Fraction] | None = None):
        self.coefficients: dict[MaybeEmptyWord, Fraction] = {}
        for w, c in (coefficients or {}).items():
            if not isinstance(w, (MotzkinWord, EmptyWord)):
                w = MotzkinWord(tuple(w)) if len(w) else EMPTY
            c = Fraction(c)
            if c:
                self.coefficients[w] = c

    @classmethod
    def all_reduced(cls, max_length: int) -> "FormalSeries":
        """Indicator of ``M*`` truncated to lengths ``≤ max_length``."""
        coeffs: dict = {EMPTY: ONE}
        for n in range(1, max_length + 1):
            coeffs.update((w, ONE) for w in enumerate_reduced(n))
        return cls(coeffs)

    @classmethod
    def constant(cls, max_length: int) -> "FormalSeries":
        """Indicator of the constant words ``s_1^n`` (and ``∅``) up to ``max_length``."""
        coeffs: dict = {EMPTY: ONE}
        coeffs.update((constant_word(n), ONE) for n in range(1, max_length + 1))
        return cls(coeffs)

    def __len__(self) -> int:
        return len(self.coefficients)


def psi_series(system: AlgebraSystem, gamma: FormalSeries, args: Sequence[Element], engine: str = "partition") -> Fraction:
    """``Σ_w γ_w φ(w)(args)`` over the words whose length matches ``args``."""
    total = ZERO
    for w, c in gamma.coefficients.items():
        if len(w) == len(args):
            total += c * psi(system, w, args, engine)
    return total


def free_product_moment(system: AlgebraSystem, args: Sequence[Element], engine: str = "partition") -> Fraction:
    """Free product state on ``a_1 ⋯ a_n`` as ``Σ_{w ∈ M_n} φ(w)(a_1, ..., a_n)``."""
    args = tuple(args)
    if not args:
        return ONE
    return sum((psi(system, w, args, engine) for w in enumerate_reduced(len(args))), ZERO)


def boolean_product_moment(system: AlgebraSystem, args: Sequence[Element], engine: str = "partition") -> Fraction:
    """Boolean product state on ``a_1 ⋯ a_n``: the constant word ``s_1^n`` alone."""
    args = tuple(args)
    if not args:
        return ONE
    return psi(system, constant_word(len(args)), args, engine)


def _merge_scalars(system: AlgebraSystem, args: Sequence[Element]) -> tuple[Fraction, tuple[Element, ...]]:
    """Unit identification: drop scalar factors and multiply same-label neighbours."""
    scale = ONE
    out: list[Element] = []
    for a in args:
        s = a.scalar_part()
        if s is not None:
            scale *= s
            continue
        if out and out[-1].label == a.label:
            out[-1] = out[-1] * a
            s = out[-1].scalar_part()
            if s is not None:
                scale *= s
                out.pop()
        else:
            out.append(a)
    return scale, tuple(out)


def free_product_oracle(system: AlgebraSystem, args: Sequence[Element]) -> Fraction:
    """Free product moment by the classical centering recursion.

    Each ``a_k`` is split as ``a_k° + φ(a_k)1``; products of centered
    elements from alternating algebras have zero expectation.
    """
    memo: dict[tuple[Element, ...], Fraction] = {}

    def run(xs: tuple[Element, ...]) -> Fraction:
        scale, xs = _merge_scalars(system, xs)
        if scale == 0 or not xs:
            return scale
        if xs in memo:
            return scale * memo[xs]
        if len(xs) == 1:
            val = system.phi(xs[0])
        else:
            n = len(xs)
            phis = [system.phi(x) for x in xs]
            cent = [system.centered(x) for x in xs]
            val = ZERO
            for r in range(1, n + 1):
                for S in itertools.combinations(range(n), r):
                    coef = ONE
                    for k in S:
                        coef *= phis[k]
                    if coef == 0:
                        continue
                    val += coef * run(tuple(cent[k] for k in range(n) if k not in S))
        memo[xs] = val
        return scale * val

    return run(tuple(args))


def nc_moment_sum(system: AlgebraSystem, args: Sequence[Element]) -> Fraction:
    """``Σ_{π ∈ NC(n,ℓ)} β(π)``, the noncrossing expansion of free product moments."""
    args = tuple(args)
    labels = _labels(args)
    return sum(
        (beta(system, p, args) for p in filter_by_label(enumerate_nc(len(args)), labels, "all-chains")),
        ZERO,
    )


# ---------------------------------------------------------------- cumulants B(w)

def cumulant_B_of_word(system: AlgebraSystem, w, args: Sequence[Element]) -> Fraction:
    """``B(w) = Σ_{π ∈ M_irr(w,ℓ)} β(π)``."""
    colors = _colors(w)
    if len(colors) != len(args):
        raise LengthMismatch(f"word of length {len(colors)} with {len(args)} arguments")
    if not is_reduced_motzkin(colors):
        return ZERO
    labels = _labels(args)
    total = ZERO
    for p in enumerate_adapted(MotzkinWord(colors), irreducible_only=True):
        if passes_labeling(p, labels):
            total += beta(system, p, args)
    return total


def cumulant_B_by_inversion(system: AlgebraSystem, w, args: Sequence[Element], engine: str = "partition") -> Fraction:
    """``B(w)`` from ``ψ`` by inverting over cuts of ``w`` into reduced pieces.

    ``B(w) = ψ(w) − Σ_k B(w_{≤k}) ψ(w_{>k})`` over cuts between two
    neighbouring letters of color 1.
    """
    colors = _colors(w)
    args = tuple(args)
    if len(colors) != len(args):
        raise LengthMismatch(f"word of length {len(colors)} with {len(args)} arguments")
    if not is_reduced_motzkin(colors):
        return ZERO
    memo: dict[int, Fraction] = {}

    def prefix(m: int) -> Fraction:
        if m not in memo:
            val = psi(system, colors[:m], args[:m], engine)
            for k in range(1, m):
                if colors[k - 1] == 1 and colors[k] == 1:
                    val -= prefix(k) * psi(system, colors[k:m], args[k:m], engine)
            memo[m] = val
        return memo[m]

    return prefix(len(colors))


def free_boolean_cumulant(system: AlgebraSystem, args: Sequence[Element]) -> Fraction:
    """Boolean cumulant of ``a_1, ..., a_n`` under the free product state (oracle based)."""
    args = tuple(args)
    n = len(args)
    fp = {(i, j): free_product_oracle(system, args[i:j]) for i in range(n) for j in range(i + 1, n + 1)}
    pre = [ZERO] * (n + 1)
    for m in range(1, n + 1):
        pre[m] = fp[0, m] - sum(pre[k] * fp[k, m] for k in range(1, m))
    return pre[n]


def nc_irr_cumulant_sum(system: AlgebraSystem, args: Sequence[Element]) -> Fraction:
    """``Σ_{π ∈ NC_irr(n,ℓ)} β(π)``."""
    args = tuple(args)
    labels = _labels(args)
    parts = filter_by_label(enumerate_nc(len(args), "irreducible"), labels, "all-chains")
    return sum((beta(system, p, args) for p in parts), ZERO)
