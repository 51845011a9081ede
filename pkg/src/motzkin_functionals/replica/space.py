"""Truncated tensor-product realization of orthogonal replicas.

The space is ``⊗_{i∈I} V_i^{⊗N}`` with one site per (label, copy).  Every
site starts in ``e_0`` and ``p = e_0 e_0ᵀ``.  For an element ``a`` of algebra
``k`` and a color ``j ≤ N`` the replica is

    a(s_j) = i_j(a) ⊗ p_k(j),    p_k(j) = P_k(j) − P_k(j−1),

where ``i_j(a)`` puts ``a`` on site ``(k, j)`` and
``P_k(j) = ⊗_{l≠k} (1^{⊗(j−1)} ⊗ p^{⊗(N−j+1)})``, ``P_k(0) = 0``.

Operators are kept as sums of elementary tensors, one optional matrix per
site (``None`` is the identity), so states of products never require the
full Kronecker matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

import numpy as np

from ..algebra import AlgebraError, Element, LabelMismatch
from ..words import EmptyWord, MotzkinWord
from . import _kernels
from .models import MatrixModel

__all__ = [
    "DimensionBound",
    "ColorExceedsTruncation",
    "Operator",
    "TruncatedReplicaSpace",
    "build_space",
    "default_truncation",
    "psi_oracle",
    "MATERIALIZE_LIMIT",
    "MAX_DIMENSION",
]

MAX_DIMENSION = 10**6
MATERIALIZE_LIMIT = 4096
_EXPAND_LIMIT = 1 << 20


class DimensionBound(AlgebraError):
    pass


class ColorExceedsTruncation(AlgebraError):
    pass


def _mul_site(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a @ b


@dataclass(frozen=True)
class Operator:
    """``Σ_t c_t ⊗_s M_{t,s}``; ``M_{t,s} is None`` stands for the identity."""

    terms: tuple[tuple[object, tuple], ...]

    def __mul__(self, other):
        if not isinstance(other, Operator):
            return Operator(tuple((c * other, f) for c, f in self.terms))
        out = []
        for c1, f1 in self.terms:
            for c2, f2 in other.terms:
                c = c1 * c2
                if c != 0:
                    out.append((c, tuple(_mul_site(a, b) for a, b in zip(f1, f2))))
        return Operator(tuple(out))

    def __rmul__(self, c) -> "Operator":
        return Operator(tuple((c * t, f) for t, f in self.terms))

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(self.terms + other.terms)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + other * -1

    def __len__(self) -> int:
        return len(self.terms)


class TruncatedReplicaSpace:
    """``N`` tensor copies of each matrix model, with vector state at ``e_0``.

    With ``exact=None`` the space is exact iff every model is exact; passing
    ``exact=False`` converts the models to floating point.
    """

    def __init__(
        self,
        models: Sequence[MatrixModel],
        N: int,
        exact: bool | None = None,
        max_dimension: int = MAX_DIMENSION,
    ):
        if N < 1:
            raise ValueError("truncation depth N must be at least 1")
        if not models:
            raise ValueError("at least one matrix model is required")
        labels = [m.label for m in models]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels among the matrix models")
        if exact is None:
            exact = all(m.exact for m in models)
        if exact and not all(m.exact for m in models):
            raise ValueError("exact arithmetic requested for a floating-point model")
        self.exact = exact
        self.models = {m.label: (m if exact else (m.as_float() if m.exact else m)) for m in models}
        self.labels = labels
        self.N = N
        self.sites = [(lab, c) for lab in labels for c in range(1, N + 1)]
        self._site_index = {s: k for k, s in enumerate(self.sites)}
        self.site_dims = [self.models[lab].dim for lab, _ in self.sites]
        self.dimension = math.prod(self.site_dims)
        if self.dimension > max_dimension:
            raise DimensionBound(
                f"replica space of dimension {self.dimension} exceeds the bound {max_dimension}"
            )
        self._proj = {lab: self.models[lab].projection() for lab in labels}
        self._one = Fraction(1) if exact else 1.0

    # ------------------------------------------------------------ construction

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def site(self, label: Hashable, copy: int) -> int:
        try:
            return self._site_index[(label, copy)]
        except KeyError:
            raise LabelMismatch(f"no site for label {label!r}, copy {copy}") from None

    def _check_color(self, j: int) -> None:
        if j < 1:
            raise ValueError("colors are positive")
        if j > self.N:
            raise ColorExceedsTruncation(f"color {j} exceeds the truncation N={self.N}")

    def identity(self) -> Operator:
        return Operator(((self._one, (None,) * self.n_sites),))

    def big_projector(self, label: Hashable, j: int) -> Operator:
        """``P_label(j)`` (zero for ``j = 0``)."""
        if j == 0:
            return Operator(())
        self._check_color(j)
        if label not in self.models:
            raise LabelMismatch(f"unknown label {label!r}")
        factors = tuple(
            None if lab == label or c < j else self._proj[lab] for lab, c in self.sites
        )
        return Operator(((self._one, factors),))

    def projector(self, label: Hashable, j: int) -> Operator:
        """``p_label(j) = P_label(j) − P_label(j−1)``."""
        return self.big_projector(label, j) - self.big_projector(label, j - 1)

    def embed(self, x: Element, j: int) -> Operator:
        """``i_j(x)``: ``x`` on site ``(label, j)``, identity elsewhere."""
        self._check_color(j)
        model = self.models.get(x.label)
        if model is None:
            raise LabelMismatch(f"no matrix model for label {x.label!r}")
        s = self.site(x.label, j)
        factors = [None] * self.n_sites
        factors[s] = model.element_matrix(x)
        return Operator(((self._one, tuple(factors)),))

    def replica(self, x: Element, j: int) -> Operator:
        """The orthogonal replica ``x(s_j)``."""
        return self.embed(x, j) * self.projector(x.label, j)

    def unit_replica(self, label: Hashable, j: int) -> Operator:
        return self.replica(Element.unit(label), j)

    # ------------------------------------------------------------ states

    def phi(self, op: Operator):
        """``⟨Ξ, X Ξ⟩`` for ``Ξ = e_0 ⊗ ⋯ ⊗ e_0``."""
        total = 0 * self._one
        for c, factors in op.terms:
            v = c
            for m in factors:
                if m is not None:
                    v = v * m[0, 0]
                    if v == 0:
                        break
            total += v
        return total

    def expectation(self, factors: Sequence[Operator]):
        """``Φ(X_1 X_2 ⋯ X_F)`` without expanding the product beforehand."""
        factors = list(factors)
        if not factors:
            return self._one
        n_choices = math.prod(len(f) for f in factors)
        if n_choices == 0:
            return 0 * self._one
        if self.exact:
            return self._expect_exact(factors)
        if n_choices > _EXPAND_LIMIT:
            vec = self.vacuum()
            for f in reversed(factors):
                vec = self.apply(f, vec)
            return vec[0]
        return self._expect_float(factors)

    def _expect_exact(self, factors: list[Operator]):
        S = self.n_sites
        zero = Fraction(0)

        def walk(f: int, coef, rows: tuple):
            if f == len(factors):
                v = coef
                for r in rows:
                    if r is not None:
                        v *= r[0]
                return v
            acc = zero
            for c, mats in factors[f].terms:
                cc = coef * c
                if cc == 0:
                    continue
                new = list(rows)
                dead = False
                for s in range(S):
                    m = mats[s]
                    if m is None:
                        continue
                    r = m[0, :] if new[s] is None else new[s] @ m
                    if not any(r):
                        dead = True
                        break
                    new[s] = r
                if not dead:
                    acc += walk(f + 1, cc, tuple(new))
            return acc

        return walk(0, Fraction(1), (None,) * S)

    def _expect_float(self, factors: list[Operator]) -> float:
        S = self.n_sites
        m = max(self.site_dims)
        T = max(len(f) for f in factors)
        F = len(factors)
        eye = np.eye(m)
        mats = np.zeros((F, T, S, m, m))
        coefs = np.zeros((F, T))
        nterms = np.array([len(f) for f in factors], dtype=np.int64)
        for fi, f in enumerate(factors):
            for ti, (c, ms) in enumerate(f.terms):
                coefs[fi, ti] = float(c)
                for s, mat in enumerate(ms):
                    if mat is None:
                        mats[fi, ti, s] = eye
                    else:
                        d = mat.shape[0]
                        mats[fi, ti, s, :d, :d] = mat
        return _kernels.expanded_expectation(coefs, mats, nterms)

    # ------------------------------------------------------------ vectors

    def vacuum(self) -> np.ndarray:
        if self.exact:
            v = np.full(self.dimension, Fraction(0), dtype=object)
            v[0] = Fraction(1)
        else:
            v = np.zeros(self.dimension)
            v[0] = 1.0
        return v

    def apply(self, op: Operator, vec: np.ndarray) -> np.ndarray:
        """``X v`` for a flat vector in site order (label major, copy minor)."""
        dims = self.site_dims
        out = None
        for c, mats in op.terms:
            w = vec
            for s, mat in enumerate(mats):
                if mat is None:
                    continue
                left = math.prod(dims[:s])
                right = math.prod(dims[s + 1:])
                if self.exact:
                    w = np.matmul(mat, w.reshape(left, dims[s], right)).reshape(-1)
                else:
                    w = _kernels.apply_site(w, left, dims[s], right, mat)
            w = w * c
            out = w if out is None else out + w
        if out is None:
            out = vec * 0
        return out

    def materialize(self, op: Operator) -> np.ndarray:
        """The full matrix of ``op``; only for dimension ≤ 4096."""
        if self.dimension > MATERIALIZE_LIMIT:
            raise DimensionBound(
                f"materialization limited to dimension {MATERIALIZE_LIMIT}, space has {self.dimension}"
            )
        total = None
        for c, mats in op.terms:
            full = None
            for s, mat in enumerate(mats):
                if mat is None:
                    mat = self.models[self.sites[s][0]].identity()
                full = mat if full is None else np.kron(full, mat)
            full = full * c
            total = full if total is None else total + full
        if total is None:
            total = np.zeros((self.dimension, self.dimension), dtype=object if self.exact else float)
            if self.exact:
                total[...] = Fraction(0)
        return total


def build_space(models: Sequence[MatrixModel], N: int, exact: bool | None = None, max_dimension: int = MAX_DIMENSION) -> TruncatedReplicaSpace:
    return TruncatedReplicaSpace(models, N, exact=exact, max_dimension=max_dimension)


def default_truncation(w) -> int:
    """The smallest exact truncation depth for a word: its largest color."""
    colors = w.colors if isinstance(w, (MotzkinWord, EmptyWord)) else tuple(w)
    return max(colors, default=1)


def psi_oracle(space: TruncatedReplicaSpace, w, args: Sequence[Element]):
    """``Φ(a_1(s_{j_1}) ⋯ a_n(s_{j_n}))`` in the truncated replica space."""
    colors = w.colors if isinstance(w, (MotzkinWord, EmptyWord)) else tuple(w)
    if len(colors) != len(args):
        raise ValueError(f"word of length {len(colors)} with {len(args)} arguments")
    for j in colors:
        space._check_color(j)
    return space.expectation([space.replica(a, j) for a, j in zip(args, colors)])
