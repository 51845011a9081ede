"""Finite matrix models ``(M_m, ⟨e_0, · e_0⟩)`` of single algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

import numpy as np

from ..algebra import AlgebraError, AlgebraSpec, Element, LabelMismatch, to_fraction

__all__ = [
    "ModelMismatch",
    "MatrixModel",
    "exact_array",
    "jacobi_model",
    "p_perp_state",
]


class ModelMismatch(AlgebraError):
    pass


def exact_array(rows) -> np.ndarray:
    """A numpy object array of :class:`Fraction` entries."""
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_fraction(v) if not isinstance(v, float) else Fraction(v)
    return out


def _identity(m: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.full((m, m), Fraction(0), dtype=object)
        for i in range(m):
            out[i, i] = Fraction(1)
        return out
    return np.eye(m)


@dataclass(frozen=True)
class MatrixModel:
    """Generators of one algebra as ``m × m`` matrices; the state is ``⟨e_0, X e_0⟩``.

    With ``exact=True`` the entries are Fractions held in object arrays.
    If ``spec`` is given, the model's moments are checked against it up to
    the spec's ``max_order`` at construction.
    """

    label: Hashable
    generators: Mapping[str, np.ndarray] = field(hash=False, compare=False)
    exact: bool = True
    spec: AlgebraSpec | None = field(default=None, hash=False, compare=False)

    def __post_init__(self) -> None:
        gens = {}
        dim = None
        for name, mat in dict(self.generators).items():
            arr = exact_array(mat) if self.exact else np.array(mat, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ModelMismatch(f"generator {name!r} of {self.label!r} is not square")
            if dim is None:
                dim = arr.shape[0]
            elif arr.shape[0] != dim:
                raise ModelMismatch(f"generators of {self.label!r} have different sizes")
            gens[name] = arr
        if not gens:
            raise ModelMismatch(f"model {self.label!r} has no generators")
        object.__setattr__(self, "generators", gens)
        if self.spec is not None:
            self.check_against(self.spec)

    @property
    def dim(self) -> int:
        return next(iter(self.generators.values())).shape[0]

    def identity(self) -> np.ndarray:
        return _identity(self.dim, self.exact)

    def projection(self) -> np.ndarray:
        """``p = e_0 e_0ᵀ``."""
        p = self.identity() * 0
        p[0, 0] = 1 if not self.exact else Fraction(1)
        return p

    def word_matrix(self, word: Sequence[str]) -> np.ndarray:
        out = self.identity()
        for g in word:
            try:
                out = out @ self.generators[g]
            except KeyError:
                raise ModelMismatch(f"generator {g!r} unknown to model {self.label!r}") from None
        return out

    def element_matrix(self, x: Element) -> np.ndarray:
        if x.label != self.label:
            raise LabelMismatch(f"element of {x.label!r} in model {self.label!r}")
        out = self.identity() * 0
        for w, c in x.terms:
            out = out + (c if self.exact else float(c)) * self.word_matrix(w)
        return out

    def state(self, mat: np.ndarray):
        return mat[0, 0]

    def to_spec(self, max_order: int) -> AlgebraSpec:
        """Tabulate ``⟨e_0, w e_0⟩`` for all generator words up to ``max_order``."""
        if not self.exact:
            raise ModelMismatch("only exact models produce rational moment tables")
        names = tuple(self.generators)
        table = {}
        for k in range(max_order + 1):
            for w in itertools.product(names, repeat=k):
                table[w] = self.word_matrix(w)[0, 0]
        return AlgebraSpec(self.label, names, table, max_order)

    def check_against(self, spec: AlgebraSpec, order: int | None = None) -> None:
        order = spec.max_order if order is None else order
        if set(spec.generators) != set(self.generators):
            raise ModelMismatch(f"generator names differ for {self.label!r}")
        for k in range(order + 1):
            for w in itertools.product(spec.generators, repeat=k):
                got = self.word_matrix(w)[0, 0]
                want = spec.moments[w]
                ok = got == want if self.exact else abs(got - float(want)) <= 1e-9
                if not ok:
                    raise ModelMismatch(
                        f"model {self.label!r} gives {got} for {'*'.join(w) or '1'}, table says {want}"
                    )

    def as_float(self) -> "MatrixModel":
        return MatrixModel(
            self.label,
            {k: np.array(v, dtype=np.float64) for k, v in self.generators.items()},
            exact=False,
        )


def jacobi_model(label: Hashable, moments: Sequence, name: str = "x") -> MatrixModel:
    """One-generator model reproducing ``m_0 = 1, m_1, ..., m_{2K-1}``.

    Builds the monic three-term recurrence by Gram-Schmidt against the moment
    functional and returns the ``K × K`` tridiagonal matrix with ``α_k`` on the
    diagonal, ones above it and ``β_{k+1}`` below it.  ``K`` is
    ``len(moments) // 2`` unless the functional degenerates earlier.
    """
    mom = [to_fraction(v) for v in moments]
    if not mom or mom[0] != 1:
        raise ModelMismatch("the moment sequence must start with m_0 = 1")
    if len(mom) < 2:
        raise ModelMismatch("need at least m_0 and m_1")

    def L(poly: list[Fraction]) -> Fraction:
        if len(poly) > len(mom):
            raise ModelMismatch("moment sequence too short for the recurrence")
        return sum((c * mom[k] for k, c in enumerate(poly)), Fraction(0))

    def mul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] += a * b
        return out

    alphas, betas = [], []
    prev, cur = [Fraction(0)], [Fraction(1)]
    norm_prev = None
    k = 0
    # α_k needs moments up to order 2k+1
    while 2 * k + 1 <= len(mom) - 1:
        norm = L(mul(cur, cur))
        if norm == 0:
            break
        if norm_prev is not None:
            betas.append(norm / norm_prev)
        alpha = L(mul([Fraction(0)] + cur, cur)) / norm
        alphas.append(alpha)
        beta = betas[-1] if betas else Fraction(0)
        nxt = [Fraction(0)] + cur
        for i, c in enumerate(cur):
            nxt[i] -= alpha * c
        for i, c in enumerate(prev):
            nxt[i] -= beta * c
        prev, cur, norm_prev = cur, nxt, norm
        k += 1
    K = len(alphas)
    J = np.full((K, K), Fraction(0), dtype=object)
    for k in range(K):
        J[k, k] = alphas[k]
        if k + 1 < K:
            J[k, k + 1] = Fraction(1)
            J[k + 1, k] = betas[k]
    return MatrixModel(label, {name: J}, exact=True)


def p_perp_state(model: MatrixModel, mats: Sequence[np.ndarray]) -> object:
    """``⟨e_0, X_1 p^⊥ X_2 p^⊥ ⋯ p^⊥ X_n e_0⟩`` with ``p^⊥ = 1 − e_0 e_0ᵀ``."""
    perp = model.identity() - model.projection()
    out = mats[0]
    for m in mats[1:]:
        out = out @ perp @ m
    return out[0, 0]
