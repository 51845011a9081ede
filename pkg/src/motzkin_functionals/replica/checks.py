"""Structural identities of the replica space, checked numerically.

These routines exercise the tensor model directly: the ``p^⊥`` formula for
boolean cumulants, the three orthogonality relations, the projection
algebra, and the distributions of the sums of replicas that realize free,
s-free, orthogonal and monotone independence.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..algebra import Element
from ..words import enumerate_words
from .models import MatrixModel, p_perp_state
from .space import MATERIALIZE_LIMIT, Operator, TruncatedReplicaSpace

__all__ = [
    "OrderExceedsTruncation",
    "boolean_cumulant_via_p_perp",
    "grouped_p_perp",
    "random_model_element",
    "OrthogonalityReport",
    "check_orthogonality",
    "projection_defects",
    "Realization",
    "independence_realization",
    "KINDS",
]

KINDS = ("free", "s-free", "orthogonal", "monotone")


class OrderExceedsTruncation(ValueError):
    pass


def boolean_cumulant_via_p_perp(model: MatrixModel, args: Sequence[Element]):
    """``φ̃(a_1 p^⊥ a_2 ⋯ p^⊥ a_n)`` evaluated in the matrix model."""
    return p_perp_state(model, [model.element_matrix(a) for a in args])


def grouped_p_perp(model: MatrixModel, groups: Sequence[Sequence[Element]]):
    """``φ̃(b_1 p^⊥ b_2 ⋯ p^⊥ b_r)`` with ``b_k`` the product of the ``k``-th group."""
    mats = []
    for g in groups:
        m = model.identity()
        for a in g:
            m = m @ model.element_matrix(a)
        mats.append(m)
    return p_perp_state(model, mats)


def random_model_element(rng: random.Random, model: MatrixModel, unit: bool = True) -> Element:
    """A random degree-one polynomial in the model's generators."""
    terms = [((g,), Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 2))) for g in model.generators]
    keep = rng.sample(terms, k=rng.randint(1, len(terms)))
    if unit and rng.random() < 0.5:
        keep.append(((), Fraction(rng.randint(-2, 2), rng.randint(1, 2))))
    return Element(model.label, tuple(keep))


@dataclass
class OrthogonalityReport:
    """Maximum absolute entry found for each identity, and how many cases were checked."""

    max_violation: dict[str, float] = field(default_factory=dict)
    cases: dict[str, int] = field(default_factory=dict)
    method: str = "materialized"

    def record(self, name: str, value) -> None:
        v = abs(value)
        self.max_violation[name] = max(self.max_violation.get(name, 0), v)
        self.cases[name] = self.cases.get(name, 0) + 1

    def ok(self, tol: float = 0.0) -> bool:
        return all(v <= tol for v in self.max_violation.values())

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "identities": {
                k: {"cases": self.cases[k], "max_violation": float(v)}
                for k, v in sorted(self.max_violation.items())
            },
        }


def _operator_size(space: TruncatedReplicaSpace, op: Operator, probes: list[np.ndarray]):
    if space.dimension <= MATERIALIZE_LIMIT:
        mat = space.materialize(op)
        return max((abs(v) for v in mat.flat), default=0)
    return max((max((abs(v) for v in space.apply(op, p)), default=0) for p in probes), default=0)


def _alternating_labelings(labels, n, first_not, last_not):
    for combo in itertools.product(labels, repeat=n):
        if combo[0] == first_not or combo[-1] == last_not:
            continue
        if any(x == y for x, y in zip(combo, combo[1:])):
            continue
        yield combo


def check_orthogonality(
    space: TruncatedReplicaSpace,
    rng: random.Random,
    max_inner: int = 3,
    samples: int = 2,
) -> OrthogonalityReport:
    """Evaluate the same-label, remote and conditional orthogonality relations.

    Operators are materialized when the space is small enough; otherwise
    they are applied to vectors obtained from short replica words.
    """
    report = OrthogonalityReport()
    models = space.models
    labels = space.labels
    probes: list[np.ndarray] = []
    if space.dimension > MATERIALIZE_LIMIT:
        report.method = "probed"
        for _ in range(4):
            vec = space.vacuum()
            for _ in range(rng.randint(1, 3)):
                lab = rng.choice(labels)
                vec = space.apply(
                    space.replica(random_model_element(rng, models[lab]), rng.randint(1, space.N)), vec
                )
            probes.append(vec)
        probes.append(space.vacuum())

    def el(lab):
        return random_model_element(rng, models[lab])

    for lab in labels:
        for j, k in itertools.permutations(range(1, space.N + 1), 2):
            op = space.replica(el(lab), j) * space.replica(el(lab), k)
            report.record("same-label", _operator_size(space, op, probes))

    for j in range(1, space.N):
        for n in range(1, max_inner + 1):
            inner_words = [w for w in enumerate_words(n, j + 1) if w.max_color <= space.N]
            for w in inner_words:
                for i, l in itertools.product(labels, repeat=2):
                    # remote: different outer labels
                    if i != l:
                        labs = list(_alternating_labelings(labels, n, i, l))
                        for combo in rng.sample(labs, k=min(samples, len(labs))):
                            op = space.replica(el(i), j)
                            for c, lb in zip(w.colors, combo):
                                op = op * space.replica(el(lb), c)
                            op = op * space.replica(el(l), j)
                            report.record("remote", _operator_size(space, op, probes))
                    else:
                        labs = [
                            combo
                            for combo in _alternating_labelings(labels, n, i, i)
                            if any(c == j + 1 and lb == i for c, lb in zip(w.colors, combo))
                        ]
                        for combo in rng.sample(labs, k=min(samples, len(labs))):
                            op = space.replica(el(i), j)
                            for c, lb in zip(w.colors, combo):
                                op = op * space.replica(el(lb), c)
                            op = op * space.replica(el(i), j)
                            report.record("conditional", _operator_size(space, op, probes))
    return report


def projection_defects(space: TruncatedReplicaSpace) -> dict[str, object]:
    """Largest entries of ``p(j)p(k)`` (``j≠k``), ``p(j)² − p(j)`` and ``P(j−1)P(j) − P(j−1)``."""
    out = {"orthogonal": 0, "idempotent": 0, "monotone": 0}
    for lab in space.labels:
        for j in range(1, space.N + 1):
            pj = space.projector(lab, j)
            m = space.materialize(pj * pj - pj)
            out["idempotent"] = max(out["idempotent"], max(abs(v) for v in m.flat))
            prev = space.big_projector(lab, j - 1)
            if len(prev):
                m = space.materialize(prev * space.big_projector(lab, j) - prev)
                out["monotone"] = max(out["monotone"], max(abs(v) for v in m.flat))
            for k in range(1, space.N + 1):
                if k != j:
                    m = space.materialize(pj * space.projector(lab, k))
                    out["orthogonal"] = max(out["orthogonal"], max(abs(v) for v in m.flat))
    return out


@dataclass
class Realization:
    """Moments of the two replica families realizing one notion of independence.

    ``mixed`` maps words over ``{"X", "Y"}`` to ``Φ`` of the corresponding
    product.  ``conditioned_second`` holds ``Φ(u Y^k u) / Φ(u u)`` for
    ``u = a°(s_1)``, the distribution of ``Y`` seen from a centered first
    variable.
    """

    kind: str
    order: int
    first_moments: list
    second_moments: list
    conditioned_second: list
    mixed: dict[str, object]
    colors: dict[str, tuple[int, ...]]


def _family_colors(kind: str, N: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if kind == "free":
        return tuple(range(1, N + 1)), tuple(range(1, N + 1))
    if kind == "s-free":
        return tuple(range(1, N + 1, 2)), tuple(range(2, N + 1, 2))
    if kind == "orthogonal":
        return (1,), (2,)
    if kind == "monotone":
        return (1,), (1, 2)
    raise ValueError(f"unknown independence kind {kind!r}; choose from {KINDS}")


def independence_realization(
    space: TruncatedReplicaSpace,
    kind: str,
    a: Element,
    b: Element,
    q: int,
) -> Realization:
    """Mixed moments up to order ``q`` of ``X = Σ a(s_j)`` and ``Y = Σ b(s_j)``.

    The color sets depend on ``kind``: all colors (free), odd and even colors
    (s-free), ``{1}`` and ``{2}`` (orthogonal), ``{1}`` and ``{1, 2}``
    (monotone).  Requires ``q ≤ 2N − 1``.
    """
    if q > 2 * space.N - 1:
        raise OrderExceedsTruncation(f"order {q} needs truncation N ≥ {(q + 2) // 2}, have {space.N}")
    if a.label == b.label:
        raise ValueError("the two families must come from different algebras")
    cx, cy = _family_colors(kind, space.N)
    if max(cx + cy) > space.N:
        raise OrderExceedsTruncation(f"{kind} realization needs N ≥ {max(cx + cy)}")
    X = Operator(sum((space.replica(a, j).terms for j in cx), ()))
    Y = Operator(sum((space.replica(b, j).terms for j in cy), ()))
    ops = {"X": X, "Y": Y}

    # right-to-left: v_word = op(word[0]) v_word[1:]; every suffix is reused
    vecs: dict[str, np.ndarray] = {"": space.vacuum()}
    mixed: dict[str, object] = {}
    for k in range(1, q + 1):
        for word in itertools.product("XY", repeat=k):
            s = "".join(word)
            vecs[s] = space.apply(ops[s[0]], vecs[s[1:]])
            mixed[s] = vecs[s][0]
    first = [mixed["X" * k] for k in range(1, q + 1)]
    second = [mixed["Y" * k] for k in range(1, q + 1)]

    centered = a - Element.unit(a.label, _state(space, a))
    u = space.replica(centered, 1)
    uv = space.apply(u, space.vacuum())
    norm = space.apply(u, uv)[0]
    cond = []
    vec = uv
    for k in range(1, q + 1):
        vec = space.apply(Y, vec)
        val = space.apply(u, vec)[0]
        cond.append(val / norm if norm != 0 else None)
    return Realization(kind, q, first, second, cond, mixed, {"X": cx, "Y": cy})


def _state(space: TruncatedReplicaSpace, a: Element):
    m = space.models[a.label].element_matrix(a)[0, 0]
    return Fraction(m) if space.exact else Fraction(float(m))
