"""Seeded property suites behind ``motzkin-functionals verify``.

Each suite returns a list of :class:`PropertyResult`; a failing property
carries the first counterexample found.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import Element, boolean_cumulant, random_element, random_spec
from .engine import (
    ENGINES,
    AlgebraSystem,
    boolean_product_moment,
    cumulant_B_by_inversion,
    cumulant_B_of_word,
    free_boolean_cumulant,
    free_product_moment,
    free_product_oracle,
    nc_irr_cumulant_sum,
    nc_moment_sum,
    psi,
)
from .partitions import (
    catalan_decomposition,
    catalan_number,
    enumerate_adapted,
    enumerate_nc,
    greatest_element,
    join_adapted,
    least_element,
    refines,
)
from .replica.checks import boolean_cumulant_via_p_perp, check_orthogonality
from .replica.models import MatrixModel
from .replica.space import TruncatedReplicaSpace, psi_oracle
from .words import (
    Comparison,
    compare,
    constant_word,
    enumerate_reduced,
    greatest_word,
    lattice_join,
    lattice_meet,
    motzkin_count,
)

__all__ = ["PropertyResult", "SUITES", "run_suite", "random_system", "random_args", "random_models"]


@dataclass
class PropertyResult:
    name: str
    passed: bool
    checked: int = 0
    counterexample: str | None = None

    def to_json(self) -> dict:
        out = {"property": self.name, "passed": self.passed, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class _Tally:
    name: str
    checked: int = 0
    failure: str | None = None

    def check(self, ok: bool, describe: Callable[[], str]) -> None:
        self.checked += 1
        if not ok and self.failure is None:
            self.failure = describe()

    def result(self) -> PropertyResult:
        return PropertyResult(self.name, self.failure is None, self.checked, self.failure)


# ---------------------------------------------------------------- random data

def random_system(rng: random.Random, n_algebras: int, order: int) -> AlgebraSystem:
    specs = []
    for k in range(n_algebras):
        gens = ("x",) if rng.random() < 0.5 else ("x", "y")
        specs.append(random_spec(rng, k + 1, gens, order))
    return AlgebraSystem(specs)


def random_args(rng: random.Random, system: AlgebraSystem, n: int, alternating: bool = True) -> tuple[Element, ...]:
    labels = system.labels
    seq = []
    for _ in range(n):
        choices = [l for l in labels if not (alternating and seq and seq[-1] == l)]
        seq.append(rng.choice(choices))
    return tuple(random_element(rng, system.spec(l)) for l in seq)


def random_models(rng: random.Random, n_algebras: int, sizes=(2, 3)) -> list[MatrixModel]:
    models = []
    for k in range(n_algebras):
        m = rng.choice(sizes)
        gens = {}
        for name in ("x",) if rng.random() < 0.6 else ("x", "y"):
            gens[name] = [[rng.choice((-1, 0, 1)) for _ in range(m)] for _ in range(m)]
        models.append(MatrixModel(k + 1, gens))
    return models


def _fmt_args(args) -> str:
    return "(" + ", ".join(f"[{a.label}] {a}" for a in args) + ")"


# ---------------------------------------------------------------- suites

def suite_counts(n: int, rng: random.Random, trials: int) -> list[PropertyResult]:
    enum_t = _Tally("enumeration size equals Motzkin recursion")
    rec_t = _Tally("Motzkin recursion M_k = M_{k-1} + sum M_i M_{k-i-1}")
    cat_t = _Tally("sum of c(w) over M_{k+1} equals Catalan C_k")
    bij_t = _Tally("M(w) over w in M_k partition NC(k) without overlap")
    irr_t = _Tally("M_irr(w) over w in M_k partition NC_irr(k)")
    for k in range(1, n + 1):
        words = enumerate_reduced(k)
        enum_t.check(len(words) == motzkin_count(k), lambda: f"k={k}")
        if k >= 3:
            want = motzkin_count(k - 1) + sum(motzkin_count(i) * motzkin_count(k - i - 1) for i in range(1, k - 1))
            rec_t.check(motzkin_count(k) == want, lambda: f"k={k}")
        if k >= 2:
            total = sum(c for _, c in catalan_decomposition(k - 1))
            cat_t.check(total == catalan_number(k - 1), lambda: f"k={k - 1}: {total}")
        seen, seen_irr = [], []
        for w in words:
            seen.extend(a.partition for a in enumerate_adapted(w))
            seen_irr.extend(a.partition for a in enumerate_adapted(w, irreducible_only=True))
        nc = enumerate_nc(k)
        bij_t.check(sorted(seen) == nc, lambda: f"k={k}: {len(seen)} adapted vs {len(nc)} noncrossing")
        irr = enumerate_nc(k, "irreducible")
        irr_t.check(sorted(seen_irr) == irr, lambda: f"k={k}: {len(seen_irr)} vs {len(irr)}")
    return [t.result() for t in (enum_t, rec_t, cat_t, bij_t, irr_t)]


def suite_lattices(n: int, rng: random.Random, trials: int) -> list[PropertyResult]:
    laws = _Tally("M_k: join/meet lattice laws and order consistency")
    ends = _Tally("M_k: constant word is least, tent word is greatest")
    jl = _Tally("M(w): join is idempotent, commutative and associative")
    lub = _Tally("M(w): join equals the least common upper bound")
    bounds = _Tally("M(w): least and greatest elements bound every member")
    for k in range(1, min(n, 8) + 1):
        words = enumerate_reduced(k)
        lo, hi = constant_word(k), greatest_word(k)
        for w in words:
            ends.check(compare(lo, w) in (Comparison.LESS, Comparison.EQUAL)
                       and compare(w, hi) in (Comparison.LESS, Comparison.EQUAL), lambda: str(w))
        pairs = list(itertools.product(words, repeat=2))
        if len(pairs) > 400:
            pairs = rng.sample(pairs, 400)
        for u, v in pairs:
            j, m = lattice_join(u, v), lattice_meet(u, v)
            ok = (
                j == lattice_join(v, u)
                and m == lattice_meet(v, u)
                and lattice_join(u, m) == u
                and lattice_meet(u, j) == u
                and lattice_join(u, u) == u
                and (compare(u, v) in (Comparison.LESS, Comparison.EQUAL)) == (j == v)
            )
            t = rng.choice(words)
            ok = ok and lattice_join(lattice_join(u, v), t) == lattice_join(u, lattice_join(v, t))
            laws.check(ok, lambda: f"{u}, {v}")
    for k in range(1, min(n, 6) + 1):
        for w in enumerate_reduced(k):
            elems = enumerate_adapted(w)
            bot, top = least_element(w), greatest_element(w)
            for a in elems:
                bounds.check(refines(bot.partition, a.partition) and refines(a.partition, top.partition),
                             lambda: f"{w}: {a.partition}")
            for a, b in itertools.product(elems, repeat=2):
                j = join_adapted(a, b)
                c = rng.choice(elems)
                jl.check(
                    join_adapted(a, a) == a
                    and j == join_adapted(b, a)
                    and join_adapted(j, c) == join_adapted(a, join_adapted(b, c)),
                    lambda: f"{w}: {a.partition}, {b.partition}",
                )
                uppers = [u for u in elems if refines(a.partition, u.partition) and refines(b.partition, u.partition)]
                least = [u for u in uppers if all(refines(u.partition, v.partition) for v in uppers)]
                lub.check(least == [j], lambda: f"{w}: {a.partition} v {b.partition} gave {j.partition}")
    return [t.result() for t in (laws, ends, jl, lub, bounds)]


def suite_products(n: int, rng: random.Random, trials: int) -> list[PropertyResult]:
    agree = _Tally("three engines agree on every w in M_k")
    free = _Tally("sum over M_k of psi(w) equals the free product (centering recursion)")
    boolean = _Tally("constant word gives the product of the individual states")
    freeness = _Tally("centered alternating arguments: sum over M_k of psi(w) vanishes")
    nc = _Tally("noncrossing labelled sum equals the free product")
    for _ in range(trials):
        system = random_system(rng, rng.choice((2, 3)), n)
        k = rng.randint(1, n)
        args = random_args(rng, system, k, alternating=rng.random() < 0.8)
        for w in enumerate_reduced(k) if k <= 6 else rng.sample(enumerate_reduced(k), 12):
            vals = [psi(system, w, args, e) for e in ENGINES]
            agree.check(len(set(vals)) == 1, lambda: f"{w} {_fmt_args(args)}: {vals}")
        fp = free_product_moment(system, args)
        fo = free_product_oracle(system, args)
        free.check(fp == fo, lambda: f"{_fmt_args(args)}: {fp} vs {fo}")
        prod = Fraction(1)
        for a in args:
            prod *= system.phi(a)
        bp = boolean_product_moment(system, args)
        boolean.check(bp == prod, lambda: f"{_fmt_args(args)}: {bp} vs {prod}")
        alt = random_args(rng, system, k, alternating=True)
        cent = tuple(system.centered(a) for a in alt)
        val = free_product_moment(system, cent)
        freeness.check(val == 0, lambda: f"{_fmt_args(cent)}: {val}")
        if k <= 6:
            s = nc_moment_sum(system, args)
            nc.check(s == fo, lambda: f"{_fmt_args(args)}: {s} vs {fo}")
    return [t.result() for t in (agree, free, boolean, freeness, nc)]


def suite_cumulants(n: int, rng: random.Random, trials: int) -> list[PropertyResult]:
    bw = _Tally("B(w) partition sum equals inversion over interval cuts")
    cor = _Tally("sum over M_k of B(w) equals the boolean cumulant of the free product")
    ncirr = _Tally("irreducible noncrossing labelled sum equals the same boolean cumulant")
    for _ in range(trials):
        system = random_system(rng, rng.choice((2, 3)), n)
        k = rng.randint(1, n)
        args = random_args(rng, system, k, alternating=rng.random() < 0.8)
        total = Fraction(0)
        for w in enumerate_reduced(k):
            a, b = cumulant_B_of_word(system, w, args), cumulant_B_by_inversion(system, w, args)
            bw.check(a == b, lambda: f"{w} {_fmt_args(args)}: {a} vs {b}")
            total += a
        target = free_boolean_cumulant(system, args)
        cor.check(total == target, lambda: f"{_fmt_args(args)}: {total} vs {target}")
        s = nc_irr_cumulant_sum(system, args)
        ncirr.check(s == target, lambda: f"{_fmt_args(args)}: {s} vs {target}")
    return [t.result() for t in (bw, cor, ncirr)]


def suite_oracle(n: int, rng: random.Random, trials: int) -> list[PropertyResult]:
    ora = _Tally("tensor oracle equals symbolic psi (exact)")
    pperp = _Tally("p-perp state equals the recursive boolean cumulant")
    orth = _Tally("orthogonality identities hold exactly")
    for _ in range(max(1, trials // 5)):
        models = random_models(rng, rng.choice((2, 3)), sizes=(2,) if n >= 6 else (2, 3))
        system = AlgebraSystem([m.to_spec(n) for m in models])
        N = max((max(w.colors) for w in enumerate_reduced(n)), default=1)
        space = TruncatedReplicaSpace(models, N)
        for k in range(1, n + 1):
            for w in enumerate_reduced(k):
                args = random_args(rng, system, k, alternating=rng.random() < 0.7)
                a, b = psi(system, w, args), psi_oracle(space, w, args)
                ora.check(a == b, lambda: f"{w} {_fmt_args(args)}: {a} vs {b}")
        for m in models:
            spec = system.spec(m.label)
            for k in range(1, min(n, 5) + 1):
                xs = [random_element(rng, spec) for _ in range(k)]
                a, b = boolean_cumulant_via_p_perp(m, xs), boolean_cumulant(spec, xs)
                pperp.check(a == b, lambda: f"{_fmt_args(xs)}: {a} vs {b}")
    small = TruncatedReplicaSpace(random_models(rng, 2, sizes=(2,)), 3)
    rep = check_orthogonality(small, rng, max_inner=2, samples=1)
    for name, v in sorted(rep.max_violation.items()):
        orth.check(v == 0, lambda: f"{name}: max violation {v} over {rep.cases[name]} cases")
    return [t.result() for t in (ora, pperp, orth)]


SUITES: dict[str, Callable[[int, random.Random, int], list[PropertyResult]]] = {
    "counts": suite_counts,
    "lattices": suite_lattices,
    "products": suite_products,
    "cumulants": suite_cumulants,
    "oracle": suite_oracle,
}

DEFAULT_N = {"counts": 8, "lattices": 6, "products": 6, "cumulants": 5, "oracle": 5}


def run_suite(name: str, n: int | None = None, seed: int = 0, trials: int = 20) -> list[PropertyResult]:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return suite(DEFAULT_N[name] if n is None else n, random.Random(seed), trials)
