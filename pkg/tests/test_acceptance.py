"""Acceptance suite: one PASS/FAIL line per criterion, printed at the end of the run."""

import functools
import itertools
import json
import random
import time
from fractions import Fraction as F

import pytest

from motzkin_functionals import cli
from motzkin_functionals.algebra import AlgebraSpec, boolean_cumulant, random_element, random_spec
from motzkin_functionals.engine import (
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
from motzkin_functionals.partitions import (
    SetPartition,
    adapt,
    admissible_labelings,
    catalan_decomposition,
    catalan_number,
    enumerate_adapted,
    enumerate_nc,
    filter_by_label,
    join_adapted,
    least_element,
    greatest_element,
    refines,
)
from motzkin_functionals.replica import (
    boolean_cumulant_via_p_perp,
    build_space,
    check_orthogonality,
    default_truncation,
    independence_realization,
    projection_defects,
    psi_oracle,
    random_model_element,
)
from motzkin_functionals.words import enumerate_reduced, motzkin_count
from motzkin_functionals.words import parse_word as W

from fixtures import fixed_models, random_models
from oracles import monotone_moment

RESULTS: dict[int, tuple[bool, str]] = {}


def criterion(number, title):
    """Record PASS/FAIL for the wrapped test without changing its outcome."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*a, **kw):
            try:
                fn(*a, **kw)
            except BaseException:
                RESULTS[number] = (False, title)
                raise
            RESULTS[number] = (True, title)

        return run

    return wrap


def timed(limit, body):
    start = time.perf_counter()
    body()
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"


def P(blocks):
    return SetPartition.from_blocks(blocks)


# ------------------------------------------------------------------ 1-4

@criterion(1, "Motzkin counts 1, 1, 2, 4, 9, 21, 51, 127 for n = 1..8")
def test_01_counts():
    start = time.perf_counter()
    assert [motzkin_count(n) for n in range(1, 9)] == [1, 1, 2, 4, 9, 21, 51, 127]
    assert [len(enumerate_reduced(n)) for n in range(1, 9)] == [1, 1, 2, 4, 9, 21, 51, 127]
    assert time.perf_counter() - start < 1


LISTING = {
    1: {"s1"},
    2: {"s1.s1"},
    3: {"s1.s1.s1", "s1.s2.s1"},
    4: {"s1.s1.s1.s1", "s1.s1.s2.s1", "s1.s2.s1.s1", "s1.s2.s2.s1"},
    5: {"s1.s1.s1.s1.s1", "s1.s1.s1.s2.s1", "s1.s1.s2.s1.s1", "s1.s2.s1.s1.s1", "s1.s1.s2.s2.s1",
        "s1.s2.s2.s1.s1", "s1.s2.s1.s2.s1", "s1.s2.s2.s2.s1", "s1.s2.s3.s2.s1"},
}


@criterion(2, "reduced word listings for n = 1..5")
def test_02_listing():
    def body():
        for n, words in LISTING.items():
            assert {str(w) for w in enumerate_reduced(n)} == words

    timed(1, body)


CATALAN_4 = {
    "s1.s1.s1.s1.s1": 1, "s1.s1.s1.s2.s1": 1, "s1.s1.s2.s1.s1": 1, "s1.s2.s1.s1.s1": 1,
    "s1.s2.s1.s2.s1": 1, "s1.s1.s2.s2.s1": 2, "s1.s2.s2.s1.s1": 2, "s1.s2.s2.s2.s1": 4,
    "s1.s2.s3.s2.s1": 1,
}


@criterion(3, "Catalan decomposition table for n = 4 and totals for n <= 8")
def test_03_catalan(capsys):
    def body():
        assert cli.main(["catalan", "4", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert {r["word"]: r["c"] for r in doc["table"]} == CATALAN_4
        assert doc["total"] == 14
        for n in range(1, 9):
            assert sum(c for _, c in catalan_decomposition(n)) == catalan_number(n)
            assert sum(len(enumerate_adapted(w)) for w in enumerate_reduced(n)) == len(enumerate_nc(n))

    timed(30, body)


@criterion(4, "join of two nested partitions and lattice laws on M(w), |w| <= 6")
def test_04_join_and_laws():
    word = W("s1.s2.s3.s3.s3.s2.s2.s3.s3.s2.s1")
    pi = adapt(P([[1, 11], [2, 6], [3, 4, 5], [7, 10], [8], [9]]), word)
    rho = adapt(P([[1, 11], [2, 6, 7, 10], [3], [4, 5], [8, 9]]), word)

    def body():
        assert join_adapted(pi, rho).partition == P([[1, 11], [2, 6, 7, 10], [3, 4, 5], [8, 9]])

    timed(1, body)
    for n in range(1, 7):
        for w in enumerate_reduced(n):
            elems = enumerate_adapted(w)
            bot, top = least_element(w), greatest_element(w)
            for a, b in itertools.product(elems, repeat=2):
                j = join_adapted(a, b)
                assert j == join_adapted(b, a)
                assert refines(bot.partition, a.partition) and refines(a.partition, top.partition)
                uppers = [u for u in elems if refines(a.partition, u.partition) and refines(b.partition, u.partition)]
                assert j in uppers and all(refines(j.partition, u.partition) for u in uppers)
                lowers = [u for u in elems if refines(u.partition, a.partition) and refines(u.partition, b.partition)]
                assert sum(all(refines(v.partition, u.partition) for v in lowers) for u in lowers) == 1
            for a, b, c in itertools.islice(itertools.product(elems, repeat=3), 500):
                assert join_adapted(join_adapted(a, b), c) == join_adapted(a, join_adapted(b, c))


# ------------------------------------------------------------------ 5-8

def generic_spec(label, gens, seed):
    rng = random.Random(seed)
    table = {(): 1}
    for k in range(1, 5):
        for w in itertools.product(gens, repeat=k):
            table[w] = F(rng.randint(-50, 50) or 7, rng.randint(2, 17))
    return AlgebraSpec(label, gens, table, 4)


@criterion(5, "four-letter closed forms and their sum against the free product")
def test_05_four_letter_example():
    A, B = generic_spec(1, ("x", "y"), 11), generic_spec(2, ("u", "v"), 12)
    S = AlgebraSystem([A, B])
    a1, a3, b2, b4 = A.element("x"), A.element("y"), B.element("u"), B.element("v")
    args = (a1, b2, a3, b4)
    p = S.phi
    want = {
        "s1.s1.s1.s1": p(a1) * p(b2) * p(a3) * p(b4),
        "s1.s1.s2.s1": p(a1) * (p(a3) * p(b2 * b4) - p(a3) * p(b2) * p(b4)),
        "s1.s2.s1.s1": p(b2) * (p(a1 * a3) * p(b4) - p(a1) * p(a3) * p(b4)),
        "s1.s2.s2.s1": F(0),
    }
    for word, value in want.items():
        for e in ENGINES:
            assert psi(S, W(word), args, e) == value, (word, e)
    assert sum(want.values()) == free_product_oracle(S, args)


def random_system(rng, k, order):
    return AlgebraSystem([
        random_spec(rng, i, ("x", "y") if rng.random() < 0.5 else ("x",), order) for i in range(1, k + 1)
    ])


def random_args(rng, S, n, alternating=True):
    out = []
    for _ in range(n):
        labels = [l for l in S.labels if not (alternating and out and out[-1].label == l)]
        out.append(random_element(rng, S.spec(rng.choice(labels))))
    return tuple(out)


@criterion(6, "three symbolic engines agree on 100 seeded tables, all w in M_n, n <= 6")
def test_06_engines():
    def body():
        rng = random.Random(2024)
        for _ in range(100):
            S = random_system(rng, rng.choice((2, 3)), 6)
            for n in range(1, 7):
                args = random_args(rng, S, n)
                for w in enumerate_reduced(n):
                    vals = {psi(S, w, args, e) for e in ENGINES}
                    assert len(vals) == 1, (w, args)

    timed(300, body)


@criterion(7, "tensor oracle matches psi for n <= 6, exact and within 1e-9 in floats")
def test_07_oracle():
    def body():
        rng = random.Random(7)
        suites = [fixed_models()] + [random_models(rng, 2) for _ in range(2)]
        for models in suites:
            S = AlgebraSystem([m.to_spec(6) for m in models])
            exact = {N: build_space(models, N) for N in (1, 2, 3)}
            flt = {N: build_space(models, N, exact=False) for N in (1, 2, 3)}
            for n in range(1, 7):
                args = []
                for _ in range(n):
                    ch = [m for m in models if not args or m.label != args[-1].label]
                    args.append(random_model_element(rng, rng.choice(ch)))
                for w in enumerate_reduced(n):
                    N = default_truncation(w)
                    want = psi(S, w, args)
                    assert psi_oracle(exact[N], w, args) == want
                    assert abs(psi_oracle(flt[N], w, args) - float(want)) <= 1e-9

    timed(300, body)


@criterion(8, "free and boolean product sums on 50 instances, n <= 7, with freeness")
def test_08_products():
    rng = random.Random(88)
    for _ in range(50):
        S = random_system(rng, rng.choice((2, 3)), 7)
        n = rng.randint(1, 7)
        args = random_args(rng, S, n)
        assert free_product_moment(S, args) == free_product_oracle(S, args)
        prod = F(1)
        for a in args:
            prod *= S.phi(a)
        assert boolean_product_moment(S, args) == prod
        cent = tuple(S.centered(a) for a in args)
        assert sum(psi(S, w, cent) for w in enumerate_reduced(n)) == 0


# ------------------------------------------------------------------ 9-11

@criterion(9, "labelled adapted set of the seven-letter word and its labeling counts")
def test_09_labelled_set():
    # the colors carried by z(w) are s1 s2 s1 s1 s2 s2 s1; the reading
    # s1 s2 s1^3 s2 s1 with labels 1 2 1 1 1 2 1 admits none of these partitions
    parts = [
        P([[1, 3, 4, 7], [2], [5, 6]]),
        P([[1, 3, 4, 7], [2], [5], [6]]),
        P([[1, 3], [4, 7], [2], [5, 6]]),
        P([[1, 3], [4, 7], [2], [5], [6]]),
    ]
    word = W("s1.s2.s1.s1.s2.s2.s1")
    got = filter_by_label(enumerate_adapted(word), (1, 2, 1, 1, 2, 2, 1))
    assert sorted(a.partition for a in got) == sorted(parts)
    by_part = {a.partition: a for a in enumerate_adapted(word)}
    assert [len(admissible_labelings(by_part[p], (1, 2))) for p in parts] == [2, 2, 4, 4]
    literal = filter_by_label(enumerate_adapted(W("s1.s2.s1.s1.s1.s2.s1")), (1, 2, 1, 1, 1, 2, 1))
    assert not {a.partition for a in literal} & set(parts)


@criterion(10, "B(w) partition sums against inversion, and the noncrossing cumulant sum")
def test_10_cumulants():
    rng = random.Random(10)
    for _ in range(10):
        S = random_system(rng, 2, 6)
        for n in range(1, 6):
            args = random_args(rng, S, n, alternating=False)
            for w in enumerate_reduced(n):
                assert cumulant_B_of_word(S, w, args) == cumulant_B_by_inversion(S, w, args)
        for n in range(1, 7):
            args = random_args(rng, S, n, alternating=False)
            assert nc_moment_sum(S, args) == free_product_oracle(S, args)
            total = sum(cumulant_B_of_word(S, w, args) for w in enumerate_reduced(n))
            assert total == nc_irr_cumulant_sum(S, args) == free_boolean_cumulant(S, args)


def _powers(model):
    def f(x, k):
        m, out = model.element_matrix(x), model.identity()
        for _ in range(k):
            out = out @ m
        return out[0, 0]
    return f


@criterion(11, "replica orthogonality, p-perp cumulants and distributions at N = 4")
def test_11_replica():
    models = fixed_models()
    rep = check_orthogonality(build_space(models, 2), random.Random(0), max_inner=3)
    assert rep.ok(0) and set(rep.cases) == {"same-label", "remote", "conditional"}
    assert projection_defects(build_space(models, 2)) == {"orthogonal": 0, "idempotent": 0, "monotone": 0}
    rep = check_orthogonality(build_space(fixed_models(3), 4, exact=False), random.Random(1), max_inner=2, samples=1)
    assert rep.ok(1e-12)

    rng = random.Random(11)
    A = models[0]
    for n in range(1, 6):
        spec = A.to_spec(n)
        for _ in range(3):
            xs = [random_model_element(rng, A) for _ in range(n)]
            assert boolean_cumulant_via_p_perp(A, xs) == boolean_cumulant(spec, xs)

    x = models[0].to_spec(1).element("x + 1/2*y")
    y = models[1].to_spec(1).element("u + 1/3")
    pa, pb = _powers(models[0]), _powers(models[1])
    S = AlgebraSystem([m.to_spec(7) for m in models])
    space = build_space(models, 4, exact=False)
    for kind in ("free", "s-free", "orthogonal", "monotone"):
        r = independence_realization(space, kind, x, y, 7)
        second = r.second_moments if kind in ("free", "monotone") else r.conditioned_second
        for k in range(1, 8):
            assert abs(r.first_moments[k - 1] - float(pa(x, k))) <= 1e-9
            assert abs(second[k - 1] - float(pb(y, k))) <= 1e-9
        for word, val in r.mixed.items():
            if len(word) > 5:
                continue
            xs = [x if ch == "X" else y for ch in word]
            if kind == "free":
                assert abs(val - float(free_product_oracle(S, xs))) <= 1e-9
            elif kind == "monotone":
                assert abs(val - float(monotone_moment(pa, pb, word, x, y))) <= 1e-9
            else:
                want = sum(psi(S, cols, xs) for cols in itertools.product(*(r.colors[ch] for ch in word)))
                assert abs(val - float(want)) <= 1e-9


def test_zz_report(capsys):
    """Print the per-criterion lines once every criterion has run."""
    lines = []
    for k in range(1, 12):
        ok, title = RESULTS.get(k, (False, "not run"))
        lines.append(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}")
    with capsys.disabled():
        print("\n" + "\n".join(lines))
    missing = [k for k in range(1, 12) if k not in RESULTS]
    if missing:
        pytest.skip(f"criteria not run in this session: {missing}")
    assert all(ok for ok, _ in RESULTS.values())
