import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motzkin_functionals.algebra import AlgebraSpec, Element, LabelMismatch, random_element, random_spec
from motzkin_functionals.engine import (
    ENGINES,
    AlgebraSystem,
    FormalSeries,
    NonAlternatingLabels,
    beta,
    boolean_product_moment,
    compress,
    cumulant_B_by_inversion,
    cumulant_B_of_word,
    free_boolean_cumulant,
    free_product_moment,
    free_product_oracle,
    nc_irr_cumulant_sum,
    nc_moment_sum,
    normalize_word,
    psi,
    psi_first_return,
    psi_of_product,
    psi_partition_sum,
    psi_series,
    psi_singleton_recursion,
)
from motzkin_functionals.partitions import SetPartition
from motzkin_functionals.words import EMPTY, constant_word, enumerate_reduced, is_reduced_motzkin
from motzkin_functionals.words import parse_word as W

from oracles import all_set_partitions, crosses


def generic_spec(label, gens, seed, order=4):
    # distinct, unstructured rationals so accidental cancellations are unlikely
    rng = random.Random(seed)
    table = {(): 1}
    for k in range(1, order + 1):
        for w in itertools.product(gens, repeat=k):
            table[w] = F(rng.randint(-50, 50) or 7, rng.randint(2, 17))
    return AlgebraSpec(label, gens, table, order)


@pytest.fixture(scope="module")
def four():
    A, B = generic_spec(1, ("x", "y"), 11), generic_spec(2, ("u", "v"), 12)
    system = AlgebraSystem([A, B])
    a1, a3 = A.element("x"), A.element("y")
    b2, b4 = B.element("u"), B.element("v")
    return system, (a1, b2, a3, b4)


class TestFourLetterWords:
    def test_boolean_word(self, four):
        S, (a1, b2, a3, b4) = four
        want = S.phi(a1) * S.phi(b2) * S.phi(a3) * S.phi(b4)
        for e in ENGINES:
            assert psi(S, W("s1.s1.s1.s1"), (a1, b2, a3, b4), e) == want

    def test_s1s1s2s1(self, four):
        S, (a1, b2, a3, b4) = four
        p = S.phi
        want = p(a1) * (p(a3) * p(b2 * b4) - p(a3) * p(b2) * p(b4))
        for e in ENGINES:
            assert psi(S, W("s1.s1.s2.s1"), (a1, b2, a3, b4), e) == want
        assert want != 0

    def test_s1s2s1s1(self, four):
        S, (a1, b2, a3, b4) = four
        p = S.phi
        want = p(b2) * (p(a1 * a3) * p(b4) - p(a1) * p(a3) * p(b4))
        for e in ENGINES:
            assert psi(S, W("s1.s2.s1.s1"), (a1, b2, a3, b4), e) == want
        assert want != 0

    def test_s1s2s2s1_vanishes(self, four):
        S, args = four
        for e in ENGINES:
            assert psi(S, W("s1.s2.s2.s1"), args, e) == 0

    def test_sum_is_free_product(self, four):
        S, args = four
        total = sum(psi(S, w, args) for w in enumerate_reduced(4))
        assert total == free_product_oracle(S, args) == free_product_moment(S, args)

    def test_three_letter_first_return(self, four):
        S, (a1, b2, a3, _) = four
        p = S.phi
        assert psi_first_return(S, W("s1.s2.s1"), (a1, b2, a3)) == p(b2) * (p(a1 * a3) - p(a1) * p(a3))


class TestNormalization:
    def setup_method(self):
        self.A = generic_spec("A", ("x",), 1)
        self.B = generic_spec("B", ("y",), 2)
        self.S = AlgebraSystem([self.A, self.B])
        self.x, self.y = self.A.element("x"), self.B.element("y")

    def test_merge_same_color(self):
        n = compress((1, 1, 1), (self.x, self.x, self.y))
        assert n.colors == (1, 1) and n.args == (self.x * self.x, self.y)

    def test_different_colors_vanish(self):
        assert compress((1, 2, 2, 1), (self.y, self.x, self.x, self.y)).colors == (1, 2, 1)
        assert compress((1, 2, 1), (self.x, self.x, self.y)).is_zero

    def test_psi_merges(self):
        x, y = self.x, self.y
        assert psi(self.S, W("s1.s1.s1"), (x, x, y)) == psi(self.S, W("s1.s1"), (x * x, y))

    def test_reduction_property(self):
        x, y = self.x, self.y
        xc = self.S.centered(x)
        one = Element.unit("B")
        # centered, color-ascending prefix before a unit: delete it
        got = normalize_word(self.S, (1, 2, 1), (xc, one, x))
        assert got.colors == (1,) and got.args == (xc * x,)
        # wrong colors: vanishes
        assert normalize_word(self.S, (1, 1, 1), (xc, one, x)).is_zero
        assert psi(self.S, W("s1.s2.s2.s1"), (y, xc, one, xc)) == 0

    def test_scalar_pulled_out(self):
        x = self.x
        three = Element.unit("B", 3)
        assert psi(self.S, W("s1.s1.s1"), (x, three, x)) == 3 * self.S.phi(x) ** 2

    def test_zero_argument(self):
        assert psi(self.S, W("s1.s1"), (self.x, Element.zero("B"))) == 0

    def test_non_alternating_rejected_by_recursions(self):
        x = self.x
        for fn in (psi_singleton_recursion, psi_first_return):
            with pytest.raises(NonAlternatingLabels):
                fn(self.S, W("s1.s1"), (x, x))

    def test_unknown_engine(self):
        with pytest.raises(ValueError):
            psi(self.S, W("s1"), (self.x,), "magic")

    def test_empty(self):
        assert psi(self.S, EMPTY, ()) == 1

    def test_single_letter_power(self):
        x = self.x
        assert psi(self.S, W("s1"), (x * x * x,)) == self.S.phi(x * x * x)
        assert psi_of_product(self.S, W("s1"), (x, x, x)) == self.S.phi(x * x * x)

    def test_not_motzkin_vanishes(self):
        x, y = self.x, self.y
        assert psi(self.S, (1, 3, 1), (x, y, x)) == 0
        assert psi(self.S, (2, 2), (x, y)) == 0


class TestBeta:
    def test_singletons_and_one_block(self):
        A = generic_spec("A", ("x",), 3)
        S = AlgebraSystem([A])
        x = A.element("x")
        xs = (x, A.element("x + 1"), 2 * x)
        assert beta(S, SetPartition.singletons(3), xs) == S.phi(xs[0]) * S.phi(xs[1]) * S.phi(xs[2])
        assert beta(S, SetPartition.one_block(3), xs) == S.cumulant(xs)

    def test_mixed_block(self, four):
        S, args = four
        with pytest.raises(LabelMismatch):
            beta(S, SetPartition.from_blocks([[1, 2], [3], [4]]), args)

    def test_empty_adapted_set(self, four):
        S, args = four
        assert psi_partition_sum(S, W("s1.s2.s2.s1"), args) == 0


def random_system(rng, k):
    specs = [random_spec(rng, i, ("x", "y") if rng.random() < 0.5 else ("x",), 7) for i in range(1, k + 1)]
    return AlgebraSystem(specs)


def random_args(rng, S, n, alternating=True, unit=True):
    labels, out = S.labels, []
    for _ in range(n):
        choices = [l for l in labels if not (alternating and out and out[-1].label == l)] or labels
        out.append(random_element(rng, S.spec(rng.choice(choices)), unit_weight=unit))
    return tuple(out)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6), st.integers(2, 3))
def test_engines_agree(seed, n, k):
    rng = random.Random(seed)
    S = random_system(rng, k)
    args = random_args(rng, S, n)
    for w in enumerate_reduced(n):
        vals = {e: psi(S, w, args, e) for e in ENGINES}
        assert len(set(vals.values())) == 1, (w, vals)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_engines_agree_non_alternating(seed, n):
    # normalization must make label repeats and units harmless
    rng = random.Random(seed)
    S = random_system(rng, 2)
    args = random_args(rng, S, n, alternating=False)
    for w in enumerate_reduced(n):
        direct = psi_partition_sum(S, w, args)
        for e in ENGINES:
            assert psi(S, w, args, e) == direct


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 7))
def test_theorem_free_and_boolean(seed, n):
    rng = random.Random(seed)
    S = random_system(rng, rng.choice((2, 3)))
    args = random_args(rng, S, n, alternating=rng.random() < 0.7)
    assert free_product_moment(S, args) == free_product_oracle(S, args)
    assert psi_series(S, FormalSeries.all_reduced(n), args) == free_product_oracle(S, args)
    prod = F(1)
    for _, run in itertools.groupby(args, key=lambda a: a.label):
        run = list(run)
        merged = run[0]
        for a in run[1:]:
            merged = merged * a
        prod *= S.phi(merged)
    assert boolean_product_moment(S, args) == prod
    assert psi_series(S, FormalSeries.constant(n), args) == prod


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_freeness(seed, n):
    rng = random.Random(seed)
    S = random_system(rng, rng.choice((2, 3)))
    args = tuple(S.centered(a) for a in random_args(rng, S, n))
    for e in ENGINES:
        assert sum(psi(S, w, args, e) for w in enumerate_reduced(n)) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_nc_expansion(seed, n):
    rng = random.Random(seed)
    S = random_system(rng, 2)
    args = random_args(rng, S, n, alternating=False, unit=False)
    assert nc_moment_sum(S, args) == free_product_oracle(S, args)


def nearest_outer(blocks):
    for b in blocks:
        outer = [c for c in blocks if c[0] < b[0] and b[-1] < c[-1]]
        if outer:
            yield b, max(outer, key=lambda c: c[0])


def test_nc_expansion_brute_force():
    # independent NC(n, ℓ) enumeration from all set partitions
    rng = random.Random(5)
    S = random_system(rng, 2)
    for n in range(1, 6):
        args = random_args(rng, S, n, alternating=False, unit=False)
        labels = [a.label for a in args]
        total = F(0)
        for p in all_set_partitions(n):
            if crosses(p) or any(len({labels[i - 1] for i in b}) > 1 for b in p):
                continue
            if any(labels[b[0] - 1] == labels[o[0] - 1] for b, o in nearest_outer(p)):
                continue
            total += beta(S, SetPartition.from_blocks(p, n), args)
        assert total == free_product_oracle(S, args)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 5))
def test_cumulant_of_word(seed, n):
    rng = random.Random(seed)
    S = random_system(rng, 2)
    args = random_args(rng, S, n, alternating=False)
    for w in enumerate_reduced(n):
        assert cumulant_B_of_word(S, w, args) == cumulant_B_by_inversion(S, w, args)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_free_boolean_cumulants(seed, n):
    rng = random.Random(seed)
    S = random_system(rng, 2)
    args = random_args(rng, S, n, alternating=False, unit=False)
    total = sum(cumulant_B_of_word(S, w, args) for w in enumerate_reduced(n))
    assert total == nc_irr_cumulant_sum(S, args) == free_boolean_cumulant(S, args)


class TestCumulantExamples:
    def test_single(self, four):
        S, (a1, *_) = four
        assert cumulant_B_of_word(S, W("s1"), (a1,)) == S.phi(a1)

    def test_tent(self, four):
        S, (a1, b2, a3, _) = four
        assert cumulant_B_of_word(S, W("s1.s2.s1"), (a1, b2, a3)) == S.cumulant((a1, a3)) * S.cumulant((b2,))

    def test_reducible_word_has_no_irreducible_partitions(self, four):
        S, (a1, b2, *_) = four
        assert cumulant_B_of_word(S, W("s1.s1"), (a1, b2)) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 5), st.data())
def test_multilinear(seed, n, data):
    rng = random.Random(seed)
    S = random_system(rng, 2)
    args = list(random_args(rng, S, n))
    w = data.draw(st.sampled_from(enumerate_reduced(n)))
    k = data.draw(st.integers(0, n - 1))
    other = random_element(rng, S.spec(args[k].label))
    c = F(rng.randint(-4, 4), rng.randint(1, 4))
    mixed = args[:k] + [args[k] + c * other] + args[k + 1:]
    alt = args[:k] + [other] + args[k + 1:]
    for e in ENGINES:
        assert psi(S, w, mixed, e) == psi(S, w, args, e) + c * psi(S, w, alt, e)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.lists(st.integers(1, 4), min_size=1, max_size=6))
def test_vanishing_off_motzkin(seed, colors):
    rng = random.Random(seed)
    S = random_system(rng, 2)
    args = random_args(rng, S, len(colors))
    if not is_reduced_motzkin(colors):
        assert psi(S, colors, args) == 0
    # label clash: neighbours with the same label but different colors
    if len(colors) >= 2 and colors[0] != colors[1]:
        clash = (args[0], random_element(rng, S.spec(args[0].label), unit_weight=False)) + args[2:]
        assert psi(S, colors, clash) == 0


def test_single_algebra_products():
    rng = random.Random(9)
    A = random_spec(rng, "A", ("x", "y"), 5)
    S = AlgebraSystem([A])
    x, y = A.element("x"), A.element("y")
    for args in [(x,), (x, y), (x, y, x * y)]:
        prod = args[0]
        for a in args[1:]:
            prod = prod * a
        assert free_product_moment(S, args) == A.phi(prod)


def test_remark_per_letter():
    rng = random.Random(4)
    A = random_spec(rng, "A", ("x",), 5)
    S = AlgebraSystem([A])
    x = A.element("x")
    # φ(s_1^n)(a, ..., a) collapses to the moment of a^n
    for n in range(1, 6):
        assert psi(S, constant_word(n), (x,) * n) == A.phi(Element.gen("A", *("x",) * n))
