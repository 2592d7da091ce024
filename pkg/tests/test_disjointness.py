import itertools
import math
from fractions import Fraction

import pytest

from seplab import (
    Box,
    CapExceeded,
    CoverCertificate,
    DisjointnessInstance,
    SetFamily,
    ValidationError,
    check_cover,
    count_disjoint_tuples,
    disj_cc_lower_bound,
    disj_value,
    forcing_size_bound,
    gen_close_tuples,
    gen_disjoint_tuples,
    min_cover_bruteforce,
    min_forcing_family_size,
)
from seplab.families import all_sets

fs = frozenset
HALF = Fraction(1, 2)


class TestDisjValue:
    def test_disjoint_singletons(self):
        assert disj_value((fs({1}), fs({2})), HALF) == 1

    def test_equal_singletons_close(self):
        assert disj_value((fs({1}), fs({1})), HALF) == 0

    def test_promise_violated(self):
        assert disj_value((fs({1, 2, 3}), fs({3, 4, 5})), HALF) is None

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            disj_value((fs({1}), fs({1, 2})), HALF)

    def test_empty_sets_count_as_disjoint(self):
        # degenerate a = 0 satisfies both promises; disjointness wins
        assert disj_value((fs(), fs()), HALF) == 1


class TestStreams:
    @pytest.mark.parametrize(
        "n,k", [(n, k) for n in range(2, 9) for k in (2, 3) if k <= n]
    )
    def test_disjoint_count_matches_product_formula(self, n, k):
        tuples = list(gen_disjoint_tuples(n, k))
        assert len(tuples) == count_disjoint_tuples(n, k)
        assert len(set(tuples)) == len(tuples)

    def test_count_formula_example(self):
        assert count_disjoint_tuples(4, 2) == math.comb(4, 2) * math.comb(2, 2) == 6

    def test_close_tuples_tiny(self):
        assert list(gen_close_tuples(2, 2, HALF)) == [
            (fs({1}), fs({1})),
            (fs({2}), fs({2})),
        ]

    def test_disjoint_never_close_for_small_gamma(self):
        close = set(gen_close_tuples(4, 2, Fraction(2, 5)))
        for tup in gen_disjoint_tuples(4, 2):
            assert tup not in close

    def test_lexicographic_order(self):
        tuples = [tuple(tuple(sorted(s)) for s in t) for t in gen_disjoint_tuples(4, 2)]
        assert tuples == sorted(tuples)


class TestCover:
    def make_cover(self, n, k, gamma, boxes):
        inst = DisjointnessInstance(n, k, gamma)
        return CoverCertificate(inst, tuple(boxes))

    def test_singleton_boxes_cover(self):
        a = 1
        boxes = [
            Box(tuple(SetFamily(2, a, fs([x])) for x in tup))
            for tup in gen_disjoint_tuples(2, 2)
        ]
        assert check_cover(self.make_cover(2, 2, HALF, boxes))

    def test_full_box_contains_close_tuple(self):
        layer = fs(all_sets(2, 1))
        full = Box((SetFamily(2, 1, layer), SetFamily(2, 1, layer)))
        assert not check_cover(self.make_cover(2, 2, HALF, [full]))

    def test_empty_cover_fails(self):
        assert not check_cover(self.make_cover(2, 2, HALF, []))

    def test_min_cover_two_singletons(self):
        assert min_cover_bruteforce(2, 2, HALF) == 2

    def test_min_cover_diagonal_instance(self):
        assert min_cover_bruteforce(4, 2, Fraction(2, 5)) >= 2

    def test_min_cover_never_exceeds_universe(self):
        for n, k, gamma in [(2, 2, HALF), (3, 3, HALF), (4, 2, Fraction(2, 5))]:
            assert min_cover_bruteforce(n, k, gamma) <= count_disjoint_tuples(n, k)

    def test_every_checked_cover_at_least_minimum(self):
        # singleton covers are valid, so the exact minimum is attainable and
        # no valid certificate can beat it
        n, k, gamma = 2, 2, HALF
        minimum = min_cover_bruteforce(n, k, gamma)
        tuples = list(gen_disjoint_tuples(n, k))
        for size in range(1, len(tuples) + 1):
            for subset in itertools.combinations(tuples, size):
                boxes = [
                    Box(tuple(SetFamily(n, 1, fs([x])) for x in tup)) for tup in subset
                ]
                if check_cover(self.make_cover(n, k, gamma, boxes)):
                    assert size >= minimum

    def test_cap_refusal(self):
        with pytest.raises(CapExceeded):
            min_cover_bruteforce(8, 2, HALF)


class TestLowerBoundFormula:
    def test_applicable_point(self):
        value = disj_cc_lower_bound(10**8, 10, Fraction(1, 10))
        assert value is not None
        # gamma^2 n / (1e4 k) = 10 and 2 log2(1e8) = 53.1508...
        assert value == pytest.approx(10 - 2 * math.log2(10**8), rel=1e-12)

    def test_inapplicable_ratio(self):
        assert disj_cc_lower_bound(100, 10, Fraction(1, 10)) is None

    def test_value_increases_with_n(self):
        xs = [disj_cc_lower_bound(n, 10, Fraction(1, 10)) for n in (10**8, 10**9, 10**10)]
        assert all(x is not None for x in xs)
        assert xs == sorted(xs)

    def test_boundary_ratio_exact(self):
        # k/gamma = sqrt(n)/100 exactly: applicable
        assert disj_cc_lower_bound(10**8, 10, Fraction(1, 10)) is not None
        # one short of the square: inapplicable
        assert disj_cc_lower_bound(10**8 - 1, 10, Fraction(1, 10)) is None


class TestForcingSize:
    def test_threshold_at_k_two(self):
        assert forcing_size_bound(6, 2, 0, 2) == pytest.approx(238.01867211853, rel=1e-10)

    def test_threshold_doubling_structure(self):
        for k in (2, 3, 4):
            lower = forcing_size_bound(6, 2, 0, k)
            upper = forcing_size_bound(6, 2, 0, k + 1)
            assert upper == pytest.approx(2 * lower, rel=1e-12)

    def test_pair_forcing_on_singletons(self):
        # two singleton families of size 2 over a 3-element universe must
        # share an element, and size-1 families need not: exact value 2
        assert min_forcing_family_size(3, 1, 0, 2) == 2

    def test_triple_forcing_on_singletons(self):
        # {1,2}, {2,3}, {1,3} as singleton families have no common element,
        # so size 2 fails; full families share everything
        assert min_forcing_family_size(3, 1, 0, 3) == 3

    def test_monotone_and_doubling(self):
        points = [(3, 1, 0), (4, 1, 0), (4, 2, 0), (4, 2, 1)]
        for n, a, t in points:
            k2 = min_forcing_family_size(n, a, t, 2)
            k3 = min_forcing_family_size(n, a, t, 3)
            assert k2 <= k3 <= 2 * k2

    def test_pairwise_value_against_independent_oracle(self):
        # oracle: largest N with a t-far pair of families both of size >= N,
        # searched over all subsets with the maximal compatible partner
        for n, a, t in [(3, 1, 0), (4, 1, 0), (4, 2, 0), (4, 2, 1)]:
            universe = all_sets(n, a)
            best = 0
            for r in range(len(universe) + 1):
                for members in itertools.combinations(universe, r):
                    partner = [
                        y
                        for y in universe
                        if all(len(x & y) <= t for x in members)
                    ]
                    best = max(best, min(len(members), len(partner)))
            assert min_forcing_family_size(n, a, t, 2) == best + 1

    def test_bound_dominates_exact_where_sane(self):
        for n, a, t in [(3, 1, 0), (4, 2, 0), (4, 2, 1)]:
            assert min_forcing_family_size(n, a, t, 2) <= math.floor(
                forcing_size_bound(n, a, t, 2)
            ) + 1
