import itertools

import pytest
from hypothesis import given, strategies as st

from seplab import (
    GameGraph,
    SafetyAutomaton,
    ValidationError,
    canonicalize,
    counter_automaton,
    counter_separator,
    delta_star,
    enumerate_automata,
    make_absorbing,
    product_reach,
)


def two_state(n, d, start, accept, row0, row1):
    return SafetyAutomaton(n, d, 2, start, accept, (tuple(row0), tuple(row1)))


words2 = st.lists(
    st.tuples(st.integers(1, 2), st.integers(1, 2)), max_size=8
).map(tuple)


class TestDeltaStar:
    def test_empty_word_identity(self):
        a = counter_separator(2)
        for q in range(a.states):
            assert delta_star(a, q, ()) == q

    @given(words2, words2)
    def test_fold_splits(self, u, v):
        a = counter_separator(2)
        assert delta_star(a, a.start, u + v) == delta_star(a, delta_star(a, a.start, u), v)

    def test_counter_accepts_after_three_twos(self):
        a = counter_separator(2)
        assert delta_star(a, a.start, ((1, 2), (1, 2), (1, 2))) == a.accept

    def test_letter_out_of_alphabet(self):
        a = counter_separator(2)
        with pytest.raises(ValidationError):
            a.step(0, (3, 1))


class TestAbsorbing:
    def test_already_absorbing_unchanged(self):
        a = counter_separator(2)
        assert make_absorbing(a) is a

    def test_normalizes_leaky_accept(self):
        leaky = two_state(1, 1, 0, 1, [1], [0])
        fixed = make_absorbing(leaky)
        assert fixed.transitions[1] == (1,)
        assert make_absorbing(fixed) is fixed


class TestCounter:
    def test_state_count(self):
        assert counter_separator(2).states == 4

    def test_priority_one_letters_do_not_move(self):
        a = counter_separator(2)
        word = tuple((1 + i % 2, 1) for i in range(10))
        assert delta_star(a, a.start, word) == a.start

    def test_mixed_word_reaches_accept(self):
        a = counter_separator(2)
        assert delta_star(a, a.start, ((1, 2), (1, 1), (2, 2), (2, 2))) == a.accept

    def test_accepts_iff_enough_twos(self, rng):
        a = counter_separator(2)
        for _ in range(200):
            word = tuple(
                (rng.randint(1, 2), rng.randint(1, 2)) for _ in range(rng.randint(0, 9))
            )
            twos = sum(1 for _, p in word if p == 2)
            assert (delta_star(a, a.start, word) == a.accept) == (twos >= 3)


class TestProduct:
    def test_single_loop_product(self):
        g = GameGraph.from_map(1, 1, {(1, 1): 1})
        a = SafetyAutomaton(1, 1, 1, 0, 0, ((0,),))
        product = product_reach(a, g)
        assert product.vertices == ((1, 0),)
        assert product.arcs == (((1, 0), (1, 1), (1, 0)),)

    def test_odd_loop_never_reaches_accept(self):
        g = GameGraph.from_map(1, 2, {(1, 1): 1})
        product = product_reach(counter_separator(2), g)
        accept = counter_separator(2).accept
        assert all(q != accept for _, q in product.vertices)

    def test_even_loop_reaches_accept_at_depth_three(self):
        a = counter_separator(2)
        g = GameGraph.from_map(1, 2, {(1, 1): 2})
        product = product_reach(a, g)
        # the only walk is (1,2)^omega: states advance one count per step
        assert (1, a.accept) in product.vertices
        depth = {(1, a.start): 0}
        frontier = [(1, a.start)]
        while frontier:
            nxt = []
            for vertex in frontier:
                for _l, dst in product.successors[vertex]:
                    if dst not in depth:
                        depth[dst] = depth[vertex] + 1
                        nxt.append(dst)
            frontier = nxt
        assert depth[(1, a.accept)] == 3

    def test_cosimulation_with_random_walks(self, rng):
        from seplab import enumerate_game_graphs

        a = counter_separator(3)
        for g in rng.sample(list(enumerate_game_graphs(3, 2)), 40):
            product = product_reach(a, g)
            arcs = set(product.arcs)
            node, state = rng.randint(1, g.n), a.start
            for _ in range(6):
                target, pri = rng.choice(g.successors[node])
                next_state = a.step(state, (node, pri))
                assert ((node, state), (node, pri), (target, next_state)) in arcs
                assert (target, next_state) in product.vertices
                node, state = target, next_state


class TestEnumerateAutomata:
    def test_single_state(self):
        autos = list(enumerate_automata(2, 2, 1))
        assert len(autos) == 1
        only = autos[0]
        assert only.states == 1 and only.start == only.accept == 0

    def test_two_states_one_letter_alphabet(self):
        # raw forms: 4 (accept in {0,1} x one free row over 2 targets);
        # canonically: all-accepting, never-accepting, accept-after-one-letter
        autos = list(enumerate_automata(1, 1, 2))
        assert len(autos) == 3

    def test_all_yielded_absorbing_and_canonical(self):
        for a in enumerate_automata(2, 2, 2):
            assert a.is_absorbing
            assert make_absorbing(a) is a
            assert canonicalize(a) == a
            assert a.start == 0

    def test_distinct_behaviours(self):
        seen = set()
        for a in enumerate_automata(2, 2, 2):
            key = (a.states, a.accept, a.transitions)
            assert key not in seen
            seen.add(key)

    def test_canonicalize_renames_start_to_zero(self):
        a = two_state(1, 1, 1, 0, [0], [0])
        c = canonicalize(a)
        assert c.start == 0
        assert delta_star(c, c.start, ((1, 1),)) == c.accept
