import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from seplab import (
    CapExceeded,
    GameGraph,
    GraphParity,
    ValidationError,
    classify_graph,
    count_game_graphs,
    encode_set_word,
    enumerate_game_graphs,
    hub_letter,
    is_cycles_prefix,
    is_walk,
    nodes_of_word,
)


def graph(n, d, priorities):
    return GameGraph.from_map(n, d, priorities)


def oracle_classify(g):
    """Naive oracle: enumerate all simple cycles, check max-priority parities."""
    dig = nx.DiGraph()
    dig.add_nodes_from(range(1, g.n + 1))
    for u, v, p in g.edges:
        dig.add_edge(u, v, priority=p)
    has_odd = has_even = False
    for cycle in nx.simple_cycles(dig):
        top = max(
            dig.edges[cycle[i], cycle[(i + 1) % len(cycle)]]["priority"]
            for i in range(len(cycle))
        )
        if top % 2:
            has_odd = True
        else:
            has_even = True
    if not has_odd:
        return GraphParity.EVEN
    if not has_even:
        return GraphParity.ODD
    return GraphParity.NEITHER


class TestValidation:
    def test_missing_out_edge_rejected(self):
        with pytest.raises(ValidationError):
            graph(2, 2, {(1, 2): 1})

    def test_priority_range_rejected(self):
        with pytest.raises(ValidationError):
            graph(1, 1, {(1, 1): 2})

    def test_node_range_rejected(self):
        with pytest.raises(ValidationError):
            graph(1, 2, {(1, 2): 1})


class TestClassify:
    def test_single_odd_loop(self):
        assert classify_graph(graph(1, 2, {(1, 1): 1})) is GraphParity.ODD

    def test_single_even_loop(self):
        assert classify_graph(graph(1, 2, {(1, 1): 2})) is GraphParity.EVEN

    def test_mixed_graph_is_neither(self):
        g = graph(2, 2, {(1, 2): 1, (2, 1): 1, (1, 1): 2})
        assert classify_graph(g) is GraphParity.NEITHER

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_agrees_with_cycle_enumeration_oracle(self, n):
        for g in enumerate_game_graphs(n, 2):
            assert classify_graph(g) is oracle_classify(g)


class TestEnumeration:
    def test_single_node_single_priority(self):
        assert list(enumerate_game_graphs(1, 1)) == [graph(1, 1, {(1, 1): 1})]

    def test_single_node_two_priorities(self):
        assert sum(1 for _ in enumerate_game_graphs(1, 2)) == 2

    def test_count_two_nodes(self):
        graphs = list(enumerate_game_graphs(2, 2))
        assert len(graphs) == 64 == count_game_graphs(2, 2)

    @pytest.mark.parametrize("n,d", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2)])
    def test_distinct_and_matching_closed_form(self, n, d):
        seen = set()
        for g in enumerate_game_graphs(n, d):
            assert g.edges not in seen
            seen.add(g.edges)
        assert len(seen) == count_game_graphs(n, d)

    def test_cap_refusal(self):
        with pytest.raises(CapExceeded):
            next(enumerate_game_graphs(5, 2))


class TestWords:
    def test_encode_sorts(self):
        assert encode_set_word({3, 1}) == ((1, 1), (3, 1))

    def test_encode_empty(self):
        assert encode_set_word(set()) == ()

    def test_encode_triple(self):
        assert encode_set_word({2, 5, 7}) == ((2, 1), (5, 1), (7, 1))

    def test_nodes_of_word(self):
        assert nodes_of_word(((2, 1), (5, 1))) == {2, 5}
        assert nodes_of_word(()) == frozenset()
        assert nodes_of_word(((1, 1), (1, 2), (3, 1))) == {1, 3}

    @given(st.sets(st.integers(min_value=1, max_value=40), max_size=8))
    def test_nodes_inverts_encode(self, xs):
        assert set(nodes_of_word(encode_set_word(xs))) == xs

    def test_hub_letter(self):
        assert hub_letter(3, 1) == (4, 2)
        assert hub_letter(3, 2) == (5, 2)
        assert hub_letter(10, 3) == (13, 2)

    def test_hub_letter_range_error(self):
        with pytest.raises(ValidationError):
            hub_letter(3, 2, alphabet_n=4)
        with pytest.raises(ValidationError):
            hub_letter(3, 0)


class TestIsWalk:
    def test_loop_walk(self):
        g = graph(1, 1, {(1, 1): 1})
        assert is_walk(g, ((1, 1), (1, 1), (1, 1)))

    def test_missing_priority(self):
        g = graph(1, 2, {(1, 1): 1})
        assert not is_walk(g, ((1, 2),))

    def test_two_node_cycle_with_dangling_letter(self):
        g = graph(2, 2, {(1, 2): 2, (2, 1): 1})
        assert is_walk(g, ((1, 2), (2, 1), (1, 2)))

    def test_empty_word_is_walk(self):
        assert is_walk(graph(1, 1, {(1, 1): 1}), ())

    def test_random_walks_are_walks(self, rng):
        for g in rng.sample(list(enumerate_game_graphs(3, 2)), 50):
            node = rng.randint(1, g.n)
            word = []
            for _ in range(rng.randint(1, 8)):
                target, pri = rng.choice(g.successors[node])
                word.append((node, pri))
                node = target
            assert is_walk(g, tuple(word))


class TestCyclesPrefix:
    def test_chain_prefix_realizable_both_ways(self):
        for n in (2, 3, 4):
            word = tuple((i, 1) for i in range(1, n))
            assert is_cycles_prefix(word, n, GraphParity.ODD)
            assert is_cycles_prefix(word, n, GraphParity.EVEN)

    def test_odd_loop_prefix(self):
        assert is_cycles_prefix(((1, 1), (1, 1)), 1, GraphParity.ODD)

    def test_forced_even_loop_is_not_odd(self):
        assert not is_cycles_prefix(((1, 2), (1, 2)), 1, GraphParity.ODD)

    def test_conflicting_forced_edges(self):
        # (1,1)(2,..) forces edge 1->2 at priority 1; (1,2)(2,..) at priority 2
        word = ((1, 1), (2, 1), (1, 2), (2, 1))
        assert not is_cycles_prefix(word, 2, GraphParity.ODD)
        assert not is_cycles_prefix(word, 2, GraphParity.EVEN)

    def test_matches_exhaustive_search(self):
        letters = [(v, p) for v in (1, 2) for p in (1, 2)]
        for length in range(4):
            for word in itertools.product(letters, repeat=length):
                for parity in (GraphParity.EVEN, GraphParity.ODD):
                    brute = any(
                        classify_graph(g) is parity and is_walk(g, word)
                        for g in enumerate_game_graphs(2, 2)
                    )
                    assert is_cycles_prefix(word, 2, parity) == brute

    def test_letter_out_of_range(self):
        with pytest.raises(ValidationError):
            is_cycles_prefix(((3, 1),), 2, GraphParity.ODD)
