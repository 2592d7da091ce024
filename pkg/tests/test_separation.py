import itertools

import pytest

from seplab import (
    GameGraph,
    GraphParity,
    ParityArena,
    PreconditionError,
    Reason,
    SafetyAutomaton,
    agreement_sweep,
    attractor,
    classify_graph,
    confirm_refutation,
    counter_automaton,
    counter_separator,
    derive_time_bound,
    enumerate_automata,
    enumerate_game_graphs,
    is_walk,
    refute_small_separator,
    solve_parity_direct,
    solve_parity_via_separator,
    verify_time_t,
    verify_unrestricted,
)
from seplab.separation import separation_profile


def all_accepting(n, d):
    return SafetyAutomaton(n, d, 1, 0, 0, ((0,) * (n * d),))


def never_accepting(n, d):
    rows = ((0,) * (n * d), (1,) * (n * d))
    return SafetyAutomaton(n, d, 2, 0, 1, rows)


class TestVerifyTimeT:
    def test_counter_separates_two_nodes_in_time_six(self):
        assert verify_time_t(counter_separator(2), 2, 2, 6).ok

    def test_fails_at_time_five(self):
        verdict = verify_time_t(counter_separator(2), 2, 2, 5)
        assert not verdict.ok
        ce = verdict.counterexample
        assert ce.reason is Reason.EVEN_NOT_ACCEPTED_BY_T
        assert len(ce.word) == 5
        assert is_walk(ce.graph, ce.word)
        assert classify_graph(ce.graph) is GraphParity.EVEN

    def test_all_accepting_fails_on_odd_side(self):
        verdict = verify_time_t(all_accepting(2, 2), 2, 2, 6)
        assert not verdict.ok
        assert verdict.counterexample.reason is Reason.ODD_ACCEPTED

    def test_unreachable_accept_fails_on_even_side(self):
        verdict = verify_time_t(never_accepting(2, 2), 2, 2, 6)
        assert not verdict.ok
        assert verdict.counterexample.reason is Reason.EVEN_NOT_ACCEPTED_BY_T

    def test_monotone_in_t(self):
        a = counter_automaton(2, 2)  # 3-state separator at n = 2
        results = [verify_time_t(a, 2, 2, t).ok for t in range(8)]
        assert results == sorted(results)  # once ok, stays ok


class TestVerifyUnrestricted:
    def test_counter_ok(self):
        assert verify_unrestricted(counter_separator(2), 2, 2).ok

    def test_never_accepting_fails(self):
        verdict = verify_unrestricted(never_accepting(1, 2), 1, 2)
        assert not verdict.ok
        ce = verdict.counterexample
        assert ce.reason is Reason.EVEN_NEVER_ACCEPTED
        assert ce.graph.priority(1, 1) == 2

    def test_all_accepting_fails(self):
        verdict = verify_unrestricted(all_accepting(1, 2), 1, 2)
        assert not verdict.ok
        assert verdict.counterexample.reason is Reason.ODD_ACCEPTED

    def test_counterexample_word_is_walk(self):
        for a in itertools.islice(enumerate_automata(2, 2, 2), 20):
            verdict = verify_unrestricted(a, 2, 2)
            if not verdict.ok:
                ce = verdict.counterexample
                assert is_walk(ce.graph, ce.word)


class TestDeriveTimeBound:
    def test_counter_two_nodes_exact(self):
        # longest accept-avoiding even walk alternates one priority-1 and one
        # priority-2 letter, so five letters carry only two twos: bound is 6
        assert derive_time_bound(counter_separator(2), 2, 2) == 6

    def test_within_states_times_n(self):
        a = counter_separator(2)
        assert derive_time_bound(a, 2, 2) <= a.states * 2

    def test_counter_three_nodes_exact(self):
        # even walks on 3 nodes admit at most two consecutive priority-1
        # letters; 11 letters can carry only 3 twos ((1,1)(2,1)(3,2) thrice
        # plus (1,1)(2,1)), 12 cannot: bound is 12 <= 5*3
        a = counter_separator(3)
        bound = derive_time_bound(a, 3, 2)
        assert bound == 12
        assert bound <= a.states * 3

    def test_precondition_error_carries_verdict(self):
        with pytest.raises(PreconditionError) as err:
            derive_time_bound(all_accepting(1, 2), 1, 2)
        assert err.value.payload.counterexample.reason is Reason.ODD_ACCEPTED


class TestSeparationProfile:
    def test_profile_matches_pointwise_verification(self):
        for a in [counter_separator(2), counter_automaton(1, 2), counter_automaton(2, 2)]:
            profile = separation_profile(a, 2, 2)
            assert profile.unrestricted_ok == verify_unrestricted(a, 2, 2).ok
            for t in range(8):
                assert profile.ok_at(t) == verify_time_t(a, 2, 2, t).ok


class TestRefuter:
    def test_every_small_automaton_refuted(self):
        for a in enumerate_automata(2, 2, 2):
            refutation = refute_small_separator(a, 2)
            assert confirm_refutation(a, refutation)
            assert not verify_unrestricted(a, 2, 2).ok

    def test_all_accepting_single_state(self):
        a = all_accepting(1, 2)
        refutation = refute_small_separator(a, 1)
        assert refutation.reason is Reason.ODD_ACCEPTED
        assert refutation.word == ((1, 1),)
        assert confirm_refutation(a, refutation)

    def test_never_accepting_two_states(self):
        a = never_accepting(2, 2)
        refutation = refute_small_separator(a, 2)
        assert refutation.reason is Reason.EVEN_NEVER_ACCEPTED
        assert all(p == 2 for _, p in refutation.word)
        assert confirm_refutation(a, refutation)

    def test_too_many_states_rejected(self):
        with pytest.raises(PreconditionError):
            refute_small_separator(counter_separator(2), 2)


class TestAttractor:
    def test_all_targets(self):
        vertices = ["a", "b"]
        succ = {"a": ["b"], "b": ["a"]}
        owner = {"a": 0, "b": 1}
        assert attractor(vertices, succ, owner, vertices, 0) == {"a", "b"}

    def test_empty_targets(self):
        vertices = ["a", "b"]
        succ = {"a": ["b"], "b": ["a"]}
        owner = {"a": 0, "b": 1}
        assert attractor(vertices, succ, owner, [], 0) == frozenset()

    def test_controlled_step_into_target(self):
        vertices = ["a", "t"]
        succ = {"a": ["t", "a"], "t": ["t"]}
        owner = {"a": 0, "t": 0}
        assert "a" in attractor(vertices, succ, owner, ["t"], 0)

    def test_opponent_needs_all_arcs_in(self):
        vertices = ["a", "t", "safe"]
        succ = {"a": ["t", "safe"], "t": ["t"], "safe": ["safe"]}
        owner = {"a": 1, "t": 0, "safe": 0}
        assert "a" not in attractor(vertices, succ, owner, ["t"], 0)


class TestSolvers:
    def test_even_loop_player_zero_wins(self):
        g = GameGraph.from_map(1, 2, {(1, 1): 2})
        arena = ParityArena(g, (0,), 1)
        assert solve_parity_via_separator(arena, counter_separator(1)).winner == 0
        assert solve_parity_direct(arena).winner == 0

    def test_odd_loop_player_one_wins(self):
        g = GameGraph.from_map(1, 2, {(1, 1): 1})
        arena = ParityArena(g, (0,), 1)
        assert solve_parity_via_separator(arena, counter_separator(1)).winner == 1
        assert solve_parity_direct(arena).winner == 1

    def test_player_zero_picks_the_even_cycle(self):
        g = GameGraph.from_map(2, 2, {(1, 1): 1, (1, 2): 2, (2, 1): 2})
        arena = ParityArena(g, (0, 0), 1)
        result = solve_parity_direct(arena)
        assert result.winner == 0
        assert dict(result.strategy)[1] == 2  # moves to the even 2-cycle

    def test_single_player_one_odd_loop(self):
        g = GameGraph.from_map(1, 2, {(1, 1): 1})
        arena = ParityArena(g, (1,), 1)
        assert solve_parity_direct(arena).winner == 1

    def test_unverified_automaton_refused(self):
        g = GameGraph.from_map(1, 2, {(1, 1): 2})
        arena = ParityArena(g, (0,), 1)
        bad = all_accepting(1, 2)
        with pytest.raises(PreconditionError):
            solve_parity_via_separator(arena, bad)
        assert solve_parity_via_separator(arena, bad, trust=True).winner == 0

    def test_agreement_on_two_node_arenas(self):
        report = agreement_sweep(2, 2, counter_separator(2))
        assert report.ok
        assert report.arenas == 64 * 4 * 2

    def test_agreement_matches_per_arena_solvers(self, rng):
        graphs = list(enumerate_game_graphs(2, 2))
        a = counter_separator(2)
        for _ in range(60):
            g = rng.choice(graphs)
            owner = tuple(rng.randint(0, 1) for _ in range(g.n))
            initial = rng.randint(1, g.n)
            arena = ParityArena(g, owner, initial)
            direct = solve_parity_direct(arena)
            via = solve_parity_via_separator(arena, a, trust=True)
            assert direct.winner == via.winner
