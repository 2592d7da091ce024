"""Separation verifiers, the refuter for undersized automata, and both solvers.

An automaton *separates* at scale ``(n, d)`` when it never accepts a walk of
an odd-classified graph and eventually accepts every infinite walk of an
even-classified graph; *time-t separation* strengthens the second condition
to "accepting within the first t letters".  Both are decided exhaustively
over all game graphs on ``1..n``, which covers graphs on fewer nodes because
parity-preserving self-loops embed them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import partial
from typing import Iterable, Mapping, Sequence

from .automata import SafetyAutomaton, counter_separator, require_absorbing
from .caps import DEFAULT_CAPS, Caps, require
from .errors import PreconditionError, ValidationError
from .graphs import (
    GameGraph,
    GraphParity,
    Word,
    _scc_ids,
    classify_graph,
    enumerate_game_graphs,
    is_walk,
)
from .parallel import first_hit, pmap


class Reason(Enum):
    ODD_ACCEPTED = "OddAccepted"
    EVEN_NOT_ACCEPTED_BY_T = "EvenNotAcceptedByT"
    EVEN_NEVER_ACCEPTED = "EvenNeverAccepted"


@dataclass(frozen=True)
class Counterexample:
    graph: GameGraph
    word: Word
    reason: Reason


@dataclass(frozen=True)
class Verdict:
    ok: bool
    counterexample: Counterexample | None = None

    def __post_init__(self):
        if self.ok == (self.counterexample is not None):
            raise ValidationError("ok verdicts carry no counterexample and vice versa")


def _check_alphabet(a: SafetyAutomaton, n: int, d: int) -> None:
    if a.n < n or a.d < d:
        raise ValidationError(
            f"automaton alphabet [{a.n}]x[{a.d}] too small for graphs over [{n}]x[{d}]"
        )


def _product_step(a: SafetyAutomaton, g: GameGraph, u: int, q: int):
    """Sorted arcs from product vertex (u, q): (letter, successor)."""
    d = a.d
    row = a.transitions[q]
    return [((u, p), (v, row[(u - 1) * d + (p - 1)])) for v, p in g.successors[u]]


def _odd_violation(a: SafetyAutomaton, g: GameGraph) -> Word | None:
    """Lex-least shortest word of a walk in *g* driving *a* into accept."""
    start = [(v, a.start) for v in range(1, g.n + 1)]
    seen = set(start)
    frontier = sorted(start)
    if not any(q == a.accept for _, q in frontier):
        reachable_accept = False
        probe = list(frontier)
        probe_seen = set(seen)
        while probe and not reachable_accept:
            nxt = []
            for u, q in probe:
                for _letter, dst in _product_step(a, g, u, q):
                    if dst not in probe_seen:
                        probe_seen.add(dst)
                        nxt.append(dst)
                        if dst[1] == a.accept:
                            reachable_accept = True
            probe = nxt
        if not reachable_accept:
            return None
    # accept is reachable: redo a level BFS carrying lexicographically least words
    level: dict[tuple[int, int], Word] = {v: () for v in sorted(start)}
    while True:
        nxt: dict[tuple[int, int], Word] = {}
        hits: list[Word] = []
        for vertex in sorted(level):
            word = level[vertex]
            for letter, dst in _product_step(a, g, *vertex):
                cand = word + (letter,)
                if dst[1] == a.accept:
                    hits.append(cand)
                if dst not in nxt or cand < nxt[dst]:
                    nxt[dst] = cand
        if hits:
            return min(hits)
        level = nxt


def _even_time_violation(a: SafetyAutomaton, g: GameGraph, t: int) -> Word | None:
    """Lex-least length-t word of a walk staying outside accept, if any."""
    frontier = {(v, a.start) for v in range(1, g.n + 1) if a.start != a.accept}
    for _ in range(t):
        frontier = {
            dst
            for u, q in frontier
            for _letter, dst in _product_step(a, g, u, q)
            if dst[1] != a.accept
        }
        if not frontier:
            return None
    if t == 0:
        return () if frontier else None  # non-accept start pair at t = 0
    level: dict[tuple[int, int], Word] = {
        (v, a.start): () for v in range(1, g.n + 1) if a.start != a.accept
    }
    for _ in range(t):
        nxt: dict[tuple[int, int], Word] = {}
        for vertex in sorted(level):
            word = level[vertex]
            for letter, dst in _product_step(a, g, *vertex):
                if dst[1] == a.accept:
                    continue
                cand = word + (letter,)
                if dst not in nxt or cand < nxt[dst]:
                    nxt[dst] = cand
        level = nxt
    return min(level.values())


def _even_never_violation(a: SafetyAutomaton, g: GameGraph) -> Word | None:
    """A walk word revisiting a non-accept product vertex (pumpable forever)."""
    starts = sorted((v, a.start) for v in range(1, g.n + 1) if a.start != a.accept)
    visited: set[tuple[int, int]] = set()
    for root in starts:
        if root in visited:
            continue
        # iterative DFS over non-accept vertices, sorted arc order
        path: list[tuple[int, int]] = []
        on_path: dict[tuple[int, int], int] = {}
        words: list[Word] = []
        stack = [(root, (), iter(_product_step(a, g, *root)))]
        visited.add(root)
        on_path[root] = 0
        path.append(root)
        words.append(())
        while stack:
            vertex, word, arcs = stack[-1]
            advanced = False
            for letter, dst in arcs:
                if dst[1] == a.accept:
                    continue
                cand = word + (letter,)
                if dst in on_path:
                    # cycle closed: stem to dst, then around back to dst
                    return cand
                if dst in visited:
                    continue
                visited.add(dst)
                on_path[dst] = len(path)
                path.append(dst)
                words.append(cand)
                stack.append((dst, cand, iter(_product_step(a, g, *dst))))
                advanced = True
                break
            if not advanced:
                stack.pop()
                gone = path.pop()
                words.pop()
                del on_path[gone]
    return None


def _time_check(g: GameGraph, a: SafetyAutomaton, t: int) -> Counterexample | None:
    parity = classify_graph(g)
    if parity is GraphParity.ODD:
        word = _odd_violation(a, g)
        if word is not None:
            return Counterexample(g, word, Reason.ODD_ACCEPTED)
    elif parity is GraphParity.EVEN:
        word = _even_time_violation(a, g, t)
        if word is not None:
            return Counterexample(g, word, Reason.EVEN_NOT_ACCEPTED_BY_T)
    return None


def _unrestricted_check(g: GameGraph, a: SafetyAutomaton) -> Counterexample | None:
    parity = classify_graph(g)
    if parity is GraphParity.ODD:
        word = _odd_violation(a, g)
        if word is not None:
            return Counterexample(g, word, Reason.ODD_ACCEPTED)
    elif parity is GraphParity.EVEN:
        word = _even_never_violation(a, g)
        if word is not None:
            return Counterexample(g, word, Reason.EVEN_NEVER_ACCEPTED)
    return None


def verify_time_t(
    a: SafetyAutomaton,
    n: int,
    d: int,
    t: int,
    caps: Caps | None = None,
    jobs: int = 1,
) -> Verdict:
    """Check time-*t* separation exhaustively over all graphs on ``1..n``.

    Odd graphs must keep accept product-unreachable; even graphs must have
    every length-*t* product path from every start pair end in accept (with
    an absorbing accept this covers all longer prefixes too).
    """
    require_absorbing(a, "verification")
    _check_alphabet(a, n, d)
    if t < 0:
        raise ValidationError("time bound must be >= 0")
    graphs = list(enumerate_game_graphs(n, d, caps))
    hit = first_hit(partial(_time_check, a=a, t=t), graphs, jobs)
    return Verdict(True) if hit is None else Verdict(False, hit[1])


def verify_unrestricted(
    a: SafetyAutomaton,
    n: int,
    d: int,
    caps: Caps | None = None,
    jobs: int = 1,
) -> Verdict:
    """Check unrestricted separation: accept unreachable on odd graphs, and no
    infinite accept-avoiding walk on even graphs (reachable non-accept product
    subgraph acyclic)."""
    require_absorbing(a, "verification")
    _check_alphabet(a, n, d)
    graphs = list(enumerate_game_graphs(n, d, caps))
    hit = first_hit(partial(_unrestricted_check, a=a), graphs, jobs)
    return Verdict(True) if hit is None else Verdict(False, hit[1])


def _longest_nonaccept_path(a: SafetyAutomaton, g: GameGraph) -> int:
    """Longest arc count of a product path through non-accept vertices (DAG)."""
    starts = [(v, a.start) for v in range(1, g.n + 1) if a.start != a.accept]
    memo: dict[tuple[int, int], int] = {}

    def compute(vertex: tuple[int, int]) -> int:
        stack = [(vertex, 0)]
        while stack:
            node, _ = stack.pop()
            if node in memo:
                continue
            pending = [
                dst
                for _l, dst in _product_step(a, g, *node)
                if dst[1] != a.accept and dst not in memo
            ]
            if pending:
                stack.append((node, 0))
                stack.extend((p, 0) for p in pending)
            else:
                memo[node] = max(
                    (
                        1 + memo[dst]
                        for _l, dst in _product_step(a, g, *node)
                        if dst[1] != a.accept
                    ),
                    default=0,
                )
        return memo[vertex]

    return max((compute(s) for s in starts), default=-1)


def _even_longest(g: GameGraph, a: SafetyAutomaton) -> int:
    if classify_graph(g) is not GraphParity.EVEN:
        return -1
    return _longest_nonaccept_path(a, g)


def derive_time_bound(
    a: SafetyAutomaton,
    n: int,
    d: int,
    caps: Caps | None = None,
    jobs: int = 1,
) -> int:
    """Least *t* such that :func:`verify_time_t` holds, for a verified separator.

    Computed as one plus the longest accept-avoiding product path over all
    even graphs; it never exceeds ``states * n``.
    """
    verdict = verify_unrestricted(a, n, d, caps, jobs)
    if not verdict.ok:
        raise PreconditionError(
            "automaton is not an unrestricted separator at this scale", verdict
        )
    graphs = list(enumerate_game_graphs(n, d, caps))
    longest = max(pmap(partial(_even_longest, a=a), graphs, jobs), default=-1)
    return longest + 1


@dataclass(frozen=True)
class SeparationProfile:
    """Everything time-bounded verification can say about one automaton.

    ``odd_ok``: accept is product-unreachable on every odd graph.
    ``even_min_time``: least t making the even condition hold, or None when
    some even graph admits an infinite accept-avoiding walk.
    Time-t separation holds iff ``odd_ok and even_min_time <= t``;
    unrestricted separation iff ``odd_ok and even_min_time is not None``.
    """

    odd_ok: bool
    even_min_time: int | None

    def ok_at(self, t: int) -> bool:
        return self.odd_ok and self.even_min_time is not None and self.even_min_time <= t

    @property
    def unrestricted_ok(self) -> bool:
        return self.odd_ok and self.even_min_time is not None


def _accept_reachable(a: SafetyAutomaton, g: GameGraph) -> bool:
    frontier = [(v, a.start) for v in range(1, g.n + 1)]
    seen = set(frontier)
    if a.start == a.accept:
        return True
    while frontier:
        nxt = []
        for u, q in frontier:
            for _letter, dst in _product_step(a, g, u, q):
                if dst[1] == a.accept:
                    return True
                if dst not in seen:
                    seen.add(dst)
                    nxt.append(dst)
        frontier = nxt
    return False


def separation_profile(
    a: SafetyAutomaton, n: int, d: int, caps: Caps | None = None, jobs: int = 1
) -> SeparationProfile:
    """One sweep over all graphs answering every time threshold at once."""
    require_absorbing(a, "verification")
    _check_alphabet(a, n, d)
    graphs = list(enumerate_game_graphs(n, d, caps))
    results = pmap(partial(_profile_piece, a=a), graphs, jobs)
    odd_ok = not any(value for kind, value in results if kind == "odd")
    min_time = 0
    for kind, value in results:
        if kind == "even":
            if value is None:
                return SeparationProfile(odd_ok, None)
            min_time = max(min_time, value + 1)
    return SeparationProfile(odd_ok, min_time)


def _profile_piece(g: GameGraph, a: SafetyAutomaton):
    parity = classify_graph(g)
    if parity is GraphParity.ODD:
        return ("odd", _accept_reachable(a, g))
    if parity is GraphParity.EVEN:
        if _even_never_violation(a, g) is not None:
            return ("even", None)
        return ("even", _longest_nonaccept_path(a, g))
    return ("neither", None)


# ---------------------------------------------------------------------------
# refutation of undersized automata


@dataclass(frozen=True)
class Refutation:
    graph: GameGraph
    word: Word
    reason: Reason


def refute_small_separator(a: SafetyAutomaton, n: int) -> Refutation:
    """Concrete violating walk for any automaton with at most *n* states.

    Either some prefix of the priority-2 chain walk already accepts (the
    chain graph with a trailing priority-1 loop is odd), or two chain states
    coincide and the all-priority-2 complete graph yields an even walk that
    cycles without ever accepting.
    """
    require_absorbing(a, "refutation")
    if a.states > n:
        raise PreconditionError(f"refuter needs at most {n} states, got {a.states}")
    if a.n < n or a.d < 2:
        raise ValidationError("refuter needs the full [n]x[2] alphabet")
    qs = [a.start]
    for i in range(1, n):
        qs.append(a.step(qs[-1], (i, 2)))
    for i, q in enumerate(qs):
        if q != a.accept:
            continue
        if i == 0:
            graph = GameGraph.from_map(n, 2, {(v, v): 1 for v in range(1, n + 1)})
            return Refutation(graph, ((1, 1),), Reason.ODD_ACCEPTED)
        chain = {(j, j + 1): 2 for j in range(1, n)}
        chain[(n, n)] = 1
        graph = GameGraph.from_map(n, 2, chain)
        word = tuple((j, 2) for j in range(1, i + 1))
        return Refutation(graph, word, Reason.ODD_ACCEPTED)
    # no accept among n chain states drawn from at most n-1 non-accept states
    pair = next(
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if qs[i] == qs[j]
    )
    i, j = pair
    complete = {(u, v): 2 for u in range(1, n + 1) for v in range(1, n + 1)}
    graph = GameGraph.from_map(n, 2, complete)
    word = tuple((x, 2) for x in range(1, j + 1)) + tuple(
        (x, 2) for x in range(i + 1, j + 1)
    )
    return Refutation(graph, word, Reason.EVEN_NEVER_ACCEPTED)


def confirm_refutation(a: SafetyAutomaton, refutation: Refutation) -> bool:
    """Independent re-check of a refutation walk against the automaton."""
    g, word = refutation.graph, refutation.word
    if not word or not is_walk(g, word):
        return False
    states = [a.start]
    for letter in word:
        states.append(a.step(states[-1], letter))
    parity = classify_graph(g)
    if refutation.reason is Reason.ODD_ACCEPTED:
        return parity is GraphParity.ODD and a.accept in states
    if refutation.reason is Reason.EVEN_NEVER_ACCEPTED:
        if parity is not GraphParity.EVEN or a.accept in states:
            return False
        # a repeated (walk node, automaton state) pair makes the walk pumpable
        pairs = [(word[m][0], states[m]) for m in range(len(word))]
        return len(set(pairs)) < len(pairs)
    return False


# ---------------------------------------------------------------------------
# reachability games and the two parity solvers


def attractor(
    vertices: Iterable,
    successors: Mapping,
    owner: Mapping,
    targets: Iterable,
    player: int,
) -> frozenset:
    """Vertices from which *player* can force reaching *targets*."""
    vertices = set(vertices)
    preds: dict = {v: [] for v in vertices}
    out_count: dict = {}
    for v in vertices:
        succ = list(successors[v])
        out_count[v] = len(succ)
        for w in succ:
            preds[w].append(v)
    result = set(t for t in targets if t in vertices)
    queue = list(result)
    while queue:
        v = queue.pop()
        for u in preds[v]:
            if u in result:
                continue
            if owner[u] == player:
                result.add(u)
                queue.append(u)
            else:
                out_count[u] -= 1
                if out_count[u] == 0:
                    result.add(u)
                    queue.append(u)
    return frozenset(result)


@dataclass(frozen=True)
class ParityArena:
    """A game graph plus node ownership and an initial node."""

    graph: GameGraph
    owner: tuple[int, ...]  # owner[v-1] in {0, 1} moves at node v
    initial: int

    def __post_init__(self):
        if len(self.owner) != self.graph.n:
            raise ValidationError("owner map must cover every node")
        if any(o not in (0, 1) for o in self.owner):
            raise ValidationError("owners are player 0 or player 1")
        if not (1 <= self.initial <= self.graph.n):
            raise ValidationError("initial node out of range")


@dataclass(frozen=True)
class SolveResult:
    winner: int
    strategy: tuple[tuple[int, int], ...] | None = None  # player-0 certificate


def _odd_cycle_reachers(n: int, edges: Sequence[tuple[int, int, int]]) -> set[int]:
    """Nodes from which a cycle with odd maximum priority is reachable."""
    core: set[int] = set()
    priorities = sorted({p for _, _, p in edges if p % 2 == 1})
    for p in priorities:
        succ: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v, q in edges:
            if q <= p:
                succ[u].append(v)
        ids = _scc_ids(n, succ)
        for u, v, q in edges:
            if q == p and ids[u] == ids[v]:
                core.update(w for w in range(1, n + 1) if ids[w] == ids[u])
    if not core:
        return set()
    preds: list[list[int]] = [[] for _ in range(n + 1)]
    for u, v, _q in edges:
        preds[v].append(u)
    reach = set(core)
    queue = list(core)
    while queue:
        v = queue.pop()
        for u in preds[v]:
            if u not in reach:
                reach.add(u)
                queue.append(u)
    return reach


def direct_winning_strategies(
    g: GameGraph, owner: Sequence[int]
) -> dict[int, tuple[tuple[int, int], ...]]:
    """Map each player-0-winning initial node to its first winning strategy.

    Memoryless strategies of player 0 are enumerated in lexicographic order
    of their choice tuples; a strategy wins from a node iff no cycle with odd
    maximum priority is reachable from it in the strategy-restricted graph.
    """
    p0_nodes = [v for v in range(1, g.n + 1) if owner[v - 1] == 0]
    fixed_edges = [
        (u, v, p)
        for u, v, p in g.edges
        if owner[u - 1] == 1
    ]
    won: dict[int, tuple[tuple[int, int], ...]] = {}
    for combo in itertools.product(*(g.successors[v] for v in p0_nodes)):
        edges = fixed_edges + [
            (u, v, p) for u, (v, p) in zip(p0_nodes, combo)
        ]
        bad = _odd_cycle_reachers(g.n, edges)
        certificate = tuple(zip(p0_nodes, (v for v, _p in combo)))
        for v in range(1, g.n + 1):
            if v not in bad and v not in won:
                won[v] = certificate
        if len(won) == g.n:
            break
    return won


def solve_parity_direct(arena: ParityArena, caps: Caps | None = None) -> SolveResult:
    """Brute-force solver: try every memoryless player-0 strategy."""
    caps = caps or DEFAULT_CAPS
    require(
        arena.graph.n <= caps.graph_nodes,
        f"direct solver needs n <= {caps.graph_nodes}, got {arena.graph.n}",
    )
    won = direct_winning_strategies(arena.graph, arena.owner)
    if arena.initial in won:
        return SolveResult(0, won[arena.initial])
    return SolveResult(1)


def separator_winning_nodes(
    g: GameGraph, a: SafetyAutomaton, owner: Sequence[int]
) -> frozenset[int]:
    """Initial nodes player 0 wins via the product reachability game with *a*."""
    _check_alphabet(a, g.n, g.d)
    vertices = [(v, q) for v in range(1, g.n + 1) for q in range(a.states)]
    succ = {
        (u, q): [dst for _l, dst in _product_step(a, g, u, q)]
        for (u, q) in vertices
    }
    owners = {(v, q): owner[v - 1] for (v, q) in vertices}
    targets = [(v, q) for (v, q) in vertices if q == a.accept]
    attr = attractor(vertices, succ, owners, targets, player=0)
    return frozenset(v for v in range(1, g.n + 1) if (v, a.start) in attr)


@dataclass(frozen=True)
class Disagreement:
    graph: GameGraph
    owner: tuple[int, ...]
    direct_winning: frozenset[int]
    reduction_winning: frozenset[int]


@dataclass(frozen=True)
class AgreementReport:
    arenas: int
    disagreement: Disagreement | None

    @property
    def ok(self) -> bool:
        return self.disagreement is None


def _graph_disagreement(g: GameGraph, a: SafetyAutomaton) -> Disagreement | None:
    for owner in itertools.product((0, 1), repeat=g.n):
        direct = frozenset(direct_winning_strategies(g, owner))
        reduced = separator_winning_nodes(g, a, owner)
        if direct != reduced:
            return Disagreement(g, owner, direct, reduced)
    return None


def agreement_sweep(
    n: int,
    d: int,
    automaton: SafetyAutomaton | None = None,
    caps: Caps | None = None,
    jobs: int = 1,
) -> AgreementReport:
    """Compare both solvers on every arena with exactly n nodes: all graphs,
    all ownership patterns, all initial nodes (via winning-set equality)."""
    a = automaton if automaton is not None else counter_separator(n)
    require_absorbing(a, "reduction")
    verdict = verify_unrestricted(a, n, d, caps)
    if not verdict.ok:
        raise PreconditionError("automaton fails separation at this scale", verdict)
    graphs = list(enumerate_game_graphs(n, d, caps))
    arenas = len(graphs) * (2**n) * n
    hit = first_hit(partial(_graph_disagreement, a=a), graphs, jobs)
    return AgreementReport(arenas, None if hit is None else hit[1])


def solve_parity_via_separator(
    arena: ParityArena,
    automaton: SafetyAutomaton | None = None,
    trust: bool = False,
    caps: Caps | None = None,
) -> SolveResult:
    """Solve by reduction to reachability on the product with a separator.

    The automaton accepts exactly the plays consistent with winning
    memoryless player-0 strategies, so player 0 wins the parity game from
    the initial node iff they win the reachability game from
    ``(initial, start)``.  Unless *trust* is set, the automaton is first
    verified as an unrestricted separator at the arena's scale.
    """
    g = arena.graph
    a = automaton if automaton is not None else counter_separator(g.n)
    require_absorbing(a, "reduction")
    if not trust:
        verdict = verify_unrestricted(a, g.n, g.d, caps)
        if not verdict.ok:
            raise PreconditionError(
                "automaton failed separation verification; pass trust=True to skip",
                verdict,
            )
    wins = separator_winning_nodes(g, a, arena.owner)
    return SolveResult(0 if arena.initial in wins else 1)
