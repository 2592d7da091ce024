"""Priority-labelled game graphs, walk words, and exhaustive graph enumeration.

Graphs live on nodes ``1..n`` with one priority in ``1..d`` per directed edge;
loops are allowed, parallel edges are not, and every node keeps out-degree at
least one.  A finite walk is encoded as a word of ``(node, priority)``
letters: letter *i* pairs the *i*-th node of the walk with the priority of
the edge it leaves along.  The last letter's target node is unspecified - it
only asserts that some out-edge of that priority exists (the "dangling
letter" convention), which is how finite prefixes of infinite walks embed
into the witness-graph constructions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .caps import DEFAULT_CAPS, Caps, require
from .errors import ValidationError

Letter = tuple[int, int]
Word = tuple[Letter, ...]


class GraphParity(Enum):
    EVEN = "Even"
    ODD = "Odd"
    NEITHER = "Neither"


@dataclass(frozen=True)
class GameGraph:
    """Directed graph on ``1..n`` with one priority in ``1..d`` per edge."""

    n: int
    d: int
    edges: tuple[tuple[int, int, int], ...]  # sorted (source, target, priority)

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValidationError("node and priority counts must be positive")
        seen: set[tuple[int, int]] = set()
        out_ok = [False] * (self.n + 1)
        for u, v, p in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValidationError(f"edge ({u},{v}) outside nodes 1..{self.n}")
            if not (1 <= p <= self.d):
                raise ValidationError(f"priority {p} outside 1..{self.d}")
            if (u, v) in seen:
                raise ValidationError(f"parallel edge on ({u},{v})")
            seen.add((u, v))
            out_ok[u] = True
        if not all(out_ok[1:]):
            missing = out_ok[1:].index(False) + 1
            raise ValidationError(f"node {missing} has no outgoing edge")
        if list(self.edges) != sorted(self.edges):
            raise ValidationError("edges must be sorted; use GameGraph.from_map")

    @staticmethod
    def from_map(n: int, d: int, priorities: Mapping[tuple[int, int], int]) -> "GameGraph":
        edges = tuple(sorted((u, v, p) for (u, v), p in priorities.items()))
        return GameGraph(n, d, edges)

    @cached_property
    def priority_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): p for u, v, p in self.edges}

    @cached_property
    def successors(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """node -> sorted tuple of (target, priority)."""
        succ: dict[int, list[tuple[int, int]]] = {u: [] for u in range(1, self.n + 1)}
        for u, v, p in self.edges:
            succ[u].append((v, p))
        return {u: tuple(sorted(vs)) for u, vs in succ.items()}

    def priority(self, u: int, v: int) -> int | None:
        return self.priority_map.get((u, v))

    def has_out_priority(self, u: int, p: int) -> bool:
        return any(pri == p for _, pri in self.successors.get(u, ()))


def _scc_ids(n: int, succ: list[list[int]]) -> list[int]:
    """Iterative Tarjan; returns a component id per node (1-based, index 0 unused)."""
    ids = [-1] * (n + 1)
    low = [0] * (n + 1)
    order = [0] * (n + 1)
    on_stack = [False] * (n + 1)
    stack: list[int] = []
    counter = itertools.count(1)
    comp = itertools.count()
    for root in range(1, n + 1):
        if order[root]:
            continue
        work = [(root, 0)]
        while work:
            node, i = work.pop()
            if i == 0:
                order[node] = low[node] = next(counter)
                stack.append(node)
                on_stack[node] = True
            advanced = False
            children = succ[node]
            while i < len(children):
                child = children[i]
                i += 1
                if not order[child]:
                    work.append((node, i))
                    work.append((child, 0))
                    advanced = True
                    break
                if on_stack[child]:
                    low[node] = min(low[node], order[child])
            if advanced:
                continue
            if low[node] == order[node]:
                cid = next(comp)
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    ids[w] = cid
                    if w == node:
                        break
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return ids


def cycle_parities(n: int, edges: Iterable[tuple[int, int, int]]) -> tuple[bool, bool]:
    """Return ``(has_odd_max_cycle, has_even_max_cycle)`` for an edge set.

    A cycle with maximum priority exactly *p* exists iff some priority-*p*
    edge has both endpoints in one strongly connected component of the
    subgraph of edges with priority <= *p*; no cycle enumeration is needed.
    """
    edges = list(edges)
    if not edges:
        return (False, False)
    priorities = sorted({p for _, _, p in edges})
    has_odd = has_even = False
    for p in priorities:
        succ: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v, q in edges:
            if q <= p:
                succ[u].append(v)
        ids = _scc_ids(n, succ)
        for u, v, q in edges:
            if q == p and ids[u] == ids[v]:
                if p % 2:
                    has_odd = True
                else:
                    has_even = True
                break
        if has_odd and has_even:
            break
    return (has_odd, has_even)


def classify_graph(g: GameGraph) -> GraphParity:
    """Even iff every cycle's maximum priority is even; Odd dually; else Neither."""
    has_odd, has_even = cycle_parities(g.n, g.edges)
    if not has_odd and not has_even:
        # out-degree >= 1 everywhere guarantees at least one cycle
        raise AssertionError("well-formed game graph without a cycle")
    if not has_odd:
        return GraphParity.EVEN
    if not has_even:
        return GraphParity.ODD
    return GraphParity.NEITHER


def enumerate_game_graphs(
    n: int, d: int, caps: Caps | None = None
) -> Iterator[GameGraph]:
    """All game graphs on exactly the nodes ``1..n``, in a fixed documented order.

    Order: lexicographic over the row-major ``(d+1)``-valued edge matrix
    (0 = absent), skipping matrices with an out-degree-0 row.  Workers may
    partition the stream by index range (``itertools.islice``); merging in
    index order keeps downstream output deterministic.
    """
    caps = caps or DEFAULT_CAPS
    require(n <= caps.graph_nodes, f"graph enumeration needs n <= {caps.graph_nodes}, got {n}")
    require(
        d <= caps.graph_priorities,
        f"graph enumeration needs d <= {caps.graph_priorities}, got {d}",
    )
    rows = [
        row
        for row in itertools.product(range(d + 1), repeat=n)
        if any(row)
    ]
    for matrix in itertools.product(rows, repeat=n):
        edges = tuple(
            (u, v, p)
            for u, row in enumerate(matrix, start=1)
            for v, p in enumerate(row, start=1)
            if p
        )
        yield GameGraph(n, d, edges)


def count_game_graphs(n: int, d: int) -> int:
    """Closed form for the enumeration size: ((d+1)^n - 1)^n."""
    return ((d + 1) ** n - 1) ** n


def encode_set_word(xs: Iterable[int]) -> Word:
    """Encode a finite set as the word of its elements, ascending, priority 1."""
    elems = sorted(set(xs))
    if elems and elems[0] < 1:
        raise ValidationError("set elements must be positive")
    return tuple((x, 1) for x in elems)


def nodes_of_word(word: Word) -> frozenset[int]:
    return frozenset(v for v, _ in word)


def hub_letter(half_n: int, r: int, alphabet_n: int | None = None) -> Letter:
    """The priority-2 relay letter visiting hub node ``half_n + r``."""
    if r < 1:
        raise ValidationError("hub index must be >= 1")
    node = half_n + r
    if alphabet_n is not None and node > alphabet_n:
        raise ValidationError(f"hub node {node} exceeds alphabet bound {alphabet_n}")
    return (node, 2)


def is_walk(g: GameGraph, word: Word) -> bool:
    """True iff *word* is a walk of *g* under the dangling-letter convention."""
    for (u, p), (v, _) in zip(word, word[1:]):
        if g.priority(u, v) != p:
            return False
    if word:
        v, p = word[-1]
        return g.has_out_priority(v, p)
    return True


def is_cycles_prefix(
    word: Word,
    n: int,
    parity: GraphParity,
    d: int = 2,
    caps: Caps | None = None,
) -> bool:
    """Is *word* a walk of some graph on <= n nodes with the given parity?

    The edges forced by consecutive letters must be conflict-free; the final
    letter needs one out-edge of its priority, whose target is searched over
    all nodes.  Remaining out-degree-0 nodes are completed with self-loops of
    a parity-preserving priority, which is the minimal completion: added
    loops only contribute cycles of the requested parity, so a completion of
    the right parity exists iff this one has it.
    """
    caps = caps or DEFAULT_CAPS
    require(n <= caps.graph_nodes, f"prefix check needs n <= {caps.graph_nodes}, got {n}")
    if parity is GraphParity.NEITHER:
        raise ValidationError("prefix membership is defined for Even/Odd only")
    for v, p in word:
        if not (1 <= v <= n and 1 <= p <= d):
            raise ValidationError(f"letter ({v},{p}) outside [{n}]x[{d}]")
    forced: dict[tuple[int, int], int] = {}
    for (u, p), (v, _) in zip(word, word[1:]):
        if forced.setdefault((u, v), p) != p:
            return False
    loop_pri = 2 if (parity is GraphParity.EVEN and d >= 2) else 1
    targets: list[int | None] = [None] if not word else list(range(1, n + 1))
    for target in targets:
        completed = dict(forced)
        if target is not None:
            v, p = word[-1]
            if completed.setdefault((v, target), p) != p:
                continue
        out = {u for (u, _v) in completed}
        for u in range(1, n + 1):
            if u not in out:
                completed[(u, u)] = loop_pri
        if classify_graph(GameGraph.from_map(n, d, completed)) is parity:
            return True
    return False
