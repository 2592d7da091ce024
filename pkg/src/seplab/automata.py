"""Deterministic safety automata over the ``(node, priority)`` alphabet.

An automaton reads the letters of a walk word; reaching the accepting state
means "accepted from here on" because verification keeps the accepting state
absorbing.  The module provides the extended transition function, absorbing
normalization, the explicit counting separator, the product with a game
graph, and exhaustive enumeration of automata up to state renaming.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .caps import DEFAULT_CAPS, Caps, require
from .errors import ValidationError
from .graphs import GameGraph, Letter, Word


def letter_index(v: int, p: int, d: int) -> int:
    return (v - 1) * d + (p - 1)


@dataclass(frozen=True)
class SafetyAutomaton:
    """Complete DFA over ``[n] x [d]`` with a designated accepting state.

    ``transitions[q][letter_index(v, p, d)]`` is the successor of state *q*
    on letter ``(v, p)``.  States are ``0..states-1``.
    """

    n: int
    d: int
    states: int
    start: int
    accept: int
    transitions: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1 or self.d < 1 or self.states < 1:
            raise ValidationError("alphabet and state counts must be positive")
        if not (0 <= self.start < self.states and 0 <= self.accept < self.states):
            raise ValidationError("start/accept outside the state range")
        if len(self.transitions) != self.states:
            raise ValidationError("transition table must have one row per state")
        width = self.n * self.d
        for row in self.transitions:
            if len(row) != width:
                raise ValidationError("transition rows must cover the whole alphabet")
            for target in row:
                if not (0 <= target < self.states):
                    raise ValidationError("transition target outside the state range")

    @cached_property
    def is_absorbing(self) -> bool:
        return all(t == self.accept for t in self.transitions[self.accept])

    def letters(self) -> Iterator[Letter]:
        for v in range(1, self.n + 1):
            for p in range(1, self.d + 1):
                yield (v, p)

    def step(self, q: int, letter: Letter) -> int:
        v, p = letter
        if not (1 <= v <= self.n and 1 <= p <= self.d):
            raise ValidationError(f"letter ({v},{p}) outside [{self.n}]x[{self.d}]")
        return self.transitions[q][(v - 1) * self.d + (p - 1)]


def delta_star(a: SafetyAutomaton, q: int, word: Word) -> int:
    """Left fold of the transition function over *word*."""
    for letter in word:
        q = a.step(q, letter)
    return q


def make_absorbing(a: SafetyAutomaton) -> SafetyAutomaton:
    """Same automaton with the accepting state forced absorbing (idempotent)."""
    if a.is_absorbing:
        return a
    rows = list(a.transitions)
    rows[a.accept] = tuple(a.accept for _ in rows[a.accept])
    return SafetyAutomaton(a.n, a.d, a.states, a.start, a.accept, tuple(rows))


def require_absorbing(a: SafetyAutomaton, context: str) -> None:
    if not a.is_absorbing:
        raise ValidationError(
            f"{context} requires an absorbing accepting state; apply make_absorbing first"
        )


def counter_automaton(threshold: int, alphabet_n: int, d: int = 2) -> SafetyAutomaton:
    """Accept once *threshold* letters of priority 2 have been read.

    States are the saturating count ``0..threshold``; priority-1 letters are
    self-loops, priority-2 letters increment.
    """
    if threshold < 1:
        raise ValidationError("counting threshold must be >= 1")
    if d < 2:
        raise ValidationError("the counting separator needs priority 2 in the alphabet")
    states = threshold + 1
    rows = []
    for c in range(states):
        row = []
        for _v in range(1, alphabet_n + 1):
            for p in range(1, d + 1):
                row.append(min(c + 1, threshold) if p == 2 else c)
        rows.append(tuple(row))
    rows[threshold] = tuple(threshold for _ in rows[threshold])
    return SafetyAutomaton(alphabet_n, d, states, 0, threshold, tuple(rows))


def counter_separator(n: int) -> SafetyAutomaton:
    """The n+2 state separator: accept after n+1 priority-2 letters."""
    if n < 1:
        raise ValidationError("counter separator needs n >= 1")
    return counter_automaton(n + 1, n)


@dataclass(frozen=True)
class ProductGraph:
    """Reachable product of a game graph and an automaton.

    Vertices are ``(node, state)`` pairs; an arc exists from ``(u, q)`` to
    ``(v, q')`` iff the graph has edge ``(u, v)`` with some priority *p* and
    ``q' = delta(q, (u, p))``.  Arcs carry the consumed letter.  The start
    set pairs every graph node with the automaton's start state.
    """

    start_vertices: tuple[tuple[int, int], ...]
    vertices: tuple[tuple[int, int], ...]
    arcs: tuple[tuple[tuple[int, int], Letter, tuple[int, int]], ...]

    @cached_property
    def successors(
        self,
    ) -> dict[tuple[int, int], tuple[tuple[Letter, tuple[int, int]], ...]]:
        succ: dict[tuple[int, int], list[tuple[Letter, tuple[int, int]]]] = {
            v: [] for v in self.vertices
        }
        for src, letter, dst in self.arcs:
            succ[src].append((letter, dst))
        return {v: tuple(sorted(vs)) for v, vs in succ.items()}


def product_reach(a: SafetyAutomaton, g: GameGraph) -> ProductGraph:
    """BFS-reachable product subgraph from the full start set."""
    if g.n > a.n or g.d > a.d:
        raise ValidationError("automaton alphabet too small for the graph")
    start = tuple((v, a.start) for v in range(1, g.n + 1))
    seen: set[tuple[int, int]] = set(start)
    frontier = list(start)
    arcs = []
    while frontier:
        next_frontier = []
        for u, q in frontier:
            for v, p in g.successors[u]:
                q2 = a.transitions[q][(u - 1) * a.d + (p - 1)]
                dst = (v, q2)
                arcs.append(((u, q), (u, p), dst))
                if dst not in seen:
                    seen.add(dst)
                    next_frontier.append(dst)
        frontier = next_frontier
    return ProductGraph(start, tuple(sorted(seen)), tuple(sorted(arcs)))


def _canonical_raw(
    rows: tuple[tuple[int, ...], ...], accept: int, width: int
) -> tuple[int, int, tuple[tuple[int, ...], ...]]:
    """BFS-rename from state 0; trim unreachable states; pad a fresh accept if lost.

    Returns ``(state_count, accept_index, rows)`` of the canonical automaton.
    """
    order = [0]
    position = {0: 0}
    i = 0
    while i < len(order):
        for target in rows[order[i]]:
            if target not in position:
                position[target] = len(order)
                order.append(target)
        i += 1
    renamed = tuple(
        tuple(position[t] for t in rows[s]) for s in order
    )
    if accept in position:
        return (len(order), position[accept], renamed)
    # accept unreachable: one absorbing padding state represents it
    pad = len(order)
    padded = renamed + ((pad,) * width,)
    return (pad + 1, pad, padded)


def canonicalize(a: SafetyAutomaton) -> SafetyAutomaton:
    """Canonical representative of *a* under state renaming (start becomes 0)."""
    states, accept, rows = _canonical_raw(a.transitions, a.accept, a.n * a.d)
    return SafetyAutomaton(a.n, a.d, states, 0, accept, rows)


def enumerate_automata(
    n: int, d: int, q_max: int, caps: Caps | None = None
) -> Iterator[SafetyAutomaton]:
    """All absorbing-accept automata with <= q_max states, up to state renaming.

    The canonical form renames states in BFS discovery order from the start
    state (so start is always 0) and trims unreachable states, keeping one
    absorbing padding state when the accepting state was unreachable.  Each
    canonical form is yielded exactly once, in first-discovery order of the
    raw lexicographic enumeration (start fixed at 0 without loss of
    generality, accept ranging over all states, non-accept rows in
    lexicographic order).
    """
    caps = caps or DEFAULT_CAPS
    require(
        q_max <= caps.automaton_states,
        f"automaton enumeration needs q_max <= {caps.automaton_states}, got {q_max}",
    )
    require(
        n * d <= caps.automaton_letters,
        f"automaton enumeration needs n*d <= {caps.automaton_letters}, got {n * d}",
    )
    width = n * d
    seen: set[tuple] = set()
    for q in range(1, q_max + 1):
        for accept in range(q):
            free_states = [s for s in range(q) if s != accept]
            accept_row = (accept,) * width
            for flat in itertools.product(range(q), repeat=width * len(free_states)):
                rows: list[tuple[int, ...]] = [()] * q
                rows[accept] = accept_row
                for idx, s in enumerate(free_states):
                    rows[s] = flat[idx * width : (idx + 1) * width]
                states, c_accept, c_rows = _canonical_raw(tuple(rows), accept, width)
                key = (states, c_accept, c_rows)
                if key in seen:
                    continue
                seen.add(key)
                yield SafetyAutomaton(n, d, states, 0, c_accept, c_rows)
