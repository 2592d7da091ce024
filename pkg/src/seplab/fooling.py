"""Adversarial machinery against time-bounded separation.

The goal is a *fooling pair*: one word realizable as a walk prefix of an
odd-classified graph, one realizable in an even-classified graph with length
at least *t*, driving the automaton into the same state - which contradicts
time-*t* separation.  Two searches are provided:

* a complete desk-scale search over abstract word states (automaton state,
  pending edge, forced-edge graph), sound and exhaustive for small *n*;
* the block-structured construction, which assembles per-block words from a
  disjoint tuple over the reduced universe, matching states via a scan of
  pairwise-close tuples, and certifies the result with explicit odd/even
  witness graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .automata import SafetyAutomaton, delta_star
from .caps import DEFAULT_CAPS, Caps, require
from .disjointness import gen_close_tuples, gen_disjoint_tuples, protocol_cost
from .errors import ValidationError
from .graphs import (
    GameGraph,
    GraphParity,
    Word,
    classify_graph,
    cycle_parities,
    encode_set_word,
    hub_letter,
    is_cycles_prefix,
    is_walk,
    nodes_of_word,
)


def _ceil_div(p: int, q: int) -> int:
    return -(-p // q)


@dataclass(frozen=True)
class SearchParams:
    """Derived parameters of the block-structured search.

    ``half_n`` is the reduced universe size, ``k`` the number of blocks,
    ``a`` the per-block set size, ``gamma`` the closeness fraction, and
    ``q_exponent`` the base-2 logarithm of the automaton-size budget.
    """

    n: int
    t: int
    half_n: int
    k: int
    gamma: Fraction
    a: int
    q_exponent: int

    @property
    def degenerate(self) -> bool:
        return self.a == 0

    @property
    def state_budget(self) -> int:
        if self.q_exponent > 10**4:
            raise ValidationError("state budget too large to materialize; use q_exponent")
        return 1 << self.q_exponent

    def within_state_budget(self, states: int) -> bool:
        # states <= 2**q_exponent without materializing huge powers
        bits = states.bit_length()
        return bits <= self.q_exponent or (
            bits == self.q_exponent + 1 and states & (states - 1) == 0
        )


def derive_params(n: int, t: int) -> SearchParams:
    """Exact integer parameter derivation; rejects t < n (no blocks)."""
    if n < 1 or t < 1:
        raise ValidationError("need positive n and t")
    k = 20 * (t // n)
    if k == 0:
        raise ValidationError(f"t={t} < n={n} leaves no blocks (k = 0)")
    half_n = _ceil_div(n, 2)
    return SearchParams(
        n=n,
        t=t,
        half_n=half_n,
        k=k,
        gamma=Fraction(1, k),
        a=half_n // k,
        q_exponent=_ceil_div(n**5, (1000 * t) ** 4),
    )


@dataclass(frozen=True)
class DisjointTuple:
    """An ordered tuple of pairwise-disjoint sets; doubles as a block order."""

    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        total = 0
        for s in self.sets:
            total += len(s)
        if len(frozenset().union(*self.sets) if self.sets else frozenset()) != total:
            raise ValidationError("blocks must be pairwise disjoint")

    @property
    def union(self) -> frozenset[int]:
        return frozenset().union(*self.sets) if self.sets else frozenset()


@dataclass(frozen=True)
class CloseTuple:
    """An ordered tuple of equal-size sets with small pairwise differences."""

    sets: tuple[frozenset[int], ...]
    closeness: Fraction  # allowed symmetric difference, already scaled by a

    def __post_init__(self):
        for x, y in itertools.combinations(self.sets, 2):
            if len(x ^ y) > self.closeness:
                raise ValidationError("tuple members differ more than the closeness bound")


def block_order_less(blocks: DisjointTuple, p: int, q: int) -> bool:
    """Strict order: earlier block first, numeric order inside a block."""
    bp = bq = None
    for index, s in enumerate(blocks.sets):
        if p in s:
            bp = index
        if q in s:
            bq = index
    if bp is None or bq is None:
        raise ValidationError("both elements must lie in the union of the blocks")
    if p == q:
        return False
    if bp != bq:
        return bp < bq
    return p < q


def is_block_increasing(blocks: DisjointTuple, word: Word) -> bool:
    """Nodes of *word* lie in the block union and strictly increase blockwise."""
    union = blocks.union
    nodes = [v for v, _p in word]
    if any(v not in union for v in nodes):
        return False
    return all(block_order_less(blocks, u, v) for u, v in zip(nodes, nodes[1:]))


# ---------------------------------------------------------------------------
# witness graphs


def build_odd_witness(fs: Sequence[Word], half_n: int) -> GameGraph:
    """Odd-classified graph realizing ``f^1 #_1 f^2 #_2 ... f^m #_m`` as a walk.

    Block *j* spans the nodes of ``f^j`` plus hub ``half_n + j``, complete
    with priority 1 (loops included); consecutive blocks are joined by all
    forward priority-2 edges, the last block feeds a final priority-1-looped
    node.  Unused nodes get priority-1 self-loops so the graph is total.
    """
    m = len(fs)
    if m < 1:
        raise ValidationError("need at least one block word")
    node_sets = [set(nodes_of_word(f)) for f in fs]
    for s in node_sets:
        if any(not (1 <= v <= half_n) for v in s):
            raise ValidationError("block-word nodes must lie in the reduced universe")
    for s1, s2 in itertools.combinations(node_sets, 2):
        if s1 & s2:
            raise ValidationError("block words must use pairwise-disjoint node sets")
    n = half_n + m + 1
    edges: dict[tuple[int, int], int] = {}
    groups = [s | {half_n + j} for j, s in enumerate(node_sets, start=1)]
    for group in groups:
        for u in group:
            for v in group:
                edges[(u, v)] = 1
    for left, right in zip(groups, groups[1:]):
        for u in left:
            for v in right:
                edges[(u, v)] = 2
    final = half_n + m + 1
    for u in groups[-1]:
        edges[(u, final)] = 2
    edges[(final, final)] = 1
    used = set().union(*groups)
    for v in range(1, half_n + 1):
        if v not in used:
            edges[(v, v)] = 1
    return GameGraph.from_map(n, 2, edges)


def build_even_witness(blocks: DisjointTuple, half_n: int, m: int) -> GameGraph:
    """Even-classified graph realizing every block-increasing walk with hubs.

    Priority-1 edges follow the strict block order on the bottom nodes and
    run from every bottom node up to each of the *m* hubs; hubs return to the
    bottom with priority 2, so deleting priority-2 edges leaves an acyclic
    graph.  Unused bottom nodes get priority-2 self-loops.
    """
    if m < 1:
        raise ValidationError("need at least one hub")
    bottom = blocks.union
    if not bottom:
        raise ValidationError("block union must be nonempty")
    if any(not (1 <= v <= half_n) for v in bottom):
        raise ValidationError("blocks must lie in the reduced universe")
    n = half_n + m
    hubs = range(half_n + 1, half_n + m + 1)
    edges: dict[tuple[int, int], int] = {}
    for u in bottom:
        for v in bottom:
            if block_order_less(blocks, u, v):
                edges[(u, v)] = 1
        for h in hubs:
            edges[(u, h)] = 1
            edges[(h, u)] = 2
    for v in range(1, half_n + 1):
        if v not in bottom:
            edges[(v, v)] = 2
    return GameGraph.from_map(n, 2, edges)


def chain_words(words: Sequence[Word], half_n: int) -> Word:
    """Interleave block words with their hub letters: ``w^1 #_1 ... w^m #_m``."""
    out: list = []
    for r, word in enumerate(words, start=1):
        out.extend(word)
        out.append(hub_letter(half_n, r))
    return tuple(out)


# ---------------------------------------------------------------------------
# the close-tuple scan (state-targeted word search)


def search_close_tuple_word(
    n1: int,
    t1: int,
    automaton: SafetyAutomaton,
    prefix_words: Sequence[Word],
    target_state: int,
    caps: Caps | None = None,
) -> Word | None:
    """Find a pairwise-close tuple whose induced word hits *target_state*.

    Self-contained re-derivation of the search parameters from ``(n1, t1)``:
    refuses automata beyond the state budget, computes the used-node set and
    the state reached after the hub-chained prefix words, then scans the
    close tuples in lexicographic order for one whose concatenated
    ``(Y_i minus used, 1)`` word leads from there to *target_state*.
    Returns None when the budget is exceeded or no tuple matches.
    """
    caps = caps or DEFAULT_CAPS
    params = derive_params(n1, t1)
    if not params.within_state_budget(automaton.states):
        return None
    if not (0 <= target_state < automaton.states):
        return None
    used = frozenset().union(*map(nodes_of_word, prefix_words)) if prefix_words else frozenset()
    q0 = delta_star(
        automaton, automaton.start, chain_words(prefix_words, params.half_n)
    )
    for tup in gen_close_tuples(params.half_n, params.k, params.gamma, caps):
        word: list = []
        for y in tup:
            word.extend(encode_set_word(y - used))
        word_t = tuple(word)
        if delta_star(automaton, q0, word_t) == target_state:
            return word_t
    return None


# ---------------------------------------------------------------------------
# complete desk-scale search over abstract word states


def _add_edge(constraints, u, v, p):
    """Insert a forced edge; None on a priority conflict."""
    for cu, cv, cp in constraints:
        if (cu, cv) == (u, v):
            return constraints if cp == p else None
    return tuple(sorted(constraints + ((u, v, p),)))


def _parity_reach(
    a: SafetyAutomaton,
    n: int,
    parity: GraphParity,
    t_max: int,
    caps: Caps | None = None,
) -> list[dict[int, Word]]:
    """Per-length reachable automaton states along parity-realizable words.

    Word states are ``(automaton state, pending node, pending priority,
    forced edges)``; a word is realizable iff its forced edges keep every
    cycle at the requested parity and its dangling letter admits a target.
    ``result[m]`` maps each automaton state reachable by a realizable word of
    length *m* to the lexicographically least such word.  Levels are computed
    until the word-state level set revisits an earlier one, and then far
    enough that every level-set of any length >= t_max has appeared among
    the explicit levels (one full period past ``max(t_max, repeat)``).
    """
    caps = caps or DEFAULT_CAPS
    require(n <= caps.search_nodes, f"fooling search needs n <= {caps.search_nodes}, got {n}")
    d = 2
    wrong_is_even = parity is GraphParity.ODD

    parity_ok_memo: dict[tuple, bool] = {}

    def parity_ok(constraints) -> bool:
        hit = parity_ok_memo.get(constraints)
        if hit is None:
            has_odd, has_even = cycle_parities(n, constraints)
            hit = not (has_even if wrong_is_even else has_odd)
            parity_ok_memo[constraints] = hit
        return hit

    alive_memo: dict[tuple, bool] = {}

    def alive(pending_node: int, pending_pri: int, constraints) -> bool:
        key = (pending_node, pending_pri, constraints)
        hit = alive_memo.get(key)
        if hit is None:
            hit = False
            for u in range(1, n + 1):
                extended = _add_edge(constraints, pending_node, u, pending_pri)
                if extended is not None and parity_ok(extended):
                    hit = True
                    break
            alive_memo[key] = hit
        return hit

    letters = [(v, p) for v in range(1, n + 1) for p in range(1, d + 1)]
    base = (a.start, 0, 0, ())  # sentinel: empty word, nothing pending
    current: dict[tuple, Word] = {base: ()}
    if parity is GraphParity.EVEN and d < 2:
        current = {}
    state_levels: list[dict[int, Word]] = []
    seen_sets: dict[frozenset, int] = {}
    repeat: tuple[int, int] | None = None
    m = 0
    while True:
        key = frozenset(current)
        if repeat is None:
            if key in seen_sets:
                repeat = (seen_sets[key], m)
            else:
                seen_sets[key] = m
        per_state: dict[int, Word] = {}
        for (state, _pn, _pp, _c), word in current.items():
            if state not in per_state or word < per_state[state]:
                per_state[state] = word
        state_levels.append(per_state)
        if repeat is not None:
            start, end = repeat
            if m >= max(end, t_max + (end - start)):
                break
        nxt: dict[tuple, Word] = {}
        for (state, pn, pp, constraints), word in current.items():
            for letter in letters:
                v, p = letter
                if pn == 0:
                    extended = constraints
                else:
                    extended = _add_edge(constraints, pn, v, pp)
                    if extended is None or not parity_ok(extended):
                        continue
                if not alive(v, p, extended):
                    continue
                sigma = (a.step(state, letter), v, p, extended)
                cand = word + (letter,)
                if sigma not in nxt or cand < nxt[sigma]:
                    nxt[sigma] = cand
        current = nxt
        m += 1
    return state_levels


def _best_per_state(
    state_levels: list[dict[int, Word]], start_level: int
) -> dict[int, tuple[int, Word]]:
    best: dict[int, tuple[int, Word]] = {}
    for m in range(start_level, len(state_levels)):
        for state, word in state_levels[m].items():
            cand = (m, word)
            if state not in best or cand < best[state]:
                best[state] = cand
    return best


@dataclass(frozen=True)
class FoolingPair:
    odd_word: Word
    even_word: Word
    state: int


def fooling_pairs_up_to(
    a: SafetyAutomaton, n: int, t_max: int, caps: Caps | None = None
) -> dict[int, FoolingPair | None]:
    """Fooling pairs for every even-length threshold ``t`` in ``0..t_max``.

    The two reach analyses are shared across thresholds; for each ``t`` the
    returned pair (if any) minimizes ``(len(g), g, len(f), f, state)``, which
    makes the choice worker-order independent.
    """
    odd_levels = _parity_reach(a, n, GraphParity.ODD, 0, caps)
    even_levels = _parity_reach(a, n, GraphParity.EVEN, t_max, caps)
    odd_best = _best_per_state(odd_levels, 0)
    out: dict[int, FoolingPair | None] = {}
    for t in range(t_max + 1):
        even_best = _best_per_state(even_levels, t)
        candidates = []
        for state in sorted(odd_best.keys() & even_best.keys()):
            glen, gword = even_best[state]
            flen, fword = odd_best[state]
            candidates.append((glen, gword, flen, fword, state))
        if candidates:
            glen, gword, flen, fword, state = min(candidates)
            out[t] = FoolingPair(fword, gword, state)
        else:
            out[t] = None
    return out


def search_fooling_pair(
    a: SafetyAutomaton, n: int, t: int, caps: Caps | None = None
) -> FoolingPair | None:
    """Search for words (odd-realizable, even-realizable of length >= t) with
    equal end states; any hit witnesses failure of time-t separation."""
    return fooling_pairs_up_to(a, n, t, caps)[t]


def confirm_fooling_pair(
    a: SafetyAutomaton, n: int, t: int, pair: FoolingPair, caps: Caps | None = None
) -> bool:
    """Re-check a pair against the independent prefix-realizability oracle."""
    return (
        is_cycles_prefix(pair.odd_word, n, GraphParity.ODD, a.d, caps)
        and is_cycles_prefix(pair.even_word, n, GraphParity.EVEN, a.d, caps)
        and len(pair.even_word) >= t
        and delta_star(a, a.start, pair.odd_word)
        == delta_star(a, a.start, pair.even_word)
        == pair.state
    )


# ---------------------------------------------------------------------------
# structured search and certificates


@dataclass(frozen=True)
class FoolingCertificate:
    """Blockwise fooling evidence: per-block words plus their block structure."""

    n: int
    t: int
    blocks: DisjointTuple
    fs: tuple[Word, ...]
    gs: tuple[Word, ...]
    automaton: SafetyAutomaton


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def structured_search(
    a: SafetyAutomaton,
    n: int,
    t: int,
    max_tuples: int = 256,
    caps: Caps | None = None,
) -> FoolingCertificate | None:
    """Blockwise certificate search: for candidate disjoint tuples, build the
    even-side block words and match each with a close-tuple word via
    :func:`search_close_tuple_word`.

    Runs only in the non-degenerate regime (per-block size >= 1 and at least
    5 blocks); scans at most *max_tuples* candidate block tuples.
    """
    params = derive_params(n, t)
    if params.a < 1 or params.k < 5:
        return None
    m = params.k // 5
    if params.half_n + m + 1 > a.n:
        raise ValidationError("automaton alphabet too small for the hub letters")
    for sets in itertools.islice(
        gen_disjoint_tuples(params.half_n, params.k, caps), max_tuples
    ):
        blocks = DisjointTuple(sets)
        fs: list[Word] = []
        gs: list[Word] = []
        state = a.start
        used: frozenset[int] = frozenset()
        complete = True
        for r in range(1, m + 1):
            g_word: list = []
            for block in sets:
                g_word.extend(encode_set_word(block - used))
            g_tuple = tuple(g_word)
            target = delta_star(a, state, g_tuple)
            f_word = search_close_tuple_word(n, t, a, tuple(fs), target, caps)
            if f_word is None:
                complete = False
                break
            fs.append(f_word)
            gs.append(g_tuple)
            used |= nodes_of_word(f_word)
            state = a.step(target, hub_letter(params.half_n, r))
        if complete:
            return FoolingCertificate(n, t, blocks, tuple(fs), tuple(gs), a)
    return None


def check_fooling_certificate(cert: FoolingCertificate) -> CertificateCheck:
    """Verify every certificate condition; first failed condition is reported."""
    try:
        params = derive_params(cert.n, cert.t)
    except ValidationError:
        return CertificateCheck(False, "parameters")
    m = params.k // 5
    if params.a < 1:
        return CertificateCheck(False, "degenerate-parameters")
    if len(cert.fs) != m or len(cert.gs) != m:
        return CertificateCheck(False, "block-count")
    if params.half_n + m + 1 > cert.automaton.n:
        return CertificateCheck(False, "alphabet")
    for s in cert.blocks.sets:
        if len(s) != params.a or any(not (1 <= x <= params.half_n) for x in s):
            return CertificateCheck(False, "blocks")
    if len(cert.blocks.sets) != params.k:
        return CertificateCheck(False, "blocks")
    for word in cert.fs + cert.gs:
        if any(p != 1 or not (1 <= v <= params.half_n) for v, p in word):
            return CertificateCheck(False, "letters")
    f_nodes = [nodes_of_word(f) for f in cert.fs]
    for s1, s2 in itertools.combinations(f_nodes, 2):
        if s1 & s2:
            return CertificateCheck(False, "f-overlap")
    for s in f_nodes:
        if len(s) > Fraction(2 * params.half_n, params.k):
            return CertificateCheck(False, "f-too-large")
    for g in cert.gs:
        if not is_block_increasing(cert.blocks, g):
            return CertificateCheck(False, "g-not-increasing")
        if len(g) < Fraction(4 * params.half_n, 7):
            return CertificateCheck(False, "g-too-short")
    a = cert.automaton
    f_chain = chain_words(cert.fs, params.half_n)
    g_chain = chain_words(cert.gs, params.half_n)
    if delta_star(a, a.start, f_chain) != delta_star(a, a.start, g_chain):
        return CertificateCheck(False, "state-mismatch")
    odd_witness = build_odd_witness(cert.fs, params.half_n)
    if classify_graph(odd_witness) is not GraphParity.ODD or not is_walk(
        odd_witness, f_chain
    ):
        return CertificateCheck(False, "odd-witness")
    even_witness = build_even_witness(cert.blocks, params.half_n, m)
    if classify_graph(even_witness) is not GraphParity.EVEN or not is_walk(
        even_witness, g_chain
    ):
        return CertificateCheck(False, "even-witness")
    if len(g_chain) < cert.t:
        return CertificateCheck(False, "even-too-short")
    return CertificateCheck(True)


# ---------------------------------------------------------------------------
# exact arithmetic replay of the protocol-size derivation


@dataclass(frozen=True)
class ChainStep:
    name: str
    applicable: bool
    holds: bool | None
    note: str


def protocol_arithmetic_chain(n: int, t: int) -> list[ChainStep]:
    """Exact integer/rational replay of the protocol-size inequality chain.

    Steps carry their own applicability window; a *violation* is a step whose
    hypotheses hold while its exact conclusion fails.  The chain: the guess-
    and-announce protocol costs at most ``3 k log2(budget)`` bits; the
    block-count/closeness ratio fits under ``sqrt(half_n)/100``; and the
    budget exponent stays below ``n^5 / (10^11 t^4)``.
    """
    if t < n:
        return [
            ChainStep(
                "parameters",
                False,
                None,
                f"t={t} < n={n}: no blocks, remaining steps vacuous",
            )
        ]
    params = derive_params(n, t)
    k, e = params.k, params.q_exponent
    steps = [
        ChainStep("parameters", True, True, f"k={k}, q_exponent={e}")
    ]
    # cost of the protocol: (2k+1) e + 1 <= 3 k e, valid once k >= 160 and e >= 1
    cost_applicable = k >= 160 and e >= 1
    cost_holds = protocol_cost(k, e) <= 3 * k * e if cost_applicable else None
    steps.append(
        ChainStep(
            "protocol-cost",
            cost_applicable,
            cost_holds,
            f"(2k+1)e+1 = {protocol_cost(k, e)} vs 3ke = {3 * k * e}",
        )
    )
    # remaining steps live in the window 8n <= t <= n^(5/4)/1000, exactly:
    window = t >= 8 * n and (1000 * t) ** 4 <= n**5
    ratio_holds = (100 * k * k) ** 2 <= params.half_n if window else None
    steps.append(
        ChainStep(
            "parties-ratio",
            window,
            ratio_holds,
            f"(100 k^2)^2 = {(100 * k * k) ** 2} vs half_n = {params.half_n}",
        )
    )
    budget_holds = (
        e * 10**11 * t**4 < n**5 if window else None
    )
    steps.append(
        ChainStep(
            "state-budget",
            window,
            budget_holds,
            f"e*10^11*t^4 vs n^5 at e={e}",
        )
    )
    return steps


def chain_violations(steps: Sequence[ChainStep]) -> list[ChainStep]:
    return [s for s in steps if s.applicable and s.holds is False]


def block_word_length_margin(n: int, t: int) -> tuple[Fraction, Fraction]:
    """(guaranteed length of a block word, required length) as exact rationals.

    Guaranteed: ``k * floor(half_n / k) - 2 * half_n / 5`` (full blocks minus
    the largest possible used-node set); required: ``4 * half_n / 7``.
    """
    params = derive_params(n, t)
    guaranteed = Fraction(params.k * params.a) - Fraction(2 * params.half_n, 5)
    required = Fraction(4 * params.half_n, 7)
    return (guaranteed, required)
