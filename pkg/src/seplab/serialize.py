"""JSON and DOT serialization for every externally visible object.

JSON layouts (all 1-based nodes, 0-based automaton states):

* graph:      ``{"n": .., "d": .., "edges": [[u, v, pri], ...]}``
* automaton:  ``{"n", "d", "states", "start", "accept", "delta": [[state, node, pri, target], ...]}``
* arena:      ``{"graph": .., "owner": [..], "initial": ..}``
* family:     ``{"n", "a", "members": [[..], ..]}`` with sorted lists of sorted lists
* cover:      ``{"n", "k", "gamma": [num, den], "boxes": [[family-members, ...], ...]}``
* fooling certificate: ``{"n", "t", "blocks", "fs", "gs", "automaton"}``

Words serialize as ``[[node, pri], ...]``.  :func:`dumps` renders canonical
JSON (sorted keys, fixed separators) so identical runs emit identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .disjointness import Box, CoverCertificate, DisjointnessInstance
from .errors import ValidationError
from .families import SetFamily
from .fooling import DisjointTuple, FoolingCertificate, FoolingPair
from .graphs import GameGraph, Word
from .automata import SafetyAutomaton
from .separation import Counterexample, ParityArena, Refutation, Verdict


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def word_to_json(word: Word) -> list[list[int]]:
    return [[v, p] for v, p in word]


def word_from_json(data) -> Word:
    return tuple((int(v), int(p)) for v, p in data)


def graph_to_json(g: GameGraph) -> dict:
    return {"n": g.n, "d": g.d, "edges": [[u, v, p] for u, v, p in g.edges]}


def graph_from_json(data) -> GameGraph:
    try:
        return GameGraph.from_map(
            int(data["n"]),
            int(data["d"]),
            {(int(u), int(v)): int(p) for u, v, p in data["edges"]},
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad graph JSON: {exc}") from exc


def graph_to_dot(g: GameGraph, name: str = "game") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(1, g.n + 1):
        lines.append(f"  {v};")
    for u, v, p in g.edges:
        lines.append(f'  {u} -> {v} [label="{p}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def automaton_to_json(a: SafetyAutomaton) -> dict:
    delta = []
    for state in range(a.states):
        for v in range(1, a.n + 1):
            for p in range(1, a.d + 1):
                delta.append([state, v, p, a.transitions[state][(v - 1) * a.d + (p - 1)]])
    return {
        "n": a.n,
        "d": a.d,
        "states": a.states,
        "start": a.start,
        "accept": a.accept,
        "delta": delta,
    }


def automaton_from_json(data) -> SafetyAutomaton:
    try:
        n, d, states = int(data["n"]), int(data["d"]), int(data["states"])
        rows = [[-1] * (n * d) for _ in range(states)]
        for state, v, p, target in data["delta"]:
            rows[int(state)][(int(v) - 1) * d + (int(p) - 1)] = int(target)
        if any(t < 0 for row in rows for t in row):
            raise ValidationError("automaton JSON leaves transitions undefined")
        return SafetyAutomaton(
            n, d, states, int(data["start"]), int(data["accept"]),
            tuple(tuple(row) for row in rows),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"bad automaton JSON: {exc}") from exc


def automaton_to_dot(a: SafetyAutomaton, name: str = "automaton") -> str:
    lines = [f"digraph {name} {{"]
    lines.append(f"  {a.start} [shape=diamond];")
    lines.append(f"  {a.accept} [shape=doublecircle];")
    for state in range(a.states):
        for v in range(1, a.n + 1):
            for p in range(1, a.d + 1):
                target = a.transitions[state][(v - 1) * a.d + (p - 1)]
                lines.append(f'  {state} -> {target} [label="({v},{p})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def arena_to_json(arena: ParityArena) -> dict:
    return {
        "graph": graph_to_json(arena.graph),
        "owner": list(arena.owner),
        "initial": arena.initial,
    }


def arena_from_json(data) -> ParityArena:
    try:
        return ParityArena(
            graph_from_json(data["graph"]),
            tuple(int(o) for o in data["owner"]),
            int(data["initial"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad arena JSON: {exc}") from exc


def family_to_json(fam: SetFamily) -> dict:
    return {"n": fam.n, "a": fam.a, "members": [list(m) for m in fam.sorted_members]}


def family_from_json(data) -> SetFamily:
    try:
        return SetFamily.of(
            int(data["n"]), int(data["a"]), [[int(x) for x in m] for m in data["members"]]
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad family JSON: {exc}") from exc


def counterexample_to_json(ce: Counterexample) -> dict:
    return {
        "graph": graph_to_json(ce.graph),
        "word": word_to_json(ce.word),
        "reason": ce.reason.value,
    }


def verdict_to_json(verdict: Verdict) -> dict:
    if verdict.ok:
        return {"ok": True, "counterexample": None}
    return {"ok": False, "counterexample": counterexample_to_json(verdict.counterexample)}


def refutation_to_json(r: Refutation) -> dict:
    return {
        "graph": graph_to_json(r.graph),
        "word": word_to_json(r.word),
        "reason": r.reason.value,
    }


def pair_to_json(pair: FoolingPair) -> dict:
    return {
        "odd_word": word_to_json(pair.odd_word),
        "even_word": word_to_json(pair.even_word),
        "state": pair.state,
    }


def certificate_to_json(cert: FoolingCertificate) -> dict:
    return {
        "n": cert.n,
        "t": cert.t,
        "blocks": [sorted(s) for s in cert.blocks.sets],
        "fs": [word_to_json(w) for w in cert.fs],
        "gs": [word_to_json(w) for w in cert.gs],
        "automaton": automaton_to_json(cert.automaton),
    }


def certificate_from_json(data) -> FoolingCertificate:
    try:
        return FoolingCertificate(
            int(data["n"]),
            int(data["t"]),
            DisjointTuple(tuple(frozenset(int(x) for x in s) for s in data["blocks"])),
            tuple(word_from_json(w) for w in data["fs"]),
            tuple(word_from_json(w) for w in data["gs"]),
            automaton_from_json(data["automaton"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad certificate JSON: {exc}") from exc


def cover_to_json(cert: CoverCertificate) -> dict:
    inst = cert.instance
    return {
        "n": inst.n,
        "k": inst.k,
        "gamma": [inst.gamma.numerator, inst.gamma.denominator],
        "boxes": [
            [[list(m) for m in f.sorted_members] for f in box.factors]
            for box in cert.boxes
        ],
    }


def cover_from_json(data) -> CoverCertificate:
    try:
        n, k = int(data["n"]), int(data["k"])
        num, den = data["gamma"]
        inst = DisjointnessInstance(n, k, Fraction(int(num), int(den)))
        a = inst.a
        boxes = tuple(
            Box(tuple(SetFamily.of(n, a, members) for members in factors))
            for factors in data["boxes"]
        )
        return CoverCertificate(inst, boxes)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad cover JSON: {exc}") from exc
