"""Command-line interface.

Subcommands: classify, verify, refute, solve, fool, extremal, comm, bounds,
params.  Global flags ``--seed``, ``--jobs``, ``--format`` and ``--caps``
(also the ``SEPLAB_CAPS`` environment variable) apply to every subcommand.
Exit status: 0 for ok/true verdicts, 1 for counterexamples or false
verdicts, 2 for usage errors and refused caps.  Output is canonical JSON
(or CSV/DOT where selected) and is byte-identical across ``--jobs`` values.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import serialize
from .automata import counter_separator, make_absorbing
from .caps import DEFAULT_CAPS, Caps
from .disjointness import (
    check_cover,
    disj_cc_lower_bound,
    forcing_size_bound,
    gen_close_tuples,
    gen_disjoint_tuples,
    min_cover_bruteforce,
    min_forcing_family_size,
)
from .errors import CapExceeded, PreconditionError, SepLabError, ValidationError
from .families import (
    SetFamily,
    binomial_lower_bound,
    chernoff_two_sided,
    compress_pair,
    fi_equivalence_violations,
    kl_with_lower_bound,
    max_product_bruteforce,
    probability_bound_violations,
    random_shift_suite,
    shift_family,
    t_far_product_bound,
    far_pair_probability_bound,
)
from .fooling import (
    block_word_length_margin,
    chain_violations,
    check_fooling_certificate,
    confirm_fooling_pair,
    derive_params,
    protocol_arithmetic_chain,
    search_fooling_pair,
    structured_search,
)
from .graphs import classify_graph
from .separation import (
    agreement_sweep,
    confirm_refutation,
    derive_time_bound,
    refute_small_separator,
    solve_parity_direct,
    solve_parity_via_separator,
    verify_time_t,
    verify_unrestricted,
)
from .automata import enumerate_automata


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _emit_json(obj) -> None:
    _emit(serialize.dumps(obj))


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _caps_from(args) -> Caps:
    caps = DEFAULT_CAPS
    env = os.environ.get("SEPLAB_CAPS")
    if env:
        caps = caps.with_overrides(**Caps.parse(env))
    if args.caps:
        caps = caps.with_overrides(**Caps.parse(args.caps))
    return caps


def _automaton_from(args):
    if getattr(args, "counter", None) is not None:
        return counter_separator(args.counter)
    if getattr(args, "automaton", None):
        return make_absorbing(serialize.automaton_from_json(_load_json(args.automaton)))
    raise ValidationError("pass --automaton FILE or --counter N")


def _cmd_classify(args) -> int:
    g = serialize.graph_from_json(_load_json(args.graph))
    if args.format == "dot":
        _emit(serialize.graph_to_dot(g))
        return 0
    _emit_json({"classification": classify_graph(g).value})
    return 0


def _cmd_verify(args) -> int:
    caps = _caps_from(args)
    a = _automaton_from(args)
    if args.time is not None:
        verdict = verify_time_t(a, args.n, args.d, args.time, caps, args.jobs)
    else:
        verdict = verify_unrestricted(a, args.n, args.d, caps, args.jobs)
    payload = serialize.verdict_to_json(verdict)
    if args.bound and verdict.ok:
        payload["time_bound"] = derive_time_bound(a, args.n, args.d, caps, args.jobs)
    _emit_json(payload)
    return 0 if verdict.ok else 1


def _refutation_row(index: int, automaton, refutation) -> list:
    word = " ".join(f"{v}:{p}" for v, p in refutation.word)
    return [index, automaton.states, automaton.accept, refutation.reason.value, word]


def _cmd_refute(args) -> int:
    caps = _caps_from(args)
    if args.all:
        rows = []
        ok = True
        for index, a in enumerate(
            enumerate_automata(args.n, args.d, args.states, caps)
        ):
            refutation = refute_small_separator(a, args.n)
            if not confirm_refutation(a, refutation):
                ok = False
            rows.append(_refutation_row(index, a, refutation))
        if args.format == "csv":
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(["index", "states", "accept", "reason", "word"])
            writer.writerows(rows)
        else:
            _emit_json({"confirmed": ok, "refutations": rows})
        return 0 if ok else 1
    a = _automaton_from(args)
    refutation = refute_small_separator(a, args.n)
    payload = serialize.refutation_to_json(refutation)
    payload["confirmed"] = confirm_refutation(a, refutation)
    _emit_json(payload)
    return 0 if payload["confirmed"] else 1


def _cmd_solve(args) -> int:
    caps = _caps_from(args)
    if args.cross_check is not None:
        a = _automaton_from(args) if (args.automaton or args.counter) else None
        report = agreement_sweep(args.cross_check, args.d, a, caps, args.jobs)
        payload = {"arenas": report.arenas, "ok": report.ok}
        if report.disagreement is not None:
            d = report.disagreement
            payload["disagreement"] = {
                "graph": serialize.graph_to_json(d.graph),
                "owner": list(d.owner),
                "direct": sorted(d.direct_winning),
                "reduction": sorted(d.reduction_winning),
            }
        _emit_json(payload)
        return 0 if report.ok else 1
    arena = serialize.arena_from_json(_load_json(args.arena))
    if args.via == "direct":
        result = solve_parity_direct(arena, caps)
    else:
        a = _automaton_from(args) if (args.automaton or args.counter) else None
        result = solve_parity_via_separator(arena, a, args.trust, caps)
    _emit_json(
        {
            "winner": result.winner,
            "strategy": [list(pair) for pair in result.strategy]
            if result.strategy is not None
            else None,
        }
    )
    return 0


def _cmd_fool(args) -> int:
    caps = _caps_from(args)
    if args.check:
        cert = serialize.certificate_from_json(_load_json(args.check))
        verdict = check_fooling_certificate(cert)
        _emit_json({"ok": verdict.ok, "reason": verdict.reason})
        return 0 if verdict.ok else 1
    a = _automaton_from(args)
    if args.structured:
        cert = structured_search(a, args.n, args.t, args.max_tuples, caps)
        if cert is None:
            _emit_json({"found": False})
            return 0
        payload = serialize.certificate_to_json(cert)
        payload["found"] = True
        payload["checked"] = bool(check_fooling_certificate(cert))
        _emit_json(payload)
        return 1
    pair = search_fooling_pair(a, args.n, args.t, caps)
    if pair is None:
        _emit_json({"found": False})
        return 0
    payload = serialize.pair_to_json(pair)
    payload["found"] = True
    payload["confirmed"] = confirm_fooling_pair(a, args.n, args.t, pair, caps)
    _emit_json(payload)
    return 1


def _cmd_extremal(args) -> int:
    caps = _caps_from(args)
    mode = args.mode
    if mode == "shift":
        if args.trials:
            violations = random_shift_suite(
                args.trials, args.n, args.a, args.max_members, args.seed
            )
            _emit_json({"trials": args.trials, "violations": violations})
            return 0 if not violations else 1
        fam = serialize.family_from_json(_load_json(args.family))
        _emit_json(serialize.family_to_json(shift_family(fam, args.i, args.j)))
        return 0
    if mode == "compress":
        f = serialize.family_from_json(_load_json(args.family))
        g = serialize.family_from_json(_load_json(args.other))
        f2, g2 = compress_pair(f, g)
        _emit_json(
            {"f": serialize.family_to_json(f2), "g": serialize.family_to_json(g2)}
        )
        return 0
    if mode == "fi-check":
        ts = [args.t] if args.t is not None else None
        checked, violation = fi_equivalence_violations(args.n, args.a, ts)
        _emit_json({"ok": violation is None, "checked": checked, "violation": violation})
        return 0 if violation is None else 1
    if mode == "bound":
        _emit_json({"value": t_far_product_bound(args.n, args.a, args.t)})
        return 0
    if mode == "maxprod":
        _emit_json({"value": max_product_bruteforce(args.n, args.a, args.t, caps)})
        return 0
    if mode == "prob":
        checked, violation = probability_bound_violations(args.n, args.a, args.t)
        _emit_json({"ok": violation is None, "ideals": checked, "violation": violation})
        return 0 if violation is None else 1
    raise ValidationError(f"unknown extremal mode {mode!r}")


def _cmd_comm(args) -> int:
    caps = _caps_from(args)
    mode = args.mode
    if mode == "gen":
        if args.which == "disjoint":
            stream = gen_disjoint_tuples(args.n, args.k, caps)
        else:
            stream = gen_close_tuples(args.n, args.k, args.gamma, caps)
        tuples = [[sorted(s) for s in tup] for tup in stream]
        if args.format == "csv":
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(["index", "tuple"])
            for index, tup in enumerate(tuples):
                writer.writerow([index, json.dumps(tup, separators=(",", ":"))])
        else:
            _emit_json({"count": len(tuples), "tuples": tuples})
        return 0
    if mode == "check":
        cover = serialize.cover_from_json(_load_json(args.cover))
        ok = check_cover(cover, caps)
        _emit_json({"ok": ok, "boxes": len(cover.boxes)})
        return 0 if ok else 1
    if mode == "mincover":
        _emit_json({"value": min_cover_bruteforce(args.n, args.k, args.gamma, caps)})
        return 0
    if mode == "bound":
        value = disj_cc_lower_bound(args.n, args.k, args.gamma)
        _emit_json({"applicable": value is not None, "value": value})
        return 0
    if mode == "A":
        _emit_json(
            {"value": min_forcing_family_size(args.n, args.a, args.t, args.k, caps)}
        )
        return 0
    raise ValidationError(f"unknown comm mode {mode!r}")


def _cmd_bounds(args) -> int:
    mode = args.mode
    if mode == "product-bound":
        _emit_json({"value": t_far_product_bound(args.n, args.a, args.t)})
    elif mode == "prob-bound":
        _emit_json({"value": far_pair_probability_bound(args.n, args.a, args.t)})
    elif mode == "chernoff":
        bound, exact = chernoff_two_sided(args.l, args.p, args.eps)
        _emit_json({"bound": bound, "exact": float(exact)})
    elif mode == "kl":
        kl, lower = kl_with_lower_bound(args.x, args.y)
        _emit_json({"kl": kl, "quadratic_lower": lower})
    elif mode == "binom":
        _emit_json({"value": binomial_lower_bound(args.n, args.a)})
    elif mode == "threshold":
        _emit_json({"value": forcing_size_bound(args.n, args.a, args.t, args.k)})
    elif mode == "chain":
        steps = protocol_arithmetic_chain(args.n, args.t)
        _emit_json(
            {
                "violations": len(chain_violations(steps)),
                "steps": [
                    {
                        "name": s.name,
                        "applicable": s.applicable,
                        "holds": s.holds,
                        "note": s.note,
                    }
                    for s in steps
                ],
            }
        )
        return 0 if not chain_violations(steps) else 1
    elif mode == "length-margin":
        guaranteed, required = block_word_length_margin(args.n, args.t)
        _emit_json(
            {
                "guaranteed": [guaranteed.numerator, guaranteed.denominator],
                "required": [required.numerator, required.denominator],
                "holds": guaranteed >= required,
            }
        )
    else:
        raise ValidationError(f"unknown bounds mode {mode!r}")
    return 0


def _cmd_params(args) -> int:
    p = derive_params(args.n, args.t)
    _emit_json(
        {
            "n": p.n,
            "t": p.t,
            "half_n": p.half_n,
            "k": p.k,
            "gamma": [p.gamma.numerator, p.gamma.denominator],
            "a": p.a,
            "q_exponent": p.q_exponent,
            "degenerate": p.degenerate,
        }
    )
    return 0


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument(
        "--format", choices=["json", "csv", "dot"], default="json", help="output format"
    )
    common.add_argument("--caps", default="", help="cap overrides name=value,...")

    parser = argparse.ArgumentParser(
        prog="seplab",
        description="verification lab for time-bounded separation automata",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a game graph")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify", parents=[common], help="verify separation")
    p.add_argument("--automaton")
    p.add_argument("--counter", type=int, help="use the built-in counting separator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--time", type=int, default=None)
    p.add_argument("--bound", action="store_true", help="also derive the least time bound")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("refute", parents=[common], help="refute undersized automata")
    p.add_argument("--automaton")
    p.add_argument("--counter", type=int)
    p.add_argument("--all", action="store_true")
    p.add_argument("--states", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(func=_cmd_refute)

    p = sub.add_parser("solve", parents=[common], help="solve a parity arena")
    p.add_argument("--arena")
    p.add_argument("--via", choices=["separator", "direct"], default="separator")
    p.add_argument("--automaton")
    p.add_argument("--counter", type=int)
    p.add_argument("--trust", action="store_true")
    p.add_argument(
        "--cross-check",
        type=int,
        default=None,
        metavar="N",
        help="compare both solvers on every arena with N nodes",
    )
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("fool", parents=[common], help="search fooling words")
    p.add_argument("--automaton")
    p.add_argument("--counter", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--structured", action="store_true")
    p.add_argument("--max-tuples", type=int, default=256)
    p.add_argument("--check", help="re-check a serialized certificate")
    p.set_defaults(func=_cmd_fool)

    p = sub.add_parser("extremal", parents=[common], help="set-family operations")
    p.add_argument("mode", choices=["shift", "compress", "fi-check", "bound", "maxprod", "prob"])
    p.add_argument("--family")
    p.add_argument("--other")
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--max-members", type=int, default=6)
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("comm", parents=[common], help="promise-disjointness tools")
    p.add_argument("mode", choices=["gen", "check", "mincover", "bound", "A"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--gamma", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--which", choices=["disjoint", "close"], default="disjoint")
    p.add_argument("--cover")
    p.set_defaults(func=_cmd_comm)

    p = sub.add_parser("bounds", parents=[common], help="closed-form bound values")
    p.add_argument(
        "mode",
        choices=[
            "product-bound",
            "prob-bound",
            "chernoff",
            "kl",
            "binom",
            "threshold",
            "chain",
            "length-margin",
        ],
    )
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--p", type=_fraction)
    p.add_argument("--eps", type=_fraction)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("params", parents=[common], help="derived search parameters")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=_cmd_params)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, CapExceeded, PreconditionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SepLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
