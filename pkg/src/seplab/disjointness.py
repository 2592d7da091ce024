"""The promise disjointness problem, box covers, and the forcing-size oracle.

``k`` parties each hold an ``a``-element subset of ``1..n`` with
``a = floor(n/k)``; the promise is that the sets are either pairwise disjoint
or pairwise close (symmetric difference at most ``gamma * a``).  A
nondeterministic protocol of cost *c* induces a cover of the disjoint tuples
by at most ``2^c`` boxes (products of per-party families) none of which
contains a close tuple, so the exact minimum box cover at desk scale is the
computable core of the lower bound, alongside the closed-form threshold that
forces cross-intersecting selections out of large families.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .caps import DEFAULT_CAPS, Caps, require
from .errors import ValidationError
from .exact import exp_enclosure
from .families import SetFamily, all_sets


@dataclass(frozen=True)
class DisjointnessInstance:
    n: int
    k: int
    gamma: Fraction

    def __post_init__(self):
        # k = n is allowed for desk-scale instances (per-party sets stay nonempty);
        # the lower-bound formula separately checks its stricter k <= n-1 window.
        if not (2 <= self.k <= self.n):
            raise ValidationError("need 2 <= k <= n")
        if not (0 < self.gamma < 1):
            raise ValidationError("need 0 < gamma < 1")

    @property
    def a(self) -> int:
        return self.n // self.k


def disj_value(sets: Sequence[frozenset[int]], gamma: Fraction) -> int | None:
    """1 on pairwise-disjoint tuples, 0 on pairwise-close ones, None otherwise.

    Disjointness wins the (degenerate, empty-set) overlap of the two cases.
    """
    sizes = {len(s) for s in sets}
    if len(sizes) > 1:
        raise ValidationError("all sets must have the same size")
    a = sizes.pop() if sizes else 0
    disjoint = all(
        not (x & y) for x, y in itertools.combinations(sets, 2)
    )
    if disjoint:
        return 1
    close = all(
        len(x ^ y) <= gamma * a for x, y in itertools.combinations(sets, 2)
    )
    return 0 if close else None


def _tuple_stream_cap(n: int, k: int, caps: Caps) -> None:
    # streams are lazy: cap the candidate scan per extension step, and let the
    # generators refuse (never truncate) once the yield budget is exhausted
    a = n // k
    require(
        math.comb(n, a) * k <= caps.tuple_space,
        f"tuple stream needs C(n,a)*k <= {caps.tuple_space}",
    )


def gen_disjoint_tuples(
    n: int, k: int, caps: Caps | None = None
) -> Iterator[tuple[frozenset[int], ...]]:
    """All k-tuples of pairwise-disjoint a-sets, lexicographic over sorted tuples.

    Raises once more than the tuple-space cap would have to be yielded.
    """
    caps = caps or DEFAULT_CAPS
    _tuple_stream_cap(n, k, caps)
    a = n // k
    universe = [tuple(sorted(s)) for s in itertools.combinations(range(1, n + 1), a)]
    budget = caps.tuple_space

    def rec(prefix: list[tuple[int, ...]], used: frozenset[int]):
        nonlocal budget
        if len(prefix) == k:
            budget -= 1
            require(budget >= 0, f"disjoint-tuple stream exceeds {caps.tuple_space} tuples")
            yield tuple(frozenset(p) for p in prefix)
            return
        for cand in universe:
            if used.isdisjoint(cand):
                yield from rec(prefix + [cand], used | frozenset(cand))

    yield from rec([], frozenset())


def count_disjoint_tuples(n: int, k: int) -> int:
    """Product formula: C(n,a) * C(n-a,a) * ... * C(n-(k-1)a, a)."""
    a = n // k
    total = 1
    for i in range(k):
        total *= math.comb(n - i * a, a)
    return total


def gen_close_tuples(
    n: int, k: int, gamma: Fraction, caps: Caps | None = None
) -> Iterator[tuple[frozenset[int], ...]]:
    """All k-tuples of a-sets with pairwise symmetric difference <= gamma * a.

    Lexicographic over tuples of sorted member tuples; raises once more than
    the tuple-space cap would have to be yielded.
    """
    caps = caps or DEFAULT_CAPS
    _tuple_stream_cap(n, k, caps)
    a = n // k
    bound = gamma * a
    universe = [tuple(sorted(s)) for s in itertools.combinations(range(1, n + 1), a)]
    budget = caps.tuple_space

    def rec(prefix: list[tuple[int, ...]]):
        nonlocal budget
        if len(prefix) == k:
            budget -= 1
            require(budget >= 0, f"close-tuple stream exceeds {caps.tuple_space} tuples")
            yield tuple(frozenset(p) for p in prefix)
            return
        for cand in universe:
            cset = frozenset(cand)
            if all(len(cset ^ frozenset(p)) <= bound for p in prefix):
                yield from rec(prefix + [cand])

    yield from rec([])


@dataclass(frozen=True)
class Box:
    """A product of k per-party families over a shared (n, a) layer."""

    factors: tuple[SetFamily, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValidationError("a box needs at least one factor")
        shapes = {(f.n, f.a) for f in self.factors}
        if len(shapes) > 1:
            raise ValidationError("box factors must share (n, a)")

    def contains(self, tup: Sequence[frozenset[int]]) -> bool:
        return len(tup) == len(self.factors) and all(
            x in f.members for x, f in zip(tup, self.factors)
        )


@dataclass(frozen=True)
class CoverCertificate:
    instance: DisjointnessInstance
    boxes: tuple[Box, ...]


def check_cover(cert: CoverCertificate, caps: Caps | None = None) -> bool:
    """Every disjoint tuple in some box; no box holding a close tuple."""
    inst = cert.instance
    for tup in gen_disjoint_tuples(inst.n, inst.k, caps):
        if not any(box.contains(tup) for box in cert.boxes):
            return False
    for tup in gen_close_tuples(inst.n, inst.k, inst.gamma, caps):
        if any(box.contains(tup) for box in cert.boxes):
            return False
    return True


def _maximal_avoiding_boxes(
    n: int, k: int, close: list[tuple[frozenset[int], ...]], caps: Caps
) -> list[tuple[frozenset[frozenset[int]], ...]]:
    """All maximal boxes containing no close tuple.

    Every close tuple must be blocked by dropping its i-th set from the i-th
    factor for some coordinate i, and every maximal avoiding box arises from
    such a blocking-coordinate choice, so enumerating the k^|close| choice
    functions and keeping the maximal resulting boxes is exact.
    """
    a = n // k
    universe = frozenset(all_sets(n, a))
    require(
        k ** len(close) <= caps.cover_choices,
        f"cover search needs k^|close| <= {caps.cover_choices}",
    )
    seen: set[tuple[frozenset[frozenset[int]], ...]] = set()
    for choice in itertools.product(range(k), repeat=len(close)):
        dropped: list[set[frozenset[int]]] = [set() for _ in range(k)]
        for tup, coord in zip(close, choice):
            dropped[coord].add(tup[coord])
        box = tuple(frozenset(universe - d) for d in dropped)
        seen.add(box)
    boxes = list(seen)
    maximal = [
        b
        for b in boxes
        if not any(
            b is not other and all(x <= y for x, y in zip(b, other))
            for other in boxes
        )
    ]
    return sorted(maximal, key=lambda b: tuple(sorted(tuple(sorted(s)) for s in f) for f in b))


def min_cover_bruteforce(
    n: int, k: int, gamma: Fraction, caps: Caps | None = None
) -> int:
    """Exact minimum number of close-avoiding boxes covering the disjoint tuples."""
    caps = caps or DEFAULT_CAPS
    disjoint = list(gen_disjoint_tuples(n, k, caps))
    require(
        len(disjoint) <= caps.cover_elements,
        f"exact cover needs |disjoint| <= {caps.cover_elements}, got {len(disjoint)}",
    )
    close = list(gen_close_tuples(n, k, gamma, caps))
    boxes = _maximal_avoiding_boxes(n, k, close, caps)
    traces = sorted(
        {
            sum(
                1 << i
                for i, tup in enumerate(disjoint)
                if all(x in f for x, f in zip(tup, box))
            )
            for box in boxes
        },
        reverse=True,
    )
    full = (1 << len(disjoint)) - 1
    if full == 0:
        return 0
    best = {0: 0}
    frontier = [0]
    count = 0
    while frontier:
        count += 1
        nxt = []
        for mask in frontier:
            for trace in traces:
                new = mask | trace
                if new not in best:
                    best[new] = count
                    if new == full:
                        return count
                    nxt.append(new)
        frontier = nxt
    raise ValidationError("disjoint tuples cannot be covered by avoiding boxes")


def disj_cc_lower_bound(n: int, k: int, gamma: Fraction) -> float | None:
    """Closed-form nondeterministic communication lower bound, when applicable.

    Applicable for 2 <= k <= n-1 and k/gamma <= sqrt(n)/100; returns None
    otherwise.  The value is ``gamma^2 n / (10^4 k) - 2 log2(n)``.
    """
    gamma = Fraction(gamma)
    if not (2 <= k <= n - 1) or not (0 < gamma < 1):
        return None
    # k/gamma <= sqrt(n)/100  <=>  (100 k / gamma)^2 <= n, checked exactly
    ratio = 100 * k / gamma
    if ratio * ratio > n:
        return None
    return float(gamma) ** 2 * n / (10**4 * k) - 2 * math.log2(n)


def forcing_size_bound(n: int, a: int, t: int, k: int) -> float:
    """Closed-form family-size threshold forcing a cross-intersecting selection.

    ``2^(k-2) * sqrt(32 a (n-a)) * exp(-(a-t-1)^2 / (40 a)) * C(n,a) + 2^(k-2)``.
    """
    if not (0 <= t < a < n):
        raise ValidationError("need 0 <= t < a < n")
    if k < 2:
        raise ValidationError("need k >= 2")
    scale = 2.0 ** (k - 2)
    return (
        scale
        * math.sqrt(32.0 * a * (n - a))
        * math.exp(-((a - t - 1) ** 2) / (40.0 * a))
        * math.comb(n, a)
        + scale
    )


def min_forcing_family_size(
    n: int, a: int, t: int, k: int, caps: Caps | None = None
) -> int:
    """Exact minimal N: any k families of size >= N admit F_1,...,F_k with
    |F_1 ∩ F_i| >= t+1 for all i >= 2.

    For a candidate N it suffices to test adversarial families of size
    exactly N for parties 2..k and count how many sets remain unusable as
    F_1; N fails iff at least N sets are unusable for some adversary.
    """
    caps = caps or DEFAULT_CAPS
    if not (0 <= t < a < n) or k < 2:
        raise ValidationError("need 0 <= t < a < n and k >= 2")
    universe = all_sets(n, a)
    m = len(universe)
    intersects = [
        sum(1 << i for i, s in enumerate(universe) if len(s & member) > t)
        for member in universe
    ]
    for size in range(1, m + 1):
        combos = list(itertools.combinations(range(m), size))
        space = len(combos) ** (k - 1)
        require(
            space <= caps.forcing_space,
            f"forcing-size search space {space} exceeds {caps.forcing_space}",
        )
        masks = []
        for combo in combos:
            mask = 0
            for j in combo:
                mask |= intersects[j]
            masks.append(mask)
        fails = False
        for adversary in itertools.product(masks, repeat=k - 1):
            usable = (1 << m) - 1
            for mask in adversary:
                usable &= mask
            if m - usable.bit_count() >= size:
                fails = True
                break
        if not fails:
            return size
    return m  # full families always admit F_1 = F_i = the same set


def protocol_cost(k: int, log2_states: int) -> int:
    """Exact bit cost of the k-stage state-announcement protocol:
    ``(2k + 1) * log2_states + 1`` (guess plus k announced states)."""
    return (2 * k + 1) * log2_states + 1
