"""Uniform set families: shifting, the componentwise order, and the far-pair bounds.

Two families of a-element subsets of ``1..n`` are *t-far* when every cross
pair intersects in at most *t* elements.  Shifting compresses a far pair
toward the left while preserving sizes and farness; left-compressed families
are exactly the ideals of the componentwise order on sorted a-sets, which
yields a border condition characterizing farness and, through a product
measure and a two-sided Chernoff bound, a closed-form ceiling on the product
of the two family sizes.  Everything is checkable here against exhaustive or
exact-rational oracles at desk scale.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .caps import DEFAULT_CAPS, Caps, require
from .errors import ValidationError
from .exact import exp_enclosure


@dataclass(frozen=True)
class SetFamily:
    """A family of a-element subsets of ``1..n``."""

    n: int
    a: int
    members: frozenset[frozenset[int]]

    def __post_init__(self):
        if not (0 < self.a < self.n):
            raise ValidationError("need 0 < a < n")
        for member in self.members:
            if len(member) != self.a:
                raise ValidationError(f"member {sorted(member)} is not a {self.a}-set")
            if not all(1 <= x <= self.n for x in member):
                raise ValidationError(f"member {sorted(member)} outside 1..{self.n}")

    @staticmethod
    def of(n: int, a: int, members: Iterable[Iterable[int]]) -> "SetFamily":
        return SetFamily(n, a, frozenset(frozenset(m) for m in members))

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def sorted_members(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(m)) for m in self.members))


def all_sets(n: int, a: int) -> list[frozenset[int]]:
    return [frozenset(c) for c in itertools.combinations(range(1, n + 1), a)]


def shift_set(x: frozenset[int], i: int, j: int) -> frozenset[int]:
    """Replace *j* by *i* when that keeps the size; otherwise *x* unchanged."""
    if j in x and i not in x:
        return (x - {j}) | {i}
    return x


def shift_family(fam: SetFamily, i: int, j: int) -> SetFamily:
    """Apply the set shift memberwise, keeping originals on collision."""
    if not (1 <= i <= fam.n and 1 <= j <= fam.n):
        raise ValidationError("shift indices must lie in 1..n")
    out = set()
    for x in fam.members:
        y = shift_set(x, i, j)
        out.add(x if y in fam.members else y)
    return SetFamily(fam.n, fam.a, frozenset(out))


def are_t_far(f: SetFamily, g: SetFamily, t: int) -> bool:
    if (f.n, f.a) != (g.n, g.a):
        raise ValidationError("families must share (n, a)")
    return all(len(x & y) <= t for x in f.members for y in g.members)


def max_cross_intersection(f: SetFamily, g: SetFamily) -> int:
    """The least t for which the pair is t-far (a for an empty side)."""
    return max((len(x & y) for x in f.members for y in g.members), default=0)


def family_weight(fam: SetFamily) -> int:
    """Sum of all elements over all members; strictly drops under real shifts."""
    return sum(sum(m) for m in fam.members)


def compress_steps(
    f: SetFamily, g: SetFamily
) -> Iterator[tuple[tuple[int, int], SetFamily, SetFamily]]:
    """Yield ``((i, j), F, G)`` after each mirrored shift of the compression loop.

    Each round applies the least pair ``(i, j)`` with ``i < j`` that moves F,
    and the mirrored shift to G; the loop stops when F is left-compressed.
    """
    while True:
        for i, j in itertools.combinations(range(1, f.n + 1), 2):
            f2 = shift_family(f, i, j)
            if f2.members != f.members:
                g = shift_family(g, j, i)
                f = f2
                yield ((i, j), f, g)
                break
        else:
            return


def compress_pair(f: SetFamily, g: SetFamily) -> tuple[SetFamily, SetFamily]:
    """Left-compress F with mirrored shifts on G; sizes and farness persist."""
    for _, f2, g2 in compress_steps(f, g):
        f, g = f2, g2
    return f, g


def is_left_compressed(fam: SetFamily) -> bool:
    return all(
        shift_family(fam, i, j).members == fam.members
        for i, j in itertools.combinations(range(1, fam.n + 1), 2)
    )


def leftof(x: Iterable[int], y: Iterable[int]) -> bool:
    """Componentwise order on equal-size sets: i-th smallest of x <= i-th of y."""
    xs, ys = sorted(x), sorted(y)
    if len(xs) != len(ys):
        raise ValidationError("leftof compares equal-size sets")
    return all(a <= b for a, b in zip(xs, ys))


def is_ideal(fam: SetFamily) -> bool:
    """Downward closed under :func:`leftof` within the a-uniform layer."""
    universe = all_sets(fam.n, fam.a)
    return all(
        x in fam.members
        for y in fam.members
        for x in universe
        if leftof(x, y)
    )


def enumerate_ideals(n: int, a: int) -> Iterator[frozenset[frozenset[int]]]:
    """All downward-closed subsets of the a-uniform layer, empty one included.

    Elements are processed in lexicographic order (a linear extension of the
    componentwise order); a set may be included only if everything below it
    already is.
    """
    universe = [tuple(sorted(c)) for c in itertools.combinations(range(1, n + 1), a)]
    below: list[list[int]] = [
        [j for j in range(i) if leftof(universe[j], universe[i])]
        for i in range(len(universe))
    ]

    def rec(idx: int, chosen: list[bool]) -> Iterator[frozenset[frozenset[int]]]:
        if idx == len(universe):
            yield frozenset(
                frozenset(universe[i]) for i, c in enumerate(chosen) if c
            )
            return
        chosen.append(False)
        yield from rec(idx + 1, chosen)
        chosen.pop()
        if all(chosen[j] for j in below[idx]):
            chosen.append(True)
            yield from rec(idx + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def borders(x: Iterable[int], j: int) -> tuple[frozenset[int], frozenset[int]]:
    """The j smallest and the j largest elements of *x*."""
    xs = sorted(x)
    if not (1 <= j <= len(xs)):
        raise ValidationError("border width out of range")
    return frozenset(xs[:j]), frozenset(xs[-j:])


def fi_condition(f: SetFamily, g: SetFamily, t: int) -> bool:
    """Border test for t-farness against an ideal F.

    True iff for every F-member X and G-member Y, the t+1 smallest elements
    of Y are not componentwise below the t+1 largest elements of X.
    """
    if t + 1 > f.a:
        raise ValidationError("need t + 1 <= a")
    for x in f.members:
        _, right = borders(x, t + 1)
        for y in g.members:
            left, _ = borders(y, t + 1)
            if leftof(left, right):
                return False
    return True


def maximal_fi_family(f: SetFamily, t: int) -> SetFamily:
    """The largest G with :func:`fi_condition` against *f* (monotone maximum)."""
    keep = []
    for y in all_sets(f.n, f.a):
        left, _ = borders(y, t + 1)
        if all(not leftof(left, borders(x, t + 1)[1]) for x in f.members):
            keep.append(y)
    return SetFamily(f.n, f.a, frozenset(keep))


# ---------------------------------------------------------------------------
# closed-form bounds and exact oracles


def t_far_product_bound(n: int, a: int, t: int) -> float:
    """Closed-form ceiling on |F|*|G| over t-far pairs of a-sets in 1..n."""
    if not (0 <= t < a < n):
        raise ValidationError("need 0 <= t < a < n")
    return (
        32.0
        * a
        * (n - a)
        * math.exp(-((a - t - 1) ** 2) / (20.0 * a))
        * math.comb(n, a) ** 2
    )


def t_far_product_bound_enclosure(n: int, a: int, t: int) -> tuple[Fraction, Fraction]:
    if not (0 <= t < a < n):
        raise ValidationError("need 0 <= t < a < n")
    factor = 32 * a * (n - a) * math.comb(n, a) ** 2
    lo, hi = exp_enclosure(Fraction(-((a - t - 1) ** 2), 20 * a))
    return (factor * lo, factor * hi)


def compatible_family(f_members: Sequence[frozenset[int]], universe, t: int):
    return [y for y in universe if all(len(x & y) <= t for x in f_members)]


def max_product_bruteforce(n: int, a: int, t: int, caps: Caps | None = None) -> int:
    """Exact max of |F|*|G| over t-far pairs, searching F with G forced maximal.

    Only F is enumerated: the best partner for a fixed F is the full set of
    t-compatible a-sets.  By symmetry a nonempty optimal F may be assumed to
    contain the lexicographically first a-set.
    """
    caps = caps or DEFAULT_CAPS
    if not (0 <= t < a < n):
        raise ValidationError("need 0 <= t < a < n")
    universe = all_sets(n, a)
    m = len(universe)
    require(m <= caps.family_sets, f"brute force needs C(n,a) <= {caps.family_sets}, got {m}")
    compat = []
    for x in universe:
        mask = 0
        for idx, y in enumerate(universe):
            if len(x & y) <= t:
                mask |= 1 << idx
        compat.append(mask)
    full = (1 << m) - 1
    best = 0

    def rec(idx: int, size: int, gmask: int) -> None:
        nonlocal best
        gcount = gmask.bit_count()
        if (size + (m - idx)) * gcount <= best:
            return
        if size * gcount > best:
            best = size * gcount
        if idx == m or gcount == 0:
            return
        rec(idx + 1, size + 1, gmask & compat[idx])
        rec(idx + 1, size, gmask)

    # fix universe[0] in F (relabeling symmetry), then allow the empty F too
    rec(1, 1, compat[0])
    return best


def mu_prob(fam: SetFamily, p):
    """Product-measure weight of the family: |F| * p^a * (1-p)^(n-a).

    Exact when *p* is a :class:`fractions.Fraction`, float otherwise.
    """
    if not (0 <= p <= 1):
        raise ValidationError("p must be a probability")
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    return len(fam) * (p**fam.a) * ((one - p) ** (fam.n - fam.a))


def far_pair_probability_bound(n: int, a: int, t: int) -> float:
    """Closed-form ceiling on the product measure of a border-condition pair."""
    if not (0 <= t < a):
        raise ValidationError("need 0 <= t < a")
    return 4.0 * n * math.exp(-((a - t - 1) ** 2) / (20.0 * a))


def far_pair_probability_bound_enclosure(
    n: int, a: int, t: int
) -> tuple[Fraction, Fraction]:
    if not (0 <= t < a):
        raise ValidationError("need 0 <= t < a")
    lo, hi = exp_enclosure(Fraction(-((a - t - 1) ** 2), 20 * a))
    return (4 * n * lo, 4 * n * hi)


def kl_divergence(x: float, y: float) -> float:
    """KL divergence of Bernoulli(x) from Bernoulli(y); 0*ln(0) reads as 0."""
    if not (0 < y < 1):
        raise ValidationError("reference probability must lie strictly inside (0,1)")
    if not (0 <= x <= 1):
        raise ValidationError("x must be a probability")
    total = 0.0
    if x > 0:
        total += x * math.log(x / y)
    if x < 1:
        total += (1 - x) * math.log((1 - x) / (1 - y))
    return total


def kl_quadratic_lower_bound(x: float, y: float) -> float:
    """The (x-y)^2 / (2(x+y)) lower bound on the Bernoulli KL divergence."""
    if x == y == 0:
        return 0.0
    return (x - y) ** 2 / (2 * (x + y))


def kl_with_lower_bound(x: float, y: float) -> tuple[float, float]:
    return (kl_divergence(x, y), kl_quadratic_lower_bound(x, y))


def chernoff_two_sided(l: int, p, eps) -> tuple[float, Fraction | float]:
    """Two-sided tail bound and the exact binomial tail it dominates.

    Returns ``(2 * exp(-eps^2 l / (4p + 2eps)), P[sum outside [(p-eps)l, (p+eps)l]])``.
    The exact tail is a Fraction when *p* and *eps* are given as Fractions.
    """
    if l < 1:
        raise ValidationError("need at least one trial")
    if not (0 <= p <= 1) or eps < 0:
        raise ValidationError("need a probability p and eps >= 0")
    bound = 2.0 * math.exp(-(float(eps) ** 2) * l / (4 * float(p) + 2 * float(eps)))
    exact_rational = isinstance(p, Fraction) and isinstance(eps, Fraction)
    pp = p if exact_rational else Fraction(p)
    ee = eps if exact_rational else Fraction(eps)
    lo_cut, hi_cut = (pp - ee) * l, (pp + ee) * l
    tail = Fraction(0)
    for j in range(l + 1):
        if lo_cut <= j <= hi_cut:
            continue
        tail += math.comb(l, j) * pp**j * (1 - pp) ** (l - j)
    return (bound, tail if exact_rational else float(tail))


def chernoff_bound_enclosure(l: int, p: Fraction, eps: Fraction) -> tuple[Fraction, Fraction]:
    lo, hi = exp_enclosure(Fraction(-(eps**2) * l, 4 * p + 2 * eps))
    return (2 * lo, 2 * hi)


def binomial_lower_bound(n: int, a: int) -> float:
    """Entropy-style lower bound on C(n, a); never exceeds the exact value."""
    if not (0 < a < n):
        raise ValidationError("need 0 < a < n")
    root = math.sqrt(1.0 / (8.0 * n * (a / n) * ((n - a) / n)))
    return root * (n / a) ** a * (n / (n - a)) ** (n - a)


def fi_equivalence_violations(
    n: int, a: int, ts: Sequence[int] | None = None
) -> tuple[int, str | None]:
    """Exhaustively compare farness with the border condition over all ideals.

    For every ideal F of the componentwise order, every single a-set G, and
    every checked threshold t, ``are_t_far(F, {G}, t)`` must coincide with
    ``fi_condition(F, {G}, t)``.  Returns (number of checks, first violation).
    """
    ts = list(ts) if ts is not None else list(range(a))
    singles = all_sets(n, a)
    checked = 0
    for members in enumerate_ideals(n, a):
        f = SetFamily(n, a, members)
        for y in singles:
            g = SetFamily(n, a, frozenset([y]))
            for t in ts:
                checked += 1
                if are_t_far(f, g, t) != fi_condition(f, g, t):
                    return (
                        checked,
                        f"ideal={sorted(map(sorted, members))} G={sorted(y)} t={t}",
                    )
    return (checked, None)


def probability_bound_violations(n: int, a: int, t: int) -> tuple[int, str | None]:
    """Exact product-measure check against the closed-form ceiling.

    For every ideal F, the maximal border-condition partner G maximizes the
    measure product, so certifying ``mu(F) * mu(G_max) <= bound`` (with an
    exact rational lower enclosure of the bound) covers every pair satisfying
    the border condition.
    """
    p = Fraction(a, n)
    rhs_lo, _ = far_pair_probability_bound_enclosure(n, a, t)
    checked = 0
    for members in enumerate_ideals(n, a):
        f = SetFamily(n, a, members)
        g = maximal_fi_family(f, t)
        checked += 1
        lhs = mu_prob(f, p) * mu_prob(g, p)
        if lhs > rhs_lo:
            return (checked, f"ideal={sorted(map(sorted, members))} lhs={lhs}")
    return (checked, None)


def random_shift_suite(
    trials: int, n: int, a: int, max_members: int, seed: int
) -> list[str]:
    """Seeded randomized checks of the shifting laws; returns violation notes.

    Each trial draws families F, G, a shift pair i < j, and the pair's actual
    farness threshold, then checks: set and family sizes survive shifting,
    mirrored shifts preserve farness, and the compression loop terminates in
    a left-compressed family with strictly decreasing weight.
    """
    import random

    rng = random.Random(seed)
    universe = all_sets(n, a)
    violations: list[str] = []
    for trial in range(trials):
        f = SetFamily(n, a, frozenset(rng.sample(universe, rng.randint(1, max_members))))
        g = SetFamily(n, a, frozenset(rng.sample(universe, rng.randint(1, max_members))))
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        x = rng.choice(universe)
        if len(shift_set(x, i, j)) != len(x):
            violations.append(f"trial {trial}: set shift changed the size of {sorted(x)}")
        f2, g2 = shift_family(f, i, j), shift_family(g, j, i)
        if len(f2) != len(f) or len(g2) != len(g):
            violations.append(f"trial {trial}: family shift changed a size")
        t = max_cross_intersection(f, g)
        if not are_t_far(f2, g2, t):
            violations.append(f"trial {trial}: mirrored shifts broke {t}-farness")
        weight = family_weight(f)
        cf, cg = f, g
        for _step, cf, cg in compress_steps(f, g):
            new_weight = family_weight(cf)
            if new_weight >= weight:
                violations.append(f"trial {trial}: compression weight did not drop")
                break
            weight = new_weight
        if not is_left_compressed(cf):
            violations.append(f"trial {trial}: compression output not left-compressed")
        if len(cf) != len(f) or len(cg) != len(g):
            violations.append(f"trial {trial}: compression changed a family size")
        if not are_t_far(cf, cg, t):
            violations.append(f"trial {trial}: compression broke {t}-farness")
    return violations
