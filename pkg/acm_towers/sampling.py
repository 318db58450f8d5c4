"""Seeded random instances for the property suites.

All generators take a ``random.Random`` so that a seed reproduces every
instance.
"""

import math
import random
import typing

from acm_towers.errors import InputError
from acm_towers.gentower import (
    GTSDecomposition,
    check_generalized_tower_set,
    f_boundary,
)
from acm_towers.hilbert_burch import StandardFormMatrix
from acm_towers.monomial import Monomial, MonomialIdeal, PrimeSupport, minimize
from acm_towers.tower import LeftSegment, Point, PointSet, is_tower_set

#: Number of attempts before a generator gives up.
MAX_ATTEMPTS = 1000


def _random_subset(rng: random.Random, values: typing.Sequence, keep: float = 0.7) -> list:
    return [v for v in values if rng.random() < keep]


def _tower_points(rng: random.Random, c: int, max_coord: int) -> typing.Set[Point]:
    """Nested chain of ``(c - 1)``-dimensional towers along the last coordinate"""
    if c == 1:
        size = rng.randint(1, max_coord)
        return {(a,) for a in rng.sample(range(1, max_coord + 1), size)}
    lasts = sorted(rng.sample(range(1, max_coord + 1), rng.randint(1, max_coord)))
    slices = [_tower_points(rng, c - 1, max_coord)]
    for _ in lasts[1:]:
        previous = sorted(slices[-1])
        for _ in range(20):
            candidate = set(_random_subset(rng, previous))
            if candidate and is_tower_set(PointSet(c=c - 1, points=candidate)):
                break
        else:
            candidate = {previous[0]}
        slices.append(candidate)
    return {p + (last,) for last, points in zip(lasts, slices) for p in points}


def _starred(points: typing.Set[Point]) -> typing.Set[Point]:
    """Drop from column ``b_k`` the rows equal to any of ``b_1, ..., b_k``"""
    lasts = sorted({b for _, b in points})
    result = set()
    for k, b in enumerate(lasts):
        result.update((a, b) for a, bb in points if bb == b and a not in lasts[: k + 1])
    return result


def random_tower_set(
    rng: random.Random,
    c: int = 2,
    max_coord: int = 6,
    max_points: int = 12,
    starred: bool = False,
) -> PointSet:
    """A random nonempty tower set in ``(Z+)^c`` with coordinates up to ``max_coord``"""
    if c < 1 or max_coord < 1 or max_points < 1:
        raise InputError("need positive dimension, coordinate bound and size")
    if starred and c != 2:
        raise InputError("starred random towers are generated in codimension 2")
    for _ in range(MAX_ATTEMPTS):
        points = _tower_points(rng, c, max_coord)
        if starred:
            points = _starred(points)
        if points and len(points) <= max_points:
            result = PointSet(c=c, points=points, starred=starred)
            assert is_tower_set(result)
            return result
    raise InputError(f"no tower set with at most {max_points} points found")


def random_sub_tower(rng: random.Random, t: PointSet) -> PointSet:
    """A random nonempty tower set contained in ``t``"""
    points = t.sorted_points
    for _ in range(MAX_ATTEMPTS):
        candidate = PointSet(c=t.c, points=_random_subset(rng, points))
        if candidate.points and is_tower_set(candidate):
            return candidate
    return PointSet(c=t.c, points=[points[0]])


def random_left_segment(rng: random.Random, c: int = 2, max_coord: int = 4) -> LeftSegment:
    count = rng.randint(1, 3)
    generators = [tuple(rng.randint(1, max_coord) for _ in range(c)) for _ in range(count)]
    return LeftSegment.generated_by(c, generators)


def _closed_row(t: PointSet, columns: typing.Set[int]) -> typing.Set[int]:
    result = set(columns)
    todo = list(columns)
    while todo:
        for h in f_boundary(t, todo.pop()):
            if h not in result:
                result.add(h)
                todo.append(h)
    return result


def random_gts(
    rng: random.Random, max_coord: int = 6, max_points: int = 10, max_rows: int = 2
) -> GTSDecomposition:
    """A random generalized tower set: a starred tower plus closed fresh rows"""
    for _ in range(MAX_ATTEMPTS):
        t = random_tower_set(rng, c=2, max_coord=max_coord, max_points=max_points, starred=True)
        both = sorted(t.projection(1) & t.projection(2))
        s0: typing.Set[Point] = set()
        if both:
            fresh = max(t.projection(1) | t.projection(2)) + 1
            for i in range(fresh, fresh + rng.randint(0, max_rows)):
                chosen = set(_random_subset(rng, both, keep=0.5)) or {rng.choice(both)}
                s0.update((i, j) for j in _closed_row(t, chosen))
        if len(t) + len(s0) > max_points:
            continue
        d = GTSDecomposition(t=t, s0=PointSet(c=2, points=s0))
        if check_generalized_tower_set(d):
            return d
    raise InputError("no generalized tower set found")


def random_standard_form(
    rng: random.Random, r: int, bidiagonal: bool = False
) -> StandardFormMatrix:
    """Standard form with ``2r`` distinct variables as entries"""
    if r < 1:
        raise InputError(f"need r >= 1, got {r}")
    sigma = [0]
    for j in range(2, r + 1):
        if bidiagonal or j == 2:
            sigma.append(j - 1)
        else:
            sigma.append(rng.randint(sigma[-1], j - 1))
    n = 2 * r
    variables = [Monomial.variable(n, a) for a in rng.sample(range(1, n + 1), n)]
    return StandardFormMatrix(
        n=n, diagonal=variables[:r], off_diagonal=list(zip(sigma, variables[r:]))
    )


def random_squarefree_ideal(rng: random.Random, n: int, max_generators: int) -> MonomialIdeal:
    """Proper nonzero squarefree monomial ideal in ``n`` variables"""
    count = rng.randint(1, max_generators)
    gens = [
        Monomial.from_support(n, rng.sample(range(1, n + 1), rng.randint(1, min(n, 4))))
        for _ in range(count)
    ]
    return minimize(gens, n=n)


def random_support(rng: random.Random, n: int, c: int, size: int) -> PrimeSupport:
    if not 1 <= size <= math.comb(n, c):
        raise InputError(f"cannot choose {size} distinct {c}-subsets of 1..{n}")
    members: typing.Set[typing.FrozenSet[int]] = set()
    while len(members) < size:
        members.add(frozenset(rng.sample(range(1, n + 1), c)))
    return PrimeSupport(n=n, c=c, members=members)

