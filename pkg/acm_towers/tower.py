"""Tower sets, left segments and tower scheme ideals."""

import collections.abc
import itertools
import typing

import attrs
from logzero import logger

from acm_towers.errors import InputError, InvariantViolation
from acm_towers.monomial import (
    HilbertVector,
    Monomial,
    MonomialIdeal,
    PrimeSupport,
    intersect_all,
    minimize,
    prod,
    trim_zeros,
)


class BadTailLength(InputError):
    """Slice tails must leave at least one coordinate"""


class NotTowerSet(InputError):
    """A tower set was expected"""


class NotLeftSegment(InputError):
    """A left segment was expected"""


class DegreeTableTooSmall(InputError):
    """The degree table does not cover the size of the segment"""


class BadParameters(InputError):
    """Parameters out of range"""


class GenericityViolation(InputError):
    """Families of forms violate a genericity condition"""


#: A point of ``(Z+)^c``.
Point = typing.Tuple[int, ...]


def _to_points(value: typing.Iterable[typing.Iterable[int]]) -> typing.FrozenSet[Point]:
    return frozenset(tuple(int(x) for x in point) for point in value)


@attrs.frozen
class PointSet:
    """Finite subset of ``(Z+)^c``"""

    #: Dimension
    c: int
    #: The points
    points: typing.FrozenSet[Point] = attrs.field(converter=_to_points)
    #: Whether coordinates of every point are required to be pairwise distinct
    starred: bool = False

    @points.validator
    def _check_points(self, _attribute, value):
        if self.c < 1:
            raise InputError(f"dimension must be positive, got {self.c}")
        for point in value:
            if len(point) != self.c:
                raise InputError(f"point {point} does not have {self.c} coordinates")
            if any(x < 1 for x in point):
                raise InputError(f"point {point} has a non-positive coordinate")
            if self.starred and len(set(point)) != self.c:
                raise InputError(f"point {point} repeats a coordinate")

    @property
    def sorted_points(self) -> typing.List[Point]:
        return sorted(self.points)

    def projection(self, i: int) -> typing.FrozenSet[int]:
        """``π_i``, 1-based"""
        return frozenset(point[i - 1] for point in self.points)

    def is_starred(self) -> bool:
        return all(len(set(point)) == self.c for point in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> typing.Iterator[Point]:
        return iter(self.sorted_points)

    def __contains__(self, point: object) -> bool:
        return point in self.points


def point_slice(t: PointSet, tail: typing.Sequence[int], side: str = "lower") -> PointSet:
    """``T_α`` (``side="lower"``, ``α`` the last coordinates) or ``T^α`` (``side="upper"``)"""
    tail = tuple(tail)
    if not 1 <= len(tail) <= t.c - 1:
        raise BadTailLength(f"tail {tail} must have length 1..{t.c - 1}")
    width = t.c - len(tail)
    if side == "lower":
        rest = [p[:width] for p in t.points if p[width:] == tail]
    elif side == "upper":
        rest = [p[len(tail) :] for p in t.points if p[: len(tail)] == tail]
    else:
        raise InputError(f"unknown slice side {side!r}")
    return PointSet(c=width, points=rest)


def column(t: PointSet, h: int) -> typing.FrozenSet[int]:
    """``T_h`` for ``c = 2``"""
    return frozenset(a for a, b in t.points if b == h)


def row(t: PointSet, i: int) -> typing.FrozenSet[int]:
    """``T^i`` for ``c = 2``"""
    return frozenset(b for a, b in t.points if a == i)


def _lower_slices(t: PointSet, length: int) -> typing.Dict[Point, typing.Set[Point]]:
    width = t.c - length
    result: typing.Dict[Point, typing.Set[Point]] = {}
    for p in t.points:
        result.setdefault(p[width:], set()).add(p[:width])
    return result


def _strictly_less(alpha: Point, beta: Point) -> bool:
    return alpha != beta and all(a <= b for a, b in zip(alpha, beta))


def is_tower_set(t: PointSet) -> bool:
    """Whether all nonempty slices shrink along the product order of their tails"""
    for length in range(1, t.c):
        slices = _lower_slices(t, length)
        for alpha, beta in itertools.permutations(slices, 2):
            if _strictly_less(alpha, beta) and not slices[alpha] >= slices[beta]:
                logger.debug("slices at %s and %s are not nested", alpha, beta)
                return False
    return True


@attrs.frozen
class LeftSegment:
    """Downward closed finite subset of ``(Z+)^c``"""

    #: The points
    points: PointSet
    #: Maximal elements
    generators: typing.FrozenSet[Point]
    #: Coordinatewise maxima ``(m_1, ..., m_c)``
    size: Point

    @classmethod
    def from_points(cls, points: PointSet) -> "LeftSegment":
        if not is_left_segment(points):
            raise NotLeftSegment(f"{points.sorted_points} is not downward closed")
        generators = frozenset(
            p
            for p in points.points
            if not any(
                p[:k] + (p[k] + 1,) + p[k + 1 :] in points.points for k in range(points.c)
            )
        )
        if points.points:
            size = tuple(max(p[k] for p in points.points) for k in range(points.c))
        else:
            size = (0,) * points.c
        return cls(points=points, generators=generators, size=size)

    @classmethod
    def generated_by(cls, c: int, generators: typing.Iterable[Point]) -> "LeftSegment":
        points: typing.Set[Point] = set()
        for g in generators:
            points.update(itertools.product(*(range(1, x + 1) for x in g)))
        return cls.from_points(PointSet(c=c, points=points))

    def __len__(self) -> int:
        return len(self.points)


def is_left_segment(p: PointSet) -> bool:
    for point in p.points:
        for k in range(p.c):
            if point[k] > 1 and point[:k] + (point[k] - 1,) + point[k + 1 :] not in p.points:
                return False
    return True


def _as_segment(l: typing.Union[LeftSegment, PointSet]) -> LeftSegment:
    return l if isinstance(l, LeftSegment) else LeftSegment.from_points(l)


def sigma_hash(t: PointSet) -> LeftSegment:
    """``T#``, the image of ``T`` under ``σ``"""
    if not is_tower_set(t):
        raise NotTowerSet(f"{t.sorted_points} is not a tower set")
    c = t.c
    # suffixes[j] holds the tails (a_j, ..., a_c) of length c - j + 1
    suffixes = {j: {p[j - 1 :] for p in t.points} for j in range(1, c + 1)}
    image = {}
    for alpha in t.points:
        coords = [sum(1 for i in range(1, alpha[0] + 1) if (i,) + alpha[1:] in t.points)]
        for j in range(2, c + 1):
            tail = alpha[j:]
            coords.append(
                sum(1 for i in range(1, alpha[j - 1] + 1) if (i,) + tail in suffixes[j])
            )
        image[alpha] = tuple(coords)
    if len(set(image.values())) != len(image):
        raise InvariantViolation(f"σ is not injective on {t.sorted_points}")
    result = PointSet(c=c, points=image.values())
    if not is_left_segment(result):
        raise InvariantViolation(f"T# of {t.sorted_points} is not a left segment")
    return LeftSegment.from_points(result)


def h_vector_of_segment(l: typing.Union[LeftSegment, PointSet]) -> HilbertVector:
    """``H_L(i)``, the number of points with coordinate sum ``i + c``"""
    segment = _as_segment(l)
    counts: typing.Dict[int, int] = {}
    for p in segment.points.points:
        level = sum(p) - segment.points.c
        counts[level] = counts.get(level, 0) + 1
    return trim_zeros(counts.get(i, 0) for i in range(max(counts, default=-1) + 1))


def _to_degrees(value) -> typing.Tuple[typing.Tuple[int, ...], ...]:
    return tuple(tuple(int(d) for d in row) for row in value)


@attrs.frozen
class DegreeTable:
    """Degrees ``d_ij`` of the forms ``f_ij``, one row per family"""

    #: Rows of positive degrees
    degrees: typing.Tuple[typing.Tuple[int, ...], ...] = attrs.field(converter=_to_degrees)

    @degrees.validator
    def _check_degrees(self, _attribute, value):
        if any(d < 1 for row in value for d in row):
            raise InputError("degrees must be positive")

    @classmethod
    def ones(cls, size: typing.Sequence[int]) -> "DegreeTable":
        return cls(degrees=[[1] * m for m in size])

    def partial_sum(self, i: int, k: int) -> int:
        """``Σ_{j ≤ k} d_ij``, 1-based family index"""
        return sum(self.degrees[i - 1][:k])

    def covers(self, size: typing.Sequence[int]) -> bool:
        return len(self.degrees) == len(size) and all(
            len(row) >= m for row, m in zip(self.degrees, size)
        )


def scale_segment(l: typing.Union[LeftSegment, PointSet], d: DegreeTable) -> LeftSegment:
    """``L_D``, generated by the partial sums of the degrees along each generator"""
    segment = _as_segment(l)
    if not d.covers(segment.size):
        raise DegreeTableTooSmall(f"degree table does not cover size {segment.size}")
    generators = [
        tuple(d.partial_sum(i + 1, k) for i, k in enumerate(g)) for g in segment.generators
    ]
    return LeftSegment.generated_by(segment.points.c, generators)


def star_configuration(s: int, c: int) -> PointSet:
    """Strictly decreasing ``c``-tuples with entries in ``[s]``"""
    if not 1 <= c <= s:
        raise BadParameters(f"need 1 <= c <= s, got s={s}, c={c}")
    points = [tuple(reversed(combo)) for combo in itertools.combinations(range(1, s + 1), c)]
    return PointSet(c=c, points=points)


#: Family of forms: positional (value ``j`` at index ``j - 1``) or keyed by value.
Family = typing.Union[typing.Sequence[Monomial], typing.Mapping[int, Monomial]]


def family_lookup(family: Family) -> typing.Dict[int, Monomial]:
    if isinstance(family, collections.abc.Mapping):
        return dict(family)
    return {j: m for j, m in enumerate(family, start=1)}


def check_families(
    points: PointSet, families: typing.Sequence[Family]
) -> typing.List[typing.Dict[int, Monomial]]:
    """Validate the genericity conditions of a tower scheme and return the lookups"""
    if len(families) != points.c:
        raise GenericityViolation(f"expected {points.c} families, got {len(families)}")
    lookups = [family_lookup(f) for f in families]
    ns = {m.n for lookup in lookups for m in lookup.values()}
    if len(ns) > 1:
        raise GenericityViolation(f"families mix variable counts {sorted(ns)}")
    for i, lookup in enumerate(lookups, start=1):
        values = sorted(points.projection(i))
        for a in values:
            if a not in lookup:
                raise GenericityViolation(f"family {i} has no form with index {a}")
            if lookup[a].degree == 0:
                raise GenericityViolation(f"form f_{i},{a} is a unit")
        for a, b in itertools.combinations(values, 2):
            if not lookup[a].is_coprime(lookup[b]):
                raise GenericityViolation(
                    f"f_{i},{a} = {lookup[a]} and f_{i},{b} = {lookup[b]} are not coprime"
                )
    for point in points:
        forms = [lookups[k][a] for k, a in enumerate(point)]
        for (k, f), (l, g) in itertools.combinations(enumerate(forms, start=1), 2):
            if not f.is_coprime(g):
                raise GenericityViolation(
                    f"forms {f} (family {k}) and {g} (family {l}) at {point} "
                    "are not a regular sequence"
                )
    return lookups


def point_ideal(point: Point, lookups: typing.Sequence[typing.Mapping[int, Monomial]]):
    """``I_α = (f_1a_1, ..., f_ca_c)``"""
    return minimize(lookups[k][a] for k, a in enumerate(point))


def tower_scheme_ideal(t: PointSet, families: typing.Sequence[Family]) -> MonomialIdeal:
    """``I_T(F_1, ..., F_c)``, the intersection of the ``I_α`` over ``α ∈ T``"""
    if not is_tower_set(t):
        raise NotTowerSet(f"{t.sorted_points} is not a tower set")
    if not t.points:
        raise InputError("the empty tower set has no ideal")
    lookups = check_families(t, families)
    return intersect_all(point_ideal(point, lookups) for point in t)


def tower_h_vector(t: PointSet, d: DegreeTable) -> HilbertVector:
    """h-vector of a tower scheme on ``T`` with form degrees ``D``"""
    return h_vector_of_segment(scale_segment(sigma_hash(t), d))


def star_families(s: int, c: int, forms: typing.Sequence[Monomial]) -> typing.List[Family]:
    """Families of a star configuration: family ``i`` holds ``f_a`` for ``a ≤ s - i + 1``"""
    if len(forms) != s:
        raise BadParameters(f"expected {s} forms, got {len(forms)}")
    if not 1 <= c <= s:
        raise BadParameters(f"need 1 <= c <= s, got s={s}, c={c}")
    return [
        {a: forms[a - 1] for a in range(c - i + 1, s - i + 2)} for i in range(1, c + 1)
    ]


def variable_families(
    t: PointSet, offset: int = 0
) -> typing.Tuple[int, typing.List[typing.Dict[int, Monomial]]]:
    """Assign a fresh variable to every value of every projection of ``T``

    Returns the variable count and the families.
    """
    n = offset + sum(len(t.projection(i)) for i in range(1, t.c + 1))
    families = []
    next_var = offset + 1
    for i in range(1, t.c + 1):
        family = {}
        for a in sorted(t.projection(i)):
            family[a] = Monomial.variable(n, next_var)
            next_var += 1
        families.append(family)
    return n, families


@attrs.frozen
class RealizedDegrees:
    """Forms of prescribed degrees as products of distinct variables"""

    #: Number of variables
    n: int
    #: ``f_ij``, product of ``d_ij`` variables, keyed by the values of ``π_i(T)``
    families: typing.Tuple[typing.Dict[int, Monomial], ...]
    #: The variables of family ``i`` in order, positional as for ``L_D``
    linear_families: typing.Tuple[typing.Tuple[Monomial, ...], ...]


def realize_degree_table(t: PointSet, d: DegreeTable) -> RealizedDegrees:
    """Forms ``f_ia`` of degree ``d_{i,k}`` with ``k`` the rank of ``a`` in ``π_i(T)``"""
    projections = [sorted(t.projection(i)) for i in range(1, t.c + 1)]
    if not d.covers([len(p) for p in projections]):
        raise DegreeTableTooSmall("degree table does not cover the projections")
    n = sum(d.partial_sum(i, len(p)) for i, p in enumerate(projections, start=1))
    families = []
    linear_families = []
    next_var = 1
    for i, values in enumerate(projections, start=1):
        family = {}
        linear: typing.List[Monomial] = []
        for k, a in enumerate(values, start=1):
            variables = [Monomial.variable(n, next_var + h) for h in range(d.degrees[i - 1][k - 1])]
            next_var += len(variables)
            family[a] = prod(n, variables)
            linear.extend(variables)
        families.append(family)
        linear_families.append(tuple(linear))
    return RealizedDegrees(n=n, families=tuple(families), linear_families=tuple(linear_families))


def forgetful(t: PointSet, n: typing.Optional[int] = None) -> PrimeSupport:
    """``φ(T)``, forgetting the order of the coordinates of starred points"""
    if not t.is_starred():
        raise InputError("the forgetful map needs pairwise distinct coordinates")
    symbols = {x for point in t.points for x in point}
    n = max(symbols, default=0) if n is None else n
    return PrimeSupport(n=n, c=t.c, members={frozenset(point) for point in t.points})
