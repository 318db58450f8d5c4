"""Generalized tower sets in codimension two and the towerizability searches."""

import itertools
import typing

import attrs
from logzero import logger

from acm_towers import settings
from acm_towers.errors import InputError, InvariantViolation
from acm_towers.monomial import (
    Monomial,
    MonomialIdeal,
    PrimeSupport,
    height_of,
    ideal_from_support,
    intersect_all,
    minimize,
    prod,
    sum_ideals,
)
from acm_towers.tower import (
    Family,
    GenericityViolation,
    Point,
    PointSet,
    column,
    family_lookup,
    forgetful,
    is_tower_set,
    row,
)


class BadColumn(InputError):
    """The column index does not occur in the tower set"""


class SizeCapExceeded(InputError):
    """Input too large for an exhaustive search"""


class NotGTS(InputError):
    """A generalized tower set was expected"""


@attrs.frozen
class GTSDecomposition:
    """Splitting ``S = T ∪ S0`` of a starred point set in ``(Z+)^2``"""

    #: The tower part
    t: PointSet
    #: The residual part
    s0: PointSet

    def __attrs_post_init__(self):
        if self.t.c != 2 or self.s0.c != 2:
            raise InputError("generalized tower sets live in codimension 2")
        if self.t.points & self.s0.points:
            raise InputError("tower part and residual part overlap")

    @property
    def s(self) -> PointSet:
        return PointSet(c=2, points=self.t.points | self.s0.points)

    @classmethod
    def of(cls, t: typing.Iterable[Point], s0: typing.Iterable[Point]) -> "GTSDecomposition":
        return cls(t=PointSet(c=2, points=t), s0=PointSet(c=2, points=s0))


@attrs.frozen
class GtsCheck:
    """Outcome of the generalized tower set conditions"""

    #: Whether all conditions hold
    ok: bool
    #: Reason code of the first failed condition
    reason: typing.Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


ColonArg = typing.TypeVar("ColonArg", PointSet, PrimeSupport)


def colon_set(s: ColonArg, h: int) -> ColonArg:
    """``S:h``, the members avoiding the symbol ``h``"""
    if isinstance(s, PrimeSupport):
        return PrimeSupport(n=s.n, c=s.c, members=[m for m in s.members if h not in m])
    return PointSet(c=s.c, points=[p for p in s.points if h not in p], starred=s.starred)


def _boundary(t: PointSet, h: int) -> typing.FrozenSet[int]:
    own = column(t, h)
    return frozenset(
        j for j in t.projection(2) if own < column(t, j) and (h, j) not in t.points
    )


def f_boundary(t: PointSet, h: int) -> typing.FrozenSet[int]:
    """``F_T(h)``, the columns strictly containing ``T_h`` with ``(h, j) ∉ T``"""
    if t.c != 2:
        raise InputError("F_T is defined in codimension 2")
    if not is_tower_set(t):
        raise InputError(f"{t.sorted_points} is not a tower set")
    if h not in t.projection(2):
        raise BadColumn(f"column {h} does not occur in the tower set")
    result = _boundary(t, h)
    if any(j >= h for j in result):
        raise InvariantViolation(f"F_T({h}) = {sorted(result)} has members not below {h}")
    return result


def _member_sets(s: typing.Union[PrimeSupport, PointSet]) -> typing.List[typing.FrozenSet[int]]:
    if isinstance(s, PrimeSupport):
        return list(s.members)
    return [frozenset(p) for p in s.points]


def is_connected(s: typing.Union[PrimeSupport, PointSet]) -> bool:
    """Every two members meet a common member (which may be one of them)"""
    members = list(set(_member_sets(s)))
    for a, b in itertools.combinations_with_replacement(members, 2):
        if not any(a & c and b & c for c in members):
            return False
    return True


def _residual_reason(t: PointSet, s0: PointSet) -> typing.Optional[str]:
    """Conditions on ``S0`` that only depend on containments, not on the order"""
    symbols_t = t.projection(1) | t.projection(2)
    both = t.projection(1) & t.projection(2)
    for i, j in s0.points:
        if i in symbols_t:
            return "residual-row-in-tower"
        if j not in both:
            return "residual-column-outside-tower"
    for i, j in s0.points:
        for h in _boundary(t, j):
            if (i, h) not in s0.points:
                return "residual-not-closed"
    return None


def check_generalized_tower_set(d: GTSDecomposition) -> GtsCheck:
    s = d.s
    if not s.is_starred():
        return GtsCheck(False, "not-starred")
    if not d.t.points:
        return GtsCheck(False, "empty-tower")
    if not is_connected(s):
        return GtsCheck(False, "disconnected")
    if not is_tower_set(d.t):
        return GtsCheck(False, "not-tower")
    reason = _residual_reason(d.t, d.s0)
    if reason:
        return GtsCheck(False, reason)
    return GtsCheck(True)


def is_generalized_tower_set(d: GTSDecomposition) -> bool:
    return check_generalized_tower_set(d).ok


def _columns_comparable(t: PointSet) -> bool:
    columns = [column(t, h) for h in t.projection(2)]
    return all(a <= b or b <= a for a, b in itertools.combinations(columns, 2))


def _candidate_splits(s: PointSet) -> typing.Iterator[GTSDecomposition]:
    """Splittings where ``S0`` consists of whole rows of ``S``"""
    rows = sorted(s.projection(1))
    for mask in range(1 << len(rows)):
        chosen = {r for k, r in enumerate(rows) if (mask >> k) & 1}
        yield GTSDecomposition.of(
            [p for p in s.points if p[0] not in chosen], [p for p in s.points if p[0] in chosen]
        )


def _check_gts_input(s: PointSet, cap: typing.Optional[int]):
    if s.c != 2:
        raise InputError("generalized tower sets live in codimension 2")
    cap = settings.MAX_GTS_POINTS if cap is None else cap
    if len(s) > cap:
        raise SizeCapExceeded(f"{len(s)} points exceed the cap of {cap}")


def find_gts_decomposition(
    s: PointSet, cap: typing.Optional[int] = None
) -> typing.Optional[GTSDecomposition]:
    """A decomposition ``S = T ∪ S0`` with the least tower part, or ``None``"""
    _check_gts_input(s, cap)
    if not s.is_starred() or not is_connected(s):
        return None
    valid = [d for d in _candidate_splits(s) if is_generalized_tower_set(d)]
    if not valid:
        return None
    return min(valid, key=lambda d: d.t.sorted_points)


def _admits_ordering(s: PointSet) -> bool:
    """Whether some relabeling of the columns could turn ``S`` into a generalized tower set"""
    if not is_connected(s):
        return False
    for d in _candidate_splits(s):
        if d.t.points and _columns_comparable(d.t) and _residual_reason(d.t, d.s0) is None:
            return True
    return False


@attrs.frozen
class TowerizationWitness:
    """Orientation ``ω`` and permutation ``τ`` found by a towerizability search"""

    #: Each member of ``U`` with the ordered pair chosen for it
    omega: typing.Tuple[typing.Tuple[typing.FrozenSet[int], Point], ...]
    #: The permutation as sorted ``(from, to)`` pairs, identity pairs omitted
    tau: typing.Tuple[typing.Tuple[int, int], ...]
    #: ``τ(ω(U))``
    image: PointSet
    #: Decomposition of the image (generalized towerizability only)
    decomposition: typing.Optional[GTSDecomposition] = None


def _orient(member: typing.FrozenSet[int], small_first: bool) -> Point:
    lo, hi = sorted(member)
    return (lo, hi) if small_first else (hi, lo)


def _search(
    u: PrimeSupport,
    scope: str,
    prefilter: typing.Callable[[PointSet], bool],
    accept: typing.Callable[[PointSet], typing.Any],
    caps: typing.Optional[settings.SearchCaps],
) -> typing.Optional[TowerizationWitness]:
    caps = caps or settings.SearchCaps()
    if u.c != 2:
        raise InputError("towerizability is searched in codimension 2")
    if scope not in ("symbols", "columns"):
        raise InputError(f"unknown permutation scope {scope!r}")
    members = list(u.members)
    symbols = sorted(u.symbols)
    if len(symbols) > caps.search_symbols or len(members) > caps.search_members:
        raise SizeCapExceeded(
            f"{len(symbols)} symbols / {len(members)} members exceed the caps "
            f"{caps.search_symbols} / {caps.search_members}"
        )
    # bit k set: member k is oriented small-first
    for mask in range(1 << len(members)):
        omega = tuple(
            (member, _orient(member, bool((mask >> k) & 1))) for k, member in enumerate(members)
        )
        oriented = PointSet(c=2, points=[p for _, p in omega], starred=True)
        if not prefilter(oriented):
            continue
        domain = symbols if scope == "symbols" else sorted(oriented.projection(2))
        for perm in itertools.permutations(domain):
            tau = dict(zip(domain, perm))
            image = PointSet(
                c=2,
                points=[(tau.get(a, a), tau.get(b, b)) for a, b in oriented.points],
                starred=True,
            )
            result = accept(image)
            if result:
                logger.debug("found witness at orientation mask %d", mask)
                return TowerizationWitness(
                    omega=omega,
                    tau=tuple(sorted((a, b) for a, b in tau.items() if a != b)),
                    image=image,
                    decomposition=result if isinstance(result, GTSDecomposition) else None,
                )
    return None


def is_towerizable(
    u: PrimeSupport, scope: str = "symbols", caps: typing.Optional[settings.SearchCaps] = None
) -> typing.Tuple[bool, typing.Optional[TowerizationWitness]]:
    """Search ``ω`` and ``τ`` such that ``τ(ω(U))`` is a tower set

    Orientations run over bit masks in ascending order and permutations in
    lexicographic order; orientations whose columns are not pairwise
    comparable are skipped since no relabeling can fix them.
    """
    witness = _search(u, scope, _columns_comparable, is_tower_set, caps)
    return witness is not None, witness


def is_generalized_towerizable(
    u: PrimeSupport, scope: str = "columns", caps: typing.Optional[settings.SearchCaps] = None
) -> typing.Tuple[bool, typing.Optional[TowerizationWitness]]:
    """Search ``ω`` and ``τ`` such that ``τ(ω(U))`` is a generalized tower set"""
    caps = caps or settings.SearchCaps()

    def accept(image: PointSet) -> typing.Optional[GTSDecomposition]:
        return find_gts_decomposition(image, caps.gts_points)

    witness = _search(u, scope, _admits_ordering, accept, caps)
    return witness is not None, witness


def point_set_ideal(s: PointSet, n: typing.Optional[int] = None) -> MonomialIdeal:
    """``I_S := I_φ(S)``"""
    return ideal_from_support(forgetful(s, n))


def generalized_tower_scheme_ideal(
    d: GTSDecomposition, f1: Family, f2: Family
) -> MonomialIdeal:
    """``I_S(F_1, F_2)``, the intersection of ``(f_1a_1, f_2a_2)`` over ``S``"""
    check = check_generalized_tower_set(d)
    if not check:
        raise NotGTS(f"not a generalized tower set: {check.reason}")
    lookups = [family_lookup(f1), family_lookup(f2)]
    s = d.s
    for k, lookup in enumerate(lookups, start=1):
        for a in sorted(s.projection(k)):
            if a not in lookup:
                raise GenericityViolation(f"family {k} has no form with index {a}")
            if lookup[a].degree == 0:
                raise GenericityViolation(f"form f_{k},{a} is a unit")
    forms = {p: (lookups[0][p[0]], lookups[1][p[1]]) for p in s.points}
    for p, (f, g) in sorted(forms.items()):
        if not f.is_coprime(g):
            raise GenericityViolation(f"forms {f} and {g} at {p} are not coprime")
    for p, q in itertools.combinations(s.sorted_points, 2):
        if height_of(forms[p] + forms[q]) < 3:
            raise GenericityViolation(
                f"forms at {p} and {q} generate an ideal of height below 3"
            )
    return intersect_all(minimize(pair) for pair in forms.values())


def colon_decomposition(d: GTSDecomposition, h: int) -> GTSDecomposition:
    """``(T:h, S0:h)``"""
    return GTSDecomposition(t=colon_set(d.t, h), s0=colon_set(d.s0, h))


def _ambient(d: GTSDecomposition) -> int:
    return max(x for p in d.s.points for x in p)


def row_split(d: GTSDecomposition, a: int) -> typing.Tuple[MonomialIdeal, MonomialIdeal]:
    """``I_{S:a}`` and ``(x_a, ∏_{j ∈ S^a} x_j)``, whose intersection is ``I_S``"""
    if a not in d.s0.projection(1):
        raise InputError(f"{a} is not a row of the residual part")
    n = _ambient(d)
    rest = point_set_ideal(colon_set(d.s, a), n)
    others = prod(n, (Monomial.variable(n, j) for j in sorted(row(d.s, a))))
    return rest, minimize([Monomial.variable(n, a), others])


def complete_intersection_row(d: GTSDecomposition, a: int) -> int:
    """Least ``h ∈ S^a`` with ``I_{S:a} + (x_h)`` a height 2 complete intersection"""
    if a not in d.s0.projection(1):
        raise InputError(f"{a} is not a row of the residual part")
    n = _ambient(d)
    rest = point_set_ideal(colon_set(d.s, a), n)
    for h in sorted(row(d.s, a)):
        x_h = Monomial.variable(n, h)
        total = sum_ideals(rest, minimize([x_h]))
        gens = total.generators
        if len(gens) == 2 and x_h in gens and gens[0].is_coprime(gens[1]):
            return h
    raise InvariantViolation(f"no row symbol of {a} gives a complete intersection")
