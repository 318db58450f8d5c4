"""Hilbert-Burch matrices of standard form and the generalized tower set they define.

A standard form matrix has ``r + 1`` rows (0..r) and ``r`` columns (1..r).
Column ``j`` carries ``D_j`` at row ``j`` and ``M_j`` at row ``σ(j) < j``.
Deleting row ``i`` leaves a minor equal, up to sign, to
``f_i = ∏_{j ∈ m(i)} M_j · ∏_{j ∉ m(i)} D_j`` where ``m(i)`` is the orbit
``{i, σ(i), σ²(i), ..., 1}``.
"""

import collections
import itertools
import typing

import attrs
from logzero import logger
import networkx as nx
from networkx.utils import UnionFind
from sympy.combinatorics import Permutation

from acm_towers import settings
from acm_towers.errors import InputError, InvariantViolation
from acm_towers.gentower import (
    GTSDecomposition,
    SizeCapExceeded,
    check_generalized_tower_set,
    generalized_tower_scheme_ideal,
    is_connected,
    is_generalized_towerizable,
)
from acm_towers.monomial import (
    Monomial,
    MonomialIdeal,
    NotSquarefree,
    PrimeSupport,
    height_and_equidimensional,
    height_of,
    minimal_primes,
    minimize,
    prod,
)
from acm_towers.resolution import projective_dimension
from acm_towers.tower import Family, PointSet, check_families, column, is_tower_set


class NotStandardForm(InputError):
    """Matrix shape violates the standard form"""


class NotACM(InputError):
    """The ideal is not arithmetically Cohen-Macaulay"""


class NotHeightTwo(InputError):
    """The ideal does not have height two"""


class StandardFormVerificationFailed(InvariantViolation):
    """The extracted matrix does not regenerate the ideal"""


class InternalInvariantViolation(InvariantViolation):
    """A structural property of standard form matrices failed"""


@attrs.frozen
class StandardFormMatrix:
    """Hilbert-Burch matrix of standard form"""

    #: Number of variables
    n: int
    #: ``D_1, ..., D_r``
    diagonal: typing.Tuple[Monomial, ...] = attrs.field(converter=tuple)
    #: ``(σ(j), M_j)`` for ``j = 1, ..., r``
    off_diagonal: typing.Tuple[typing.Tuple[int, Monomial], ...] = attrs.field(
        converter=lambda xs: tuple((int(row), mono) for row, mono in xs)
    )

    def __attrs_post_init__(self):
        r = len(self.diagonal)
        if r < 1 or len(self.off_diagonal) != r:
            raise NotStandardForm("need r >= 1 diagonal and r off-diagonal entries")
        for entry in itertools.chain(self.diagonal, (m for _, m in self.off_diagonal)):
            if entry.n != self.n:
                raise NotStandardForm(f"entry {entry} does not have {self.n} variables")
        sigma = [row for row, _ in self.off_diagonal]
        if sigma[0] != 0:
            raise NotStandardForm("column 1 must carry its off-diagonal entry in row 0")
        for j in range(2, r + 1):
            if not 1 <= sigma[j - 1] < j:
                raise NotStandardForm(f"σ({j}) = {sigma[j - 1]} must lie in 1..{j - 1}")
            if j > 2 and sigma[j - 1] < sigma[j - 2]:
                raise NotStandardForm(f"σ decreases at column {j}")

    @property
    def r(self) -> int:
        return len(self.diagonal)

    def sigma(self, j: int) -> int:
        return self.off_diagonal[j - 1][0]

    def d(self, j: int) -> Monomial:
        return self.diagonal[j - 1]

    def m_entry(self, j: int) -> Monomial:
        return self.off_diagonal[j - 1][1]

    def orbit(self, j: int) -> typing.FrozenSet[int]:
        """``m(j)``; empty for ``j = 0``"""
        result = set()
        while j > 0:
            result.add(j)
            j = self.sigma(j)
        return frozenset(result)

    def entry(self, row: int, col: int) -> typing.Optional[Monomial]:
        if row == col:
            return self.d(col)
        if row == self.sigma(col):
            return self.m_entry(col)
        return None

    def rows(self) -> typing.List[typing.List[typing.Optional[Monomial]]]:
        return [[self.entry(i, j) for j in range(1, self.r + 1)] for i in range(self.r + 1)]


def is_bidiagonal(m: StandardFormMatrix) -> bool:
    return all(m.sigma(j) == j - 1 for j in range(1, m.r + 1))


def generators_from_matrix(m: StandardFormMatrix) -> typing.Tuple[Monomial, ...]:
    """``f_0, ..., f_r`` by the closed product formula"""
    result = []
    for i in range(m.r + 1):
        orbit = m.orbit(i)
        factors = [m.m_entry(j) if j in orbit else m.d(j) for j in range(1, m.r + 1)]
        result.append(prod(m.n, factors))
    return tuple(result)


def minor_generators(m: StandardFormMatrix) -> typing.Tuple[Monomial, ...]:
    """Row-deleted maximal minors by the Leibniz expansion over nonzero entries, signs dropped"""
    result = []
    for deleted in range(m.r + 1):
        kept_rows = [i for i in range(m.r + 1) if i != deleted]
        position = {row: pos for pos, row in enumerate(kept_rows)}
        choices = [
            [
                (row, mono)
                for row, mono in ((j, m.d(j)), (m.sigma(j), m.m_entry(j)))
                if row in position
            ]
            for j in range(1, m.r + 1)
        ]
        terms: typing.Dict[Monomial, int] = collections.defaultdict(int)
        for selection in itertools.product(*choices):
            rows = [row for row, _ in selection]
            if len(set(rows)) != len(rows):
                continue
            sign = Permutation([position[row] for row in rows]).signature()
            terms[prod(m.n, (mono for _, mono in selection))] += sign
        nonzero = {mono: coeff for mono, coeff in terms.items() if coeff}
        if len(nonzero) != 1 or abs(next(iter(nonzero.values()))) != 1:
            raise InternalInvariantViolation(
                f"minor without row {deleted} is not a signed monomial: {nonzero}"
            )
        result.append(next(iter(nonzero)))
    return tuple(result)


def ideal_of_matrix(m: StandardFormMatrix) -> MonomialIdeal:
    """``I(M)``, generated by the maximal minors"""
    return minimize(generators_from_matrix(m), n=m.n)


def _check_height_two(i: MonomialIdeal) -> typing.Tuple[int, bool]:
    if not i.is_squarefree:
        raise NotSquarefree(f"ideal {i} is not squarefree")
    height, equidimensional = height_and_equidimensional(i)
    if height != 2:
        raise NotHeightTwo(f"ideal has height {height}")
    return height, equidimensional


def standard_form_from_ideal(
    i: MonomialIdeal, check_acm: bool = True, threads: int = 1
) -> StandardFormMatrix:
    """Extract a standard form Hilbert-Burch matrix from the syzygy tree of ``I``

    The tree is a minimum spanning tree of the generator pairs weighted by
    the degree and lexicographic position of their lcm.  The row of the
    lexicographically least leaf is row 0 and the columns are numbered
    breadth first from its neighbour.  Set ``check_acm=False`` if the caller
    knows that ``I`` is aCM; the final verification stays in place.
    """
    _, equidimensional = _check_height_two(i)
    if check_acm and not (equidimensional and projective_dimension(i, threads) == 2):
        raise NotACM(f"ideal {i} is not aCM")
    gens = i.generators
    g = len(gens)

    logger.debug("Building syzygy tree on %d generators", g)
    edges = sorted(
        itertools.combinations(range(g), 2),
        key=lambda e: (gens[e[0]].lcm(gens[e[1]]).sort_key, e),
    )
    components = UnionFind(range(g))
    tree = nx.Graph()
    tree.add_nodes_from(range(g))
    for a, b in edges:
        if components[a] != components[b]:
            components.union(a, b)
            tree.add_edge(a, b)

    leaves = [v for v in tree.nodes if tree.degree(v) == 1]
    root = min(leaves, key=lambda v: gens[v].exponents)
    order = [root]
    parent_row = {}
    for parent, child in nx.bfs_edges(
        tree, root, sort_neighbors=lambda vs: sorted(vs, key=lambda v: gens[v].sort_key)
    ):
        parent_row[child] = order.index(parent)
        order.append(child)

    diagonal = []
    off_diagonal = []
    for j in range(1, g):
        f_j = gens[order[j]]
        row = parent_row[order[j]]
        f_parent = gens[order[row]]
        lcm = f_j.lcm(f_parent)
        diagonal.append(lcm / f_j)
        off_diagonal.append((row, lcm / f_parent))
    try:
        matrix = StandardFormMatrix(n=i.n, diagonal=diagonal, off_diagonal=off_diagonal)
    except NotStandardForm as e:
        raise StandardFormVerificationFailed(f"syzygy tree has no standard form: {e}") from e
    regenerated = generators_from_matrix(matrix)
    if sorted(regenerated, key=lambda x: x.sort_key) != list(gens):
        raise StandardFormVerificationFailed(
            f"matrix minors {[str(f) for f in regenerated]} differ from the generators of {i}"
        )
    return matrix


@attrs.frozen
class USets:
    """``U'_M``, ``U''_M`` and their union, supports over ``[2r]``"""

    #: Pairs ``{i, j}`` with ``i < j ≤ r`` and ``i ∉ m(j)``
    u_prime: PrimeSupport
    #: Pairs ``{i, j}`` with ``i ≤ r < j`` and ``j - r ∈ m(i)``
    u_double: PrimeSupport
    #: The union
    u_all: PrimeSupport


def u_sets(m: StandardFormMatrix) -> USets:
    r = m.r
    u_prime = [
        {i, j} for j in range(1, r + 1) for i in range(1, j) if i not in m.orbit(j)
    ]
    u_double = [
        {i, j} for i in range(1, r + 1) for j in range(r + 1, 2 * r + 1) if j - r in m.orbit(i)
    ]
    result = USets(
        u_prime=PrimeSupport(n=2 * r, c=2, members=u_prime),
        u_double=PrimeSupport(n=2 * r, c=2, members=u_double),
        u_all=PrimeSupport(n=2 * r, c=2, members=u_prime + u_double),
    )
    for i in range(1, r + 1):
        orbit = m.orbit(i)
        for member in result.u_prime.members:
            if member <= orbit:
                raise InternalInvariantViolation(f"{sorted(member)} lies inside m({i})")
        for member in result.u_double.members:
            u, v = sorted(member)
            if u in orbit and v - r not in orbit:
                raise InternalInvariantViolation(f"{(u, v)} breaks the orbit dichotomy at {i}")
    if not is_connected(result.u_all):
        raise InternalInvariantViolation("U_M is not connected")
    return result


@attrs.frozen
class MuStep:
    """One level of the ``μ`` recursion for one column"""

    #: Level ``h``
    level: int
    #: ``μ_i^(h)``
    mu: int
    #: ``r_i^(h)`` (``r`` itself at level 0)
    bound: int
    #: ``V_i^(h)`` (empty at level 0)
    pairs: typing.Tuple[typing.Tuple[int, int], ...]


def mu_table(m: StandardFormMatrix) -> typing.List[typing.Dict[int, MuStep]]:
    """All levels of the ``μ`` recursion for all columns, up to the first all-zero level"""
    r = m.r
    u_prime = [tuple(sorted(member)) for member in u_sets(m).u_prime.members]
    last = m.orbit(r)
    levels = [
        {
            i: MuStep(level=0, mu=max(m.orbit(i) & last), bound=r, pairs=())
            for i in range(1, r + 1)
        }
    ]
    while any(step.mu for step in levels[-1].values()):
        if len(levels) > r + 1:
            raise InternalInvariantViolation("μ recursion does not terminate")
        previous = levels[-1]
        level = len(levels)
        current = {}
        for i in range(1, r + 1):
            pool = u_prime if level == 1 else previous[i].pairs
            target = previous[i].mu
            pairs = tuple(
                (u, v) for u, v in pool if previous[u].mu == previous[v].mu == target
            )
            bound = max((x for pair in pairs for x in pair), default=0)
            mu = max(m.orbit(i) & m.orbit(bound)) if bound else 0
            current[i] = MuStep(level=level, mu=mu, bound=bound, pairs=pairs)
        levels.append(current)
    logger.debug("μ recursion settled after %d levels", len(levels))
    return levels


def mu_sequence(m: StandardFormMatrix, i: int) -> typing.Iterator[MuStep]:
    """``μ_i^(0), μ_i^(1), ...`` up to and including the first zero"""
    if not 1 <= i <= m.r:
        raise InputError(f"column {i} outside 1..{m.r}")
    for level in mu_table(m):
        step = level[i]
        yield step
        if step.mu == 0:
            return


def first_difference(
    levels: typing.Sequence[typing.Mapping[int, MuStep]], i: int, j: int
) -> int:
    """Least ``t`` with ``μ_i^(t) ≠ μ_j^(t)``"""
    for t, level in enumerate(levels):
        if level[i].mu != level[j].mu:
            return t
    raise InternalInvariantViolation(f"μ sequences of {i} and {j} never differ")


@attrs.frozen
class Orientation:
    """Outcome of orienting ``U_M`` and sorting its columns"""

    #: Oriented pairs before relabeling, tower part ``ω(𝒯)``
    tower_bar: PointSet
    #: Oriented pairs before relabeling, residual part ``ω(𝒮_0)``
    residual_bar: PointSet
    #: Each member of ``U_M`` with its oriented pair
    omega: typing.Tuple[typing.Tuple[typing.FrozenSet[int], typing.Tuple[int, int]], ...]
    #: The column relabeling as ``(from, to)`` pairs on ``[r]``
    tau: typing.Tuple[typing.Tuple[int, int], ...]
    #: The relabeled generalized tower set
    decomposition: GTSDecomposition

    @property
    def tau_map(self) -> typing.Dict[int, int]:
        return dict(self.tau)


def orient_and_sort(m: StandardFormMatrix) -> Orientation:
    """Orient ``U_M`` by the ``μ`` sequences and sort the columns into a generalized tower set"""
    r = m.r
    sets = u_sets(m)
    last = m.orbit(r)
    levels = mu_table(m)
    tower_members = list(sets.u_prime.members) + [
        member for member in sets.u_double.members if max(member) - r in last
    ]
    residual_members = [member for member in sets.u_double.members if max(member) - r not in last]

    def orient(member: typing.FrozenSet[int]) -> typing.Tuple[int, int]:
        i, j = sorted(member)
        if j > r:
            return (j, i)
        t = first_difference(levels, i, j)
        return (i, j) if levels[t][i].mu < levels[t][j].mu else (j, i)

    omega = tuple((member, orient(member)) for member in sets.u_all.members)
    oriented = dict(omega)
    tower_bar = PointSet(c=2, points=[oriented[x] for x in tower_members], starred=True)
    residual_bar = PointSet(c=2, points=[oriented[x] for x in residual_members], starred=True)

    mu = levels[0]
    for i, j in itertools.permutations(range(1, r + 1), 2):
        if mu[i].mu <= mu[j].mu:
            for h in range(r + 1, 2 * r + 1):
                if (h, i) in tower_bar and (h, j) not in tower_bar:
                    raise InternalInvariantViolation(
                        f"({h}, {i}) is in the oriented tower but ({h}, {j}) is not"
                    )

    slices = {i: column(tower_bar, i) for i in range(1, r + 1)}
    for i, j in itertools.combinations(range(1, r + 1), 2):
        if not (slices[i] <= slices[j] or slices[j] <= slices[i]):
            raise InternalInvariantViolation(
                f"columns {i} and {j} of the oriented tower are not comparable"
            )
    ordered = sorted(range(1, r + 1), key=lambda i: (-len(slices[i]), i))
    tau = {old: new for new, old in enumerate(ordered, start=1)}

    def relabel(point: typing.Tuple[int, int]) -> typing.Tuple[int, int]:
        return (tau.get(point[0], point[0]), tau.get(point[1], point[1]))

    decomposition = GTSDecomposition.of(
        [relabel(p) for p in tower_bar.points], [relabel(p) for p in residual_bar.points]
    )
    check = check_generalized_tower_set(decomposition)
    if not check:
        raise InternalInvariantViolation(f"sorted set is no generalized tower set: {check.reason}")
    return Orientation(
        tower_bar=tower_bar,
        residual_bar=residual_bar,
        omega=omega,
        tau=tuple(sorted(tau.items())),
        decomposition=decomposition,
    )


def families_from_matrix(
    m: StandardFormMatrix, tau: typing.Mapping[int, int]
) -> typing.Tuple[typing.Tuple[Monomial, ...], typing.Tuple[Monomial, ...]]:
    """``F_1`` (indices ``1..2r``) and ``F_2`` (indices ``1..r``) of the generalized tower scheme"""
    r = m.r
    inverse = {new: old for old, new in tau.items()}
    if sorted(inverse) != list(range(1, r + 1)) or sorted(tau) != list(range(1, r + 1)):
        raise InputError(f"τ must permute 1..{r}")
    f2 = tuple(m.d(inverse[j]) for j in range(1, r + 1))
    f1 = f2 + tuple(m.m_entry(j) for j in range(1, r + 1))

    forms = {k: m.d(k) for k in range(1, r + 1)}
    forms.update({r + k: m.m_entry(k) for k in range(1, r + 1)})
    for a, b in itertools.combinations(u_sets(m).u_all.members, 2):
        if height_of(forms[k] for k in a | b) < 3:
            raise InternalInvariantViolation(
                f"entries at {sorted(a)} and {sorted(b)} generate an ideal of height below 3"
            )
    return f1, f2


@attrs.frozen
class CharacterizationReport:
    """Every intermediate object of the aCM characterization of one ideal"""

    #: The input ideal
    ideal: MonomialIdeal
    #: Height of the ideal
    height: int
    #: Whether all minimal primes have the same height
    equidimensional: bool
    #: Projective dimension of ``R/I``
    pd: int
    #: Whether ``R/I`` is Cohen-Macaulay
    acm: bool
    #: Standard form matrix (aCM case)
    matrix: typing.Optional[StandardFormMatrix] = None
    #: ``U_M`` (aCM case)
    u_sets: typing.Optional[USets] = None
    #: Orientation and relabeling (aCM case)
    orientation: typing.Optional[Orientation] = None
    #: ``F_1`` and ``F_2`` (aCM case)
    families: typing.Optional[typing.Tuple[typing.Tuple[Monomial, ...], ...]] = None
    #: Generalized tower scheme ideal rebuilt from the families (aCM case)
    rebuilt: typing.Optional[MonomialIdeal] = None
    #: Outcome of the generalized towerizability search (non-aCM case, ``None`` if skipped)
    generalized_towerizable: typing.Optional[bool] = None
    #: Explanation for skipped or trivial steps
    note: typing.Optional[str] = None


def verify_characterization(
    i: MonomialIdeal, caps: typing.Optional[settings.SearchCaps] = None, threads: int = 1
) -> CharacterizationReport:
    """Check that ``I`` is aCM exactly when it defines a generalized tower scheme"""
    height, equidimensional = _check_height_two(i)
    pd = projective_dimension(i, threads)
    acm = equidimensional and pd == height
    logger.debug("ideal %s: height %d, pd %d, aCM %s", i, height, pd, acm)
    if acm:
        matrix = standard_form_from_ideal(i, check_acm=False)
        sets = u_sets(matrix)
        orientation = orient_and_sort(matrix)
        f1, f2 = families_from_matrix(matrix, orientation.tau_map)
        rebuilt = generalized_tower_scheme_ideal(orientation.decomposition, f1, f2)
        if rebuilt != i:
            raise InvariantViolation(f"generalized tower scheme {rebuilt} differs from {i}")
        return CharacterizationReport(
            ideal=i,
            height=height,
            equidimensional=equidimensional,
            pd=pd,
            acm=True,
            matrix=matrix,
            u_sets=sets,
            orientation=orientation,
            families=(f1, f2),
            rebuilt=rebuilt,
        )
    if not equidimensional:
        return CharacterizationReport(
            ideal=i,
            height=height,
            equidimensional=False,
            pd=pd,
            acm=False,
            generalized_towerizable=False,
            note="not equidimensional, so no generalized tower scheme",
        )
    support = PrimeSupport(n=i.n, c=2, members=minimal_primes(i))
    try:
        found, witness = is_generalized_towerizable(support, caps=caps)
    except SizeCapExceeded as e:
        return CharacterizationReport(
            ideal=i,
            height=height,
            equidimensional=True,
            pd=pd,
            acm=False,
            note=f"search skipped: {e}",
        )
    if found:
        raise InvariantViolation(f"non-aCM ideal {i} has a generalized tower set support")
    return CharacterizationReport(
        ideal=i,
        height=height,
        equidimensional=True,
        pd=pd,
        acm=False,
        generalized_towerizable=False,
    )


def tower_standard_form(t: PointSet, f1: Family, f2: Family) -> StandardFormMatrix:
    """Bidiagonal standard form of a codimension two tower scheme

    With the columns ``b_1 < ... < b_s`` of ``T`` the ideal is generated by
    ``g_1, F_1 g_2, ..., F_1⋯F_p`` where ``g_k`` multiplies ``f_1a`` over the
    ``k``-th distinct slice and ``F_k`` multiplies the ``f_2b`` sharing it.
    """
    if t.c != 2 or not t.points:
        raise InputError("need a nonempty tower set in codimension 2")
    if not is_tower_set(t):
        raise InputError(f"{t.sorted_points} is not a tower set")
    lookup1, lookup2 = check_families(t, [f1, f2])
    n = next(iter(lookup1.values())).n
    groups: typing.List[typing.Tuple[typing.FrozenSet[int], typing.List[int]]] = []
    for b in sorted(t.projection(2)):
        slice_b = column(t, b)
        if groups and groups[-1][0] == slice_b:
            groups[-1][1].append(b)
        else:
            groups.append((slice_b, [b]))
    slice_products = [prod(n, (lookup1[a] for a in sorted(s))) for s, _ in groups]
    slice_products.append(Monomial.one(n))
    diagonal = [slice_products[k] / slice_products[k + 1] for k in range(len(groups))]
    off_diagonal = [
        (k, prod(n, (lookup2[b] for b in bs))) for k, (_, bs) in enumerate(groups)
    ]
    return StandardFormMatrix(n=n, diagonal=diagonal, off_diagonal=off_diagonal)


def dehomogenize(m: StandardFormMatrix, h: int) -> StandardFormMatrix:
    """Substitute ``x_h = 1`` in every entry"""
    if not 1 <= h <= m.n:
        raise InputError(f"variable index {h} outside 1..{m.n}")

    def drop(mono: Monomial) -> Monomial:
        return Monomial(0 if k == h - 1 else e for k, e in enumerate(mono.exponents))

    return StandardFormMatrix(
        n=m.n,
        diagonal=[drop(x) for x in m.diagonal],
        off_diagonal=[(row, drop(x)) for row, x in m.off_diagonal],
    )


__all__ = [
    "CharacterizationReport",
    "InternalInvariantViolation",
    "MuStep",
    "NotACM",
    "NotHeightTwo",
    "NotStandardForm",
    "Orientation",
    "StandardFormMatrix",
    "StandardFormVerificationFailed",
    "USets",
    "dehomogenize",
    "families_from_matrix",
    "first_difference",
    "generators_from_matrix",
    "ideal_of_matrix",
    "is_bidiagonal",
    "minor_generators",
    "mu_sequence",
    "mu_table",
    "orient_and_sort",
    "standard_form_from_ideal",
    "tower_standard_form",
    "u_sets",
    "verify_characterization",
]
