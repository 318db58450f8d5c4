"""Seeded property suites over random instances"""

import itertools
import math
import random
import typing

import attrs
from logzero import logger
import tqdm

from acm_towers import settings
from acm_towers.errors import AcmTowersError, InputError
from acm_towers.gentower import (
    GTSDecomposition,
    check_generalized_tower_set,
    colon_decomposition,
    colon_set,
    complete_intersection_row,
    f_boundary,
    generalized_tower_scheme_ideal,
    is_towerizable,
    point_set_ideal,
    row_split,
)
from acm_towers.hilbert_burch import (
    StandardFormMatrix,
    dehomogenize,
    families_from_matrix,
    generators_from_matrix,
    ideal_of_matrix,
    is_bidiagonal,
    minor_generators,
    orient_and_sort,
    standard_form_from_ideal,
    tower_standard_form,
    u_sets,
)
from acm_towers.monomial import (
    Monomial,
    MonomialIdeal,
    brute_hilbert_function,
    colon_monomial,
    h_vector_and_degree,
    hilbert_function_from_numerator,
    hilbert_numerator,
    ideal_from_support,
    intersect,
    iterated_difference,
    minimal_primes,
    trim_zeros,
)
from acm_towers.resolution import (
    betti_numbers,
    betti_numerator,
    is_acm,
    projective_dimension,
    taylor_betti_numbers,
)
from acm_towers.sampling import (
    random_gts,
    random_left_segment,
    random_squarefree_ideal,
    random_standard_form,
    random_sub_tower,
    random_support,
    random_tower_set,
)
from acm_towers.settings import SearchCaps
from acm_towers.tower import (
    DegreeTable,
    PointSet,
    column,
    forgetful,
    is_left_segment,
    realize_degree_table,
    row,
    scale_segment,
    sigma_hash,
    tower_h_vector,
    tower_scheme_ideal,
    variable_families,
)

#: Largest variable count for which Hilbert functions are counted by brute force.
MAX_BRUTE_VARIABLES = 8


@attrs.frozen
class SuiteContext:
    """Settings shared by all cases of a run"""

    #: Worker processes for the Betti number computations
    threads: int = 1
    #: Size caps, ``taylor_generators`` bounds the Taylor cross-check
    caps: SearchCaps = attrs.field(factory=SearchCaps)


@attrs.frozen
class SuiteResult:
    """Outcome of one property suite"""

    #: Suite name
    name: str
    #: Number of instances checked
    cases: int
    #: Number of failed instances
    failures: int
    #: Message of the first failure
    first_failure: typing.Optional[str] = None
    #: Number of cases that skipped a check because of a size cap
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return self.failures == 0


class CapSkip(Exception):
    """Raised by a case whose instance exceeds a configured cap"""


def _comparable(sets: typing.Iterable[typing.FrozenSet[int]]) -> bool:
    return all(a <= b or b <= a for a, b in itertools.combinations(list(sets), 2))


def check_colons_acm(i: MonomialIdeal, threads: int, label: str):
    """Assert that ``I : x_h`` is aCM for every variable ``x_h`` with a proper colon"""
    seen = [i]
    for h in range(1, i.n + 1):
        colon = colon_monomial(i, Monomial.variable(i.n, h))
        if colon.is_unit or colon in seen:
            continue
        seen.append(colon)
        assert is_acm(colon, threads), f"{label}: I : x_{h} = {colon} is not aCM"


def check_monomial(rng: random.Random, ctx: SuiteContext):
    c = rng.choice([2, 3])
    n = rng.randint(c + 1, 9)
    most = math.comb(n, c)
    s = random_support(rng, n, c, rng.randint(1, min(most, 8)))
    label = f"support {sorted(sorted(member) for member in s.members)}"
    i = ideal_from_support(s)
    assert set(minimal_primes(i)) == set(s.members), f"{label}: minimal primes differ"
    for a in range(1, n + 1):
        reduced = colon_set(s, a)
        colon = colon_monomial(i, Monomial.variable(n, a))
        if reduced.members:
            assert ideal_from_support(reduced) == colon, f"{label}: I_(S:{a}) != I_S : x_{a}"
        else:
            assert colon.is_unit, f"{label}: I_S : x_{a} is not the unit ideal"
    other = ideal_from_support(random_support(rng, n, c, rng.randint(1, min(most, 4))))
    third = ideal_from_support(random_support(rng, n, c, rng.randint(1, min(most, 4))))
    assert intersect(i, other) == intersect(other, i), f"{label}: ∩ is not commutative"
    assert intersect(intersect(i, other), third) == intersect(i, intersect(other, third)), (
        f"{label}: ∩ is not associative"
    )
    if n <= MAX_BRUTE_VARIABLES:
        dmax = 4
        counted = brute_hilbert_function(i, dmax)
        series = hilbert_function_from_numerator(hilbert_numerator(i), n, dmax)
        assert counted == series, f"{label}: counted {counted} != series {series}"
    if is_acm(i, ctx.threads):
        h, degree = h_vector_and_degree(i, c)
        assert all(v >= 0 for v in h), f"{label}: negative h-vector {h}"
        assert degree == len(s), f"{label}: degree {degree} != {len(s)} members"


def check_tower_acm(rng: random.Random, ctx: SuiteContext):
    c = rng.choice([2, 3])
    starred = c == 2 and rng.random() < 0.5
    t = random_tower_set(rng, c=c, max_coord=6, max_points=12, starred=starred)
    _, families = variable_families(t)
    i = tower_scheme_ideal(t, families)
    pd = projective_dimension(i, ctx.threads)
    assert pd == c, f"pd {pd} != {c} for tower {t.sorted_points}"
    assert is_acm(i, ctx.threads), f"tower {t.sorted_points} is not aCM"
    check_colons_acm(i, ctx.threads, f"tower {t.sorted_points}")
    if starred:
        _check_tower_colons(t)


def check_sigma_segment(rng: random.Random, ctx: SuiteContext):
    c = rng.choice([2, 3])
    starred = c == 2 and rng.random() < 0.5
    t = random_tower_set(rng, c=c, max_coord=6, starred=starred)
    hashed = sigma_hash(t)
    assert is_left_segment(hashed.points), f"T# of {t.sorted_points} is not a left segment"
    assert len(hashed) == len(t), f"σ is not injective on {t.sorted_points}"
    u = random_sub_tower(rng, t)
    assert sigma_hash(u).points.points <= hashed.points.points, (
        f"U# ⊄ T# for U={u.sorted_points} ⊆ T={t.sorted_points}"
    )
    if c != 2:
        return
    rows = [row(t, a) for a in t.projection(1)]
    columns = {b: column(t, b) for b in t.projection(2)}
    assert _comparable(rows), f"rows of {t.sorted_points} are not comparable"
    if starred:
        assert not any((b, a) in t for a, b in t.points), f"{t.sorted_points} has a flipped pair"
        largest_column = max(columns.values(), key=len)
        for b, col in columns.items():
            if col == largest_column:
                assert b not in t.projection(1), f"maximal column {b} occurs as a row"
        largest_row = max(rows, key=len)
        for a in t.projection(1):
            if row(t, a) == largest_row:
                assert a not in t.projection(2), f"maximal row {a} occurs as a column"
        assert len(forgetful(t)) == len(t), "forgetful map is not size preserving"


def _check_hilbert(i, c: int, expected, label: str):
    h, _ = h_vector_and_degree(i, c)
    assert h == expected, f"{label}: h-vector {h} != {expected}"
    if i.n <= MAX_BRUTE_VARIABLES:
        values = brute_hilbert_function(i, len(expected) + 1)
        diff = trim_zeros(iterated_difference(values, i.n - c))
        assert diff == expected, f"{label}: difference {diff} != {expected}"




def _tower_with_last_degrees(rng: random.Random, t: PointSet):
    """Constant degree on family 1, arbitrary degrees on family 2"""
    delta = rng.randint(1, 2)
    last = [rng.randint(1, 3) for _ in t.projection(2)]
    d = DegreeTable(degrees=[[delta] * len(t.projection(1)), last])
    realized = realize_degree_table(t, d)
    return tower_scheme_ideal(t, list(realized.families)), d


def check_hilbert_chain(rng: random.Random, ctx: SuiteContext):
    choice = rng.random()
    if choice < 1 / 3:
        t = random_tower_set(rng, c=2, max_coord=4, max_points=6)
        _, families = variable_families(t)
        i = tower_scheme_ideal(t, families)
        expected = tower_h_vector(t, DegreeTable.ones(sigma_hash(t).size))
        _check_hilbert(i, 2, expected, f"tower {t.sorted_points}")
        return
    if choice < 2 / 3:
        t = random_tower_set(rng, c=2, max_coord=3, max_points=5)
        i, d = _tower_with_last_degrees(rng, t)
        expected = tower_h_vector(t, d)
        _check_hilbert(i, 2, expected, f"tower {t.sorted_points} degrees {d.degrees}")
        return
    c = rng.choice([2, 3])
    segment = random_left_segment(rng, c=c, max_coord=3)
    d = DegreeTable(degrees=[[rng.randint(1, 2) for _ in range(m)] for m in segment.size])
    realized = realize_degree_table(segment.points, d)
    i = tower_scheme_ideal(segment.points, list(realized.families))
    scaled = scale_segment(segment, d)
    linear = tower_scheme_ideal(scaled.points, list(realized.linear_families))
    assert linear == i, f"L_D ideal differs from the product form ideal of {d.degrees}"
    expected = tower_h_vector(segment.points, d)
    _check_hilbert(i, c, expected, f"segment {segment.points.sorted_points} degrees {d.degrees}")


def check_gts_acm(rng: random.Random, ctx: SuiteContext):
    d = random_gts(rng)
    s = d.s
    n = max(x for p in s.points for x in p)
    i = point_set_ideal(s, n)
    assert is_acm(i, ctx.threads), f"generalized tower set {s.sorted_points} is not aCM"
    _, degree = h_vector_and_degree(i, 2)
    assert degree == len(s), f"degree {degree} != {len(s)} points"
    variables = {a: Monomial.variable(n, a) for a in range(1, n + 1)}
    assert generalized_tower_scheme_ideal(d, variables, variables) == i
    check_colons_acm(i, ctx.threads, f"generalized tower set {s.sorted_points}")
    _check_gts_colons(d, i)


def check_gts_roundtrip(rng: random.Random, ctx: SuiteContext):
    m = random_standard_form(rng, rng.randint(1, 7))
    assert set(minor_generators(m)) == set(generators_from_matrix(m)), "minor formula fails"
    for a, b in itertools.permutations(range(1, m.r + 1), 2):
        if a in m.orbit(b):
            assert m.orbit(a) <= m.orbit(b), f"m({a}) ⊄ m({b})"
    i = ideal_of_matrix(m)
    orientation = orient_and_sort(m)
    f1, f2 = families_from_matrix(m, orientation.tau_map)
    rebuilt = generalized_tower_scheme_ideal(orientation.decomposition, f1, f2)
    assert rebuilt == i, f"I_S(F1, F2) = {rebuilt} differs from I(M) = {i}"
    back = standard_form_from_ideal(i, check_acm=False)
    assert ideal_of_matrix(back) == i, f"standard form of {i} does not regenerate it"
    check_colons_acm(i, ctx.threads, f"matrix ideal {i}")
    _check_matrix_colons(m, i)


def _check_tower_colons(t: PointSet):
    for h in sorted(t.projection(1) | t.projection(2)):
        reduced = colon_set(t, h)
        for j in sorted(reduced.projection(2)):
            assert f_boundary(reduced, j) <= f_boundary(t, j), f"F_(T:{h})({j}) ⊄ F_T({j})"


def _check_gts_colons(d: GTSDecomposition, i: MonomialIdeal):
    s = d.s
    n = i.n
    for h in sorted(d.t.projection(1) & d.t.projection(2)):
        reduced = colon_decomposition(d, h)
        if reduced.t.points:
            check = check_generalized_tower_set(reduced)
            assert check, f"S:{h} of {s.sorted_points} fails with {check.reason}"
    for a in sorted(d.s0.projection(1)):
        first = min(b for x, b in d.s0.points if x == a)
        assert not f_boundary(d.t, first), f"F_T({first}) is not empty"
        complete_intersection_row(d, a)
        rest, ci = row_split(d, a)
        assert intersect(rest, ci) == i, f"row split at {a} does not recover I_S"
    support = forgetful(s, n)
    for a in sorted(support.symbols):
        reduced_support = colon_set(support, a)
        if reduced_support.members:
            assert ideal_from_support(reduced_support) == colon_monomial(
                i, Monomial.variable(n, a)
            ), f"I_(U:{a}) != I_U : x_{a}"


def _check_matrix_colons(m: StandardFormMatrix, i: MonomialIdeal):
    for h in range(1, m.n + 1):
        assert ideal_of_matrix(dehomogenize(m, h)) == colon_monomial(
            i, Monomial.variable(m.n, h)
        ), f"substituting x_{h} = 1 does not give I : x_{h}"


def check_colon_identities(rng: random.Random, ctx: SuiteContext):
    kind = rng.choice(["tower", "gts", "matrix"])
    if kind == "tower":
        _check_tower_colons(random_tower_set(rng, c=2, starred=True))
    elif kind == "gts":
        d = random_gts(rng)
        _check_gts_colons(d, point_set_ideal(d.s, max(x for p in d.s.points for x in p)))
    else:
        m = random_standard_form(rng, rng.randint(1, 5))
        _check_matrix_colons(m, ideal_of_matrix(m))


def check_resolution_crosscheck(rng: random.Random, ctx: SuiteContext):
    i = random_squarefree_ideal(rng, rng.randint(3, 8), 8)
    table = betti_numbers(i, ctx.threads)
    assert betti_numerator(table) == hilbert_numerator(i), f"Euler characteristic fails for {i}"
    if len(i.generators) > ctx.caps.taylor_generators:
        raise CapSkip(f"{len(i.generators)} generators exceed the Taylor cap")
    taylor = taylor_betti_numbers(i, ctx.caps.taylor_generators)
    assert table.entries == taylor.entries, f"Hochster and Taylor Betti numbers differ for {i}"
    assert table.pd == taylor.pd


def check_bidiagonal(rng: random.Random, ctx: SuiteContext):
    m = random_standard_form(rng, rng.randint(1, 3), bidiagonal=True)
    assert is_bidiagonal(m)
    orientation = orient_and_sort(m)
    tower = orientation.decomposition
    assert not tower.s0.points, f"residual part {tower.s0.sorted_points} is not empty"
    found, _ = is_towerizable(u_sets(m).u_all, caps=ctx.caps)
    assert found, "U_M of a bidiagonal matrix is not towerizable"
    f1, f2 = families_from_matrix(m, orientation.tau_map)
    converse = tower_standard_form(tower.t, f1, f2)
    assert is_bidiagonal(converse)
    assert ideal_of_matrix(converse) == ideal_of_matrix(m), "tower standard form differs"


#: Suites by name with their number of cases at scale 1.
SUITES: typing.Dict[
    str, typing.Tuple[int, typing.Callable[[random.Random, SuiteContext], None]]
] = {
    "monomial": (200, check_monomial),
    "tower_acm": (200, check_tower_acm),
    "sigma_segment": (500, check_sigma_segment),
    "hilbert_chain": (100, check_hilbert_chain),
    "gts_acm": (200, check_gts_acm),
    "gts_roundtrip": (200, check_gts_roundtrip),
    "colon_identities": (200, check_colon_identities),
    "resolution_crosscheck": (200, check_resolution_crosscheck),
    "bidiagonal": (100, check_bidiagonal),
}


def run_suite(
    name: str,
    seed: int,
    scale: float = 1.0,
    threads: int = 1,
    caps: typing.Optional[SearchCaps] = None,
) -> SuiteResult:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}")
    base, check = SUITES[name]
    cases = max(1, round(base * scale))
    ctx = SuiteContext(threads=threads, caps=caps or SearchCaps())
    rng = random.Random(f"{seed}:{name}")
    failures = 0
    skipped = 0
    first_failure = None
    for case in tqdm.tqdm(range(cases), desc=name, unit="case"):
        try:
            check(rng, ctx)
        except CapSkip as e:
            skipped += 1
            logger.debug("%s case %d skipped: %s", name, case, e)
        except (AssertionError, AcmTowersError) as e:
            failures += 1
            logger.warning("%s case %d failed: %s", name, case, e)
            if first_failure is None:
                first_failure = f"case {case}: {type(e).__name__}: {e}"
    return SuiteResult(
        name=name, cases=cases, failures=failures, first_failure=first_failure, skipped=skipped
    )


def run(
    seed: typing.Optional[int] = None,
    scale: float = 1.0,
    threads: int = 1,
    suites: typing.Optional[typing.Sequence[str]] = None,
    caps: typing.Optional[SearchCaps] = None,
) -> typing.List[SuiteResult]:
    """Run the named suites (all by default) and return their results"""
    seed = settings.DEFAULT_SEED if seed is None else seed
    names = list(suites) if suites else list(SUITES)
    logger.info("Running %d suites with seed %d...", len(names), seed)
    results = []
    for name in names:
        result = run_suite(name, seed, scale, threads, caps)
        logger.info(
            "- %s: %d cases, %d failures, %d skipped",
            name,
            result.cases,
            result.failures,
            result.skipped,
        )
        results.append(result)
    logger.info("... done running suites")
    return results
