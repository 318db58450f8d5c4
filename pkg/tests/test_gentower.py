import pytest

from acm_towers.gentower import (
    BadColumn,
    GTSDecomposition,
    NotGTS,
    SizeCapExceeded,
    check_generalized_tower_set,
    colon_decomposition,
    colon_set,
    complete_intersection_row,
    f_boundary,
    find_gts_decomposition,
    generalized_tower_scheme_ideal,
    is_connected,
    is_generalized_tower_set,
    is_generalized_towerizable,
    is_towerizable,
    point_set_ideal,
    row_split,
)
from acm_towers.monomial import Monomial, PrimeSupport, ideal_from_support, intersect, minimize
from acm_towers.resolution import is_acm
from acm_towers.settings import SearchCaps
from acm_towers.tower import GenericityViolation, PointSet, is_tower_set

SIX_PRIMES = PrimeSupport(n=6, c=2, members=[{1, 2}, {3, 4}, {5, 6}, {4, 6}, {1, 4}, {1, 6}])
CHAIN_T = [(3, 1), (4, 1), (4, 2), (4, 3), (6, 1)]
CHAIN_S0 = [(5, 3)]


def chain():
    return GTSDecomposition.of(CHAIN_T, CHAIN_S0)


def test_colon_set():
    reduced = colon_set(SIX_PRIMES, 1)
    assert set(reduced.members) == {frozenset({3, 4}), frozenset({5, 6}), frozenset({4, 6})}
    assert colon_set(SIX_PRIMES, 9) == SIX_PRIMES
    points = PointSet(c=2, points=[(5, 3), (4, 1)])
    assert colon_set(points, 3).points == {(4, 1)}


def test_f_boundary():
    assert f_boundary(PointSet(c=2, points=[(2, 1), (4, 1), (4, 3)]), 3) == {1}
    t = PointSet(c=2, points=CHAIN_T)
    assert f_boundary(t, 3) == frozenset()
    assert f_boundary(t, 2) == {1}
    # column 1 is maximal
    assert f_boundary(t, 1) == frozenset()
    with pytest.raises(BadColumn):
        f_boundary(t, 7)


def test_is_connected():
    assert is_connected(SIX_PRIMES)
    assert not is_connected(PrimeSupport(n=4, c=2, members=[{1, 2}, {3, 4}]))
    assert is_connected(PrimeSupport(n=2, c=2, members=[{1, 2}]))
    assert is_connected(chain().s)


def test_is_generalized_tower_set():
    assert is_generalized_tower_set(chain())
    star = PointSet(c=2, points=[(2, 1), (3, 1), (3, 2)])
    assert is_generalized_tower_set(GTSDecomposition(t=star, s0=PointSet(c=2, points=[])))
    assert not is_generalized_tower_set(GTSDecomposition.of(CHAIN_T, [(5, 2)]))
    outside = GTSDecomposition.of([(2, 1), (3, 1), (3, 2)], [(4, 1)])
    assert check_generalized_tower_set(outside).reason == "residual-column-outside-tower"


def test_generalized_tower_set_failures():
    assert check_generalized_tower_set(GTSDecomposition.of([], [(1, 2)])).reason == "empty-tower"
    disconnected = GTSDecomposition.of([(2, 1), (4, 3)], [])
    assert check_generalized_tower_set(disconnected).reason == "disconnected"
    flipped = GTSDecomposition.of([(1, 2), (2, 1)], [])
    assert check_generalized_tower_set(flipped).reason == "not-tower"
    row_reused = GTSDecomposition.of(CHAIN_T, [(6, 3)])
    assert check_generalized_tower_set(row_reused).reason == "residual-row-in-tower"


def test_find_gts_decomposition():
    s = chain().s
    assert find_gts_decomposition(s) == chain()
    tower = PointSet(c=2, points=[(2, 1), (3, 1), (3, 2)])
    found = find_gts_decomposition(tower)
    assert found.t == tower
    assert not found.s0.points
    assert find_gts_decomposition(PointSet(c=2, points=[(1, 2), (2, 1)])) is None
    with pytest.raises(SizeCapExceeded):
        find_gts_decomposition(s, cap=3)


def test_is_towerizable():
    found, witness = is_towerizable(SIX_PRIMES)
    assert not found
    assert witness is None
    found, witness = is_towerizable(PrimeSupport(n=3, c=2, members=[{1, 2}, {2, 3}]))
    assert found
    assert is_tower_set(witness.image)
    assert len(witness.image) == 2
    found, _ = is_towerizable(PrimeSupport(n=2, c=2, members=[{1, 2}]))
    assert found


def test_is_towerizable_caps():
    with pytest.raises(SizeCapExceeded):
        is_towerizable(SIX_PRIMES, caps=SearchCaps(search_symbols=4))


def test_is_generalized_towerizable():
    found, witness = is_generalized_towerizable(SIX_PRIMES)
    assert found
    assert witness.decomposition is not None
    assert is_generalized_tower_set(witness.decomposition)
    assert witness.decomposition.s0.points
    found, witness = is_generalized_towerizable(PrimeSupport(n=4, c=2, members=[{1, 2}, {3, 4}]))
    assert not found
    assert witness is None


def test_towerizable_implies_generalized_towerizable():
    u = PrimeSupport(n=4, c=2, members=[{1, 2}, {2, 3}, {2, 4}])
    assert is_towerizable(u)[0]
    assert is_generalized_towerizable(u)[0]
    assert is_generalized_towerizable(u, scope="symbols")[0]


def test_point_set_ideal():
    i = point_set_ideal(chain().s)
    assert i.n == 6
    assert len(i.generators) == 4
    assert is_acm(i)


def test_generalized_tower_scheme_ideal():
    n = 6
    x = {a: Monomial.variable(n, a) for a in range(1, n + 1)}
    f2 = [x[6], x[2], x[4]]
    f1 = [x[6], x[2], x[4], x[1], x[3], x[5]]
    i = generalized_tower_scheme_ideal(chain(), f1, f2)
    assert i == ideal_from_support(SIX_PRIMES)
    assert is_acm(i)


def test_generalized_tower_scheme_ideal_quadratic_form():
    n = 7
    x = {a: Monomial.variable(n, a) for a in range(1, n + 1)}
    f2 = [x[6], x[2], x[4]]
    f1 = [x[6], x[2], x[4], x[1] * x[7], x[3], x[5]]
    i = generalized_tower_scheme_ideal(chain(), f1, f2)
    assert is_acm(i)
    assert len(i.generators) == 4


def test_generalized_tower_scheme_ideal_singleton():
    x1, x2 = Monomial.variable(2, 1), Monomial.variable(2, 2)
    d = GTSDecomposition.of([(1, 2)], [])
    assert generalized_tower_scheme_ideal(d, {1: x1}, {2: x2}) == minimize([x1, x2])


def test_generalized_tower_scheme_ideal_rejects():
    x = {a: Monomial.variable(6, a) for a in range(1, 7)}
    with pytest.raises(NotGTS):
        generalized_tower_scheme_ideal(GTSDecomposition.of(CHAIN_T, [(5, 2)]), x, x)
    same = {a: x[1] for a in range(1, 7)}
    with pytest.raises(GenericityViolation):
        generalized_tower_scheme_ideal(chain(), same, x)


def test_colon_decomposition():
    reduced = colon_decomposition(chain(), 3)
    assert reduced.t.points == {(4, 1), (4, 2), (6, 1)}
    assert not reduced.s0.points
    assert is_generalized_tower_set(reduced)


def test_row_split_and_complete_intersection():
    d = chain()
    n = 6
    rest, ci = row_split(d, 5)
    assert intersect(rest, ci) == point_set_ideal(d.s, n)
    assert ci == minimize([Monomial.variable(n, 5), Monomial.variable(n, 3)])
    assert complete_intersection_row(d, 5) == 3
    with pytest.raises(ValueError):
        row_split(d, 4)
