import pytest

from acm_towers.gentower import GTSDecomposition
from acm_towers.hilbert_burch import (
    NotACM,
    NotHeightTwo,
    NotStandardForm,
    StandardFormMatrix,
    dehomogenize,
    families_from_matrix,
    first_difference,
    generators_from_matrix,
    ideal_of_matrix,
    is_bidiagonal,
    minor_generators,
    mu_sequence,
    mu_table,
    orient_and_sort,
    standard_form_from_ideal,
    tower_standard_form,
    u_sets,
    verify_characterization,
)
from acm_towers.monomial import Monomial, colon_monomial, minimize, prime_ideal
from acm_towers.tower import PointSet


def var(n, a):
    return Monomial.variable(n, a)


def six_point_ideal():
    supports = ({2, 4, 6}, {1, 4, 6}, {1, 3, 6}, {1, 4, 5})
    return minimize(Monomial.from_support(6, s) for s in supports)


def six_point_matrix():
    return StandardFormMatrix(
        n=6,
        diagonal=[var(6, 2), var(6, 4), var(6, 6)],
        off_diagonal=[(0, var(6, 1)), (1, var(6, 3)), (1, var(6, 5))],
    )


def line_matrix():
    # D_1 = y, M_1 = x
    return StandardFormMatrix(n=2, diagonal=[var(2, 2)], off_diagonal=[(0, var(2, 1))])


def bidiagonal_matrix(r):
    n = 2 * r
    return StandardFormMatrix(
        n=n,
        diagonal=[var(n, j) for j in range(1, r + 1)],
        off_diagonal=[(j - 1, var(n, r + j)) for j in range(1, r + 1)],
    )


def test_standard_form_shape():
    with pytest.raises(NotStandardForm):
        StandardFormMatrix(n=2, diagonal=[var(2, 2)], off_diagonal=[(1, var(2, 1))])
    with pytest.raises(NotStandardForm):
        StandardFormMatrix(
            n=6,
            diagonal=[var(6, 1), var(6, 2), var(6, 3)],
            off_diagonal=[(0, var(6, 4)), (1, var(6, 5)), (3, var(6, 6))],
        )
    with pytest.raises(NotStandardForm):
        StandardFormMatrix(
            n=8,
            diagonal=[var(8, a) for a in range(1, 5)],
            off_diagonal=[(0, var(8, 5)), (1, var(8, 6)), (2, var(8, 7)), (1, var(8, 8))],
        )
    with pytest.raises(NotStandardForm):
        StandardFormMatrix(n=2, diagonal=[], off_diagonal=[])


def test_orbits():
    m = six_point_matrix()
    assert m.orbit(0) == frozenset()
    assert m.orbit(1) == {1}
    assert m.orbit(2) == {1, 2}
    assert m.orbit(3) == {1, 3}
    assert m.entry(1, 3) == var(6, 5)
    assert m.entry(2, 3) is None
    assert len(m.rows()) == 4


def test_generators_from_matrix():
    m = six_point_matrix()
    assert [sorted(f.support) for f in generators_from_matrix(m)] == [
        [2, 4, 6],
        [1, 4, 6],
        [1, 3, 6],
        [1, 4, 5],
    ]
    assert generators_from_matrix(line_matrix()) == (var(2, 2), var(2, 1))
    assert ideal_of_matrix(m) == six_point_ideal()


def test_minors_match_product_formula():
    for m in (six_point_matrix(), line_matrix(), bidiagonal_matrix(2), bidiagonal_matrix(4)):
        assert minor_generators(m) == generators_from_matrix(m)


def test_standard_form_from_ideal():
    assert standard_form_from_ideal(six_point_ideal()) == six_point_matrix()
    line = standard_form_from_ideal(prime_ideal(2, {1, 2}))
    assert line == line_matrix()


def test_standard_form_of_tower_is_bidiagonal():
    # x1, x2, y1, y2 as variables 1..4
    i = minimize(Monomial.from_support(4, s) for s in ({1, 2}, {1, 3}, {3, 4}))
    m = standard_form_from_ideal(i)
    assert is_bidiagonal(m)
    assert m.r == 2
    assert ideal_of_matrix(m) == i


def test_standard_form_rejects():
    with pytest.raises(NotHeightTwo):
        standard_form_from_ideal(minimize([Monomial.from_support(3, {1, 2, 3})]))
    skew = minimize(Monomial.from_support(4, s) for s in ({1, 3}, {1, 4}, {2, 3}, {2, 4}))
    with pytest.raises(NotACM):
        standard_form_from_ideal(skew)


def test_u_sets():
    sets = u_sets(six_point_matrix())
    assert set(sets.u_prime.members) == {frozenset({2, 3})}
    assert set(sets.u_double.members) == {
        frozenset(p) for p in ({1, 4}, {2, 4}, {2, 5}, {3, 4}, {3, 6})
    }
    assert len(sets.u_all) == 6
    line = u_sets(line_matrix())
    assert not line.u_prime.members
    assert set(line.u_double.members) == {frozenset({1, 2})}


def test_u_sets_of_bidiagonal_matrix():
    sets = u_sets(bidiagonal_matrix(3))
    assert not sets.u_prime.members
    assert len(sets.u_double) == 6


def test_mu():
    m = six_point_matrix()
    levels = mu_table(m)
    assert [levels[0][i].mu for i in (1, 2, 3)] == [1, 1, 3]
    assert first_difference(levels, 2, 3) == 0
    assert [step.mu for step in mu_sequence(line_matrix(), 1)] == [1, 0]
    steps = list(mu_sequence(m, 3))
    assert steps[0].mu == 3
    assert steps[-1].mu == 0
    with pytest.raises(ValueError):
        next(mu_sequence(m, 4))


def test_orient_and_sort():
    orientation = orient_and_sort(six_point_matrix())
    assert orientation.decomposition == GTSDecomposition.of(
        [(3, 1), (4, 1), (4, 2), (4, 3), (6, 1)], [(5, 3)]
    )
    assert orientation.tau_map == {3: 1, 1: 2, 2: 3}
    assert dict(orientation.omega)[frozenset({2, 3})] == (2, 3)
    assert dict(orientation.omega)[frozenset({2, 5})] == (5, 2)
    line = orient_and_sort(line_matrix())
    assert line.decomposition == GTSDecomposition.of([(2, 1)], [])


def test_orient_and_sort_bidiagonal():
    for r in (1, 2, 3):
        orientation = orient_and_sort(bidiagonal_matrix(r))
        assert not orientation.decomposition.s0.points


def test_families_from_matrix():
    m = six_point_matrix()
    f1, f2 = families_from_matrix(m, orient_and_sort(m).tau_map)
    assert f2 == (var(6, 6), var(6, 2), var(6, 4))
    assert f1 == (var(6, 6), var(6, 2), var(6, 4), var(6, 1), var(6, 3), var(6, 5))
    f1, f2 = families_from_matrix(line_matrix(), {1: 1})
    assert f1 == (var(2, 2), var(2, 1))
    assert f2 == (var(2, 2),)
    with pytest.raises(ValueError):
        families_from_matrix(m, {1: 1})


def test_verify_characterization():
    report = verify_characterization(six_point_ideal())
    assert report.acm
    assert report.rebuilt == six_point_ideal()
    assert report.matrix == six_point_matrix()
    assert report.orientation.decomposition.s0.points == {(5, 3)}


def test_verify_characterization_not_acm():
    skew = minimize(Monomial.from_support(4, s) for s in ({1, 3}, {1, 4}, {2, 3}, {2, 4}))
    report = verify_characterization(skew)
    assert not report.acm
    assert report.pd == 3
    assert report.generalized_towerizable is False
    assert report.matrix is None


def test_verify_characterization_trivial_tower():
    report = verify_characterization(prime_ideal(2, {1, 2}))
    assert report.acm
    assert report.orientation.decomposition.t.points == {(2, 1)}


def test_tower_standard_form():
    n = 4
    t = PointSet(c=2, points=[(1, 1), (2, 1), (1, 2)])
    m = tower_standard_form(t, [var(n, 1), var(n, 2)], [var(n, 3), var(n, 4)])
    assert is_bidiagonal(m)
    assert m.diagonal == (var(n, 2), var(n, 1))
    assert ideal_of_matrix(m) == minimize(
        Monomial.from_support(n, s) for s in ({1, 2}, {1, 3}, {3, 4})
    )


def test_dehomogenize_is_colon():
    m = six_point_matrix()
    for h in range(1, 7):
        assert ideal_of_matrix(dehomogenize(m, h)) == colon_monomial(six_point_ideal(), var(6, h))

