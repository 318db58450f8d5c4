import pytest

from acm_towers.monomial import Monomial, hilbert_numerator, minimize, prime_ideal
from acm_towers.resolution import (
    TooManyGenerators,
    UnitIdeal,
    betti_numbers,
    betti_numerator,
    describe_acm,
    is_acm,
    lcm_lattice,
    projective_dimension,
    reduced_homology_ranks,
    taylor_betti_numbers,
    taylor_pd_oracle,
)


def sq(n, *supports):
    return minimize(Monomial.from_support(n, s) for s in supports)


def six_point_ideal():
    return sq(6, {2, 4, 6}, {1, 4, 6}, {1, 3, 6}, {1, 4, 5})


def skew_lines():
    return sq(4, {1, 3}, {1, 4}, {2, 3}, {2, 4})


def test_betti_numbers_koszul():
    table = betti_numbers(prime_ideal(2, {1, 2}))
    assert table.totals() == {0: 1, 1: 2, 2: 1}
    assert table.value(1, [2]) == 1
    assert table.value(2, [1, 2]) == 1
    assert table.value(2, [1]) == 0
    assert table.pd == 2


def test_betti_numbers_six_points():
    table = betti_numbers(six_point_ideal())
    assert table.totals() == {0: 1, 1: 4, 2: 3}
    assert table.graded() == {(0, 0): 1, (1, 3): 4, (2, 4): 3}
    assert table.pd == 2


def test_projective_dimension():
    assert projective_dimension(prime_ideal(2, {1, 2})) == 2
    assert projective_dimension(six_point_ideal()) == 2
    assert projective_dimension(skew_lines()) == 3


def test_is_acm():
    assert is_acm(six_point_ideal())
    assert not is_acm(skew_lines())
    assert is_acm(prime_ideal(5, {2, 3, 5}))


def test_describe_acm():
    assert describe_acm(skew_lines()) == {
        "height": 2,
        "equidimensional": True,
        "pd": 3,
        "acm": False,
    }


def test_unit_ideal_rejected():
    with pytest.raises(UnitIdeal):
        betti_numbers(minimize([Monomial.one(2)]))


def test_taylor_oracle():
    assert taylor_pd_oracle(prime_ideal(2, {1, 2})) == 2
    assert taylor_pd_oracle(six_point_ideal()) == 2
    assert taylor_pd_oracle(skew_lines()) == 3


def test_taylor_agrees_with_hochster():
    for i in (six_point_ideal(), skew_lines(), sq(5, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5})):
        assert taylor_betti_numbers(i).entries == betti_numbers(i).entries


def test_taylor_generator_cap():
    with pytest.raises(TooManyGenerators):
        taylor_betti_numbers(skew_lines(), max_generators=3)


def test_betti_numerator_is_hilbert_numerator():
    for i in (six_point_ideal(), skew_lines()):
        assert betti_numerator(betti_numbers(i)) == hilbert_numerator(i)


def test_betti_numbers_threads():
    assert betti_numbers(skew_lines(), threads=2).entries == betti_numbers(skew_lines()).entries


def test_lcm_lattice():
    assert lcm_lattice([0b01, 0b10]) == [0, 0b01, 0b10, 0b11]


def test_reduced_homology_of_two_points():
    # two isolated vertices: one reduced 0-cycle
    assert reduced_homology_ranks({-1: [0], 0: [0b01, 0b10]}) == {0: 1}
