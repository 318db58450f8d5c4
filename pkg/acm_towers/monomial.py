"""Exact arithmetic on monomials and monomial ideals.

Monomials are exponent vectors over ``n`` variables ``x_1, ..., x_n``.  Ideals
are stored by their minimal generators in canonical order: total degree
first, then the lexicographic monomial order with ``x_1 > x_2 > ...`` where
the larger monomial comes first.
"""

import collections
import functools
import itertools
import math
import typing

import attrs
from logzero import logger
import sympy

from acm_towers.errors import InputError

#: Indeterminate of Hilbert series numerators.
T = sympy.Symbol("t")

#: h-vector, indexed from 0 with trailing zeros trimmed.
HilbertVector = typing.Tuple[int, ...]


class MixedAmbient(InputError):
    """Monomials or ideals live in rings with different variable counts"""


class EmptySupport(InputError):
    """A prime support without members was given"""


class NotSquarefree(InputError):
    """A squarefree ideal was expected"""


class NotDivisible(InputError):
    """An exact division is impossible"""


class ZeroIdeal(InputError):
    """The operation is undefined on the zero ideal"""


def _to_exponents(value: typing.Iterable[int]) -> typing.Tuple[int, ...]:
    return tuple(int(x) for x in value)


@attrs.frozen
class Monomial:
    """Monomial given by its exponent vector"""

    #: Exponents, one per variable
    exponents: typing.Tuple[int, ...] = attrs.field(converter=_to_exponents)
    #: Bit set of the variables with nonzero exponent (bit ``i - 1`` for ``x_i``)
    mask: int = attrs.field(init=False, eq=False, repr=False)

    @exponents.validator
    def _check_exponents(self, _attribute, value):
        if any(e < 0 for e in value):
            raise InputError(f"negative exponent in {value}")

    def __attrs_post_init__(self):
        mask = 0
        for idx, e in enumerate(self.exponents):
            if e:
                mask |= 1 << idx
        object.__setattr__(self, "mask", mask)

    @classmethod
    def one(cls, n: int) -> "Monomial":
        return cls((0,) * n)

    @classmethod
    def variable(cls, n: int, i: int) -> "Monomial":
        """The variable ``x_i`` (1-based) in ``n`` variables"""
        if not 1 <= i <= n:
            raise InputError(f"variable index {i} outside 1..{n}")
        return cls(tuple(1 if j == i else 0 for j in range(1, n + 1)))

    @classmethod
    def from_support(cls, n: int, variables: typing.Iterable[int]) -> "Monomial":
        """Squarefree product of the given 1-based variables"""
        chosen = set(variables)
        if any(not 1 <= i <= n for i in chosen):
            raise InputError(f"variables {sorted(chosen)} outside 1..{n}")
        return cls(tuple(1 if j in chosen else 0 for j in range(1, n + 1)))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Monomial":
        return cls(tuple((mask >> j) & 1 for j in range(n)))

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def is_squarefree(self) -> bool:
        return all(e <= 1 for e in self.exponents)

    @property
    def support(self) -> typing.FrozenSet[int]:
        return frozenset(i + 1 for i, e in enumerate(self.exponents) if e)

    @property
    def sort_key(self) -> typing.Tuple[int, typing.Tuple[int, ...]]:
        return (self.degree, tuple(-e for e in self.exponents))

    def _check(self, other: "Monomial"):
        if self.n != other.n:
            raise MixedAmbient(f"monomials in {self.n} and {other.n} variables")

    def __mul__(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(a + b for a, b in zip(self.exponents, other.exponents))

    def divides(self, other: "Monomial") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def lcm(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(max(a, b) for a, b in zip(self.exponents, other.exponents))

    def gcd(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(min(a, b) for a, b in zip(self.exponents, other.exponents))

    def is_coprime(self, other: "Monomial") -> bool:
        self._check(other)
        return not self.mask & other.mask

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not other.divides(self):
            raise NotDivisible(f"{other} does not divide {self}")
        return Monomial(a - b for a, b in zip(self.exponents, other.exponents))

    def __str__(self) -> str:
        factors = []
        for i, e in enumerate(self.exponents, start=1):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        return "*".join(factors) or "1"


def prod(n: int, monomials: typing.Iterable[Monomial]) -> Monomial:
    """Product of ``monomials`` in ``n`` variables (``1`` for no factors)"""
    return functools.reduce(lambda a, b: a * b, monomials, Monomial.one(n))


@attrs.frozen
class MonomialIdeal:
    """Monomial ideal stored by its minimal generators in canonical order

    Build instances through :func:`minimize` so that equality of ideals is
    equality of values.
    """

    #: Number of variables of the ambient ring
    n: int
    #: Minimal generators in canonical order
    generators: typing.Tuple[Monomial, ...] = attrs.field(converter=tuple)

    @generators.validator
    def _check_generators(self, _attribute, value):
        for g in value:
            if g.n != self.n:
                raise MixedAmbient(f"generator {g} does not have {self.n} variables")

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return any(g.degree == 0 for g in self.generators)

    @property
    def is_squarefree(self) -> bool:
        return all(g.is_squarefree for g in self.generators)

    @property
    def masks(self) -> typing.Tuple[int, ...]:
        return tuple(g.mask for g in self.generators)

    def contains(self, m: Monomial) -> bool:
        return any(g.divides(m) for g in self.generators)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def _canonical_members(value: typing.Iterable[typing.Iterable[int]]):
    members = [frozenset(int(x) for x in member) for member in value]
    return tuple(sorted(members, key=lambda m: sorted(m)))


@attrs.frozen
class PrimeSupport:
    """Set of ``c``-subsets of ``[n]``, the support of a squarefree ideal"""

    #: Number of variables
    n: int
    #: Codimension, the cardinality of every member
    c: int
    #: The members in canonical order
    members: typing.Tuple[typing.FrozenSet[int], ...] = attrs.field(converter=_canonical_members)

    @members.validator
    def _check_members(self, _attribute, value):
        for member in value:
            if len(member) != self.c:
                raise InputError(f"member {sorted(member)} does not have {self.c} elements")
            if any(not 1 <= i <= self.n for i in member):
                raise InputError(f"member {sorted(member)} not contained in 1..{self.n}")
        if len(set(value)) != len(value):
            raise InputError("duplicate members in prime support")

    @property
    def symbols(self) -> typing.FrozenSet[int]:
        return frozenset(itertools.chain.from_iterable(self.members))

    def __len__(self) -> int:
        return len(self.members)


def minimize(gens: typing.Iterable[Monomial], n: typing.Optional[int] = None) -> MonomialIdeal:
    """Minimal generators of the ideal generated by ``gens``, canonically ordered"""
    candidates = sorted(set(gens), key=lambda g: g.sort_key)
    if n is None:
        if not candidates:
            raise InputError("the ambient variable count is needed for the zero ideal")
        n = candidates[0].n
    for g in candidates:
        if g.n != n:
            raise MixedAmbient(f"generator {g} does not have {n} variables")
    kept: typing.List[Monomial] = []
    for g in candidates:
        if not any(h.divides(g) for h in kept):
            kept.append(g)
    return MonomialIdeal(n=n, generators=tuple(kept))


def _check_same_ring(a: MonomialIdeal, b: MonomialIdeal):
    if a.n != b.n:
        raise MixedAmbient(f"ideals in {a.n} and {b.n} variables")


def intersect(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check_same_ring(a, b)
    return minimize((f.lcm(g) for f in a.generators for g in b.generators), n=a.n)


def intersect_all(ideals: typing.Iterable[MonomialIdeal]) -> MonomialIdeal:
    ideals = list(ideals)
    if not ideals:
        raise InputError("cannot intersect an empty family of ideals")
    return functools.reduce(intersect, ideals)


def sum_ideals(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check_same_ring(a, b)
    return minimize(a.generators + b.generators, n=a.n)


def colon_monomial(i: MonomialIdeal, m: Monomial) -> MonomialIdeal:
    """The colon ideal ``I : (m)``"""
    if m.n != i.n:
        raise MixedAmbient(f"monomial {m} does not have {i.n} variables")
    return minimize((g / g.gcd(m) for g in i.generators), n=i.n)


def prime_ideal(n: int, variables: typing.Iterable[int]) -> MonomialIdeal:
    """The coordinate prime generated by the given variables"""
    return minimize((Monomial.variable(n, a) for a in variables), n=n)


def ideal_from_support(s: PrimeSupport) -> MonomialIdeal:
    """``I_S``, the intersection of the coordinate primes of ``s``"""
    if not s.members:
        raise EmptySupport("prime support has no members")
    return intersect_all(prime_ideal(s.n, member) for member in s.members)


def _bits(mask: int) -> typing.Iterator[int]:
    idx = 0
    while mask:
        if mask & 1:
            yield idx
        mask >>= 1
        idx += 1


@functools.lru_cache(maxsize=4096)
def _minimal_transversals(edges: typing.FrozenSet[int]) -> typing.FrozenSet[int]:
    """Minimal vertex covers of the hypergraph with the given edge bit sets"""
    if not edges:
        return frozenset({0})
    edge = min(edges, key=lambda e: (bin(e).count("1"), e))
    covers: typing.Set[int] = set()
    for v in _bits(edge):
        bit = 1 << v
        rest = frozenset(e for e in edges if not e & bit)
        covers.update(cover | bit for cover in _minimal_transversals(rest))
    minimal = [
        cover
        for cover in covers
        if not any(other != cover and other & cover == other for other in covers)
    ]
    return frozenset(minimal)


def _check_squarefree_nonzero(i: MonomialIdeal):
    if not i.is_squarefree:
        raise NotSquarefree(f"ideal {i} is not squarefree")
    if i.is_zero:
        raise ZeroIdeal("the zero ideal has no proper minimal primes")


def minimal_primes(i: MonomialIdeal) -> typing.List[typing.FrozenSet[int]]:
    """Minimal primes as sets of variable indices, sorted by size then content"""
    _check_squarefree_nonzero(i)
    if i.is_unit:
        return []
    covers = _minimal_transversals(frozenset(i.masks))
    primes = [frozenset(v + 1 for v in _bits(cover)) for cover in covers]
    return sorted(primes, key=lambda p: (len(p), sorted(p)))


def height_and_equidimensional(i: MonomialIdeal) -> typing.Tuple[int, bool]:
    primes = minimal_primes(i)
    if not primes:
        raise InputError("the unit ideal has no height")
    sizes = {len(p) for p in primes}
    return min(sizes), len(sizes) == 1


def height_of(monomials: typing.Iterable[Monomial]) -> int:
    """Height of the ideal generated by ``monomials`` (via its radical)"""
    masks = frozenset(m.mask for m in monomials)
    if 0 in masks:
        raise InputError("the unit ideal has no height")
    if not masks:
        return 0
    return min(bin(cover).count("1") for cover in _minimal_transversals(masks))


_Gens = typing.Tuple[typing.Tuple[int, ...], ...]


def _minimal_tuples(gens: typing.Iterable[typing.Tuple[int, ...]]) -> _Gens:
    candidates = sorted(set(gens), key=lambda g: (sum(g), g))
    kept: typing.List[typing.Tuple[int, ...]] = []
    for g in candidates:
        if not any(all(a <= b for a, b in zip(h, g)) for h in kept):
            kept.append(g)
    return tuple(kept)


@functools.lru_cache(maxsize=16384)
def _numerator(gens: _Gens) -> sympy.Poly:
    if not gens:
        return sympy.Poly(1, T)
    if any(sum(g) == 0 for g in gens):
        return sympy.Poly(0, T)
    counts: typing.Counter[int] = collections.Counter()
    for g in gens:
        counts.update(idx for idx, e in enumerate(g) if e)
    if all(count == 1 for count in counts.values()):
        result = sympy.Poly(1, T)
        for g in gens:
            result *= sympy.Poly(1 - T ** sum(g), T)
        return result
    pivot = min(counts, key=lambda idx: (-counts[idx], idx))
    x = tuple(1 if idx == pivot else 0 for idx in range(len(gens[0])))
    with_x = _minimal_tuples([g for g in gens if not g[pivot]] + [x])
    colon_x = _minimal_tuples(
        tuple(e - 1 if idx == pivot and e else e for idx, e in enumerate(g)) for g in gens
    )
    return _numerator(with_x) + sympy.Poly(T, T) * _numerator(colon_x)


def hilbert_numerator(i: MonomialIdeal) -> sympy.Poly:
    """``K(t)`` with ``HS(R/I) = K(t) / (1 - t)^n``"""
    return _numerator(tuple(g.exponents for g in i.generators))


def trim_zeros(values: typing.Iterable[int]) -> HilbertVector:
    result = list(values)
    while result and result[-1] == 0:
        result.pop()
    return tuple(result)


def _coefficients(poly: sympy.Poly) -> typing.List[int]:
    """Integer coefficients in ascending order of the powers of ``t``"""
    if poly.is_zero:
        return []
    return [int(c) for c in reversed(poly.all_coeffs())]


def h_vector_and_degree(i: MonomialIdeal, c: int) -> typing.Tuple[HilbertVector, int]:
    """h-vector and degree of ``R/I`` assuming ``dim R/I = n - c``"""
    numerator = hilbert_numerator(i)
    quotient, remainder = sympy.div(numerator, sympy.Poly((1 - T) ** c, T))
    if not remainder.is_zero:
        raise NotDivisible(f"(1-t)^{c} does not divide the Hilbert numerator of {i}")
    h_vector = trim_zeros(_coefficients(quotient))
    degree = sum(h_vector)
    if degree == 0:
        raise NotDivisible(f"dim R/I is smaller than n - c = {i.n - c}")
    return h_vector, degree


def brute_hilbert_function(i: MonomialIdeal, dmax: int) -> typing.List[int]:
    """``dim (R/I)_d`` for ``d = 0..dmax`` by counting standard monomials"""
    if dmax < 0:
        raise InputError(f"negative degree bound {dmax}")
    logger.debug("Counting standard monomials of %s up to degree %d", i, dmax)
    result = []
    for d in range(dmax + 1):
        count = 0
        for combo in itertools.combinations_with_replacement(range(i.n), d):
            exponents = [0] * i.n
            for idx in combo:
                exponents[idx] += 1
            if not i.contains(Monomial(exponents)):
                count += 1
        result.append(count)
    return result


def hilbert_function_from_numerator(
    numerator: sympy.Poly, n: int, dmax: int
) -> typing.List[int]:
    """Coefficients of ``K(t) / (1 - t)^n`` up to ``t^dmax``"""
    coeffs = _coefficients(numerator)
    result = []
    for d in range(dmax + 1):
        value = 0
        for k, a in enumerate(coeffs[: d + 1]):
            value += a * (math.comb(d - k + n - 1, n - 1) if n > 0 else int(d == k))
        result.append(value)
    return result


def iterated_difference(values: typing.Sequence[int], times: int) -> typing.List[int]:
    """``times``-fold first difference with ``values[d] = 0`` for ``d < 0``"""
    result = list(values)
    for _ in range(times):
        result = [v - (result[d - 1] if d else 0) for d, v in enumerate(result)]
    return result


def expected_degree(s: PrimeSupport, degrees: typing.Mapping[int, int]) -> int:
    """Degree of ``⋂ (h_a : a ∈ A)`` over ``A ∈ S`` for forms of the given degrees"""
    return sum(math.prod(degrees[a] for a in member) for member in s.members)
