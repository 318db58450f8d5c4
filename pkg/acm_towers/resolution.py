"""Multigraded Betti numbers of squarefree monomial quotients.

Betti numbers come from Hochster's formula: ``β_{i,σ}(R/I)`` equals the
dimension of ``H̃_{|σ|-i-1}`` of the Stanley-Reisner complex restricted to
``σ``.  Only members of the lcm lattice of the generators can carry nonzero
Betti numbers.  The Taylor complex gives an independent second path.
"""

import collections
import concurrent.futures
import functools
import typing

import attrs
from logzero import logger
import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from acm_towers import settings
from acm_towers.errors import InputError
from acm_towers.monomial import (
    T,
    MonomialIdeal,
    NotSquarefree,
    ZeroIdeal,
    height_and_equidimensional,
)


class TooManyGenerators(InputError):
    """The Taylor complex oracle is capped in the number of generators"""


class UnitIdeal(InputError):
    """The operation needs a proper ideal"""


#: One table entry: homological index, multidegree (sorted variables), value.
BettiEntry = typing.Tuple[int, typing.Tuple[int, ...], int]


@attrs.frozen
class BettiTable:
    """Multigraded Betti numbers ``β_{i,σ}`` of ``R/I``"""

    #: Number of variables
    n: int
    #: Nonzero entries sorted by homological index and multidegree
    entries: typing.Tuple[BettiEntry, ...] = attrs.field(
        converter=lambda xs: tuple(sorted(xs, key=lambda e: (e[0], len(e[1]), e[1])))
    )

    @property
    def pd(self) -> int:
        """Projective dimension of ``R/I``"""
        return max(i for i, _, _ in self.entries)

    def value(self, i: int, sigma: typing.Iterable[int]) -> int:
        key = tuple(sorted(sigma))
        for j, s, v in self.entries:
            if j == i and s == key:
                return v
        return 0

    def totals(self) -> typing.Dict[int, int]:
        result: typing.Dict[int, int] = collections.defaultdict(int)
        for i, _, v in self.entries:
            result[i] += v
        return dict(result)

    def graded(self) -> typing.Dict[typing.Tuple[int, int], int]:
        """Totals by homological index and total degree ``|σ|``"""
        result: typing.Dict[typing.Tuple[int, int], int] = collections.defaultdict(int)
        for i, sigma, v in self.entries:
            result[(i, len(sigma))] += v
        return dict(result)


def _bits(mask: int) -> typing.List[int]:
    return [idx for idx in range(mask.bit_length()) if (mask >> idx) & 1]


def _rank(columns: typing.Dict[int, typing.Dict[int, int]], nrows: int, ncols: int) -> int:
    """Exact rank of a sparse integer matrix given column-wise"""
    if not columns or not nrows or not ncols:
        return 0
    rows: typing.Dict[int, typing.Dict[int, typing.Any]] = collections.defaultdict(dict)
    for col, entries in columns.items():
        for row, value in entries.items():
            rows[row][col] = QQ(value)
    return DomainMatrix(dict(rows), (nrows, ncols), QQ).rank()


def _faces_by_dim(vertices: typing.List[int], nonfaces: typing.List[int]):
    """Faces of the complex on ``vertices`` avoiding the minimal ``nonfaces``"""
    result: typing.Dict[int, typing.List[int]] = collections.defaultdict(list)

    def extend(face: int, size: int, start: int):
        result[size - 1].append(face)
        for j in range(start, len(vertices)):
            candidate = face | (1 << vertices[j])
            if any(g & candidate == g for g in nonfaces):
                continue
            extend(candidate, size + 1, j + 1)

    extend(0, 0, 0)
    return result


def _boundary(faces: typing.List[int], lower: typing.List[int]):
    """Simplicial boundary map from ``faces`` to the faces one dimension lower"""
    index = {face: idx for idx, face in enumerate(lower)}
    columns: typing.Dict[int, typing.Dict[int, int]] = {}
    for col, face in enumerate(faces):
        entries = {}
        for pos, v in enumerate(_bits(face)):
            entries[index[face & ~(1 << v)]] = -1 if pos % 2 else 1
        columns[col] = entries
    return columns


def reduced_homology_ranks(faces: typing.Mapping[int, typing.List[int]]) -> typing.Dict[int, int]:
    """Ranks of ``H̃_k`` over the rationals, for a complex given by faces per dimension"""
    ranks: typing.Dict[int, int] = {}
    top = max(faces)
    for k in range(0, top + 1):
        upper, lower = faces.get(k, []), faces.get(k - 1, [])
        ranks[k] = _rank(_boundary(upper, lower), len(lower), len(upper))
    result = {}
    for k in range(-1, top + 1):
        value = len(faces.get(k, [])) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if value:
            result[k] = value
    return result


def _sigma_betti(args: typing.Tuple[typing.Tuple[int, ...], int]) -> typing.List[BettiEntry]:
    masks, sigma = args
    vertices = _bits(sigma)
    nonfaces = [g for g in masks if g & sigma == g]
    homology = reduced_homology_ranks(_faces_by_dim(vertices, nonfaces))
    key = tuple(v + 1 for v in vertices)
    return [(len(vertices) - k - 1, key, value) for k, value in homology.items()]


def lcm_lattice(masks: typing.Iterable[int]) -> typing.List[int]:
    """All unions of generator supports, the empty union included"""
    lattice = {0}
    for g in masks:
        lattice |= {member | g for member in lattice}
    return sorted(lattice, key=lambda m: (bin(m).count("1"), m))


@functools.lru_cache(maxsize=1024)
def _betti_entries(masks: typing.Tuple[int, ...], threads: int) -> typing.Tuple[BettiEntry, ...]:
    sigmas = [sigma for sigma in lcm_lattice(masks) if sigma]
    logger.debug("Hochster computation over %d lcm lattice members", len(sigmas))
    jobs = [(masks, sigma) for sigma in sigmas]
    if threads > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(_sigma_betti, jobs))
    else:
        parts = [_sigma_betti(job) for job in jobs]
    entries: typing.List[BettiEntry] = [(0, (), 1)]
    for part in parts:
        entries.extend(part)
    return tuple(entries)


def _check_proper_squarefree(i: MonomialIdeal):
    if not i.is_squarefree:
        raise NotSquarefree(f"ideal {i} is not squarefree")
    if i.is_zero:
        raise ZeroIdeal("Betti numbers of the zero ideal are trivial")
    if i.is_unit:
        raise UnitIdeal("the unit ideal has the zero quotient")


def betti_numbers(i: MonomialIdeal, threads: int = 1) -> BettiTable:
    """Multigraded Betti numbers of ``R/I`` by Hochster's formula"""
    _check_proper_squarefree(i)
    return BettiTable(n=i.n, entries=_betti_entries(i.masks, max(1, threads)))


def projective_dimension(i: MonomialIdeal, threads: int = 1) -> int:
    return betti_numbers(i, threads).pd


def is_acm(i: MonomialIdeal, threads: int = 1) -> bool:
    """Whether ``R/I`` is Cohen-Macaulay, i.e., ``I`` is unmixed with ``pd(R/I) = height``"""
    _check_proper_squarefree(i)
    height, equidimensional = height_and_equidimensional(i)
    if not equidimensional:
        return False
    return projective_dimension(i, threads) == height


def taylor_betti_numbers(
    i: MonomialIdeal, max_generators: typing.Optional[int] = None
) -> BettiTable:
    """Minimal multigraded Betti numbers of ``R/I`` from the Taylor complex

    In each multidegree ``m`` the Taylor complex tensored with the field
    keeps the subsets ``G`` of generators with ``lcm(G) = m`` and the faces
    ``G - g`` of the differential with unchanged lcm.
    """
    _check_proper_squarefree(i)
    cap = settings.MAX_TAYLOR_GENERATORS if max_generators is None else max_generators
    masks = i.masks
    g = len(masks)
    if g > cap:
        raise TooManyGenerators(f"{g} generators exceed the Taylor complex cap {cap}")

    lcms = [0] * (1 << g)
    by_lcm: typing.Dict[int, typing.Dict[int, typing.List[int]]] = collections.defaultdict(
        lambda: collections.defaultdict(list)
    )
    by_lcm[0][0].append(0)
    for subset in range(1, 1 << g):
        low = subset & -subset
        lcms[subset] = lcms[subset ^ low] | masks[low.bit_length() - 1]
        by_lcm[lcms[subset]][bin(subset).count("1")].append(subset)

    entries: typing.List[BettiEntry] = []
    for m in sorted(by_lcm):
        chains = by_lcm[m]
        ranks = {}
        for k in chains:
            if k == 0 or k - 1 not in chains:
                continue
            index = {subset: idx for idx, subset in enumerate(chains[k - 1])}
            columns: typing.Dict[int, typing.Dict[int, int]] = {}
            for col, subset in enumerate(chains[k]):
                entries_col = {}
                for pos, bit in enumerate(_bits(subset)):
                    face = subset & ~(1 << bit)
                    if lcms[face] == m:
                        entries_col[index[face]] = -1 if pos % 2 else 1
                columns[col] = entries_col
            ranks[k] = _rank(columns, len(chains[k - 1]), len(chains[k]))
        for k, subsets in chains.items():
            value = len(subsets) - ranks.get(k, 0) - ranks.get(k + 1, 0)
            if value:
                entries.append((k, tuple(v + 1 for v in _bits(m)), value))
    return BettiTable(n=i.n, entries=entries)


def taylor_pd_oracle(i: MonomialIdeal, max_generators: typing.Optional[int] = None) -> int:
    return taylor_betti_numbers(i, max_generators).pd


def betti_numerator(table: BettiTable) -> sympy.Poly:
    """``Σ (-1)^i β_{i,σ} t^{|σ|}``, the Hilbert numerator by the Euler characteristic"""
    result = sympy.Poly(0, T)
    for i, sigma, value in table.entries:
        result += sympy.Poly((-1) ** i * value * T ** len(sigma), T)
    return result


def describe_acm(i: MonomialIdeal, threads: int = 1) -> typing.Dict[str, typing.Any]:
    """Summary used by reports: height, unmixedness, projective dimension and aCM flag"""
    height, equidimensional = height_and_equidimensional(i)
    pd = projective_dimension(i, threads)
    return {
        "height": height,
        "equidimensional": equidimensional,
        "pd": pd,
        "acm": equidimensional and pd == height,
    }
