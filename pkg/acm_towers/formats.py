"""JSON records for inputs and reports, and the report envelope.

The records mirror the documented JSON schemas one to one and are
structured/unstructured with ``cattrs``.  Each record converts to and from
the corresponding domain type.
"""

import hashlib
import json
import typing

import attrs
import cattrs

from acm_towers import settings
from acm_towers.errors import InputError
from acm_towers.gentower import GTSDecomposition, TowerizationWitness
from acm_towers.hilbert_burch import (
    CharacterizationReport,
    MuStep,
    Orientation,
    StandardFormMatrix,
    USets,
)
from acm_towers.monomial import Monomial, MonomialIdeal, PrimeSupport, minimize
from acm_towers.resolution import BettiTable
from acm_towers.tower import DegreeTable, LeftSegment, PointSet


class MalformedInput(InputError):
    """Input is not valid JSON or does not follow the schema"""


#: Type variable for the record classes.
RecordT = typing.TypeVar("RecordT")


def load_record(data: typing.Union[str, bytes], cls: typing.Type[RecordT]) -> RecordT:
    """Parse JSON ``data`` and structure it as ``cls``"""
    try:
        return cattrs.structure(json.loads(data), cls)
    except (json.JSONDecodeError, cattrs.BaseValidationError, KeyError, TypeError) as e:
        raise MalformedInput(f"input does not follow the {cls.__name__} schema: {e}") from e


def monomial_to_json(m: Monomial) -> typing.List[int]:
    return list(m.exponents)


@attrs.frozen
class IdealRecord:
    """``{"n", "generators"}`` with exponent vectors or ``{"n", "supports"}`` with variable sets"""

    #: Number of variables
    n: int
    #: Exponent vectors of the generators
    generators: typing.Optional[typing.List[typing.List[int]]] = None
    #: Squarefree shorthand, 1-based variable indices of the generators
    supports: typing.Optional[typing.List[typing.List[int]]] = None

    def to_domain(self) -> MonomialIdeal:
        if (self.generators is None) == (self.supports is None):
            raise MalformedInput("give exactly one of 'generators' and 'supports'")
        if self.supports is not None:
            gens = [Monomial.from_support(self.n, s) for s in self.supports]
        else:
            gens = [Monomial(e) for e in self.generators or []]
        return minimize(gens, n=self.n)

    @classmethod
    def from_domain(cls, i: MonomialIdeal) -> "IdealRecord":
        return cls(n=i.n, generators=[monomial_to_json(g) for g in i.generators])


@attrs.frozen
class SupportRecord:
    """``{"n": int, "c": int, "primes": [[var, ...], ...]}``"""

    #: Number of variables
    n: int
    #: Codimension
    c: int
    #: Variable sets of the minimal primes
    primes: typing.List[typing.List[int]]

    def to_domain(self) -> PrimeSupport:
        return PrimeSupport(n=self.n, c=self.c, members=[frozenset(p) for p in self.primes])

    @classmethod
    def from_domain(cls, s: PrimeSupport) -> "SupportRecord":
        return cls(n=s.n, c=s.c, primes=[sorted(m) for m in s.members])


@attrs.frozen
class PointSetRecord:
    """``{"c": int, "points": [[int, ...], ...]}``"""

    #: Dimension
    c: int
    #: The points
    points: typing.List[typing.List[int]]

    def to_domain(self, starred: bool = False) -> PointSet:
        return PointSet(c=self.c, points=self.points, starred=starred)

    @classmethod
    def from_domain(cls, p: PointSet) -> "PointSetRecord":
        return cls(c=p.c, points=[list(x) for x in p.sorted_points])


@attrs.frozen
class DegreeTableRecord:
    """``{"degrees": [[d_i1, ...], ...]}``"""

    #: One row of degrees per family
    degrees: typing.List[typing.List[int]]

    def to_domain(self) -> DegreeTable:
        return DegreeTable(degrees=self.degrees)


@attrs.frozen
class SegmentRecord:
    """A left segment with its maximal elements and size"""

    #: The points
    points: PointSetRecord
    #: Maximal elements
    generators: typing.List[typing.List[int]]
    #: Coordinatewise maxima
    size: typing.List[int]

    @classmethod
    def from_domain(cls, l: LeftSegment) -> "SegmentRecord":
        return cls(
            points=PointSetRecord.from_domain(l.points),
            generators=[list(g) for g in sorted(l.generators)],
            size=list(l.size),
        )


@attrs.frozen
class GtsRecord:
    """``{"S": pointset, "T": pointset, "S0": pointset}``; ``S`` is optional on input"""

    #: Tower part
    T: PointSetRecord
    #: Residual part
    S0: PointSetRecord
    #: Union of both parts
    S: typing.Optional[PointSetRecord] = None

    def to_domain(self) -> GTSDecomposition:
        result = GTSDecomposition(t=self.T.to_domain(), s0=self.S0.to_domain())
        if self.S is not None and self.S.to_domain().points != result.s.points:
            raise MalformedInput("S is not the union of T and S0")
        return result

    @classmethod
    def from_domain(cls, d: GTSDecomposition) -> "GtsRecord":
        return cls(
            T=PointSetRecord.from_domain(d.t),
            S0=PointSetRecord.from_domain(d.s0),
            S=PointSetRecord.from_domain(d.s),
        )


@attrs.frozen
class MatrixEntryRecord:
    """Off-diagonal entry ``M_col`` at row ``σ(col)``"""

    #: Column, 1-based
    col: int
    #: Row, 0-based
    row: int
    #: Exponent vector
    mono: typing.List[int]


@attrs.frozen
class MatrixRecord:
    """``{"r": int, "D": [monomial, ...], "M": [{"col", "row", "mono"}, ...]}``"""

    #: Number of columns
    r: int
    #: Diagonal entries
    D: typing.List[typing.List[int]]
    #: Off-diagonal entries
    M: typing.List[MatrixEntryRecord]

    def to_domain(self) -> StandardFormMatrix:
        if len(self.D) != self.r or sorted(e.col for e in self.M) != list(range(1, self.r + 1)):
            raise MalformedInput(f"need {self.r} diagonal entries and one M entry per column")
        diagonal = [Monomial(e) for e in self.D]
        entries = sorted(self.M, key=lambda e: e.col)
        return StandardFormMatrix(
            n=diagonal[0].n if diagonal else 0,
            diagonal=diagonal,
            off_diagonal=[(e.row, Monomial(e.mono)) for e in entries],
        )

    @classmethod
    def from_domain(cls, m: StandardFormMatrix) -> "MatrixRecord":
        return cls(
            r=m.r,
            D=[monomial_to_json(d) for d in m.diagonal],
            M=[
                MatrixEntryRecord(col=j, row=row, mono=monomial_to_json(mono))
                for j, (row, mono) in enumerate(m.off_diagonal, start=1)
            ],
        )


@attrs.frozen
class BettiEntryRecord:
    """One multigraded Betti number"""

    #: Homological index
    i: int
    #: Multidegree as sorted variable indices
    sigma: typing.List[int]
    #: The Betti number
    value: int


@attrs.frozen
class BettiRecord:
    """``{"betti": [{"i", "sigma", "value"}, ...], "pd": int}``"""

    #: Nonzero entries
    betti: typing.List[BettiEntryRecord]
    #: Projective dimension
    pd: int

    @classmethod
    def from_domain(cls, table: BettiTable) -> "BettiRecord":
        return cls(
            betti=[BettiEntryRecord(i=i, sigma=list(s), value=v) for i, s, v in table.entries],
            pd=table.pd,
        )


@attrs.frozen
class OmegaRecord:
    """A support member with its chosen orientation"""

    #: The member, sorted
    pair: typing.List[int]
    #: The ordered pair
    orientation: typing.List[int]


@attrs.frozen
class WitnessRecord:
    """``{"tau": [pairs], "omega": [[pair, orientation], ...]}``"""

    #: ``(from, to)`` pairs of the permutation
    tau: typing.List[typing.List[int]]
    #: Orientation of every member
    omega: typing.List[OmegaRecord]
    #: Image point set
    image: typing.Optional[PointSetRecord] = None
    #: Decomposition of the image, if searched for a generalized tower set
    decomposition: typing.Optional[GtsRecord] = None

    @classmethod
    def from_domain(cls, w: TowerizationWitness) -> "WitnessRecord":
        return cls(
            tau=[list(p) for p in w.tau],
            omega=[
                OmegaRecord(pair=sorted(member), orientation=list(oriented))
                for member, oriented in w.omega
            ],
            image=PointSetRecord.from_domain(w.image),
            decomposition=GtsRecord.from_domain(w.decomposition) if w.decomposition else None,
        )


def u_sets_to_json(sets: USets) -> typing.Dict[str, typing.Any]:
    return {
        "u_prime": [sorted(m) for m in sets.u_prime.members],
        "u_double": [sorted(m) for m in sets.u_double.members],
    }


def mu_table_to_json(
    levels: typing.Sequence[typing.Mapping[int, MuStep]]
) -> typing.List[typing.Dict[str, typing.Any]]:
    return [
        {
            "level": step.level,
            "col": col,
            "mu": step.mu,
            "bound": step.bound,
            "pairs": [list(p) for p in step.pairs],
        }
        for level in levels
        for col, step in sorted(level.items())
    ]


def orientation_to_json(o: Orientation) -> typing.Dict[str, typing.Any]:
    return {
        "omega": [
            cattrs.unstructure(OmegaRecord(pair=sorted(member), orientation=list(oriented)))
            for member, oriented in o.omega
        ],
        "tower_bar": cattrs.unstructure(PointSetRecord.from_domain(o.tower_bar)),
        "residual_bar": cattrs.unstructure(PointSetRecord.from_domain(o.residual_bar)),
        "tau": [list(p) for p in o.tau],
        "gts": cattrs.unstructure(GtsRecord.from_domain(o.decomposition)),
    }


def characterization_to_json(report: CharacterizationReport) -> typing.Dict[str, typing.Any]:
    """Every stage of the characterization pipeline, keyed by stage"""
    result: typing.Dict[str, typing.Any] = {
        "ideal": cattrs.unstructure(IdealRecord.from_domain(report.ideal)),
        "height": report.height,
        "equidimensional": report.equidimensional,
        "pd": report.pd,
        "acm": report.acm,
        "generalized_towerizable": report.generalized_towerizable,
        "note": report.note,
    }
    if report.matrix is not None:
        result["matrix"] = cattrs.unstructure(MatrixRecord.from_domain(report.matrix))
    if report.u_sets is not None:
        result["u_sets"] = u_sets_to_json(report.u_sets)
    if report.orientation is not None:
        result["orientation"] = orientation_to_json(report.orientation)
    if report.families is not None:
        f1, f2 = report.families
        result["families"] = {
            "f1": [monomial_to_json(f) for f in f1],
            "f2": [monomial_to_json(f) for f in f2],
        }
    if report.rebuilt is not None:
        result["rebuilt"] = cattrs.unstructure(IdealRecord.from_domain(report.rebuilt))
    return result


def sha256_hex(data: typing.Union[str, bytes]) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


@attrs.frozen
class Report:
    """Envelope around every command result"""

    #: Schema version of inputs and reports
    schema_version: str
    #: Command that produced the report, e.g. ``"tower check"``
    command: str
    #: SHA-256 of the input bytes
    input_sha256: str
    #: Command specific payload
    result: typing.Any


def make_report(command: str, input_data: typing.Union[str, bytes], result: typing.Any) -> Report:
    if attrs.has(type(result)):
        result = cattrs.unstructure(result)
    return Report(
        schema_version=settings.SCHEMA_VERSION,
        command=command,
        input_sha256=sha256_hex(input_data),
        result=result,
    )


def render_report(report: Report, compact: bool = False) -> str:
    """Deterministic JSON text of ``report``"""
    payload = cattrs.unstructure(report)
    if compact:
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return json.dumps(payload, sort_keys=True, indent=2)


def betti_tsv(table: BettiTable) -> str:
    """Graded Betti table as ``i``, ``j`` and value columns"""
    lines = ["i\tj\tvalue"]
    for (i, j), value in sorted(table.graded().items()):
        lines.append(f"{i}\t{j}\t{value}")
    return "\n".join(lines)


def h_vector_tsv(h: typing.Sequence[int]) -> str:
    lines = ["i\th_i"]
    lines.extend(f"{i}\t{value}" for i, value in enumerate(h))
    return "\n".join(lines)


#: Records documented by ``utils dump-schemas``, keyed by schema name.
SCHEMAS: typing.Dict[str, type] = {
    "ideal": IdealRecord,
    "support": SupportRecord,
    "pointset": PointSetRecord,
    "degree_table": DegreeTableRecord,
    "segment": SegmentRecord,
    "gts": GtsRecord,
    "matrix": MatrixRecord,
    "matrix_entry": MatrixEntryRecord,
    "betti": BettiRecord,
    "betti_entry": BettiEntryRecord,
    "witness": WitnessRecord,
    "omega": OmegaRecord,
    "report": Report,
}


def _type_name(tp: typing.Any) -> str:
    if isinstance(tp, type):
        return tp.__name__
    return str(tp).replace("typing.", "")


def schema_description() -> typing.Dict[str, typing.Any]:
    """Field names, types and descriptions of every documented record"""
    records = {}
    for name, cls in SCHEMAS.items():
        records[name] = {
            "doc": (cls.__doc__ or "").strip(),
            "fields": {
                field.name: {
                    "type": _type_name(field.type),
                    "required": field.default is attrs.NOTHING,
                }
                for field in attrs.fields(cls)
            },
        }
    return {"schema_version": settings.SCHEMA_VERSION, "records": records}
