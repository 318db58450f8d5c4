import json

import pytest

from acm_towers import formats
from acm_towers.gentower import GTSDecomposition
from acm_towers.hilbert_burch import StandardFormMatrix, verify_characterization
from acm_towers.monomial import Monomial, minimize
from acm_towers.resolution import betti_numbers
from acm_towers.tower import PointSet


def read(name):
    with open(f"tests/data/cli/{name}", "rt") as inputf:
        return inputf.read()


def test_load_ideal_from_supports():
    ideal = formats.load_record(read("six_point_ideal.json"), formats.IdealRecord).to_domain()
    assert ideal.n == 6
    assert len(ideal.generators) == 4
    record = formats.IdealRecord.from_domain(ideal)
    assert record.generators[0] == [1, 0, 1, 0, 0, 1]
    assert record.supports is None


def test_ideal_record_needs_exactly_one_form():
    with pytest.raises(formats.MalformedInput):
        formats.IdealRecord(n=2).to_domain()
    with pytest.raises(formats.MalformedInput):
        formats.IdealRecord(n=2, generators=[[1, 0]], supports=[[1]]).to_domain()


def test_load_record_errors():
    with pytest.raises(formats.MalformedInput):
        formats.load_record(read("malformed.json"), formats.PointSetRecord)
    with pytest.raises(formats.MalformedInput):
        formats.load_record('{"c": 2}', formats.PointSetRecord)
    with pytest.raises(ValueError):
        formats.load_record('{"points": "nope", "c": 2}', formats.PointSetRecord)


def test_support_record():
    support = formats.load_record(read("six_point_support.json"), formats.SupportRecord)
    domain = support.to_domain()
    assert len(domain) == 6
    assert formats.SupportRecord.from_domain(domain).primes[0] == [1, 2]


def test_gts_record():
    record = formats.load_record(read("chain_gts.json"), formats.GtsRecord)
    d = record.to_domain()
    assert d == GTSDecomposition.of([(3, 1), (4, 1), (4, 2), (4, 3), (6, 1)], [(5, 3)])
    assert formats.GtsRecord.from_domain(d).S.points[-1] == [6, 1]


def test_gts_record_checks_union():
    record = formats.GtsRecord(
        T=formats.PointSetRecord(c=2, points=[[2, 1]]),
        S0=formats.PointSetRecord(c=2, points=[]),
        S=formats.PointSetRecord(c=2, points=[[2, 1], [3, 1]]),
    )
    with pytest.raises(formats.MalformedInput):
        record.to_domain()


def test_matrix_record():
    m = formats.load_record(read("six_point_matrix.json"), formats.MatrixRecord).to_domain()
    assert isinstance(m, StandardFormMatrix)
    assert m.sigma(3) == 1
    assert m.m_entry(2) == Monomial.variable(6, 3)
    record = formats.MatrixRecord.from_domain(m)
    assert [e.row for e in record.M] == [0, 1, 1]
    with pytest.raises(formats.MalformedInput):
        formats.MatrixRecord(r=2, D=[[1, 0]], M=[]).to_domain()


def test_betti_record_and_tsv():
    table = betti_numbers(minimize([Monomial.variable(2, 1), Monomial.variable(2, 2)]))
    record = formats.BettiRecord.from_domain(table)
    assert record.pd == 2
    assert formats.betti_tsv(table).splitlines() == ["i\tj\tvalue", "0\t0\t1", "1\t1\t2", "2\t2\t1"]
    assert formats.h_vector_tsv((1, 2)).splitlines() == ["i\th_i", "0\t1", "1\t2"]


def test_characterization_to_json():
    ideal = formats.load_record(read("six_point_ideal.json"), formats.IdealRecord).to_domain()
    payload = formats.characterization_to_json(verify_characterization(ideal))
    assert payload["acm"] is True
    assert payload["u_sets"]["u_prime"] == [[2, 3]]
    assert payload["orientation"]["gts"]["S0"]["points"] == [[5, 3]]
    assert payload["families"]["f2"][0] == [0, 0, 0, 0, 0, 1]
    json.dumps(payload)


def test_render_report_is_deterministic():
    data = read("single_point.json")
    points = PointSet(c=2, points=[(5, 7)])
    report = formats.make_report("tower check", data, formats.PointSetRecord.from_domain(points))
    assert report.schema_version == "1"
    assert report.input_sha256 == formats.sha256_hex(data.encode("utf-8"))
    compact = formats.render_report(report, compact=True)
    assert "\n" not in compact
    assert json.loads(compact) == json.loads(formats.render_report(report))
    assert json.loads(compact)["result"] == {"c": 2, "points": [[5, 7]]}


def test_schema_description():
    description = formats.schema_description()
    assert description["schema_version"] == "1"
    assert description["records"]["ideal"]["fields"]["n"]["required"] is True
    assert description["records"]["ideal"]["fields"]["supports"]["required"] is False
    assert set(description["records"]) == set(formats.SCHEMAS)

