import json
from fractions import Fraction

import pytest

from aperylimits.apery import AperyProblem, limit_report
from aperylimits.catalog import Catalog, CatalogEntry, CatalogParseError, content_hash
from aperylimits.cli import main
from aperylimits.hyperterm import franel, row_sum_jet
from aperylimits.recurrence import Recurrence

F = Fraction


def test_catalog_append_and_hash_idempotence(tmp_path):
    cat = Catalog(tmp_path / "cat.jsonl")
    entry = CatalogEntry(
        term={"P": [["1"]], "num": [], "den": [], "x": "1"},
        spec={"s": 3, "r": 2, "a": "1"},
        recurrence={"order": 1, "coeffs": [[1]], "rhs": "zero"},
        init_a=["0"],
        init_b=["1"],
    )
    assert cat.append(entry)
    assert not cat.append(entry)
    assert len(cat.entries()) == 1


def test_catalog_query_filters(tmp_path):
    cat = Catalog(tmp_path / "cat.jsonl")
    for s in (3, 4):
        cat.append(
            CatalogEntry(
                term={"P": [["1"]], "num": [], "den": [], "x": "1"},
                spec={"s": s, "r": 2, "a": "1"},
                recurrence={"order": 1, "coeffs": [[s]], "rhs": "zero"},
                init_a=[],
                init_b=[],
                constant="zeta2" if s == 3 else None,
            )
        )
    assert len(cat.query(s=3)) == 1
    assert len(cat.query(constant="zeta2")) == 1
    assert cat.query(constant="zeta5") == []
    h = cat.entries()[0].hash
    assert [e.hash for e in cat.query(content=h)] == [h]


def test_catalog_parse_error_names_offset(tmp_path):
    path = tmp_path / "bad.jsonl"
    good = json.dumps(
        CatalogEntry(
            term={}, spec=None, recurrence={}, init_a=[], init_b=[]
        ).to_json()
    )
    path.write_text(good + "\n{broken\n")
    with pytest.raises(CatalogParseError) as err:
        Catalog(path).entries()
    assert err.value.offset == len(good) + 1
    assert "byte" in str(err.value)


def test_empty_catalog_queries_empty(tmp_path):
    cat = Catalog(tmp_path / "missing.jsonl")
    assert cat.entries() == []
    assert cat.query(constant="zeta2") == []


def test_cli_bench(capsys):
    assert main(["bench-zeta3", "--N", "8", "--digits", "30", "--trace"]) == 0
    out = capsys.readouterr().out
    assert "1, 5, 73, 1445, 33001" in out
    assert "digits_stable" in out


def test_cli_bench_no_iterations(capsys):
    assert main(["bench-zeta3", "--N", "0", "--digits", "30"]) == 0
    out = capsys.readouterr().out
    assert "digits_stable: 0" in out
    assert "no iterations" in out


def test_cli_pipeline_and_catalog_roundtrip(tmp_path, capsys):
    cat = str(tmp_path / "cat.jsonl")
    code = main(
        ["pipeline", "--s", "3", "--r", "2", "--a", "1", "--N", "60",
         "--digits", "50", "--catalog", cat, "--basis", "1", "zeta2"]
    )
    assert code == 0
    first = capsys.readouterr().out
    assert "catalogued" in first

    # idempotence: the second run appends nothing
    assert main(
        ["pipeline", "--s", "3", "--r", "2", "--a", "1", "--N", "60",
         "--digits", "50", "--catalog", cat, "--basis", "1", "zeta2"]
    ) == 0
    second = capsys.readouterr().out
    assert "already catalogued" in second
    entries = Catalog(cat).entries()
    assert len(entries) == 1

    # replay: recurrence + inits reproduce the recorded digits exactly
    e = entries[0]
    problem = AperyProblem(
        Recurrence.from_json(e.recurrence),
        [F(v) for v in e.init_a],
        [F(v) for v in e.init_b],
    )
    replay = limit_report(problem, e.provenance["N"], e.provenance["precision"])
    assert replay.limit.decimal() == e.limit_digits
    assert e.constant == "zeta2"


def test_cli_pipeline_zero_limit(tmp_path, capsys):
    cat = str(tmp_path / "cat.jsonl")
    code = main(
        ["pipeline", "--s", "3", "--r", "1", "--a", "1", "--N", "40",
         "--digits", "40", "--catalog", cat, "--basis", "1", "zeta2"]
    )
    assert code == 0
    entry = Catalog(cat).entries()[0]
    assert float(entry.limit_digits) == 0.0


def test_cli_pipeline_rejects_bad_spec(tmp_path):
    code = main(
        ["pipeline", "--s", "3", "--r", "3", "--a", "1",
         "--catalog", str(tmp_path / "c.jsonl")]
    )
    assert code == 2


def test_cli_transform(capsys):
    assert main(["transform", "--s", "3", "--n", "1", "--order", "2"]) == 0
    got = json.loads(capsys.readouterr().out)
    jet = row_sum_jet(franel(3), 1, 2)
    assert got["coeffs"] == [str(c) for c in jet.coeffs]


def test_cli_guess(tmp_path, capsys):
    seq = tmp_path / "seq.json"
    seq.write_text(json.dumps([2**n for n in range(15)]))
    assert main(["guess", "--seq", str(seq), "--order", "2", "--degree", "1"]) == 0
    got = json.loads(capsys.readouterr().out)
    assert got == {"order": 1, "coeffs": [[-2], [1]], "rhs": "zero"}


def test_cli_zeilberger(capsys):
    assert main(["zeilberger", "--s", "2", "--order", "3"]) == 0
    got = json.loads(capsys.readouterr().out)
    assert got == {"order": 1, "coeffs": [[-2, -4], [1, 1]], "rhs": "zero"}


def test_cli_zeilberger_order_exceeded(capsys):
    assert main(["zeilberger", "--s", "3", "--order", "1"]) == 6


def test_cli_identify(capsys):
    value = "1.6449340668482264364724151666460251892189499012068"
    assert main(["identify", "--value", value, "--digits", "30",
                 "--basis", "1", "zeta2"]) == 0
    got = json.loads(capsys.readouterr().out)
    assert got["coeffs"] in ([1, 0, -1], [-1, 0, 1])


def test_cli_identify_insufficient_precision():
    assert main(["identify", "--value", "1.5", "--digits", "10"]) == 5


def test_cli_catalog_corrupt_file(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{nope\n")
    assert main(["catalog", "--catalog", str(bad)]) == 2


def test_cli_pipeline_divisibility_exit_code(tmp_path, monkeypatch):
    import aperylimits.divisibility as D

    def failing_check(term, rec, n_max, order=None):
        return D.DivisibilityReport(3, F(1), 5, n_max, 1, 4, False)

    monkeypatch.setattr(D, "valuation_check", failing_check)
    cat = str(tmp_path / "cat.jsonl")
    code = main(
        ["pipeline", "--s", "3", "--r", "2", "--a", "1", "--N", "20",
         "--digits", "40", "--catalog", cat]
    )
    assert code == 3
    entries = Catalog(cat).entries()
    assert entries and entries[0].failed_stage == "divisibility"


def test_cli_pipeline_nonconvergent_exit_code(tmp_path, monkeypatch):
    import aperylimits.cli as cli_mod

    real = cli_mod.limit_report

    def flat_report(problem, n_max, precision):
        report = real(problem, n_max, precision)
        return type(report)(report.n_used, report.limit, None, None, 0, "non-convergent")

    monkeypatch.setattr(cli_mod, "limit_report", flat_report)
    code = main(
        ["pipeline", "--s", "3", "--r", "2", "--a", "1", "--N", "20",
         "--digits", "40", "--catalog", str(tmp_path / "cat.jsonl")]
    )
    assert code == 4


def test_content_hash_stability():
    h1 = content_hash({"x": "1"}, {"s": 3}, {"order": 1})
    h2 = content_hash({"x": "1"}, {"s": 3}, {"order": 1})
    h3 = content_hash({"x": "2"}, {"s": 3}, {"order": 1})
    assert h1 == h2 != h3
