"""Log ingestion, per-period aggregation, evaluation and action routing."""

import datetime as dt
import json

import pytest

from symbiosis_kit.graph import build_graph
from symbiosis_kit.model import ActionKind, Aggregation, SourceMode
from symbiosis_kit.parser import parse
from symbiosis_kit.periods import PeriodError
from symbiosis_kit.pipeline import (
    DirectEntry,
    EvaluationResult,
    RawEvent,
    UnresolvedTarget,
    aggregate,
    evaluate_period,
    ingest,
    ingest_lines,
    route_actions,
    route_result,
)

MODEL_SRC = """
stakeholder s { name: "S" }
stakeholder o { name: "O" }
universe org { facets: a }
objective BO1 { object: "x" scope: org.* purpose: "p" viewpoint: o context: "c" }
objective BO2 { refines: BO1 object: "y" scope: org.* purpose: "p" viewpoint: o context: "c" }
goal MG1 { object: "g" scope: "s" purpose: "p" focus: "f" criteria: "c"
           viewpoint: o context: "c" measures: BO2 }
question Q1 { goal: MG1 text: "?" status: answered }
base ev { description: "d" mode: count where: kind = "x" }
base tot { description: "d" mode: direct aggregation: sum }
base g { description: "d" mode: direct aggregation: latest }
metric M {
    description: "d"
    goal: MG1
    answers: Q1
    uses: ev, tot
    method: "m"
    function: (ev / tot) * 100
    domain: [0, 100]
    band: [0, 50) -> low { escalate owner_of(BO2) log s }
    band: [50, 100] -> high { log s }
    schedule: monthly / quarterly
    stakeholders: s
}
metric M2 {
    description: "d"
    goal: MG1
    answers: Q1
    uses: g
    method: "m"
    function: g
    band: [0, 100] -> all { notify ghost }
    schedule: monthly / monthly
    stakeholders: s
}
"""


@pytest.fixture(scope="module")
def model():
    parsed, diags = parse(MODEL_SRC)
    assert not diags
    return parsed


@pytest.fixture(scope="module")
def graph(model):
    return build_graph(model)


def dline(ts: str, base: str, value) -> str:
    return json.dumps({"timestamp": ts, "base": base, "value": value})


def eline(ts: str, **fields) -> str:
    return json.dumps({"timestamp": ts, "fields": fields})


# -- ingestion ---------------------------------------------------------------


def test_good_lines_produce_records(model):
    log = ingest_lines(
        ["", dline("2014-01-05", "tot", 3), "   ", eline("2014-01-06", kind="x")],
        "log", model,
    )
    assert not log.diagnostics
    direct, event = log.records
    assert isinstance(direct, DirectEntry)
    assert (direct.base, direct.value, direct.line) == ("tot", 3.0, 2)
    assert isinstance(event, RawEvent)
    assert event.field_map() == {"kind": "x"}
    assert event.timestamp == dt.date(2014, 1, 6)


@pytest.mark.parametrize(
    "line, code, fragment",
    [
        ("not json at all", "I001", "malformed log line"),
        ("[1, 2]", "I001", "not a JSON object"),
        ('{"timestamp": "2014-01-05", "base": "tot", "value": true}', "I001", "finite number"),
        ('{"timestamp": "2014-01-05", "base": "tot", "value": "9"}', "I001", "finite number"),
        ('{"timestamp": "2014-01-05", "base": "tot", "value": NaN}', "I001", "non-finite"),
        ('{"timestamp": "2014-01-05", "base": "tot", "value": Infinity}', "I001", "non-finite"),
        ('{"timestamp": "2014-01-05"}', "I001", "exactly one of"),
        (dline("2014-01-05", "tot", 1)[:-1] + ', "fields": {}}', "I001", "exactly one of"),
        ('{"timestamp": "2014-01-05", "fields": {"a": 1}}', "I001", "strings to strings"),
        ('{"base": "tot", "value": 1}', "I003", "invalid date"),
        (dline("2014-13-01", "tot", 1), "I003", "invalid date"),
        (dline("2014-01-05", "nope", 1), "I002", "unknown base"),
        (dline("2014-01-05", "ev", 1), "I002", "not DIRECT mode"),
    ],
)
def test_bad_lines_become_diagnostics(model, line, code, fragment):
    log = ingest_lines([line], "log", model)
    assert not log.records
    assert len(log.diagnostics) == 1
    diag = log.diagnostics[0]
    assert diag.code == code
    assert fragment in diag.message


def test_bad_lines_do_not_block_good_ones(model):
    log = ingest_lines(["garbage", dline("2014-01-05", "tot", 1)], "log", model)
    assert len(log.records) == 1
    assert len(log.diagnostics) == 1
    assert log.diagnostics[0].span.line == 1


def test_ingest_reads_files(model, tmp_path):
    path = tmp_path / "x.jsonl"
    path.write_text(dline("2014-01-05", "tot", 2) + "\n", encoding="utf-8")
    log = ingest(str(path), model)
    assert len(log.records) == 1
    assert not log.diagnostics


# -- aggregation ---------------------------------------------------------------


def test_count_applies_all_filters(model):
    records = ingest_lines(
        [
            eline("2014-01-01", kind="x"),
            eline("2014-01-02", kind="x", extra="ignored"),
            eline("2014-01-03", kind="y"),
            eline("2014-02-01", kind="x"),  # outside the period
        ],
        "log", model,
    ).records
    assert aggregate(records, model.metrics["M"], "2014-01", model)["ev"] == 2.0


def test_count_of_nothing_is_zero_not_missing(model):
    bindings = aggregate((), model.metrics["M"], "2014-01", model)
    assert bindings["ev"] == 0.0
    assert "tot" not in bindings  # DIRECT with no data stays missing


def test_sum_aggregation(model):
    records = ingest_lines(
        [dline("2014-01-05", "tot", 2), dline("2014-01-20", "tot", 3.5)],
        "log", model,
    ).records
    assert aggregate(records, model.metrics["M"], "2014-01", model)["tot"] == 5.5


def test_latest_takes_newest_timestamp_then_file_order(model):
    records = ingest_lines(
        [
            dline("2014-01-20", "g", 10),
            dline("2014-01-05", "g", 99),  # older, ignored
        ],
        "log", model,
    ).records
    assert aggregate(records, model.metrics["M2"], "2014-01", model)["g"] == 10.0

    tied = ingest_lines(
        [dline("2014-01-20", "g", 1), dline("2014-01-20", "g", 2)],
        "log", model,
    ).records
    assert aggregate(tied, model.metrics["M2"], "2014-01", model)["g"] == 2.0


# -- evaluation ---------------------------------------------------------------


def _records(model, lines):
    log = ingest_lines(lines, "log", model)
    assert not log.diagnostics
    return log.records


def test_evaluate_period_success(model, graph):
    records = _records(
        model,
        [eline("2014-01-01", kind="x")] * 30 + [dline("2014-01-31", "tot", 40)],
    )
    result = evaluate_period(model, graph, records, "M", "2014-01")
    assert result.ok
    assert result.value == 75.0
    assert result.band.label == "high"
    assert result.failure is None
    assert result.bindings == (("ev", 30.0), ("tot", 40.0))
    assert result.affected_objectives == ("BO2", "BO1")


def test_evaluate_period_missing_binding_becomes_failure(model, graph):
    result = evaluate_period(model, graph, (), "M", "2014-01")
    assert not result.ok
    assert result.value is None and result.band is None
    assert "tot" in result.failure


def test_evaluate_period_unknown_metric(model, graph):
    with pytest.raises(KeyError):
        evaluate_period(model, graph, (), "NOPE", "2014-01")


def test_evaluate_period_rejects_off_schedule_granularity(model, graph):
    with pytest.raises(PeriodError):
        evaluate_period(model, graph, (), "M", "2014-W05")


def test_density_warnings_flag_empty_collection_periods(model, graph):
    records = _records(
        model,
        [eline("2014-01-01", kind="x"), dline("2014-01-31", "tot", 1)],
    )
    result = evaluate_period(model, graph, records, "M", "2014-Q1")
    assert result.density_warnings == (
        "collection period 2014-02 inside 2014-Q1 has no records for metric M",
        "collection period 2014-03 inside 2014-Q1 has no records for metric M",
    )
    # at collection granularity the period is its own sub-period: no warnings
    monthly = evaluate_period(model, graph, records, "M", "2014-01")
    assert monthly.density_warnings == ()


# -- action routing -----------------------------------------------------------


def test_route_actions_orders_by_urgency_and_resolves_owner_of(model, graph):
    records = _records(
        model,
        [eline("2014-01-01", kind="x"), dline("2014-01-31", "tot", 4)],
    )
    result = evaluate_period(model, graph, records, "M", "2014-01")
    assert result.band.label == "low"  # 25.0
    directives = route_actions(result, model)
    assert [d.kind for d in directives] == [ActionKind.LOG, ActionKind.ESCALATE]
    assert directives[0].stakeholders == ("s",)
    assert directives[1].stakeholders == ("o",)  # owner_of(BO2) -> its viewpoint
    assert "band 'low'" in directives[1].message
    assert "BO2, BO1" in directives[1].message


def test_route_actions_requires_a_band(model):
    result = EvaluationResult(
        metric_id="M", period="2014-01", bindings=(), value=None,
        failure="boom", band=None, affected_objectives=(),
    )
    with pytest.raises(ValueError):
        route_actions(result, model)


def test_route_result_failure_notifies_metric_stakeholders(model, graph):
    result = evaluate_period(model, graph, (), "M", "2014-01")
    directives = route_result(result, model)
    assert len(directives) == 1
    d = directives[0]
    assert d.kind is ActionKind.NOTIFY
    assert d.stakeholders == ("s",)
    assert d.band_label is None
    assert "could not be evaluated" in d.message
    assert "bindings present: ev" in d.message


def test_unresolved_action_target_raises(model):
    band = model.metrics["M2"].bands[0]  # notify ghost
    result = EvaluationResult(
        metric_id="M2", period="2014-01", bindings=(), value=10.0,
        failure=None, band=band, affected_objectives=(),
    )
    with pytest.raises(UnresolvedTarget):
        route_actions(result, model)


def test_owner_of_goal_and_metric_resolve(model):
    src = MODEL_SRC + """
metric M3 {
    description: "d" goal: MG1 answers: Q1 uses: g method: "m" function: g
    band: [0, 100] -> all { escalate owner_of(MG1) escalate owner_of(M) }
    schedule: monthly / monthly
    stakeholders: s
}
"""
    bigger, diags = parse(src)
    assert not diags
    band = bigger.metrics["M3"].bands[0]
    result = EvaluationResult(
        metric_id="M3", period="2014-01", bindings=(), value=5.0,
        failure=None, band=band, affected_objectives=(),
    )
    directives = route_actions(result, bigger)
    assert [d.stakeholders for d in directives] == [("o",), ("s",)]


def test_result_json_shape(model, graph):
    records = _records(
        model,
        [eline("2014-01-01", kind="x"), dline("2014-01-31", "tot", 2)],
    )
    obj = evaluate_period(model, graph, records, "M", "2014-01").to_json_obj()
    assert obj["metric"] == "M"
    assert obj["value"] == 50.0
    assert obj["band"] == "high"
    assert obj["bindings"] == {"ev": 1.0, "tot": 2.0}
    json.dumps(obj)  # must be serializable as-is
