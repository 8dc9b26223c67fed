"""Measurement ingestion, aggregation, evaluation and action routing.

Logs are JSON Lines. Two record shapes:

    {"timestamp": "2014-09-03", "base": "bm_days_since_review", "value": 40}
    {"timestamp": "2014-09-03", "fields": {"event": "training", "status": "completed"}}

The first feeds DIRECT base measurements, the second raw events counted by
COUNT bases. Bad lines become I-diagnostics; good lines still flow.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass

from . import evaluator, periods
from .diagnostics import Diagnostic, Severity, SourceSpan, sort_key
from .evaluator import EvaluationError
from .expr import to_text
from .graph import TraceabilityGraph, objective_ancestors_ordered
from .model import (
    ActionKind,
    Aggregation,
    BaseMeasurementDef,
    InterpretationBand,
    MetricDef,
    Model,
    SourceMode,
)

_E = Severity.ERROR


@dataclass(frozen=True, slots=True)
class DirectEntry:
    """One reported value for a DIRECT base measurement."""

    timestamp: dt.date
    base: str
    value: float
    line: int  # 1-based line in the log; later lines win LATEST ties


@dataclass(frozen=True, slots=True)
class RawEvent:
    """One raw log event, counted by COUNT bases via field filters."""

    timestamp: dt.date
    fields: tuple[tuple[str, str], ...]
    line: int

    def field_map(self) -> dict[str, str]:
        return dict(self.fields)


MeasurementRecord = DirectEntry | RawEvent


@dataclass(frozen=True)
class MeasurementLog:
    records: tuple[MeasurementRecord, ...]
    diagnostics: tuple[Diagnostic, ...]


def _bad_line(filename: str, line_no: int, message: str, code: str = "I001") -> Diagnostic:
    span = SourceSpan(filename, line_no, 1)
    return Diagnostic(code, _E, message, span, None)


def _parse_timestamp(text: object) -> dt.date:
    if not isinstance(text, str):
        raise ValueError(f"timestamp must be a string, got {type(text).__name__}")
    return dt.date.fromisoformat(text)


def ingest_lines(lines: list[str], filename: str, model: Model) -> MeasurementLog:
    records: list[MeasurementRecord] = []
    diags: list[Diagnostic] = []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            obj = json.loads(
                stripped,
                parse_constant=_reject_constant,
            )
        except ValueError as exc:
            diags.append(_bad_line(filename, line_no, f"malformed log line: {exc}"))
            continue
        if not isinstance(obj, dict):
            diags.append(_bad_line(filename, line_no, "malformed log line: not a JSON object"))
            continue

        try:
            timestamp = _parse_timestamp(obj.get("timestamp"))
        except ValueError as exc:
            diags.append(_bad_line(filename, line_no, f"invalid date: {exc}", code="I003"))
            continue

        has_base = "base" in obj
        has_fields = "fields" in obj
        if has_base == has_fields:
            diags.append(
                _bad_line(
                    filename,
                    line_no,
                    "malformed log line: need exactly one of 'base' or 'fields'",
                )
            )
            continue

        if has_base:
            base_id = obj["base"]
            value = obj.get("value")
            if not isinstance(base_id, str):
                diags.append(_bad_line(filename, line_no, "malformed log line: 'base' must be a string"))
                continue
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                diags.append(
                    _bad_line(filename, line_no, "malformed log line: 'value' must be a finite number")
                )
                continue
            base_def = model.bases.get(base_id)
            if base_def is None:
                diags.append(
                    _bad_line(filename, line_no, f"unknown base measurement {base_id!r}", code="I002")
                )
                continue
            if base_def.mode is not SourceMode.DIRECT:
                diags.append(
                    _bad_line(
                        filename,
                        line_no,
                        f"base measurement {base_id!r} is not DIRECT mode and cannot take reported values",
                        code="I002",
                    )
                )
                continue
            records.append(DirectEntry(timestamp, base_id, float(value), line_no))
        else:
            fields = obj["fields"]
            if not isinstance(fields, dict) or not all(
                isinstance(k, str) and isinstance(v, str) for k, v in fields.items()
            ):
                diags.append(
                    _bad_line(
                        filename,
                        line_no,
                        "malformed log line: 'fields' must map strings to strings",
                    )
                )
                continue
            records.append(RawEvent(timestamp, tuple(sorted(fields.items())), line_no))
    return MeasurementLog(tuple(records), tuple(sorted(diags, key=sort_key)))


def _reject_constant(name: str) -> float:
    raise ValueError(f"non-finite number {name} is not allowed")


def ingest(path: str, model: Model) -> MeasurementLog:
    with open(path, encoding="utf-8") as handle:
        return ingest_lines(handle.read().splitlines(), path, model)


def ingest_many(paths: list[str], model: Model) -> MeasurementLog:
    records: list[MeasurementRecord] = []
    diags: list[Diagnostic] = []
    for path in paths:
        log = ingest(path, model)
        records.extend(log.records)
        diags.extend(log.diagnostics)
    return MeasurementLog(tuple(records), tuple(sorted(diags, key=sort_key)))


# -- aggregation --------------------------------------------------------------


def _aggregate_base(
    base: BaseMeasurementDef,
    records: tuple[MeasurementRecord, ...],
    period: str,
) -> float | None:
    """Aggregate one base over one period; None when no in-period data."""
    if base.mode is SourceMode.COUNT:
        count = 0
        for record in records:
            if not isinstance(record, RawEvent):
                continue
            if not periods.period_contains(period, record.timestamp):
                continue
            fields = record.field_map()
            if all(fields.get(name) == value for name, value in base.filters):
                count += 1
        return float(count)

    entries = [
        record
        for record in records
        if isinstance(record, DirectEntry)
        and record.base == base.id
        and periods.period_contains(period, record.timestamp)
    ]
    if not entries:
        return None
    if base.aggregation is Aggregation.SUM:
        return float(sum(entry.value for entry in entries))
    # LATEST: maximal timestamp; equal timestamps resolved by file order
    best = max(entries, key=lambda e: (e.timestamp, e.line))
    return best.value


def aggregate(
    records: tuple[MeasurementRecord, ...],
    metric: MetricDef,
    period: str,
    model: Model,
) -> dict[str, float]:
    """Bindings for the metric's bases over one period.

    Bases with no in-period data are absent; evaluation then reports
    MissingBinding rather than inventing a zero.
    """
    bindings: dict[str, float] = {}
    for base_id in metric.uses:
        base = model.bases.get(base_id)
        if base is None:
            continue  # validation reports V002; don't crash mid-pipeline
        value = _aggregate_base(base, records, period)
        if value is not None:
            bindings[base_id] = value
    return bindings


# -- evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class EvaluationResult:
    metric_id: str
    period: str
    bindings: tuple[tuple[str, float], ...]
    value: float | None
    failure: str | None
    band: InterpretationBand | None
    affected_objectives: tuple[str, ...]
    density_warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.failure is None

    def to_json_obj(self) -> dict:
        return {
            "metric": self.metric_id,
            "period": self.period,
            "bindings": {name: value for name, value in self.bindings},
            "value": self.value,
            "failure": self.failure,
            "band": self.band.label if self.band else None,
            "affected_objectives": list(self.affected_objectives),
            "density_warnings": list(self.density_warnings),
        }


def _density_warnings(
    metric: MetricDef,
    records: tuple[MeasurementRecord, ...],
    period: str,
    model: Model,
) -> tuple[str, ...]:
    """Collection sub-periods of `period` with zero metric-relevant records.

    Only meaningful when evaluating at reporting granularity; a single
    collection period is its own (trivially checked) sub-period.
    """
    schedule = metric.schedule
    if schedule is None:
        return ()
    try:
        subkeys = periods.subperiods(period, schedule.collection)
    except periods.PeriodError:
        return ()
    if subkeys == [period]:
        return ()
    base_defs = [model.bases[b] for b in metric.uses if b in model.bases]
    warnings: list[str] = []
    for subkey in subkeys:
        any_data = False
        for base in base_defs:
            value = _aggregate_base(base, records, subkey)
            if value is not None and not (base.mode is SourceMode.COUNT and value == 0.0):
                any_data = True
                break
        if not any_data:
            warnings.append(
                f"collection period {subkey} inside {period} has no records for metric {metric.id}"
            )
    return tuple(warnings)


def evaluate_period(
    model: Model,
    graph: TraceabilityGraph,
    records: tuple[MeasurementRecord, ...],
    metric_id: str,
    period: str,
) -> EvaluationResult:
    metric = model.metrics.get(metric_id)
    if metric is None:
        raise KeyError(f"unknown metric {metric_id!r}")
    granularity, period = periods.parse_period_key(period)
    if metric.schedule is not None:
        allowed = {metric.schedule.collection, metric.schedule.reporting}
        if granularity not in allowed:
            raise periods.PeriodError(
                f"period {period!r} is {granularity.value}; metric {metric_id!r} "
                f"runs on {metric.schedule.notation()}"
            )

    bindings = aggregate(records, metric, period, model)
    affected = tuple(objective_ancestors_ordered(graph, metric_id))
    density = _density_warnings(metric, records, period, model)

    value: float | None = None
    failure: str | None = None
    band: InterpretationBand | None = None
    try:
        value = evaluator.evaluate_metric(metric, bindings)
        band = evaluator.classify(metric, value)
    except EvaluationError as exc:
        # exactly one of value/failure is ever set
        value = None
        band = None
        failure = str(exc)
    return EvaluationResult(
        metric_id=metric_id,
        period=period,
        bindings=tuple(sorted(bindings.items())),
        value=value,
        failure=failure,
        band=band,
        affected_objectives=affected,
        density_warnings=density,
    )


# -- action routing -----------------------------------------------------------


@dataclass(frozen=True)
class ActionDirective:
    kind: ActionKind
    stakeholders: tuple[str, ...]
    metric_id: str
    period: str
    band_label: str | None
    message: str

    def to_json_obj(self) -> dict:
        return {
            "action": self.kind.value,
            "stakeholders": list(self.stakeholders),
            "metric": self.metric_id,
            "period": self.period,
            "band": self.band_label,
            "message": self.message,
        }


class UnresolvedTarget(Exception):
    pass


def _owner_stakeholders(model: Model, ref: str) -> tuple[str, ...]:
    if ref in model.objectives:
        return model.objectives[ref].viewpoint
    if ref in model.goals:
        return model.goals[ref].viewpoint
    if ref in model.metrics:
        return model.metrics[ref].stakeholders
    raise UnresolvedTarget(f"owner_of({ref}) does not name an objective, goal or metric")


def route_actions(result: EvaluationResult, model: Model) -> list[ActionDirective]:
    """Expand the matched band's actions into concrete directives.

    Requires a classified result. Output is ordered LOG < NOTIFY < ESCALATE,
    stable within a kind (band declaration order).
    """
    if result.band is None:
        raise ValueError(f"result for {result.metric_id!r} has no classification to route")
    band = result.band
    affected = ", ".join(result.affected_objectives) or "none"
    message = (
        f"metric {result.metric_id} period {result.period}: value {result.value} "
        f"in band '{band.label}'; affected objectives: {affected}"
    )
    directives: list[ActionDirective] = []
    for action in band.actions:
        if action.target.is_owner:
            stakeholders = _owner_stakeholders(model, action.target.ref)
        else:
            if action.target.ref not in model.stakeholders:
                raise UnresolvedTarget(f"action target {action.target.ref!r} is not a stakeholder")
            stakeholders = (action.target.ref,)
        directives.append(
            ActionDirective(
                kind=action.kind,
                stakeholders=stakeholders,
                metric_id=result.metric_id,
                period=result.period,
                band_label=band.label,
                message=message,
            )
        )
    directives.sort(key=lambda d: d.kind.urgency)  # stable: declaration order within kind
    return directives


def route_result(result: EvaluationResult, model: Model) -> list[ActionDirective]:
    """Route a result whether it classified or failed.

    A failed evaluation is itself a finding: it goes to the metric's own
    stakeholders at NOTIFY level.
    """
    if result.band is not None:
        return route_actions(result, model)
    metric = model.metrics.get(result.metric_id)
    stakeholders = metric.stakeholders if metric else ()
    detail = result.failure or "no classification"
    have = ", ".join(name for name, _ in result.bindings) or "none"
    return [
        ActionDirective(
            kind=ActionKind.NOTIFY,
            stakeholders=stakeholders,
            metric_id=result.metric_id,
            period=result.period,
            band_label=None,
            message=(
                f"metric {result.metric_id} period {result.period} could not be "
                f"evaluated: {detail} (bindings present: {have})"
            ),
        )
    ]


def function_text(metric: MetricDef) -> str:
    return to_text(metric.function) if metric.function is not None else ""
