"""Structural diffs between model versions and change-impact sets.

Impact is computed over the traceability closure (refines / measures / asks /
answers edges). For a removal, a downstream node is orphaned when every one
of its derivation paths to a surviving top-level objective ran through the
removed node; nodes that keep an independent path merely need review.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .graph import (
    CLOSURE_KINDS,
    TraceabilityGraph,
    UnknownNode,
    ancestors,
    build_graph,
    descendants,
)
from .model import KIND_OBJECTIVE, NODE_KINDS, Model, model_to_canonical


class ChangeKind(Enum):
    ADDED = "added"
    REMOVED = "removed"
    MODIFIED = "modified"


@dataclass(frozen=True)
class FieldChange:
    field: str
    old: object
    new: object

    def to_json_obj(self) -> dict:
        return {"field": self.field, "old": self.old, "new": self.new}


@dataclass(frozen=True)
class Change:
    kind: ChangeKind
    node_kind: str
    node_id: str
    fields: tuple[FieldChange, ...] = ()

    def to_json_obj(self) -> dict:
        return {
            "change": self.kind.value,
            "node_kind": self.node_kind,
            "id": self.node_id,
            "fields": [f.to_json_obj() for f in self.fields],
        }


def diff(old: Model, new: Model) -> list[Change]:
    """Node-level diff keyed by (kind, id); field diffs on canonical forms."""
    old_canon = model_to_canonical(old)
    new_canon = model_to_canonical(new)
    changes: list[Change] = []
    for kind in NODE_KINDS:
        old_nodes = old_canon[kind + "s"]
        new_nodes = new_canon[kind + "s"]
        for node_id in sorted(old_nodes.keys() | new_nodes.keys()):
            if node_id not in new_nodes:
                changes.append(Change(ChangeKind.REMOVED, kind, node_id))
            elif node_id not in old_nodes:
                changes.append(Change(ChangeKind.ADDED, kind, node_id))
            elif old_nodes[node_id] != new_nodes[node_id]:
                fields = tuple(
                    FieldChange(name, old_nodes[node_id][name], new_nodes[node_id][name])
                    for name in sorted(old_nodes[node_id])
                    if old_nodes[node_id][name] != new_nodes[node_id][name]
                )
                changes.append(Change(ChangeKind.MODIFIED, kind, node_id, fields))
    changes.sort(key=lambda c: (c.node_kind, c.node_id))
    return changes


@dataclass(frozen=True)
class ImpactReport:
    change: Change
    downstream_orphans: tuple[str, ...]
    downstream_review: tuple[str, ...]
    upstream_review: tuple[str, ...]
    related: tuple[str, ...]

    def to_json_obj(self) -> dict:
        return {
            "change": self.change.to_json_obj(),
            "downstream_orphans": list(self.downstream_orphans),
            "downstream_review": list(self.downstream_review),
            "upstream_review": list(self.upstream_review),
            "related": list(self.related),
        }


def _root_objectives(model: Model) -> set[str]:
    return {bo_id for bo_id, bo in model.objectives.items() if bo.refines is None}


def _reaches_any(graph: TraceabilityGraph, start: str, targets: set[str], removed: str) -> bool:
    """Ancestor-direction reachability from start to any target, skipping `removed`."""
    if start in targets:
        return True
    seen = {start, removed}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for edge in graph.edges_from(node):
            if edge.kind not in CLOSURE_KINDS or edge.dst in seen:
                continue
            if edge.dst == removed:
                continue
            if edge.dst in targets:
                return True
            seen.add(edge.dst)
            frontier.append(edge.dst)
    return False


def _related_neighbors(model: Model, node_id: str) -> set[str]:
    related: set[str] = set()
    bo = model.objectives.get(node_id)
    if bo is not None:
        related.update(bo.depends_on)
        related.update(bo.affects)
    for other_id, other in model.objectives.items():
        if node_id in other.depends_on or node_id in other.affects:
            related.add(other_id)
    related.discard(node_id)
    return related


def impact(model: Model, change: Change, graph: TraceabilityGraph | None = None) -> ImpactReport:
    """Impact of one change against the model version it applies to.

    REMOVED and MODIFIED apply to the old model; ADDED to the new one.
    """
    node_id = change.node_id
    if graph is None:
        graph = build_graph(model)
    if node_id not in graph.nodes:
        raise UnknownNode(node_id)

    down = descendants(graph, node_id)
    up = ancestors(graph, node_id)

    orphans: set[str] = set()
    if change.kind is ChangeKind.REMOVED:
        surviving_roots = _root_objectives(model) - {node_id}
        for candidate in down:
            if not _reaches_any(graph, candidate, surviving_roots, removed=node_id):
                orphans.add(candidate)

    review = down - orphans
    upstream = {n for n in up if graph.nodes.get(n) == KIND_OBJECTIVE}
    upstream -= orphans | review
    related = _related_neighbors(model, node_id) - (orphans | review | upstream)
    return ImpactReport(
        change=change,
        downstream_orphans=tuple(sorted(orphans)),
        downstream_review=tuple(sorted(review)),
        upstream_review=tuple(sorted(upstream)),
        related=tuple(sorted(related)),
    )


def analyze(old: Model, new: Model) -> list[ImpactReport]:
    """Diff two versions and compute the impact of every change."""
    old_graph = build_graph(old)
    new_graph = build_graph(new)
    reports: list[ImpactReport] = []
    for change in diff(old, new):
        if change.kind is ChangeKind.ADDED:
            reports.append(impact(new, change, new_graph))
        else:
            reports.append(impact(old, change, old_graph))
    return reports


def _fmt_value(value: object) -> str:
    return json.dumps(value, sort_keys=True)


def render_text(reports: list[ImpactReport]) -> str:
    if not reports:
        return "no changes\n"
    out: list[str] = []
    for report in reports:
        change = report.change
        out.append(f"{change.kind.value.upper()} {change.node_kind} {change.node_id}")
        for fc in change.fields:
            out.append(f"  {fc.field}: {_fmt_value(fc.old)} -> {_fmt_value(fc.new)}")
        for label, ids in (
            ("downstream orphans", report.downstream_orphans),
            ("downstream review", report.downstream_review),
            ("upstream review", report.upstream_review),
            ("related", report.related),
        ):
            if ids:
                out.append(f"  {label}: {', '.join(ids)}")
        out.append("")
    return "\n".join(out)


def render_json(reports: list[ImpactReport]) -> str:
    payload = {"changes": [r.to_json_obj() for r in reports]}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
