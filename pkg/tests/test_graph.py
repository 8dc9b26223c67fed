"""Traceability graph construction, closure queries, and exports."""

import dataclasses
import json

import pytest

from symbiosis_kit.graph import (
    EdgeKind,
    GraphError,
    RefinesCycleError,
    UnknownNode,
    UnresolvedReference,
    ancestors,
    build_graph,
    descendants,
    objective_ancestors_ordered,
    to_dot,
    to_json,
)
from symbiosis_kit.parser import parse


def graph_of(src: str):
    model, diags = parse(src)
    assert not diags
    return build_graph(model)


def test_jpmorgan_metric_ancestors(jpmorgan):
    graph = build_graph(jpmorgan)
    up = ancestors(graph, "ME1.1.1.1.1")
    assert up == {"Q1.1.1.1.4", "MG1.1.1.1", "BO1.1.1", "BO1.1", "BO1"}
    # bases hang off USES edges, which are outside the derivation closure
    assert not any(n.startswith("bm_") for n in up)


def test_jpmorgan_objective_descendants(jpmorgan):
    graph = build_graph(jpmorgan)
    down = descendants(graph, "BO1.1.1")
    questions = {f"Q1.1.1.1.{i}" for i in range(1, 7)}
    metrics = {f"ME1.1.1.1.{i}" for i in range(1, 7)}
    assert down == {"MG1.1.1.1"} | questions | metrics


def test_objective_ancestors_ordered_nearest_first(jpmorgan):
    graph = build_graph(jpmorgan)
    assert objective_ancestors_ordered(graph, "ME1.1.1.1.1") == ["BO1.1.1", "BO1.1", "BO1"]
    assert objective_ancestors_ordered(graph, "BO1") == []


def test_depends_on_cycle_does_not_hang():
    graph = graph_of(
        "objective A { depends_on: B }\nobjective B { depends_on: A }"
    )
    assert ancestors(graph, "A") == set()  # DEPENDS_ON is outside the closure
    kinds = {e.kind for e in graph.edges}
    assert kinds == {EdgeKind.DEPENDS_ON}


def test_unresolved_reference_names_the_site():
    model, _ = parse("objective BO1 { refines: GHOST }")
    with pytest.raises(UnresolvedReference) as exc:
        build_graph(model)
    assert exc.value.ref == "GHOST"
    assert exc.value.site == "BO1.refines"


def test_refines_cycle_raises():
    model, _ = parse("objective A { refines: B }\nobjective B { refines: A }")
    with pytest.raises(RefinesCycleError):
        build_graph(model)


def test_duplicate_id_across_kinds_raises():
    # the parser keeps first-wins, so collide two separately parsed models
    a, _ = parse("objective X { }")
    b, _ = parse("goal X { }")
    merged = dataclasses.replace(a, goals=b.goals)
    with pytest.raises(GraphError):
        build_graph(merged)


def test_unknown_node_raises(jpmorgan):
    graph = build_graph(jpmorgan)
    with pytest.raises(UnknownNode):
        ancestors(graph, "NOPE")
    with pytest.raises(UnknownNode):
        objective_ancestors_ordered(graph, "NOPE")


def test_edge_filters(jpmorgan):
    graph = build_graph(jpmorgan)
    uses = graph.edges_from("ME1.1.1.1.1", frozenset({EdgeKind.USES}))
    assert {e.dst for e in uses} == {"bm_completed", "bm_took"}
    asks = graph.edges_to("MG1.1.1.1", frozenset({EdgeKind.ASKS}))
    assert len(asks) == 6


def test_to_dot_shape_and_determinism(jpmorgan):
    graph = build_graph(jpmorgan)
    dot = to_dot(graph)
    assert dot.startswith("digraph traceability {\n  rankdir=BT;")
    assert '"ME1.1.1.1.1" [shape=hexagon];' in dot
    assert '"Q1.1.1.1.1" -> "MG1.1.1.1" [label="asks"];' in dot
    assert dot == to_dot(build_graph(jpmorgan))


def test_to_json_is_sorted_and_parses(jpmorgan):
    payload = json.loads(to_json(build_graph(jpmorgan)))
    ids = [n["id"] for n in payload["nodes"]]
    assert ids == sorted(ids)
    keys = [(e["kind"], e["src"], e["dst"]) for e in payload["edges"]]
    assert keys == sorted(keys)
    assert {"kind": "answers", "src": "ME1.1.1.1.1", "dst": "Q1.1.1.1.4"} in payload["edges"]
