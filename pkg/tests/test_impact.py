"""Model diffs and change-impact classification."""

import json

import pytest

from symbiosis_kit.graph import UnknownNode, build_graph
from symbiosis_kit.impact import (
    Change,
    ChangeKind,
    analyze,
    diff,
    impact,
    render_json,
    render_text,
)
from symbiosis_kit.parser import parse

# Diamond: MGd keeps an independent path to a root when A is removed, MGo not.
DIAMOND = """
objective BO1 { depends_on: BO2 }
objective BO2 { }
objective A { refines: BO1 }
goal MGd { measures: A, BO2 }
goal MGo { measures: A }
question Qd { goal: MGd text: "?" }
question Qo { goal: MGo text: "?" }
metric Md { answers: Qd }
metric Mo { answers: Qo }
"""


def build(src: str):
    model, diags = parse(src)
    assert not diags
    return model


@pytest.fixture(scope="module")
def diamond():
    return build(DIAMOND)


# -- diff ----------------------------------------------------------------------


def test_diff_of_identical_models(diamond):
    assert diff(diamond, diamond) == []


def test_diff_kinds_and_ordering():
    old = build('objective BO1 { object: "before" }\nmetric M { }')
    new = build('objective BO1 { object: "after" }\nbase b { description: "d" }')
    changes = diff(old, new)
    assert [(c.kind, c.node_kind, c.node_id) for c in changes] == [
        (ChangeKind.ADDED, "base", "b"),
        (ChangeKind.REMOVED, "metric", "M"),
        (ChangeKind.MODIFIED, "objective", "BO1"),
    ]
    (field_change,) = changes[2].fields
    assert field_change.field == "object"
    assert (field_change.old, field_change.new) == ("before", "after")


# -- impact --------------------------------------------------------------------


def test_removal_splits_orphans_from_review(diamond):
    report = impact(diamond, Change(ChangeKind.REMOVED, "objective", "A"))
    assert report.downstream_orphans == ("MGo", "Mo", "Qo")
    assert report.downstream_review == ("MGd", "Md", "Qd")
    assert report.upstream_review == ("BO1",)
    assert report.related == ()


def test_goal_removal_orphans_its_whole_subtree(diamond):
    report = impact(diamond, Change(ChangeKind.REMOVED, "goal", "MGo"))
    assert report.downstream_orphans == ("Mo", "Qo")
    assert report.downstream_review == ()
    assert report.upstream_review == ("A", "BO1")  # objectives only


def test_modification_never_orphans(diamond):
    report = impact(diamond, Change(ChangeKind.MODIFIED, "goal", "MGo"))
    assert report.downstream_orphans == ()
    assert report.downstream_review == ("Mo", "Qo")


def test_related_captures_dependency_neighbors(diamond):
    report = impact(diamond, Change(ChangeKind.MODIFIED, "objective", "BO1"))
    assert report.related == ("BO2",)
    assert "BO2" not in report.downstream_review


def test_unknown_node_raises(diamond):
    with pytest.raises(UnknownNode):
        impact(diamond, Change(ChangeKind.REMOVED, "objective", "NOPE"))


def test_impact_sets_are_always_disjoint(jpmorgan):
    graph = build_graph(jpmorgan)
    for node_id, kind in sorted(graph.nodes.items()):
        for change_kind in ChangeKind:
            report = impact(jpmorgan, Change(change_kind, kind, node_id), graph)
            sets = [
                set(report.downstream_orphans),
                set(report.downstream_review),
                set(report.upstream_review),
                set(report.related),
            ]
            union: set[str] = set()
            for s in sets:
                assert not (union & s), f"{node_id} {change_kind}: overlapping sets"
                union |= s
            assert node_id not in union


# -- analyze -------------------------------------------------------------------


def test_analyze_uses_new_model_for_additions(diamond):
    new = build(DIAMOND + "metric Mx { answers: Qd }")
    reports = analyze(diamond, new)
    assert len(reports) == 1
    report = reports[0]
    assert report.change.kind is ChangeKind.ADDED
    assert report.change.node_id == "Mx"
    assert report.downstream_orphans == ()
    assert report.upstream_review == ("A", "BO1", "BO2")


def test_analyze_reports_removals_against_the_old_model(diamond):
    new = build(DIAMOND.replace("metric Mo { answers: Qo }\n", ""))
    reports = analyze(diamond, new)
    assert [(r.change.kind, r.change.node_id) for r in reports] == [
        (ChangeKind.REMOVED, "Mo")
    ]


# -- rendering -------------------------------------------------------------------


def test_render_text(diamond):
    new = build(DIAMOND.replace('question Qo { goal: MGo text: "?" }', 'question Qo { goal: MGo text: "!" }'))
    text = render_text(analyze(diamond, new))
    assert "MODIFIED question Qo" in text
    assert '  text: "?" -> "!"' in text

    removal = render_text([impact(diamond, Change(ChangeKind.REMOVED, "objective", "A"))])
    assert removal.startswith("REMOVED objective A\n")
    assert "  downstream orphans: MGo, Mo, Qo" in removal
    assert "  downstream review: MGd, Md, Qd" in removal
    assert "  upstream review: BO1" in removal


def test_render_text_no_changes():
    assert render_text([]) == "no changes\n"


def test_render_json_shape(diamond):
    payload = json.loads(
        render_json([impact(diamond, Change(ChangeKind.REMOVED, "objective", "A"))])
    )
    (entry,) = payload["changes"]
    assert entry["change"] == {
        "change": "removed",
        "node_kind": "objective",
        "id": "A",
        "fields": [],
    }
    assert entry["downstream_orphans"] == ["MGo", "Mo", "Qo"]
