"""Canonical serializer: fixpoint and determinism."""

from symbiosis_kit.parser import parse
from symbiosis_kit.serializer import serialize


def roundtrip(text: str) -> str:
    model, diags = parse(text)
    assert not diags
    return serialize(model)


def test_corpus_model_reaches_fixpoint(jpmorgan):
    once = serialize(jpmorgan)
    again_model, diags = parse(once)
    assert not diags
    assert serialize(again_model) == once


def test_escape_heavy_strings_round_trip():
    src = (
        'objective BO1 {\n'
        '    object: "quote \\" backslash \\\\ newline \\n tab \\t"\n'
        '    purpose: "# not a comment"\n'
        '}\n'
    )
    once = roundtrip(src)
    assert roundtrip(once) == once
    model, _ = parse(once)
    assert model.objectives["BO1"].object == 'quote " backslash \\ newline \n tab \t'
    assert model.objectives["BO1"].purpose == "# not a comment"


def test_output_order_is_insertion_independent():
    a = roundtrip(
        'objective BO2 { object: "2" }\nobjective BO1 { object: "1" }\ngoal MG1 { measures: BO1 }'
    )
    b = roundtrip(
        'goal MG1 { measures: BO1 }\nobjective BO1 { object: "1" }\nobjective BO2 { object: "2" }'
    )
    assert a == b
    assert a.index("BO1") < a.index("BO2")


def test_header_and_lf_endings():
    out = roundtrip('objective BO1 { object: "x" }')
    assert out.startswith("# .sym model (canonical form)\n")
    assert "\r" not in out
    assert out.endswith("\n")


def test_optional_fields_omitted_when_absent():
    out = roundtrip('objective BO1 { object: "x" }')
    # structural links and extras disappear; template fields stay (even empty)
    assert "refines:" not in out
    assert "priority:" not in out
    assert "depends_on:" not in out
    assert 'purpose: ""' in out


def test_interval_notation_preserved():
    out = roundtrip("metric M { band: (0, 50] -> low { log t } }")
    assert "(0, 50]" in out