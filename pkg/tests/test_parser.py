"""DSL parsing: AST shape, formatting round-trips, located errors, and the
static validation report."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unidex.errors import (
    ConflictingSpecifiersError,
    DslSyntaxError,
    DuplicateIdentifierError,
    UnknownClassError,
    UnknownIdentifierError,
)
from unidex.parser import (
    V3D,
    CompletelyOn,
    OnPoint,
    OnRegionExpr,
    WithRange,
    format_spec,
    grammar_check,
    parse,
)


def test_reference_scene_ast(cube_table_src):
    spec = parse(cube_table_src)
    t, r1, cube = spec.statements
    assert (t.name, t.class_name) == ("t", "Table")
    assert isinstance(t.specifiers[0], OnPoint)
    assert t.specifiers[0].point == V3D(0.0, 0.0, 0.0)
    assert isinstance(r1.specifiers[0], OnRegionExpr)
    assert r1.specifiers[0].corner == ("top", "back")
    assert r1.specifiers[0].target == "t"
    assert cube.explicit_name is False
    assert isinstance(cube.specifiers[0], CompletelyOn)
    w = cube.specifiers[1]
    assert isinstance(w, WithRange)
    assert (w.prop, w.lo, w.hi) == ("mass", 500.0, 1000.0)


def test_comments_and_whitespace():
    spec = parse("# leading comment\n\n  t = Table on V3D(1, -2.5, 0) # trailing\n")
    assert spec.statements[0].specifiers[0].point == V3D(1.0, -2.5, 0.0)


def test_auto_names_are_positional():
    spec = parse("Cube with mass (0, 1)\nCube with mass (2, 3)")
    assert [s.name for s in spec.statements] == ["_obj0", "_obj1"]


def test_format_parse_round_trip(cube_table_src, tray_src):
    for src in (cube_table_src, tray_src):
        once = format_spec(parse(src))
        assert format_spec(parse(once)) == once


def test_format_omits_auto_names():
    out = format_spec(parse("Cube with mass (0, 1)"))
    assert out == "Cube with mass (0, 1)\n"


@pytest.mark.parametrize(
    "src,exc,line,col",
    [
        ("t = Chair on V3D(0,0,0)", UnknownClassError, 1, 5),
        ("t = Table on V3D(0,0,0)\nt = Robot on V3D(1,1,1)", DuplicateIdentifierError, 2, 1),
        ("c = Cube completely on t", UnknownIdentifierError, 1, 24),
        ("t = Table @ V3D(0,0,0)", DslSyntaxError, 1, 11),
        ("t = Table on V3D(0,0)", DslSyntaxError, 1, 21),
        ("= Table", DslSyntaxError, 1, 1),
        ("t = Table on", DslSyntaxError, 1, 13),
    ],
)
def test_errors_carry_location(src, exc, line, col):
    with pytest.raises(exc) as ei:
        parse(src)
    assert (ei.value.line, ei.value.column) == (line, col)


def test_forward_references_rejected():
    # targets must be declared before use (the dependency order is explicit)
    with pytest.raises(UnknownIdentifierError):
        parse("c = Cube completely on t\nt = Table on V3D(0,0,0)")


def test_conflicting_position_specifiers():
    with pytest.raises(ConflictingSpecifiersError):
        parse("t = Table on V3D(0,0,0), on V3D(1,1,1)")
    with pytest.raises(ConflictingSpecifiersError):
        parse("t = Table on V3D(0,0,0)\nc = Cube completely on t, on V3D(0,0,1)")
    with pytest.raises(ConflictingSpecifiersError):
        parse("c = Cube with mass (0,1), with mass (2,3)")


def test_constraint_specifiers_do_not_conflict():
    # half-space specifiers conjoin; infeasibility is a build-time question
    src = "t = Table on V3D(0,0,0)\nc = Cube completely on t, left of t, right of t"
    spec = parse(src)
    assert len(spec.statements[1].specifiers) == 3


def test_grammar_check_reserved_property():
    rep = grammar_check(parse("c = Cube with x (0, 1)"))
    assert not rep.ok
    assert any("reserved" in i.message for i in rep.errors)


def test_grammar_check_bad_range():
    rep = grammar_check(parse("c = Cube with mass (10, 5)"))
    assert not rep.ok
    assert any("lo" in i.message and "hi" in i.message for i in rep.errors)


def test_grammar_check_warns_unreferenced_fixed_object():
    rep = grammar_check(parse("t = Table on V3D(0,0,0)\nc = Cube with mass (0,1)"))
    assert rep.ok  # warnings do not fail validation
    assert any("never referenced" in i.message for i in rep.warnings)


def test_grammar_check_clean_scene(tray_src):
    rep = grammar_check(parse(tray_src))
    assert rep.ok
    assert not rep.issues


NUM = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
).map(lambda v: round(v, 6))


@settings(max_examples=60, deadline=None)
@given(lo=NUM, hi=NUM)
def test_with_range_number_round_trip(lo, hi):
    src = f"c = Cube with mass ({lo!r}, {hi!r})"
    spec = parse(src)
    w = spec.statements[0].specifiers[0]
    assert (w.lo, w.hi) == (float(lo), float(hi))
    # formatting then reparsing preserves the exact values
    again = parse(format_spec(spec)).statements[0].specifiers[0]
    assert (again.lo, again.hi) == (w.lo, w.hi)
