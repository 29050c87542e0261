from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from deltalens.errors import NotFunctorial, ParseError, PreconditionError
from deltalens.fincat import category, validate_category
from deltalens.fixtures import cascade_lens, powerset_category, random_cospan, random_fusable_pair
from deltalens.lens import compose_asymmetric, identity_lens, lenses_equal, put
from deltalens.lensfile import LensDocument, Serializer, UnresolvedName, parse, serialize
from deltalens.multilens import fuse, lens_pullback
from deltalens.scenario import ScenarioConfig

seeds = st.integers(min_value=0, max_value=10 ** 6)

ARROW = """\
category A
  object a b
  arrow u: a -> b
end
"""


def parse_error(text: str) -> tuple[int, int]:
    with pytest.raises(ParseError) as exc:
        parse(text)
    return exc.value.line, exc.value.column


def test_empty_document():
    assert parse("") == LensDocument()
    assert parse("# nothing here\n\n") == LensDocument()
    assert serialize(LensDocument()) == ""


def test_one_object_category():
    doc = parse("category One\n  object *\nend\n")
    c = doc.categories["One"]
    assert c.objects == ("*",) and c.identities == {"*": "1_*"}
    assert validate_category(c) == []


def test_compose_without_result():
    text = "category C\n  object a b c\n  arrow f: a -> b\n  arrow g: b -> c\n  compose g . f\nend\n"
    assert parse_error(text) == (5, 15)


def test_compose_and_identity_lines():
    doc = parse("category E\n  object *\n  identity * = one\n  arrow e: * -> *\n  compose e . e = e\nend\n")
    c = doc.categories["E"]
    assert c.identities == {"*": "one"} and c.compose[("e", "e")] == "e"
    assert validate_category(c) == []


def test_arrow_colon_spacing():
    doc = parse("category A\n  object a b\n  arrow u : a -> b\nend\n")
    assert doc.categories["A"].arrows["u"] == ("a", "b")


@pytest.mark.parametrize("text,where", [
    ("category A\n  object a\n", (1, 1)),                      # no end
    ("widget W\nend\n", (1, 1)),                                # unknown block
    (ARROW + "category A\n  object x\nend\n", (5, 10)),         # duplicate name
    ("category A\n  object a a\nend\n", (2, 12)),               # duplicate object
    ("category A\n  object a\n  arrow u a -> a\nend\n", (3, 16)),
    ("scenario s\n  frames f1\n  max-states lots\nend\n", (3, 14)),
])
def test_syntax_errors_have_positions(text, where):
    assert parse_error(text) == where


@pytest.mark.parametrize("text,where", [
    ("category A\n  object a\n  arrow u: a -> b\nend\n", (3, 17)),
    (ARROW + "functor F: A -> B\nend\n", (5, 17)),
    (ARROW + "functor F: A -> A\n  object z -> a\nend\n", (6, 10)),
    (ARROW + "cospan K\n  left L\n  right L\nend\n", (6, 8)),
    (ARROW + "multilens M\n  leg L\nend\n", (6, 7)),
])
def test_unresolved_names_have_positions(text, where):
    with pytest.raises(UnresolvedName) as exc:
        parse(text)
    assert (exc.value.line, exc.value.column) == where
    assert isinstance(exc.value, PreconditionError)


def test_rule_lens_that_is_not_functorial():
    text = ARROW + """\
functor I: A -> A
  object a -> a
  object b -> b
  arrow u -> u
end
lens L
  S A
  V A
  G I
  rule a u = 1_a
end
"""
    with pytest.raises(NotFunctorial):
        parse(text)


def test_rule_lens_with_missing_rule():
    text = ARROW + "functor I: A -> A\n  object a -> a\n  object b -> b\n  arrow u -> u\nend\n" \
        "lens L\n  S A\n  V A\n  G I\nend\n"
    with pytest.raises(UnresolvedName, match="no put rule"):
        parse(text)


def test_fixture_document(data_dir):
    doc = parse((data_dir / "basic.lens").read_text())
    assert set(doc.lenses) == {"Fold", "Squash", "Copy", "Bang", "Point"}
    assert doc.rule_lenses == set(doc.lenses)
    assert put(doc.lenses["Fold"], "a2", "u") == "u2"
    assert [len(m) for m in doc.multilenses.values()] == [2, 2, 2]


@pytest.mark.parametrize("name", ["basic.lens", "minimal.lens", "default.lens"])
def test_round_trip_files(data_dir, name):
    doc = parse((data_dir / name).read_text())
    text = serialize(doc)
    again = parse(text)
    assert again == doc
    assert serialize(again) == text


def test_scenario_block(data_dir):
    doc = parse((data_dir / "minimal.lens").read_text())
    assert doc.scenarios["minimal"] == ScenarioConfig.minimal()


def round_trip_lens(l):
    out = Serializer()
    name = out.lens(l, "L")
    doc = parse(out.text())
    return doc.lenses[name]


@given(seeds)
def test_triangle_round_trip_of_constructed_lenses(seed):
    c = random_cospan(random.Random(seed))
    for l in (compose_asymmetric(c.left, identity_lens(c.trough)), lens_pullback(c).left_projection):
        back = round_trip_lens(l)
        assert lenses_equal(back, l)
        assert back.apex == l.apex and back.view_leg == l.view_leg and back.source_leg == l.source_leg


@given(seeds)
def test_multilens_round_trip(seed):
    a, b = random_fusable_pair(random.Random(seed), 2, 2, max_objects=3)
    fused = fuse(a, b)
    out = Serializer()
    name = out.multilens(fused, "M")
    doc = parse(out.text())
    m = doc.multilenses[name]
    assert m.peak == fused.peak and len(m) == 3
    assert all(lenses_equal(x, y) for x, y in zip(m.legs, fused.legs))
    assert parse(serialize(doc)) == doc


def test_delta_categories_round_trip():
    l = cascade_lens(powerset_category(["a", "b"]), ["a"])
    back = round_trip_lens(l)
    assert lenses_equal(back, l)


def test_unwritable_ids_rejected():
    c = category(["a b"], {})
    with pytest.raises(PreconditionError, match="cannot be written"):
        Serializer().category(c)


def test_serialization_is_deterministic(data_dir):
    text = (data_dir / "basic.lens").read_text()
    assert serialize(parse(text)) == serialize(parse(text))
