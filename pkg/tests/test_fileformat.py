import math

import numpy as np
import pytest

from roughmetric import (
    InvalidSpaceError,
    LoadError,
    ShapeError,
    build_space,
    dump_space,
    load_space,
    paper_example_spec,
    parse_real,
    parse_sequence_literal,
    sequence_literal,
    validate_axioms,
)
from roughmetric.theorems import random_space

TWO_POINT_DOC = """\
points: [a, b]
dist:
- [0, "1/sqrt(2)"]
- ["1/sqrt(2)", 0]
alpha:
- [1, "sqrt(2)"]
- ["sqrt(2)", 1]
"""


# --- entry expressions ---

def test_parse_real_values():
    assert parse_real(3) == 3.0
    assert parse_real(0.25) == 0.25
    assert parse_real("2") == 2.0
    assert parse_real("sqrt(4)") == 2.0
    assert parse_real("1/sqrt(2)") == 1 / math.sqrt(2)
    assert parse_real("sqrt(2)/2") == math.sqrt(2) / 2
    assert parse_real("3/4") == 0.75
    assert parse_real("-1/sqrt(4)") == -0.5
    assert parse_real("1.5e2") == 150.0


def test_parse_real_rejects_junk():
    for bad in ("", "banana", "sqrt(-1)", "1/2/3", "2**3", True, [1], None):
        with pytest.raises(LoadError):
            parse_real(bad)


# --- loading ---

def test_load_space_with_expressions():
    spec = load_space(TWO_POINT_DOC)
    assert spec.points == ("a", "b")
    assert spec.dist[0, 1] == 1 / math.sqrt(2)
    assert spec.alpha[1, 0] == math.sqrt(2)
    assert validate_axioms(spec).valid


def test_load_asymmetric_then_build_reports_d2():
    doc = "points: [a, b]\ndist:\n- [0, 1]\n- [2, 0]\nalpha:\n- [1, 1]\n- [1, 1]\n"
    spec = load_space(doc)  # loads fine; shape is the loader's only concern
    with pytest.raises(InvalidSpaceError) as err:
        build_space(spec)
    assert any(v.axiom == "d2" for v in err.value.result.violations)


def test_load_errors():
    with pytest.raises(LoadError):
        load_space("just a string")
    with pytest.raises(LoadError):
        load_space("points: []\ndist: []\nalpha: []")
    with pytest.raises(LoadError):
        load_space("dist: [[0]]\nalpha: [[1]]")  # no points
    with pytest.raises(LoadError):
        load_space("points: [a]\ndist: [[0]]\nalpha: [[1]]\nbogus: 1")
    with pytest.raises(LoadError):
        load_space("points: [[1]]\ndist: [[0]]\nalpha: [[1]]")  # list point id
    with pytest.raises(LoadError):
        load_space("points: [a]\ndist: [[oops]]\nalpha: [[1]]")
    with pytest.raises(LoadError, match="line"):
        load_space("points: [a, b\ndist: [")  # unclosed flow sequence


def test_missing_or_misshapen_tables_are_shape_errors():
    with pytest.raises(ShapeError):
        load_space("points: [a, b]\ndist:\n- [0, 1]\n- [1, 0]\n")  # no alpha
    with pytest.raises(ShapeError):
        load_space("points: [a, b]\ndist:\n- [0, 1]\nalpha:\n- [1, 1]\n- [1, 1]\n")
    with pytest.raises(ShapeError):
        load_space("points: [a, b]\ndist:\n- [0, 1, 2]\n- [1, 0, 2]\nalpha:\n- [1, 1]\n- [1, 1]\n")


# --- emitting and round trips ---

def _tables_close(a, b, rel=1e-11):
    return np.allclose(a.dist, b.dist, rtol=rel, atol=0) and \
        np.allclose(a.alpha, b.alpha, rtol=rel, atol=0)


def test_round_trip_paper_example():
    spec = paper_example_spec(10)
    again = load_space(dump_space(spec))
    assert again.points == spec.points
    assert _tables_close(again, spec)


def test_round_trip_random_space():
    spec = random_space(np.random.default_rng(77), 9).spec
    again = load_space(dump_space(spec))
    assert again.points == spec.points
    assert _tables_close(again, spec)


def test_round_trip_is_stable():
    text = dump_space(paper_example_spec(7))
    assert dump_space(load_space(text)) == text


def test_dump_quotes_awkward_strings():
    doc = 'points: ["true", "x y"]\ndist:\n- [0, 1]\n- [1, 0]\nalpha:\n- [1, 1]\n- [1, 1]\n'
    spec = load_space(doc)
    assert spec.points == ("true", "x y")
    again = load_space(dump_space(spec))
    assert again.points == ("true", "x y")


def test_dump_uses_12_significant_digits():
    text = dump_space(paper_example_spec(3))
    assert "0.707106781187" in text


# --- sequence literals ---

def test_sequence_literal_parse(paper10):
    seq = parse_sequence_literal("2,3", paper10)
    assert seq.prefix == () and seq.cycle == (2, 3)
    seq = parse_sequence_literal("7|2,3", paper10)
    assert seq.prefix == (7,) and seq.cycle == (2, 3)
    seq = parse_sequence_literal(" 1 , 2 | 3 ", paper10)
    assert seq.prefix == (1, 2) and seq.cycle == (3,)
    seq = parse_sequence_literal("|4", paper10)
    assert seq.prefix == () and seq.cycle == (4,)


def test_sequence_literal_string_points():
    space = build_space(load_space(TWO_POINT_DOC))
    seq = parse_sequence_literal("a|b", space)
    assert seq.prefix == ("a",) and seq.cycle == ("b",)


def test_sequence_literal_errors(paper10):
    with pytest.raises(ValueError):
        parse_sequence_literal("2,99", paper10)
    with pytest.raises(ValueError):
        parse_sequence_literal("2|", paper10)
    with pytest.raises(ValueError):
        parse_sequence_literal("", paper10)


def test_sequence_literal_round_trip(paper10):
    for text in ("2,3", "7|2,3", "1,2|3,4"):
        seq = parse_sequence_literal(text, paper10)
        assert parse_sequence_literal(sequence_literal(seq), paper10) == seq
