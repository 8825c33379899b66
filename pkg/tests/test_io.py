from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given

from conftest import matrices, vectors
from weakcsr.core import BOTTOM, Matrix
from weakcsr.io import ParseError, format_scalar, parse_instance, parse_matrix, serialize_matrix

A5_ROWS = [[0, 0, -1, BOTTOM, -7], [0, 0, -1, BOTTOM, -7], [-1, -1, -1, -3, -7],
           [-3, BOTTOM, BOTTOM, -2, -7], [-7, -7, -7, -7, -3]]


def test_parse_examples(a5):
    assert parse_matrix("1\n3\n") == Matrix([[3]])
    assert parse_matrix("2\n0 *\n-1/2 0\n") == Matrix([[0, BOTTOM], [Fraction(-1, 2), 0]])
    assert a5 == Matrix(A5_ROWS)


def test_grammar_features():
    inst = parse_instance("# note\n2  # size\n0.5 -inf\n* 1\nv: 1 -2/3\n")
    assert inst.matrix == Matrix([[Fraction(1, 2), BOTTOM], [BOTTOM, 1]])
    assert inst.vector.values() == [1, Fraction(-2, 3)]


@pytest.mark.parametrize("text, line, column", [
    ("", 1, 1),
    ("x\n", 1, 1),
    ("2\n0 0\n0 abc\n", 3, 3),
    ("2\n0 0\n", 2, 1),
    ("2\n0 0 0\n0 0\n", 2, 1),
    ("2\n0 1/0\n0 0\n", 2, 3),
    ("2\n0 0\n0 0\nv: 1\n", 4, 3),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_instance(text)
    assert (exc.value.line, exc.value.column) == (line, column)


def test_shipped_fixtures_round_trip():
    for f in (resources.files("weakcsr") / "data").iterdir():
        if f.name.endswith(".txt"):
            A = parse_matrix(f.read_text())
            assert parse_matrix(serialize_matrix(A)) == A


def test_format_scalar():
    assert [format_scalar(x) for x in (BOTTOM, Fraction(3), Fraction(-7, 2))] == ["*", "3", "-7/2"]


@given(matrices(n_max=5))
def test_round_trip(A):
    assert parse_matrix(serialize_matrix(A, comment="x\ny")) == A


@given(matrices(n_max=4).flatmap(lambda A: vectors(A.n).map(lambda v: (A, v))))
def test_round_trip_with_vector(Av):
    A, v = Av
    inst = parse_instance(serialize_matrix(A, v))
    assert inst.matrix == A and inst.vector == v
