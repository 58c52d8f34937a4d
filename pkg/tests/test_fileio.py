import numpy as np
import pytest

from frobsim.errors import ParseError
from frobsim.fileio import format_graph, format_matrix, parse_any, parse_graph, parse_matrix
from frobsim.matrixcore import Graph, cycle_graph


def test_graph_roundtrip_and_defaults():
    G = parse_graph("# c4\n4 4\n0 1\n1 2\n2 3 2.5\n3 0\n")
    assert G.n == 4 and G.m == 4
    assert dict(((u, v), w) for u, v, w in G.edges)[(2, 3)] == 2.5
    assert parse_graph(format_graph(G)) == G
    assert parse_any(format_graph(cycle_graph(5))) == cycle_graph(5)


def test_matrix_roundtrip():
    M = np.array([[2.0, -1.0], [-1.0, 0.5]])
    text = format_matrix(M)
    assert text.splitlines()[1] == "2 -1"
    assert np.array_equal(parse_matrix(text), M)
    assert np.array_equal(parse_any(text), M)


@pytest.mark.parametrize("text", [
    "",
    "3 1\n0 1\n1 2\n",
    "3 1\n0 0\n",
    "3 1\n0 x\n",
    "2\n1 2\n3 4\n",
    "2\n1 2\n",
    "2\n1\n2 3\n",
    "abc\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_any(text)
