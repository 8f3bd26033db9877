import pytest

from abnet.builders import (
    GraphSpec,
    build_rotor,
    build_sandpile,
    build_toppling,
    graph_laplacian,
    sandpilize,
)
from abnet.core import NetworkError, step
from abnet.algebra import production_matrix

import corpus


def test_toppling_thresholds(ex3):
    a = ex3.processors[0]
    assert a.states == ("0", "1", "2")
    assert a.emit["a"][2] == {"b": 2, "c": 2}
    assert a.emit["a"][0] == {}


def test_toppling_self_emission():
    net = build_toppling([[2, -1], [-1, 2]], names="xy", thresholds=[3, 2])
    assert net.processors[0].emit["x"][2] == {"x": 1, "y": 1}
    assert production_matrix(net).L.tolist() == [[2, -1], [-1, 2]]


def test_toppling_errors():
    with pytest.raises(NetworkError):
        build_toppling([[1, 1], [0, 1]])
    with pytest.raises(NetworkError):
        build_toppling([[2, -1], [-1, 2]], thresholds=[1, 2])
    with pytest.raises(NetworkError):
        build_toppling([[0]])


def test_laplacians():
    assert graph_laplacian(corpus.k2()) == [[1, -1], [-1, 1]]
    assert graph_laplacian(corpus.triangle(sinks=("s",))) == [[3, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    assert graph_laplacian(corpus.cycle3()) == [[1, 0, -1], [-1, 1, 0], [0, -1, 1]]
    with pytest.raises(NetworkError):
        graph_laplacian(GraphSpec(["0", "1"], [("0", "0"), ("0", "1")]))
    with pytest.raises(NetworkError):
        graph_laplacian(GraphSpec(["0", "1"], [("0", "1")]))


def test_graph_errors():
    with pytest.raises(NetworkError):
        GraphSpec(["0"], [("0", "1")])
    with pytest.raises(NetworkError):
        GraphSpec(["0"], [], sinks=["z"])
    g = GraphSpec(["0", "1", "2"], [("0", "1"), ("0", "2"), ("1", "0"), ("2", "0")], rotor_order={"0": ["2", "2"]})
    with pytest.raises(NetworkError):
        build_rotor(g)


def test_rotor_convention():
    g = GraphSpec(["0", "1", "2"], [("0", "1"), ("0", "2"), ("1", "0"), ("2", "0")], rotor_order={"0": ["2", "1"]})
    net = build_rotor(g)
    # rotor at 0 points to "2"; the first letter advances it to "1" and leaves there
    cfg = step(net, net.config({"0": 1}), "0")
    assert cfg.letters == (0, 1, 0) and cfg.state == (1, 0, 0)
    cfg = step(net, net.config({"0": 1}, cfg.state), "0")
    assert cfg.letters == (0, 0, 1)


def test_rotor_sink_letters_vanish():
    net = build_rotor(corpus.triangle(sinks=("s",)))
    assert [p.vertex for p in net.processors] == ["0", "1", "2"]
    assert {} in net.processors[0].emit["0"]


def test_sandpilize_rotor_is_sandpile():
    S = sandpilize(build_rotor(corpus.triangle()))
    assert S.processors == build_sandpile(corpus.triangle()).processors


def test_sandpilize_non_unary():
    net = corpus.adder_halting()
    S = sandpilize(net)
    assert S.alphabet == net.alphabet
    assert production_matrix(S).L == production_matrix(net).L
    assert [len(p.states) for p in S.processors] == [3, 3, 2]
