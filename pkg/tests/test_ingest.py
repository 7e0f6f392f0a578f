import json

import pytest

from bipartite_chunglu.exceptions import EmptyGraphError, ParseError
from bipartite_chunglu.ingest import degrees_as_weights, load_bipartite_edgelist, write_label_map
from bipartite_chunglu.sampler import BipartiteGraph, read_bipartite_edgelist, write_bipartite_edgelist


def _write(tmp_path, text, name="d.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_labels_first_appearance(tmp_path):
    G, meta = load_bipartite_edgelist(_write(tmp_path, "a x\nb x\nb y\n"))
    assert (meta.n_left, meta.n_right) == (2, 2)
    assert G.edge_set() == {(0, 0), (1, 0), (1, 1)}
    assert meta.left_labels == ["a", "b"] and meta.right_labels == ["x", "y"]
    assert json.loads(meta.to_json())["n_edges"] == 3


def test_duplicates_comments_extra_columns(tmp_path):
    G, meta = load_bipartite_edgelist(_write(tmp_path, "% konect\n# c\na x 1 99\n\na x 2\n"))
    assert G.n_edges == 1 and meta.duplicate_lines == 1


def test_swap_sides(tmp_path):
    G, meta = load_bipartite_edgelist(_write(tmp_path, "a x\nb x\n"), swap_sides=True)
    assert (G.n_left, G.n_right) == (1, 2) and meta.swapped


def test_errors(tmp_path):
    with pytest.raises(ParseError, match="line 2"):
        load_bipartite_edgelist(_write(tmp_path, "a x\nb\n"))
    with pytest.raises(EmptyGraphError):
        load_bipartite_edgelist(_write(tmp_path, "# nothing\n"))


def test_degrees_as_weights():
    SL, SR = degrees_as_weights(BipartiteGraph(2, 2, [(0, 0), (1, 0), (1, 1)]))
    assert SL.values.tolist() == [1, 2] and SR.values.tolist() == [2, 1]
    with pytest.raises(EmptyGraphError):
        degrees_as_weights(BipartiteGraph(2, 2))


def test_isolated_nodes_dropped_and_handshake(caplog):
    G = BipartiteGraph(4, 3, [(0, 0), (0, 2), (2, 2)])
    with caplog.at_level("INFO"):
        SL, SR = degrees_as_weights(G)
    assert len(SL) == 2 and len(SR) == 2
    assert SL.total() == SR.total() == G.n_edges
    assert "2 left and 1 right" in caplog.text


def test_roundtrip_and_label_map(tmp_path):
    G, meta = load_bipartite_edgelist(_write(tmp_path, "u1 i1\nu2 i1\nu2 i3\nu3 i2\n"))
    write_bipartite_edgelist(G, tmp_path / "out.txt")
    assert read_bipartite_edgelist(tmp_path / "out.txt") == G
    write_label_map(meta, tmp_path / "labels.txt")
    lines = (tmp_path / "labels.txt").read_text().splitlines()
    assert "left 2 u3" in lines and "right 1 i3" in lines
