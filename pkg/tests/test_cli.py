import json
import subprocess
import sys

import pytest

from bipartite_chunglu import __version__
from bipartite_chunglu.cli import main
from bipartite_chunglu.projection import read_projected_edgelist
from bipartite_chunglu.sampler import read_bipartite_edgelist


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def graph(tmp_path):
    out = tmp_path / "g.txt"
    assert run("generate", "--nl", 10**4, "--alpha-l", 3.0, "--alpha-r", 3.0, "--seed", 1, "--out", out) == 0
    return out


def test_generate_meta_and_determinism(graph, tmp_path):
    meta = json.loads((tmp_path / "g.txt.meta.json").read_text())
    assert meta["seed"] == 1 and meta["version"] == __version__
    G = read_bipartite_edgelist(graph)
    assert abs(G.n_edges - meta["expected_edges"]) < 5 * meta["expected_edges"] ** 0.5
    first = graph.read_bytes()
    run("generate", "--nl", 10**4, "--alpha-l", 3.0, "--alpha-r", 3.0, "--seed", 1, "--out", graph)
    assert graph.read_bytes() == first
    head = first.decode().splitlines()[:4]
    assert head[0] == f"# bipartite-chunglu {__version__}" and head[2] == "# seed: 1"


def test_generate_continuous_needs_naive(tmp_path, capsys):
    assert run("generate", "--nl", 50, "--continuous", "--out", tmp_path / "x.txt") == 2
    assert "--sampler naive" in capsys.readouterr().err
    assert run("generate", "--nl", 50, "--continuous", "--sampler", "naive", "--out", tmp_path / "x.txt") == 0


def test_generate_guard_refuses_naive(tmp_path, capsys):
    assert run("generate", "--nl", 2000, "--sampler", "naive", "--max-pairs", 10**5, "--out", tmp_path / "x.txt") == 2
    assert "guard" in capsys.readouterr().err


def test_project_and_stats(tmp_path):
    data = tmp_path / "k3.txt"
    data.write_text("a x\nb x\nc x\n")
    assert run("project", data, "--keep-multiplicity", "--out", tmp_path / "p.txt") == 0
    P = read_projected_edgelist(tmp_path / "p.txt")
    assert P.edge_set() == {(0, 1), (0, 2), (1, 2)}
    assert run("stats", tmp_path / "p.txt", "--projected", "--out", tmp_path / "s.json",
               "--curves-out", tmp_path / "c") == 0
    rep = json.loads((tmp_path / "s.json").read_text())
    assert (rep["mean_local_clustering"], rep["global_clustering"], rep["mean_local_closure"]) == (1.0, 1.0, 1.0)
    assert (tmp_path / "c.closure.csv").read_text().count("bin,value,n_nodes") == 1


def test_predict(tmp_path):
    assert run("predict", "--nl", 1000, "--wmax-exp", 0.3, "--kind", "degree", "--max-w", 5,
               "--out", tmp_path / "pr.csv") == 0
    lines = [l for l in (tmp_path / "pr.csv").read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "w,predicted_value" and len(lines) == 6


def test_compare_toy(tmp_path):
    data = tmp_path / "toy.txt"
    data.write_text("a x\nb x\nc x\nc y\nd y\n")
    assert run("compare", data, "--trials", 3, "--out", tmp_path / "cmp.json") == 0
    out = json.loads((tmp_path / "cmp.json").read_text())
    assert {r["coefficient"] for r in out["table"]} == {"mean_local_clustering", "global_clustering",
                                                      "mean_local_closure"}
    assert out["dataset"]["n_edges"] == 5


def test_figures(tmp_path):
    assert run("figure", "fig1", "--scale", 0.001, "--out", tmp_path / "f1.csv") == 0
    rows = [l for l in (tmp_path / "f1.csv").read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == "x,empirical,predicted,n_nodes" and len(rows) > 5
    data = tmp_path / "toy.txt"
    data.write_text("a x\nb x\nc x\nc y\nd y\ne y\n")
    assert run("figure", "fig5", "--input", data, "--min-bin-size", 0, "--out", tmp_path / "f5.csv") == 0
    assert "x,empirical,model,random_intersection" in (tmp_path / "f5.csv").read_text()
    assert run("figure", "fig4", "--out", tmp_path / "f4.csv") == 2


def test_fit(graph, tmp_path):
    assert run("fit", graph, "--side", "left", "--out", tmp_path / "fit.json") == 0
    fit = json.loads((tmp_path / "fit.json").read_text())
    assert fit["alpha"] > 1 and 0 <= fit["ks_distance"] <= 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "bipartite_chunglu", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == __version__
