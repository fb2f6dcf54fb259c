import json

import pytest

from dagtopo.cli import main


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def chain_dir(tmp_path):
    d = tmp_path / "chain"
    assert run("gen", "--kind", "chain", "--n", 4, "--seed", 0, "--out", d) == 0
    return d


def test_gen_chain_then_paths(chain_dir, tmp_path, capsys):
    out = tmp_path / "paths"
    assert run("paths", chain_dir, "--out", out) == 0
    assert (out / "path_lengths.csv").read_text() == "value,count,ccdf\n3,1,1\n"
    assert capsys.readouterr().out.strip().endswith("3:1")
    manifest = json.loads((out / "paths.manifest.json").read_text())
    assert str(out / "path_lengths.csv") in manifest["outputs"]
    assert manifest["command"] == "paths"
    assert all(v.startswith("sha256:") for v in manifest["inputs"].values())


def test_build_then_binary_paths(chain_dir, tmp_path):
    g = tmp_path / "g.dtp"
    assert run("build", "--nodes", chain_dir / "nodes.txt", "--edges", chain_dir / "edges.txt", "--out", g) == 0
    assert g.exists() and (tmp_path / "g.dtp.ids").exists() and (tmp_path / "g.dtp.manifest.json").exists()
    assert run("paths", g, "--out", tmp_path / "p") == 0
    assert (tmp_path / "p" / "path_lengths.csv").read_text().splitlines()[1] == "3,1,1"


def _stats_rows(text):
    rows = {}
    for line in text.splitlines():
        parts = line.rsplit(None, 1)
        if len(parts) == 2 and parts[1].isdigit():
            rows.setdefault(parts[0].strip(), int(parts[1]))
    return rows


def test_layer_then_stats(tmp_path, capsys):
    d = tmp_path / "lay"
    assert run("gen", "--kind", "layered", "--n", 2000, "--edges", 12000, "--seed", 1, "--out", d) == 0
    assert run("layer", d, "--layer", "filesystem", "--out", tmp_path / "fs.dtp") == 0
    capsys.readouterr()
    assert run("stats", tmp_path / "fs.dtp", "--out", tmp_path / "s.json") == 0
    rows = _stats_rows(capsys.readouterr().out)
    for label in ("origins (ori)", "snapshots (snp)", "releases (rel)", "commits (cmt)"):
        assert rows[label] == 0
    assert rows["directories (dir)"] > 0 and rows["files (cnt)"] > 0
    for e in ("ori->snp", "snp->cmt", "cmt->dir"):
        assert rows[e] == 0
    assert rows["dir->cnt"] > 0
    data = json.loads((tmp_path / "s.json").read_text())
    assert data["nodes"]["commits (cmt)"] == 0


def test_stats_row_layout(tmp_path, capsys):
    d = tmp_path / "lay"
    run("gen", "--kind", "layered", "--n", 500, "--seed", 2, "--out", d)
    capsys.readouterr()
    assert run("stats", d, "--human") == 0
    lines = capsys.readouterr().out.splitlines()
    labels = [line[:18].strip() for line in lines]
    assert labels[:8] == ["Nodes", "origins (ori)", "snapshots (snp)", "releases (rel)", "commits (cmt)",
                          "directories (dir)", "files (cnt)", "total"]
    assert labels[8:18] == ["Edges", "ori->snp", "snp->rel", "snp->cmt", "rel->cmt", "cmt->cmt", "cmt->dir",
                            "dir->dir", "dir->cnt", "total"]


def test_gen_reingests_strict(tmp_path):
    for kind in ("chain", "dag", "layered", "powerlaw"):
        d = tmp_path / kind
        assert run("gen", "--kind", kind, "--n", 300, "--seed", 5, "--out", d) == 0
        assert run("build", "--nodes", d / "nodes.txt", "--edges", d / "edges.txt",
                   "--validation", "strict", "--out", tmp_path / f"{kind}.dtp") == 0


def test_reports_and_plots(tmp_path):
    d = tmp_path / "lay"
    run("gen", "--kind", "layered", "--n", 3000, "--edges", 20000, "--seed", 3, "--out", d)
    out = tmp_path / "r"
    assert run("degrees", d, "--out", out, "--plot") == 0
    assert run("clustering", d, "--out", out, "--plot") == 0
    assert run("cc", d, "--out", out, "--cumulative", "--membership", "--require-commit", "--plot") == 0
    assert run("paths", d, "--layer", "filesystem", "--out", out, "--sample-roots", 50, "--seed", 1) == 0
    for name in ("indegree.csv", "outdegree.csv", "indegree.svg", "outdegree_dir.csv", "clustering.csv",
                 "clustering.svg", "cc_sizes.csv", "cc_sizes.svg", "cc_origin_weighted.csv", "cc_summary.json",
                 "cc_membership.csv", "cc_stages.csv", "path_lengths.csv", "path_roots.csv", "paths.json"):
        assert (out / name).exists(), name
    info = json.loads((out / "paths.json").read_text())
    assert info["sampled"] and info["sample_seed"] == 1 and info["roots_processed"] == 50
    stages = (out / "cc_stages.csv").read_text().splitlines()
    assert stages[0].startswith("stage,") and len(stages) == 7
    assert run("fit", out / "outdegree.csv", "--out", tmp_path / "fit", "--plot", "--grid", "all") == 0
    assert (tmp_path / "fit" / "alpha_sweep.csv").read_text().startswith("dmin,alpha,ntail\n")
    assert (tmp_path / "fit" / "alpha_sweep.svg").exists()
    assert run("plot", tmp_path / "fit" / "alpha_sweep.csv", "--kind", "sweep", "--scale", "log-lin",
               "--out", tmp_path / "sw.svg") == 0
    assert run("plot", out / "indegree.csv", "--out", tmp_path / "in.svg") == 0


def test_ks_command(tmp_path, capsys):
    (tmp_path / "a.csv").write_text("value,count\n1,2\n2,1\n")
    (tmp_path / "b.csv").write_text("value,count\n2,3\n")
    assert run("ks", tmp_path / "a.csv", tmp_path / "b.csv", "--out", tmp_path / "ks") == 0
    assert "D=0.666666666666666" in capsys.readouterr().out
    assert (tmp_path / "ks" / "ks.csv").read_text().startswith("statistic,support_size\n")


def test_exit_codes(tmp_path):
    assert run("bogus") == 1
    assert run("paths") == 1
    assert run("gen", "--kind", "chain", "--n", 3, "--out", tmp_path / "x") == 1  # seed mandatory
    assert run("paths", tmp_path / "missing.dtp", "--out", tmp_path / "o") == 2
    (tmp_path / "bad.dtp").write_bytes(b"XXXX" + bytes(64))
    assert run("stats", tmp_path / "bad.dtp") == 2
    (tmp_path / "n.txt").write_text("swh:1:dir:nothex\n")
    (tmp_path / "e.txt").write_text("")
    assert run("build", "--nodes", tmp_path / "n.txt", "--edges", tmp_path / "e.txt", "--out", tmp_path / "g") == 2
    (tmp_path / "h.csv").write_text("value,count\n0,5\n")
    assert run("fit", tmp_path / "h.csv", "--out", tmp_path / "f") == 3
    assert run("gen", "--kind", "chain", "--n", 3, "--seed", 0, "--out", tmp_path / "c") == 0
    assert run("paths", tmp_path / "c", "--out", tmp_path / "o", "--sample-roots", 3) == 1


def test_strict_violation_exit_code(tmp_path):
    a, b = "a" * 40, "b" * 40
    (tmp_path / "n.txt").write_text(f"swh:1:cnt:{a}\nswh:1:dir:{b}\n")
    (tmp_path / "e.txt").write_text(f"swh:1:cnt:{a} swh:1:dir:{b}\n")
    args = ("build", "--nodes", tmp_path / "n.txt", "--edges", tmp_path / "e.txt", "--out", tmp_path / "g.dtp")
    assert run(*args) == 2
    assert run(*args, "--validation", "lenient") == 0


def test_threads_env(tmp_path, monkeypatch):
    d = tmp_path / "d"
    run("gen", "--kind", "dag", "--n", 400, "--seed", 4, "--out", d)
    monkeypatch.setenv("DAGTOPO_THREADS", "3")
    assert run("clustering", d, "--out", tmp_path / "c") == 0
    manifest = json.loads((tmp_path / "c" / "clustering.manifest.json").read_text())
    assert manifest["parameters"]["threads"] == 3
