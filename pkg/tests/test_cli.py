import json
import os

import pytest

from laser.cli import main
from laser.graph import read_edge_list


def run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_gen_path(tmp_path):
    out = tmp_path / "p5.edges"
    assert main(["gen", "--kind", "path", "--nodes", "5", "--out", str(out)]) == 0
    assert read_edge_list(out).m == 4
    man = json.loads((tmp_path / "p5.edges.manifest.json").read_text())
    assert man["command"] == "gen" and man["n"] == 5 and man["m"] == 4


def test_gen_lollipop(tmp_path):
    out = tmp_path / "lolli.edges"
    main(["gen", "--kind", "lollipop", "--chain", "12", "--clique-size", "64", "--out", str(out)])
    assert read_edge_list(out).n == 76


def test_gen_erdos_renyi_is_reproducible(tmp_path):
    a, b = tmp_path / "a.edges", tmp_path / "b.edges"
    for path in (a, b):
        main(["gen", "--kind", "erdos-renyi", "--nodes", "2000", "--avg-degree", "10", "--seed", "7", "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()
    assert abs(read_edge_list(a).m - 10000) < 3 * 100


def test_gen_invalid_flags(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--kind", "lollipop", "--chain", "0", "--clique-size", "4", "--out", str(tmp_path / "x")])
    assert exc.value.code != 0
    assert not os.path.exists(tmp_path / "x")


@pytest.fixture
def p5(tmp_path):
    path = tmp_path / "p5.edges"
    main(["gen", "--kind", "path", "--nodes", "5", "--out", str(path)])
    return str(path)


def test_rewire_path_distance_two(tmp_path, p5):
    out = tmp_path / "rw"
    main(["rewire", "--in", p5, "--out", str(out), "--snapshots", "1", "--rho", "1"])
    lines = (out / "snapshot_1.edges").read_text().split("\n")
    records = {tuple(map(int, ln.split())) for ln in lines if ln}
    assert records == {(0, 2, 1), (2, 0, 1), (1, 3, 1), (3, 1, 1), (2, 4, 1), (4, 2, 1)}
    man = json.loads((out / "manifest.json").read_text())
    assert man["levels"] == [{"level": 1, "directed_added": 6, "undirected_added": 3, "file": "snapshot_1.edges"}]
    assert set(man["config"]) == {"L", "rho_density", "walk_k", "seed", "tie_sigma", "min_one", "mode"}
    assert man["n"] == 5 and man["m"] == 4


def test_rewire_rho_zero(tmp_path, p5):
    out = tmp_path / "rw"
    main(["rewire", "--in", p5, "--out", str(out), "--rho", "0"])
    man = json.loads((out / "manifest.json").read_text())
    assert man["levels"] == [] and man["rewiring_disabled"] is True
    assert sorted(os.listdir(out)) == ["manifest.json"]


def test_rewire_random_mode_deterministic(tmp_path):
    g = tmp_path / "er.edges"
    main(["gen", "--kind", "erdos-renyi", "--nodes", "80", "--avg-degree", "5", "--seed", "1", "--out", str(g)])
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        main(["rewire", "--in", str(g), "--out", str(out), "--snapshots", "2", "--rho", "0.3",
              "--mode", "random", "--seed", "3"])
        outs.append(out)
    for fname in ("snapshot_1.edges", "snapshot_2.edges"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()
    ma, mb = (json.loads((o / "manifest.json").read_text()) for o in outs)
    ma.pop("timings_ms"), mb.pop("timings_ms")
    assert ma == mb


def test_rewire_bad_rho(tmp_path, p5):
    with pytest.raises(SystemExit) as exc:
        main(["rewire", "--in", p5, "--out", str(tmp_path / "rw"), "--rho", "1.5"])
    assert exc.value.code == 2


def test_rewire_unreadable_input(tmp_path):
    with pytest.raises(SystemExit):
        main(["rewire", "--in", str(tmp_path / "missing.edges"), "--out", str(tmp_path / "rw")])
    assert not os.path.exists(tmp_path / "rw")


def test_metrics_triangle(tmp_path, capsys):
    g = tmp_path / "k3.edges"
    main(["gen", "--kind", "clique", "--nodes", "3", "--out", str(g)])
    capsys.readouterr()
    rep = run_json(capsys, ["metrics", "--in", str(g)])
    assert rep["total_er"] == pytest.approx(2.0, abs=1e-9)
    for key in ("n", "m", "spectral_gap", "total_er", "frobenius_per_level", "added_edges_per_level", "timings_ms"):
        assert key in rep


def test_metrics_monotone_over_levels(tmp_path, capsys):
    g = tmp_path / "er.edges"
    main(["gen", "--kind", "erdos-renyi", "--nodes", "120", "--avg-degree", "8", "--seed", "2", "--out", str(g)])
    rw = tmp_path / "rw"
    main(["rewire", "--in", str(g), "--out", str(rw), "--snapshots", "3", "--rho", "0.2"])
    capsys.readouterr()
    rep = run_json(capsys, ["metrics", "--in", str(g), "--rewired", str(rw)])
    frob, er = rep["frobenius_per_level"], rep["total_er_per_level"]
    assert len(frob) == 4 and frob[0] == 0
    assert all(a <= b for a, b in zip(frob, frob[1:]))
    assert all(a >= b for a, b in zip(er, er[1:]))


def test_metrics_disconnected(tmp_path, capsys):
    g = tmp_path / "two.edges"
    g.write_text("0 1\n2 3\n")
    rep = run_json(capsys, ["metrics", "--in", str(g)])
    assert rep["total_er"] is None
    assert "disconnected" in rep["warning"]


def test_ablate_lollipop(capsys):
    rep = run_json(capsys, ["ablate", "lollipop", "--chain", "12", "--clique-size", "64", "--rho", "0.0833", "--seeds", "5"])
    assert rep["laser_deviation_mean"] < rep["spectral_deviation"]
    assert rep["spectral_deviation"] >= rep["spectral_lower_bound"]
    assert rep["laser_better"] is True


def test_ablate_spectral_edge_chain_end(capsys):
    rep = run_json(capsys, ["ablate", "lollipop", "--chain", "9", "--clique-size", "50", "--seeds", "2"])
    assert 0 in rep["spectral_edge"] and rep["spectral_edge_touches_chain_end"]


def test_bench_small_deterministic(capsys):
    a = run_json(capsys, ["bench", "--nodes", "100", "--seed", "4"])
    b = run_json(capsys, ["bench", "--nodes", "100", "--seed", "4"])
    assert set(a["timings_ms"]) == {"generate", "measures", "selection"}
    a.pop("timings_ms"), b.pop("timings_ms")
    assert a == b


def test_sensitivity_report(tmp_path, capsys):
    rep = run_json(capsys, ["sensitivity", "--nodes", "7", "--shortcut", "3"])
    assert set(rep) >= {"source", "target", "layers", "jacobian_norm", "expected_norm", "prop1"}
    assert rep["prop1"]["holds"] is True
    assert rep["prop1"]["lhs"] > rep["prop1"]["rhs"]
    assert rep["layers"] == 4
    assert rep["jacobian_norm"] == pytest.approx(rep["jacobian_norm_exact"], rel=1e-6)


def test_sensitivity_writes_file(tmp_path):
    out = tmp_path / "s.json"
    main(["sensitivity", "--nodes", "5", "--shortcut", "2", "--out", str(out)])
    assert json.loads(out.read_text())["target"] == 4


def test_floats_have_twelve_significant_digits(capsys):
    rep = run_json(capsys, ["sensitivity", "--nodes", "7", "--shortcut", "3"])
    assert len(repr(rep["prop1"]["lhs"]).replace("0.", "").lstrip("0")) <= 13
