import csv
import json
import math

import pytest

from kfcl import thresholds
from kfcl.cli import main
from kfcl.errors import ConfigError, CoverInvalidError
from kfcl.harness import ExperimentConfig, builtin_cover, caps_random, run
from kfcl.harness.builtin import parse_builtin, random_orders, simplex_vertices
from kfcl.sphere import check_antipodal_free, check_coverage, make_grid, save_cover


# -- thresholds ----------------------------------------------------------------

def test_threshold_hand_values():
    assert thresholds.kfcl_length(1) == 3
    assert thresholds.kfcl_length(4) == 6
    assert thresholds.lemma_rank(3) == 2
    assert thresholds.product_bound(6) == 3.5
    assert thresholds.two_order_length(3) == pytest.approx(math.sqrt(2))
    assert thresholds.two_order_length(7) == 2
    assert thresholds.multi_order_length(31, 3) == pytest.approx(2.0)
    assert thresholds.multi_order_length(5, 1) == 3
    with pytest.raises(ValueError):
        thresholds.multi_order_length(3, 0)


# -- builtins ---------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_simplex_voronoi_valid(n):
    cover = builtin_cover("simplex-voronoi", n)
    assert len(cover.sets) == n + 2
    grid = make_grid(n, 2000)
    assert check_antipodal_free(cover, grid).passed
    assert check_coverage(cover, grid).passed


def test_simplex_vertices_regular():
    v = simplex_vertices(3)
    gram = v @ v.T
    off = gram[~(gram > 0.999)]
    assert abs(v.sum(axis=0)).max() < 1e-12
    assert off == pytest.approx([-1 / 4] * len(off))


def test_caps_demo_valid():
    cover = builtin_cover("caps-demo-s1")
    assert check_antipodal_free(cover).passed
    assert check_coverage(cover, make_grid(1, 3600)).passed


def test_caps_random_contract():
    try:
        cover = caps_random(1, 4, 7)
    except CoverInvalidError as exc:
        assert "seed" in str(exc)
    else:
        assert check_antipodal_free(cover).passed
    cover = caps_random(1, 4, 0)
    assert check_antipodal_free(cover).passed and check_coverage(cover, make_grid(1, 3600)).passed
    assert cover.epsilon is not None
    with pytest.raises(CoverInvalidError):
        caps_random(2, 3, 0)


def test_builtin_errors():
    with pytest.raises(ConfigError):
        builtin_cover("nope")
    with pytest.raises(ConfigError):
        builtin_cover("simplex-voronoi")


def test_parse_builtin():
    assert parse_builtin("simplex-voronoi:2") == ("simplex-voronoi", (2,))
    assert parse_builtin("caps-random(2,6,7)") == ("caps-random", (2, 6, 7))
    assert parse_builtin("caps-demo-s1") == ("caps-demo-s1", ())
    assert parse_builtin("covers/my.json") is None


def test_random_orders_seeded():
    idx = builtin_cover("simplex-voronoi", 3).index
    assert random_orders(idx, 2, 5) == random_orders(idx, 2, 5)
    assert random_orders(idx, 2, 5) != random_orders(idx, 2, 6)


# -- config ------------------------------------------------------------------------

@pytest.mark.parametrize("data", [
    {"kind": "bogus"},
    {"kind": "kfcl"},
    {"kind": "kfcl", "cover": "simplex-voronoi:1", "resolution": 50},
    {"kind": "kfcl", "cover": "simplex-voronoi:1", "resolution": 1001},
    {"kind": "sharpness", "d": 2},
    {"kind": "d-orders", "cover": "simplex-voronoi:1"},
    {"kind": "kfcl", "cover": "simplex-voronoi:1", "colour": "red"},
    {"cover": "simplex-voronoi:1"},
])
def test_config_errors(data):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data)


def test_config_echo_excludes_paths():
    cfg = ExperimentConfig("kfcl", cover="simplex-voronoi:1", output="x.json", csv="y.csv", workers=4)
    echo = cfg.echo()
    assert "output" not in echo and "csv" not in echo and "workers" not in echo
    assert echo["cover"] == "simplex-voronoi:1" and echo["seed"] == 0


def test_missing_orders_reported():
    cfg = ExperimentConfig("two-orders", cover="simplex-voronoi:3")
    with pytest.raises(ConfigError, match="order seed"):
        run(cfg)


# -- runs -------------------------------------------------------------------------------

def test_run_kfcl_s1(tmp_path):
    out = tmp_path / "r.json"
    rep = run(ExperimentConfig("kfcl", cover="simplex-voronoi:1", resolution=3600, output=str(out)))
    assert rep.passed and rep.exit_code == 0
    assert rep.achieved["pattern_length"] >= 3
    data = json.loads(out.read_text())
    assert data["pass"] is True and data["rng"] == "numpy.random.Generator(PCG64)"
    best = data["witnesses"]["best"]
    assert {"witness_point", "pattern", "threshold", "pass", "grid_size"} <= set(best)
    assert data["details"]["observation_failures"] == []


def test_run_sharpness():
    rep = run(ExperimentConfig("sharpness", d=2, m=2))
    assert rep.passed and rep.achieved["longest"] == 2
    assert rep.details["bruteforce_longest"] == 2


def test_run_chi_demo():
    rep = run(ExperimentConfig("chi-demo"))
    pairs = sorted(zip(rep.achieved["sizes"], rep.achieved["coefficients"]), reverse=True)
    assert [s for s, _ in pairs] == [5, 4, 3, 2]
    assert [a for _, a in pairs] == pytest.approx([0.3, 0.2, 0.4, 0.1], abs=1e-12)
    assert rep.passed


def test_run_two_orders_s3():
    rep = run(ExperimentConfig("two-orders", cover="simplex-voronoi:3", resolution=4000, order_seed=1))
    assert rep.achieved["product"] >= 2 and rep.achieved["max_h"] >= 2
    assert rep.thresholds["max_h"] == pytest.approx(math.sqrt(2))


def test_run_lemma_rank_s2():
    rep = run(ExperimentConfig("lemma-rank", cover="simplex-voronoi:2", resolution=2000, order_seed=0))
    assert rep.achieved["rank_P"] >= 1.5 and rep.passed


def test_threshold_failure_exit_code():
    # on S^2 the long patterns sit on cell boundaries, which random points never hit
    rep = run(ExperimentConfig("kfcl", cover="simplex-voronoi:2", resolution=2000, anchors=False))
    assert not rep.passed and rep.exit_code == 2
    assert rep.achieved["pattern_length"] < rep.thresholds["pattern_length"]
    assert main(["verify", "--cover", "simplex-voronoi:2", "--grid", "2000", "--no-anchors"]) == 2


def test_validate_failure_is_error(tmp_path):
    path = tmp_path / "holey.json"
    path.write_text(json.dumps({"dimension": 1, "sets": [
        {"name": "A", "geometry": {"caps": [{"center": [1, 0], "radius": 0.5}]}}]}))
    rep = run(ExperimentConfig("validate-cover", cover=str(path)))
    assert not rep.passed and rep.exit_code == 1


def test_report_excludes_wall_time_by_default():
    rep = run(ExperimentConfig("sharpness", d=1, m=3))
    assert "wall_time" not in json.loads(rep.dumps())
    assert "wall_time" in json.loads(rep.dumps(include_timing=True))


def test_workers_do_not_change_report():
    base = dict(cover="simplex-voronoi:2", resolution=2000, seed=4)
    a = run(ExperimentConfig("kfcl", workers=1, **base)).dumps()
    b = run(ExperimentConfig("kfcl", workers=2, **base)).dumps()
    assert a == b


# -- CLI ----------------------------------------------------------------------------------

def test_cli_verify(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--cover", "simplex-voronoi:1", "--grid", "3600", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert json.loads(printed) == json.loads(out.read_text())


def test_cli_csv(tmp_path, capsys):
    path = tmp_path / "pts.csv"
    assert main(["verify", "--cover", "simplex-voronoi:1", "--grid", "360", "--csv", str(path)]) == 0
    size = json.loads(capsys.readouterr().out)["witnesses"]["best"]["grid_size"]
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["index", "x0", "x1", "pattern_length"]
    assert len(rows) == size + 1 > 360
    assert max(int(r[-1]) for r in rows[1:]) >= 3


def test_cli_multiorder(capsys):
    assert main(["multiorder", "--cover", "simplex-voronoi:3", "--grid", "2000", "--order-seed", "1"]) in (0, 2)
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["kind"] == "two-orders"
    assert main(["multiorder", "--cover", "simplex-voronoi:3", "--grid", "2000", "--order-seed", "1",
                 "--lemma-rank"]) in (0, 2)
    assert json.loads(capsys.readouterr().out)["config"]["kind"] == "lemma-rank"


def test_cli_sharpness(capsys):
    assert main(["sharpness", "--d", "3", "--m", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["achieved"]["longest"] == 2


def test_cli_chi(capsys):
    assert main(["chi"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert sorted(data["achieved"]["sizes"]) == [2, 3, 4, 5]


def test_cli_chi_epsilon_too_large(capsys):
    assert main(["chi", "--cover", "caps-demo-s1", "--point", "0", "1", "--epsilon", "3"]) == 1
    assert "epsilon" in capsys.readouterr().err.lower()


def test_cli_validate(tmp_path, capsys):
    path = tmp_path / "c.json"
    save_cover(builtin_cover("caps-demo-s1"), path)
    assert main(["validate", "--cover", str(path)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["details"]["epsilon_claim_failures"] == 0


def test_cli_errors(tmp_path, capsys):
    assert main(["verify", "--cover", "no/such/file.json"]) == 1
    assert main(["verify", "--cover", "simplex-voronoi:1", "--grid", "99"]) == 1
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{")
    assert main(["run", "--config", str(cfg)]) == 1
    assert "error" in capsys.readouterr().err


def test_cli_run_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "sharpness", "d": 2, "m": 3}))
    assert main(["run", "--config", str(cfg)]) == 0
    assert json.loads(capsys.readouterr().out)["achieved"]["longest"] == 3


def test_cli_timing_flag(capsys):
    main(["sharpness", "--d", "1", "--m", "2", "--timing"])
    assert "wall_time" in json.loads(capsys.readouterr().out)
