"""Black-box checks of the command line tool against the bundled datasets."""

import glob
import os
import subprocess

import pytest

BIN = os.environ.get("MATPATH_BIN", "")
DATASETS = os.environ.get(
    "MATPATH_DATASETS",
    os.path.join(os.path.dirname(__file__), "..", "..", "datasets"),
)

pytestmark = pytest.mark.skipif(
    not (BIN and os.path.exists(BIN)), reason="MATPATH_BIN not set"
)


def run(*args, expect=0):
    result = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True)
    assert result.returncode == expect, result.stderr or result.stdout
    return result


@pytest.fixture(scope="module")
def graph_file(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "graph.json"
    meshes = sorted(glob.glob(os.path.join(DATASETS, "shapes", "*.off")))
    args = ["build-graph", "--config", os.path.join(DATASETS, "config.json"), "--out", out]
    for mesh in meshes:
        args += ["--mesh", mesh]
    run(*args)
    return out


def test_build_graph_reports_the_output(graph_file):
    assert graph_file.exists()


def test_build_graph_is_deterministic(graph_file, tmp_path):
    again = tmp_path / "again.json"
    meshes = sorted(glob.glob(os.path.join(DATASETS, "shapes", "*.off")))
    args = ["--threads", 3, "build-graph", "--config",
            os.path.join(DATASETS, "config.json"), "--out", again]
    for mesh in meshes:
        args += ["--mesh", mesh]
    run(*args)
    assert again.read_bytes() == graph_file.read_bytes()


def test_distance_stats_prints_the_distribution():
    meshes = sorted(glob.glob(os.path.join(DATASETS, "shapes", "*.off")))
    args = ["build-graph", "--clusters", 6, "--percentiles", 20, "--distance-stats"]
    for mesh in meshes:
        args += ["--mesh", mesh]
    out = run(*args).stdout
    assert [line.split()[0] for line in out.splitlines()] == \
        ["min", "q1", "median", "q3", "max", "mean"]


def test_shortest_path_prints_path_cost_certified(graph_file):
    out = run("shortest-path", graph_file, "--source", "ladder0",
              "--target", "spiral2").stdout
    lines = out.splitlines()
    assert lines[0].startswith("path ladder0")
    assert lines[0].endswith("spiral2")
    assert lines[1].startswith("cost ")
    assert lines[2] == "certified true"


def test_retrieve_summary_is_perfect_on_the_bundle(graph_file):
    out = run("retrieve", "--graph", graph_file, "--labels",
              os.path.join(DATASETS, "labels.csv")).stdout
    lines = out.splitlines()
    assert lines[0] == "k,mean_g,std_g"
    assert len(lines) == 9  # 8 neighbor counts for 9 shapes
    for line in lines[1:5]:
        assert line.split(",")[1] == "1"


def test_all_pairs_writes_a_table(graph_file, tmp_path):
    table = tmp_path / "table.json"
    out = run("all-pairs", graph_file, "--out", table).stdout
    assert "certified true" in out
    assert table.exists()
    summary = run("retrieve", "--table", table, "--labels",
                  os.path.join(DATASETS, "labels.csv")).stdout
    assert summary.splitlines()[1] == "1,1,0"


def test_morph_writes_frames_and_manifest(tmp_path):
    keyframes = sorted(glob.glob(os.path.join(DATASETS, "keyframes", "*.obj")))
    out_dir = tmp_path / "frames"
    run("morph", *keyframes, "--out", out_dir, "--frames", 12)
    assert len(list(out_dir.glob("frame_*.obj"))) == 12
    assert (out_dir / "manifest.json").exists()


def test_bench_emits_the_report_csv():
    out = run("bench", "--random-nodes", 7, "--matrix-dim", 5, "--kmax", 2,
              "--cert", "--seed", 11).stdout
    lines = out.splitlines()
    assert lines[0].startswith("dataset,nodes,kmax,sp_seconds")
    assert lines[1].startswith("random7,7,2,")


def test_validate_passes_on_built_graphs(graph_file):
    out = run("validate", graph_file).stdout
    assert all(line.startswith("ok ") for line in out.splitlines())


def test_missing_input_exits_2():
    result = run("shortest-path", "does-not-exist.json", "--source", "a",
                 "--target", "b", expect=2)
    assert result.stderr.startswith("error 2: ")


def test_infeasible_request_exits_3(graph_file):
    result = run("shortest-path", graph_file, "--source", "ladder0",
                 "--target", "spiral2", "--fixed-k", 99, expect=3)
    assert result.stderr.startswith("error 3: ")


def test_unconverged_normalization_exits_4(tmp_path):
    meshes = sorted(glob.glob(os.path.join(DATASETS, "shapes", "*.off")))
    args = ["build-graph", "--config", os.path.join(DATASETS, "config.json"),
            "--sigma", 0.02, "--out", tmp_path / "bad.json"]
    for mesh in meshes:
        args += ["--mesh", mesh]
    result = run(*args, expect=4)
    assert result.stderr.startswith("error 4: ")
