import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import grid_from
from vxmetrics import Palette, default_recipes, evaluate_all, serialize_catalog, serialize_grid
from vxmetrics.cli import main, read_samples
from vxmetrics.defaults import BLOCKS_1_12_2
from vxmetrics.io import read_table
from vxmetrics.metrics import METRIC_NAMES

PALETTE = Palette(BLOCKS_1_12_2)
SCORE_HEADER = "generator,judge,year,adaptability,functionality,narrative,aesthetic\n"


def village(rng, size=(12, 8, 12)):
    """Grass terrain plus a few random structures; returns (grid, changes csv)."""
    sx, sy, sz = size
    blocks = {(x, 0, z): "grass" for x in range(sx) for z in range(sz)}
    blocks.update({(x, 1, 0): "log" for x in range(3)})
    placed = {}
    names = ("planks", "cobblestone", "torch", "glass", "chest", "stonebrick", "oak_stairs")
    for _ in range(int(rng.integers(10, 60))):
        x, z = (int(v) for v in rng.integers(1, sx, 2))
        y = int(rng.integers(1, sy - 3))
        placed[(x, y, z)] = names[int(rng.integers(len(names)))]
    blocks.update(placed)
    grid = grid_from(size, PALETTE, blocks)
    lines = [f"{x},{y},{z},0,{PALETTE.id_of(n)}" for (x, y, z), n in sorted(placed.items())]
    return grid, "\n".join(lines) + "\n"


def write_run(folder, name, rng):
    grid, changes = village(rng)
    (folder / f"{name}.vxl").write_bytes(serialize_grid(grid))
    (folder / f"{name}.csv").write_text(changes)
    return grid


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def one_run(tmp_path):
    write_run(tmp_path, "s", np.random.default_rng(0))
    return tmp_path / "s.vxl", tmp_path / "s.csv"


class TestEvaluate:
    def test_row_equals_evaluate_all(self, one_run, capsys, catalog):
        from vxmetrics.cli import load_settlement

        code, out, _ = run(["evaluate", "--grid", one_run[0], "--changes", one_run[1]], capsys)
        assert code == 0
        row = read_table(out.encode())
        assert len(row) == 1
        expected = evaluate_all(load_settlement(*one_run, None), catalog, default_recipes()).metrics
        for name in METRIC_NAMES:
            assert float(row[0][name]) == pytest.approx(getattr(expected, name), rel=1e-14, abs=0)
        assert list(row[0]) == [*METRIC_NAMES, "warnings"]

    def test_missing_changeset(self, one_run, capsys):
        missing = one_run[1].with_name("nope.csv")
        code, _, err = run(["evaluate", "--grid", one_run[0], "--changes", missing], capsys)
        assert code == 2
        assert str(missing) in err

    def test_box_exceeding_grid(self, one_run, capsys):
        code, _, err = run(["evaluate", "--grid", one_run[0], "--changes", one_run[1],
                            "--box", "0,0,0,13,8,12"], capsys)
        assert code == 3
        assert err

    def test_corrupt_grid(self, one_run, capsys):
        one_run[0].write_bytes(b'{"format": "vxl"')
        code, _, err = run(["evaluate", "--grid", one_run[0], "--changes", one_run[1]], capsys)
        assert code == 2
        assert "byte" in err

    def test_out_file_and_catalog_env(self, one_run, tmp_path, capsys, monkeypatch, catalog):
        # A catalog where nothing is in any category makes every frequency 0.
        blocks = {n: {"empty": i.empty, "solid": i.solid, "mined": i.mined} for n, i in catalog.blocks.items()}
        doc = {"format": "vxm-catalog", "version": 1,
               "blocks": [{"name": n, **b} for n, b in blocks.items()]}
        path = tmp_path / "plain.json"
        path.write_text(json.dumps(doc))
        monkeypatch.setenv("VXM_CATALOG", str(path))
        out = tmp_path / "row.csv"
        assert run(["evaluate", "--grid", one_run[0], "--changes", one_run[1], "--out", out], capsys)[0] == 0
        row = read_table(out.read_bytes())[0]
        assert float(row["light"]) == 0.0 and float(row["aesthetic"]) == 0.0

    def test_default_catalog_serializes(self, tmp_path, catalog, one_run, capsys):
        path = tmp_path / "cat.json"
        path.write_bytes(serialize_catalog(catalog))
        a = run(["evaluate", "--grid", one_run[0], "--changes", one_run[1]], capsys)
        b = run(["evaluate", "--grid", one_run[0], "--changes", one_run[1], "--catalog", path], capsys)
        assert a == b


def make_batch(folder, generators=3, samples=4, seed=0, extra=None):
    rng = np.random.default_rng(seed)
    runs = []
    for g in range(generators):
        for i in range(samples):
            name = f"g{g}_{i}"
            write_run(folder, name, rng)
            runs.append({"generator": f"g{g}", "sample": i, "grid": f"{name}.vxl",
                         "changes": f"{name}.csv", "box": [0, 0, 0, 12, 8, 12]})
    runs += extra or []
    manifest = folder / "manifest.json"
    manifest.write_text(json.dumps({"runs": runs}))
    return manifest


class TestBatch:
    def test_partial_failure(self, tmp_path, capsys):
        manifest = make_batch(tmp_path, 2, 3)
        (tmp_path / "g1_2.vxl").write_bytes(b"not json")
        code, _, err = run(["batch", "--manifest", manifest, "--out", tmp_path / "out"], capsys)
        assert code == 0
        rows = read_table((tmp_path / "out" / "samples.csv").read_bytes())
        assert [r["status"] for r in rows] == ["ok"] * 5 + ["error"]
        assert "g1/2" in err
        summary = read_table((tmp_path / "out" / "summary.csv").read_bytes())
        assert {r["generator"] for r in summary} == {"g0", "g1", "Global"}
        n = {(r["generator"], r["metric"]): r["n"] for r in summary}
        assert n[("g1", "density")] == "2" and n[("Global", "density")] == "5"

    def test_empty_manifest(self, tmp_path, capsys):
        (tmp_path / "m.json").write_text('{"runs": []}')
        assert run(["batch", "--manifest", tmp_path / "m.json"], capsys)[0] == 3

    def test_all_runs_fail(self, tmp_path, capsys):
        manifest = make_batch(tmp_path, 1, 2)
        for i in range(2):
            (tmp_path / f"g0_{i}.csv").write_text("99,0,0,0,1\n")
        assert run(["batch", "--manifest", manifest, "--out", tmp_path / "o"], capsys)[0] == 3

    def test_unresolvable_path(self, tmp_path, capsys):
        extra = [{"generator": "gx", "sample": 0, "grid": "ghost.vxl", "changes": "ghost.csv"}]
        manifest = make_batch(tmp_path, 1, 1, extra=extra)
        code, _, err = run(["batch", "--manifest", manifest], capsys)
        assert code == 3 and "ghost.vxl" in err

    def test_duplicate_run(self, tmp_path, capsys):
        extra = [{"generator": "g0", "sample": 0, "grid": "g0_0.vxl", "changes": "g0_0.csv"}]
        manifest = make_batch(tmp_path, 1, 1, extra=extra)
        assert run(["batch", "--manifest", manifest], capsys)[0] == 3

    @pytest.mark.slow
    def test_ten_by_twenty_parallel(self, tmp_path, capsys):
        manifest = make_batch(tmp_path, 10, 20, seed=5)
        out = tmp_path / "out"
        assert run(["batch", "--manifest", manifest, "--out", out, "--jobs", 4], capsys)[0] == 0
        rows = read_table((out / "samples.csv").read_bytes())
        assert len(rows) == 200
        assert [(r["generator"], r["sample"]) for r in rows] == \
            [(f"g{g}", str(i)) for g in range(10) for i in range(20)]
        summary = read_table((out / "summary.csv").read_bytes())
        assert len({r["generator"] for r in summary}) == 11
        serial = tmp_path / "serial"
        assert run(["batch", "--manifest", manifest, "--out", serial], capsys)[0] == 0
        assert (serial / "samples.csv").read_bytes() == (out / "samples.csv").read_bytes()


def separated_samples(path, generators=10, per=20):
    """Samples CSV where relation_to_environment identifies the generator."""
    rng = np.random.default_rng(1)
    cols = ["generator", "sample", "status", *METRIC_NAMES, "warnings"]
    lines = [",".join(cols)]
    for g in range(generators):
        for i in range(per):
            values = {m: f"{rng.random():.6f}" for m in METRIC_NAMES}
            values["relation_to_environment"] = str(10 * g)
            values["block_type_count"] = "7"
            lines.append(",".join([f"g{g}", str(i), "ok", *(values[m] for m in METRIC_NAMES), ""]))
    path.write_text("\n".join(lines) + "\n")
    return path


def scores_file(path, generators):
    lines = [SCORE_HEADER.strip()]
    for k, g in enumerate(generators):
        for judge in ("a", "b"):
            lines.append(f"{g},{judge},2019,{k % 10},{(k * 3) % 10},{9 - k % 10},{(k * 7) % 10}")
    path.write_text("\n".join(lines) + "\n")
    return path


class TestInfogain:
    def test_top_row(self, tmp_path, capsys):
        code, out, _ = run(["infogain", separated_samples(tmp_path / "s.csv")], capsys)
        assert code == 0
        rows = read_table(out.encode())
        assert rows[0] == {"metric": "relation_to_environment", "information_gain": "3.32192809488736"}
        assert rows[-1] == {"metric": "block_type_count", "information_gain": "0"}
        gains = [float(r["information_gain"]) for r in rows]
        assert gains == sorted(gains, reverse=True)
        assert len(rows) == 14

    def test_markdown(self, tmp_path, capsys):
        code, out, _ = run(["infogain", separated_samples(tmp_path / "s.csv"), "--format", "markdown",
                            "--bins", "10"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "| metric | information_gain |" and lines[1] == "|---|---|"

    def test_single_generator(self, tmp_path, capsys):
        assert run(["infogain", separated_samples(tmp_path / "s.csv", generators=1)], capsys)[0] == 3


class TestCorrelate:
    def test_metrics_vs_scores(self, tmp_path, capsys):
        samples = separated_samples(tmp_path / "s.csv")
        scores = scores_file(tmp_path / "j.csv", [f"g{g}" for g in range(10)])
        code, out, err = run(["correlate", samples, scores], capsys)
        assert code == 0
        rows = read_table(out.encode())
        assert len(rows) == 14 * 5
        rte = {r["column"]: r for r in rows if r["row"] == "relation_to_environment"}
        # g0..g9 sorted; rte = 10*g and adaptability = g
        assert float(rte["adaptability"]["rho"]) == 1.0
        assert rte["adaptability"]["significant"] == "true"
        assert "block_type_count" in err  # constant column warning

    def test_missing_generator(self, tmp_path, capsys):
        samples = separated_samples(tmp_path / "s.csv")
        scores = scores_file(tmp_path / "j.csv", [f"g{g}" for g in range(9)])
        code, _, err = run(["correlate", samples, scores], capsys)
        assert code == 3
        assert "g9" in err

    def test_scores_vs_scores(self, tmp_path, capsys):
        scores = scores_file(tmp_path / "j.csv", [f"g{g}" for g in range(10)])
        code, out, _ = run(["correlate", scores, "--mode", "scores_vs_scores"], capsys)
        assert code == 0
        assert len(read_table(out.encode())) == 25

    def test_metrics_vs_metrics(self, tmp_path, capsys):
        samples = separated_samples(tmp_path / "s.csv")
        code, out, _ = run(["correlate", samples, "--mode", "metrics_vs_metrics"], capsys)
        assert code == 0
        assert len(read_table(out.encode())) == 14 * 14

    def test_bad_score_file(self, tmp_path, capsys):
        samples = separated_samples(tmp_path / "s.csv")
        bad = tmp_path / "j.csv"
        bad.write_text(SCORE_HEADER + "g0,a,2019,1,2,3,42\n")
        assert run(["correlate", samples, bad], capsys)[0] == 2


class TestReport:
    def test_markdown_default(self, tmp_path, capsys):
        code, out, _ = run(["report", separated_samples(tmp_path / "s.csv", 3, 4)], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "| metric | g0 | g1 | g2 | Global |"
        assert lines[1] == "|---|---|---|---|---|"
        assert lines[2].startswith("| light |")
        assert len(lines) == 2 + 14
        rte = lines[2 + METRIC_NAMES.index("relation_to_environment")]
        assert rte == "| relation_to_environment | 0 | 10 | 20 | 10 |"

    def test_csv_std(self, tmp_path, capsys):
        code, out, _ = run(["report", separated_samples(tmp_path / "s.csv", 2, 3), "--stat", "std",
                            "--format", "csv"], capsys)
        assert code == 0
        rows = {r["metric"]: r for r in read_table(out.encode())}
        assert float(rows["relation_to_environment"]["Global"]) == pytest.approx(np.std([0] * 3 + [10] * 3, ddof=1))


def test_repeat_runs_are_byte_identical(tmp_path, capsys):
    samples = separated_samples(tmp_path / "s.csv", 10, 3)
    scores = scores_file(tmp_path / "j.csv", [f"g{g}" for g in range(10)])
    outputs = [run(["correlate", samples, scores, "--seed", "3"], capsys)[1] for _ in range(2)]
    assert outputs[0] == outputs[1]
    manifest = make_batch(tmp_path, 2, 2)
    for name in ("a", "b"):
        assert run(["batch", "--manifest", manifest, "--out", tmp_path / name, "--jobs", 2], capsys)[0] == 0
    for f in ("samples.csv", "summary.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_batch_output_feeds_statistics(tmp_path, capsys):
    manifest = make_batch(tmp_path, 3, 3)
    assert run(["batch", "--manifest", manifest, "--out", tmp_path / "o"], capsys)[0] == 0
    samples = read_samples(tmp_path / "o" / "samples.csv")
    assert len(samples) == 9
    assert run(["infogain", tmp_path / "o" / "samples.csv"], capsys)[0] == 0
    assert run(["report", tmp_path / "o" / "samples.csv"], capsys)[0] == 0


def test_console_script_entry_point(one_run):
    proc = subprocess.run([sys.executable, "-m", "vxmetrics", "evaluate", "--grid", str(one_run[0]),
                           "--changes", str(one_run[1]), "--box", "0,0,0,99,1,1"],
                          capture_output=True, text=True)
    assert proc.returncode == 3
    assert proc.stderr.startswith("vxm:")
