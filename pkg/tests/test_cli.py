import json

import pytest

import kmatch as km
from kmatch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBounds:
    def test_reference_point_text(self, capsys):
        code, out, _ = run(capsys, "bounds", "--n", "1e6", "--d", "100", "--k", "2")
        assert code == 0
        upper_line = next(l for l in out.splitlines() if l.startswith("upper"))
        assert abs(float(upper_line.split(":")[1]) - 46051.7) < 0.1

    def test_json_keys(self, capsys):
        code, out, _ = run(
            capsys, "bounds", "--n", "1e5", "--d", "20", "--k", "2", "--json"
        )
        assert code == 0
        obj = json.loads(out)
        assert list(obj) == ["upper", "lower_maximal", "generator_target", "m_star", "s", "A", "p_d"]
        assert int(obj["s"]) == 775

    def test_full_precision_round_trip(self, capsys):
        _, out, _ = run(capsys, "bounds", "--n", "1e6", "--d", "100", "--k", "2", "--json")
        obj = json.loads(out)
        assert obj["upper"] == 10**4 * __import__("math").log(100.0)

    def test_d_p_mutually_exclusive(self, capsys):
        code, _, err = run(
            capsys, "bounds", "--n", "100", "--d", "5", "--p", "0.05", "--k", "2"
        )
        assert code == 1

    def test_out_of_regime_is_error(self, capsys):
        code, _, err = run(capsys, "bounds", "--n", "10", "--d", "5", "--k", "3")
        assert code == 1
        assert "error" in err


class TestOracle:
    def test_dist_example(self, capsys):
        code, out, _ = run(
            capsys,
            "oracle", "--n", "3", "--p", "0.5", "--k", "3",
            "--event", "dist", "--u", "0", "--v", "1",
        )
        assert code == 0
        obj = json.loads(out)
        assert obj == {"event": "dist", "n": 3, "p": 0.5, "k": 3, "value": 0.375}

    def test_kmatch_event(self, capsys):
        code, out, _ = run(
            capsys,
            "oracle", "--n", "4", "--p", "0.5", "--k", "2",
            "--event", "kmatch", "--edge", "0,1", "--edge", "2,3",
        )
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(0.015625)

    def test_xm_event(self, capsys):
        code, out, _ = run(
            capsys,
            "oracle", "--n", "3", "--p", "0.5", "--k", "2", "--event", "xm", "--m", "1",
        )
        assert json.loads(out)["value"] == pytest.approx(1.5)

    def test_umk_event(self, capsys):
        code, out, _ = run(
            capsys, "oracle", "--n", "2", "--p", "0.5", "--k", "2", "--event", "umk"
        )
        assert json.loads(out)["value"] == {"0": 0.5, "1": 0.5}

    def test_missing_event_args(self, capsys):
        code, _, err = run(
            capsys, "oracle", "--n", "3", "--p", "0.5", "--k", "2", "--event", "dist"
        )
        assert code == 1

    def test_n_cap_respected(self, capsys):
        code, _, err = run(
            capsys,
            "oracle", "--n", "9", "--p", "0.5", "--k", "2",
            "--event", "dist", "--u", "0", "--v", "1",
        )
        assert code == 1


class TestMatchingCommands:
    def test_greedy_empty_graph(self, capsys):
        code, out, _ = run(
            capsys, "greedy", "--n", "0", "--p", "0.5", "--k", "2", "--seed", "7"
        )
        assert code == 0
        assert out.startswith("size 0")

    def test_greedy_requires_seed(self, capsys):
        code, _, _ = run(capsys, "greedy", "--n", "10", "--p", "0.5", "--k", "2")
        assert code == 1

    def test_generator_stall_is_exit_2(self, capsys):
        code, _, err = run(
            capsys,
            "generator", "--n", "8", "--p", "0", "--k", "2", "--seed", "1", "--s", "1",
        )
        assert code == 2
        assert "stalled" in err

    def test_generator_success(self, capsys):
        code, out, _ = run(
            capsys,
            "generator", "--n", "200", "--d", "6", "--k", "2", "--seed", "1", "--s", "5",
        )
        assert code == 0
        assert out.startswith("size 5")

    def test_exact_on_file(self, capsys, tmp_path):
        path = tmp_path / "g.edges"
        km.write_edge_list(km.path_graph(7), str(path))
        code, out, _ = run(capsys, "exact", "--input", str(path), "--k", "2")
        assert code == 0
        assert out.startswith("size 2")

    def test_gen_to_file_round_trip(self, capsys, tmp_path):
        path = tmp_path / "g.edges"
        code, _, _ = run(
            capsys,
            "gen", "--n", "50", "--p", "0.1", "--seed", "3", "--out", str(path),
        )
        assert code == 0
        g = km.read_edge_list(str(path))
        assert g == km.sample_gnp(km.GnpParams(50, 0.1, 3))

    def test_matching_file_output(self, capsys, tmp_path):
        path = tmp_path / "m.txt"
        code, out, _ = run(
            capsys,
            "greedy", "--n", "30", "--p", "0.2", "--k", "2", "--seed", "5",
            "--out", str(path),
        )
        assert code == 0
        from kmatch.matching import KMatching

        m = KMatching.from_text(path.read_text())
        assert m.k == 2


class TestExperimentCommands:
    def test_experiment_csv_stdout(self, capsys):
        code, out, _ = run(
            capsys,
            "experiment", "--n", "200", "--d", "5", "--k", "2",
            "--trials", "3", "--seed", "9", "--algorithm", "greedy",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("trial_index,")
        assert len(lines) == 4

    def test_experiment_reproducible_files(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            code, _, _ = run(
                capsys,
                "experiment", "--n", "300", "--d", "6", "--k", "2",
                "--trials", "4", "--seed", "11", "--algorithm", "greedy",
                "--out", str(path),
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_theorem51_json(self, capsys):
        code, out, err = run(
            capsys,
            "theorem51", "--n", "2000", "--d", "10", "--k", "2",
            "--samples", "3", "--seed", "4", "--format", "json",
        )
        assert code == 0
        obj = json.loads(out)
        assert len(obj["records"]) == 3
        assert "mean_far_ratio" in obj["summary"]

    def test_layers_run(self, capsys):
        code, out, _ = run(
            capsys,
            "layers", "--n", "3000", "--d", "5", "--k", "3",
            "--samples", "2", "--seed", "4",
        )
        assert code == 0
        header = out.split("\n")[0]
        assert "layer_ratio_0,layer_ratio_1" in header


class TestUsage:
    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "bounds", "--n", "10", "--bogus")
        assert code == 1

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 1

    def test_scientific_notation_count(self, capsys):
        code, out, _ = run(
            capsys, "bounds", "--n", "1e3", "--d", "10", "--k", "2", "--json"
        )
        assert code == 0
        assert json.loads(out)["p_d"] == pytest.approx(0.01)

    def test_help_mentions_flag_semantics(self, capsys):
        code, out, _ = run(capsys, "greedy", "--help")
        assert code == 0
        assert "--k" in out and "endpoint distance" in out
        assert "--seed" in out and "reproducible" in out
