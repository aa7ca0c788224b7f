import json

import pytest

from causalwhatif.cli import main
from causalwhatif.dataset import load_csv
from causalwhatif.models import load_model


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_g1_csv(self, tmp_path, capsys):
        out = tmp_path / "g1.csv"
        code, stdout, stderr = run_cli(capsys, "gen", "--scm", "g1", "--n", "200",
                                       "--seed", "4", "--out", str(out))
        assert code == 0 and stderr == ""
        table = load_csv(out, outcome="Y")
        assert table.n_rows == 200
        assert table.column_names == ("X1", "X2", "X3", "X4", "X5", "Y")

    def test_deterministic_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(capsys, "gen", "--scm", "g2", "--n", "100", "--seed", "9",
                "--out", str(a))
        run_cli(capsys, "gen", "--scm", "g2", "--n", "100", "--seed", "9",
                "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_wine_requires_env(self, tmp_path, capsys):
        code, _, stderr = run_cli(capsys, "gen", "--scm", "wine", "--n", "50",
                                  "--out", str(tmp_path / "w.csv"))
        assert code == 2
        assert "--env" in stderr

    def test_wine_env_generation(self, tmp_path, capsys):
        out = tmp_path / "w.csv"
        code, _, _ = run_cli(capsys, "gen", "--scm", "wine", "--n", "50",
                             "--env", "1", "--seed", "2", "--out", str(out))
        assert code == 0
        table = load_csv(out, outcome="Y")
        assert table.column_names == ("X1", "X2", "X3", "Y", "P")
        code, _, stderr = run_cli(capsys, "gen", "--scm", "g1", "--n", "50",
                                  "--env", "1", "--out", str(tmp_path / "g.csv"))
        assert code == 2 and "--env" in stderr

    def test_binarized_outcome(self, tmp_path, capsys):
        out = tmp_path / "g1b.csv"
        code, _, _ = run_cli(capsys, "gen", "--scm", "g1", "--n", "300",
                             "--seed", "1", "--binarize-outcome", "--out", str(out))
        assert code == 0
        table = load_csv(out, outcome="Y")
        assert set(table.column("Y").values.tolist()) <= {0.0, 1.0}


@pytest.fixture(scope="module")
def g1_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "g1.csv"
    assert main(["gen", "--scm", "g1", "--n", "6000", "--seed", "30",
                 "--out", str(path)]) == 0
    return path


class TestDiscover:
    def test_finds_parents(self, g1_csv, capsys):
        code, stdout, _ = run_cli(capsys, "discover", "--data", str(g1_csv),
                                  "--outcome", "Y")
        assert code == 0
        assert stdout.strip() == "X1 X2 X3 X4"

    def test_json_output(self, g1_csv, capsys):
        code, stdout, _ = run_cli(capsys, "discover", "--data", str(g1_csv),
                                  "--outcome", "Y", "--json")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["parents"] == ["X1", "X2", "X3", "X4"]
        assert payload["n_tests"] > 0

    def test_alpha_zero_usage_error(self, g1_csv, capsys):
        code, _, stderr = run_cli(capsys, "discover", "--data", str(g1_csv),
                                  "--outcome", "Y", "--alpha", "0")
        assert code == 2 and "alpha" in stderr

    def test_missing_file(self, capsys):
        code, _, stderr = run_cli(capsys, "discover", "--data", "/nope.csv",
                                  "--outcome", "Y")
        assert code == 2


class TestTrainAndWhatif:
    def test_train_whatif_intervene_flow(self, g1_csv, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        code, stdout, _ = run_cli(capsys, "train", "--data", str(g1_csv),
                                  "--outcome", "Y", "--model", "rf",
                                  "--trees", "40", "--out", str(model_path),
                                  "--json")
        assert code == 0
        assert json.loads(stdout)["parents"] == ["X1", "X2", "X3", "X4"]
        model = load_model(model_path)
        assert model.spec.n_trees == 40

        code, stdout, _ = run_cli(capsys, "whatif", "--model", str(model_path),
                                  "--instance", "X1=0,X2=0,X3=0,X4=0,X5=0",
                                  "--k", "3", "--json")
        assert code == 0
        report = json.loads(stdout)
        assert len(report["entries"]) == 3
        assert {e["feature"] for e in report["entries"]} <= {"X1", "X2", "X3", "X4"}

        top = report["entries"][0]
        code, stdout, _ = run_cli(capsys, "intervene", "--model", str(model_path),
                                  "--instance", "X1=0,X2=0,X3=0,X4=0,X5=0",
                                  "--feature", top["feature"],
                                  "--value", str(top["treated"]), "--json")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["new_prediction"] - report["prediction"] == \
            pytest.approx(top["cde"], abs=1e-12)

    def test_logreg_on_continuous_outcome_fails(self, g1_csv, tmp_path, capsys):
        code, _, stderr = run_cli(capsys, "train", "--data", str(g1_csv),
                                  "--outcome", "Y", "--model", "logreg",
                                  "--out", str(tmp_path / "m.json"))
        assert code == 2
        assert "binary" in stderr

    def test_whatif_k_zero_usage_error(self, g1_csv, tmp_path, capsys):
        model_path = tmp_path / "m.json"
        run_cli(capsys, "train", "--data", str(g1_csv), "--outcome", "Y",
                "--model", "lr", "--out", str(model_path))
        code, _, stderr = run_cli(capsys, "whatif", "--model", str(model_path),
                                  "--instance", "X1=0,X2=0,X3=0,X4=0",
                                  "--k", "0")
        assert code == 2 and "k" in stderr

    def test_whatif_missing_feature_named(self, g1_csv, tmp_path, capsys):
        model_path = tmp_path / "m.json"
        run_cli(capsys, "train", "--data", str(g1_csv), "--outcome", "Y",
                "--model", "lr", "--out", str(model_path))
        code, _, stderr = run_cli(capsys, "whatif", "--model", str(model_path),
                                  "--instance", "X1=0,X2=0,X3=0")
        assert code == 2
        assert "X4" in stderr

    def test_instance_json_file(self, g1_csv, tmp_path, capsys):
        model_path = tmp_path / "m.json"
        run_cli(capsys, "train", "--data", str(g1_csv), "--outcome", "Y",
                "--model", "lr", "--out", str(model_path))
        inst = tmp_path / "inst.json"
        inst.write_text(json.dumps({f"X{i}": 1 for i in range(1, 6)}))
        code, stdout, _ = run_cli(capsys, "whatif", "--model", str(model_path),
                                  "--instance", str(inst), "--json")
        assert code == 0
        assert json.loads(stdout)["instance"]["X1"] == 1.0


class TestCreditStyleFlow:
    def test_categorical_csv_trains_and_ranks(self, tmp_path, capsys):
        # credit-style ingestion: categorical levels become <col>.<level>
        # binary features, numeric columns stay, outcome is binary
        rng_rows = []
        import numpy as np

        rng = np.random.default_rng(14)
        for _ in range(400):
            history = rng.choice(["A30", "A32", "A34"])
            savings = int(rng.integers(0, 2))
            score = (history == "A34") + savings + rng.integers(0, 2)
            rng_rows.append((history, savings, int(score >= 2)))
        csv_path = tmp_path / "credit.csv"
        lines = ["Credit.history,Savings.account,Y"]
        lines += [f"{h},{s},{y}" for h, s, y in rng_rows]
        csv_path.write_text("\n".join(lines) + "\n")

        model_path = tmp_path / "credit-model.json"
        code, stdout, _ = run_cli(capsys, "train", "--data", str(csv_path),
                                  "--outcome", "Y", "--model", "rf",
                                  "--trees", "30", "--all-features",
                                  "--out", str(model_path), "--json")
        assert code == 0
        parents = json.loads(stdout)["parents"]
        assert "Credit.history.A34" in parents  # one-hot naming

        instance = {p: 0.0 for p in parents}
        inst_path = tmp_path / "inst.json"
        inst_path.write_text(json.dumps(instance))
        code, stdout, _ = run_cli(capsys, "whatif", "--model", str(model_path),
                                  "--instance", str(inst_path), "--k", "3",
                                  "--json")
        assert code == 0
        report = json.loads(stdout)
        assert report["class_of_interest"] == 1.0
        assert 0.0 <= report["prediction"] <= 1.0
        assert len(report["entries"]) == 3


class TestBenchCli:
    def test_bias_small(self, tmp_path, capsys):
        out = tmp_path / "reports"
        code, stdout, _ = run_cli(capsys, "bench", "bias", "--sizes", "300",
                                  "--reps", "2", "--models", "lr",
                                  "--seed", "3", "--out", str(out), "--json")
        assert code == 0
        payload = json.loads(stdout)
        md = (out / "bias_g1.md").read_text()
        assert "parents_only" in md and "all_variables" in md
        table = load_csv(out / "bias_g1.csv", outcome="reps")
        assert table.n_rows == 2

    def test_robust_small(self, tmp_path, capsys):
        out = tmp_path / "reports"
        code, _, _ = run_cli(capsys, "bench", "robust", "--n", "400",
                             "--reps", "2", "--models", "lr", "--seed", "3",
                             "--out", str(out))
        assert code == 0
        text = (out / "robust_wine.md").read_text()
        for pair in ("0->0", "1->1", "0->1", "1->0"):
            assert pair in text

    def test_deterministic_reports(self, tmp_path, capsys):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        for out in (out1, out2):
            run_cli(capsys, "bench", "bias", "--sizes", "300", "--reps", "2",
                    "--models", "lr", "--seed", "3", "--out", str(out))
        assert (out1 / "bias_g1.csv").read_bytes() == (out2 / "bias_g1.csv").read_bytes()
        assert (out1 / "bias_g1.md").read_bytes() == (out2 / "bias_g1.md").read_bytes()


class TestConfigFile:
    def test_config_supplies_defaults_flags_override(self, g1_csv, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"alpha": 0.2, "max_cond": 1}))
        code, stdout, _ = run_cli(capsys, "--config", str(config), "discover",
                                  "--data", str(g1_csv), "--outcome", "Y", "--json")
        assert code == 0
        assert json.loads(stdout)["alpha"] == 0.2
        code, stdout, _ = run_cli(capsys, "--config", str(config), "discover",
                                  "--data", str(g1_csv), "--outcome", "Y",
                                  "--alpha", "0.05", "--json")
        assert json.loads(stdout)["alpha"] == 0.05
