from __future__ import annotations

import json

import pytest

from shotspeak.cli import main
from shotspeak.ingest import read_shots_csv, select_model_shots


@pytest.fixture()
def workdir(tmp_path, demo_data_root, monkeypatch):
    """Run CLI commands from a scratch directory against the demo data."""
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(workdir, demo_data_root, *argv: str) -> int:
    return main(["--data-root", str(demo_data_root), *argv])


class TestSubcommands:
    def test_ingest_writes_canonical_csv(self, workdir, demo_data_root, demo_competition_id, capsys):
        assert run(workdir, demo_data_root, "ingest", demo_competition_id) == 0
        out = capsys.readouterr().out
        assert "ingested" in out
        csv_path = workdir / "shots" / f"{demo_competition_id}.csv"
        assert csv_path.exists()
        assert len(read_shots_csv(csv_path)) > 50

    def test_fit_writes_model_and_prints_summary(self, workdir, demo_data_root, demo_competition_id, capsys):
        assert run(workdir, demo_data_root, "fit", demo_competition_id) == 0
        out = capsys.readouterr().out
        assert "intercept" in out
        assert (workdir / "models" / f"{demo_competition_id}.model").exists()
        assert (workdir / "models" / f"{demo_competition_id}.bands.json").exists()

    def test_explain_prints_document(self, workdir, demo_data_root, demo_competition_id, store, capsys):
        shot = select_model_shots(store.shots(demo_competition_id))[0]
        assert run(workdir, demo_data_root, "explain", shot.shot_id) == 0
        document = json.loads(capsys.readouterr().out)
        assert document["explanation"]["shot_id"] == shot.shot_id
        assert len(document["explanation"]["contributions"]) == 11

    def test_explain_unknown_shot_fails_with_message(self, workdir, demo_data_root, capsys):
        assert run(workdir, demo_data_root, "explain", "no-such-shot") == 1
        assert "not found" in capsys.readouterr().err

    def test_wordalise_with_mock_provider(self, workdir, demo_data_root, demo_competition_id, store, capsys):
        shot = select_model_shots(store.shots(demo_competition_id))[0]
        assert run(workdir, demo_data_root, "wordalise", shot.shot_id, "--case", "4") == 0
        assert capsys.readouterr().out.strip()  # mock fallback text

    def test_evaluate_table_identical_across_invocations(
        self, workdir, demo_data_root, demo_competition_id, capsys
    ):
        argv = ("evaluate", "--competition", demo_competition_id, "--cases", "1", "2", "5", "--runs", "2")
        assert run(workdir, demo_data_root, *argv) == 0
        first = capsys.readouterr().out
        assert run(workdir, demo_data_root, *argv) == 0
        second = capsys.readouterr().out
        assert first == second
        assert "case1" in first

    def test_evaluate_writes_chart_json(self, workdir, demo_data_root, demo_competition_id, capsys):
        assert (
            run(
                workdir, demo_data_root, "evaluate", "--competition", demo_competition_id,
                "--cases", "1", "--runs", "1", "--output", "chart.json",
            )
            == 0
        )
        chart = json.loads((workdir / "chart.json").read_text())
        assert chart["cases"] == ["case1"]

    def test_model_card_written(self, workdir, demo_data_root, capsys):
        assert run(workdir, demo_data_root, "model-card") == 0
        path = workdir / "model_cards" / "model_card.md"
        assert path.exists()
        assert path.read_text().startswith("# Shot quality and commentary model card")


class TestUsageErrors:
    def test_unknown_subcommand_exits_nonzero(self, workdir, demo_data_root):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2

    def test_unknown_flag_exits_nonzero(self, workdir, demo_data_root, demo_competition_id):
        with pytest.raises(SystemExit) as excinfo:
            main(["fit", demo_competition_id, "--bogus"])
        assert excinfo.value.code == 2

    def test_config_file_round_trip(self, workdir, demo_data_root, demo_competition_id):
        from shotspeak.config import example_config, load_config

        config_path = workdir / "shotspeak.ini"
        config_path.write_text(example_config())
        config = load_config(config_path)
        assert config.llm.endpoint_url == "mock:"
        assert config.evaluation_runs == 10
        assert main(["--config", str(config_path), "--data-root", str(demo_data_root), "fit", demo_competition_id]) == 0

    def test_missing_config_file_is_error(self, workdir, demo_data_root):
        assert main(["--config", "absent.ini", "model-card"]) == 1
