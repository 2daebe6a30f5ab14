import pytest

from sharedstick.experiments import (
    Condition,
    compute_metrics,
    coupling_comparison_conditions,
    override_conditions,
    report_csv,
    run_experiment,
    summary_table,
)
from sharedstick.agents import PolicyConfig
from sharedstick.scripted import ScriptedSpec, run_scripted
from sharedstick.session import SessionConfig

SEEDS = (0, 1, 2)


def tiny_conditions():
    return coupling_comparison_conditions(SEEDS, max_seconds=6.0)


class TestConditionValidation:
    def test_zero_repetitions_rejected(self):
        spec = ScriptedSpec(
            config=SessionConfig(player_count=2),
            policies=(PolicyConfig(), PolicyConfig()),
        )
        with pytest.raises(ValueError, match="zero repetitions"):
            Condition("x", spec, ())

    def test_duplicate_names_rejected(self):
        a, b = tiny_conditions()
        with pytest.raises(ValueError):
            run_experiment([a, Condition(a.name, b.spec, b.seeds)])


class TestReportShape:
    def test_rows_and_summaries_present(self, tmp_path):
        report = run_experiment(tiny_conditions(), out_dir=tmp_path)
        assert {r.condition for r in report.rows} == {"coupled", "uncoupled"}
        assert len(report.rows) == 2 * len(SEEDS)
        assert len(report.summaries) == 2
        assert (tmp_path / "report.csv").exists()
        assert (tmp_path / "summary.txt").exists()
        assert (tmp_path / f"coupled_seed{SEEDS[0]}" / "ticks.csv").exists()

    def test_summary_table_readable(self):
        report = run_experiment(tiny_conditions())
        table = summary_table(report)
        lines = table.splitlines()
        assert lines[0].split()[0] == "condition"
        assert len(lines) == 3

    def test_metrics_fields(self):
        report = run_experiment(tiny_conditions())
        row = report.rows[0]
        assert row.ticks > 0
        assert 0.0 <= row.mean_disagreement <= 2.0 * 2**0.5
        if row.completed:
            assert row.time_to_goal is not None


class TestDeterminism:
    def test_identical_report_bytes(self):
        a = report_csv(run_experiment(tiny_conditions()))
        b = report_csv(run_experiment(tiny_conditions()))
        assert a == b


class TestDirectionOfEffect:
    def test_coupling_reduces_disagreement_small_pilot(self):
        report = run_experiment(tiny_conditions())
        by_name = {s.condition: s for s in report.summaries}
        assert by_name["coupled"].disagreement_mean < by_name["uncoupled"].disagreement_mean

    def test_override_shapes(self):
        rows = {}
        for haptics in (True, False):
            cond = override_conditions((0,), haptics=haptics, max_seconds=10.0)
            report = run_experiment([cond])
            rows[haptics] = report.rows[0]
        assert rows[True].mean_stick_x[0] < rows[False].mean_stick_x[0] < 1.0
        assert rows[True].mean_command_x < 0.0
