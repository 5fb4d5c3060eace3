import json
import math

import pytest

from quadcpg.controllers import open_loop_trot
from quadcpg.registry import builtin_registry
from quadcpg.rollout import (read_record_csv, record_columns,
                             run_open_loop_trajectory, run_rollout,
                             trajectory_columns, write_record_csv,
                             write_record_manifest)

REG = builtin_registry()
A1 = REG.get("A1")


class TestOpenLoopTrajectory:
    def test_row_count_and_swing_height(self):
        columns, rows = run_open_loop_trajectory(A1, 1.0, 2.5, 2.0)
        assert columns == trajectory_columns()
        assert len(rows) == 200
        iz = columns.index("foot_z_fr")
        zs = [row[iz] for row in rows]
        # apex at -h + L_clrnc, stance bottom at -h - L_pntr
        assert max(zs) == pytest.approx(-0.23, abs=1e-9)
        assert min(zs) == pytest.approx(-0.31, abs=1e-9)

    def test_zero_frequency_rows_identical_after_settle(self):
        columns, rows = run_open_loop_trajectory(A1, 1.0, 0.0, 2.0)
        settled = rows[100:]
        for row in settled[1:]:
            assert row[1:] == pytest.approx(settled[0][1:], abs=1e-9)

    def test_dog3_stride_span(self):
        columns, rows = run_open_loop_trajectory(REG.get("Dog3"), 1.0, 2.5, 2.0)
        ix = columns.index("foot_x_fr")
        xs = [row[ix] for row in rows[-40:]]  # last full cycle, r settled
        assert max(xs) - min(xs) == pytest.approx(2 * 0.36, rel=1e-3)

    def test_invalid_duration(self):
        with pytest.raises(ValueError):
            run_open_loop_trajectory(A1, 1.0, 2.5, 0.0)


class TestRunRollout:
    def test_summary_speed(self):
        record = run_rollout(A1, open_loop_trot(1.0, 2.5), duration=5.0, seed=0)
        assert len(record.rows) == 500
        assert record.columns == record_columns()
        # full-run mean includes the amplitude ramp transient
        assert record.mean_velocity == pytest.approx(1.30, rel=0.05)
        assert record.workspace_violations == 0

    def test_time_column(self):
        record = run_rollout(A1, open_loop_trot(1.0, 2.0), duration=0.5, seed=0)
        ts = [row[0] for row in record.rows]
        assert ts == pytest.approx([0.01 * (k + 1) for k in range(50)])

    def test_constant_command_columns(self):
        record = run_rollout(A1, open_loop_trot(1.3, 2.2), duration=0.3, seed=0)
        im = record.columns.index("mu_fr")
        io = record.columns.index("omega_rl")
        for row in record.rows:
            assert row[im] == 1.3
            assert row[io] == 2.2

    def test_manifest_contents(self):
        record = run_rollout(A1, open_loop_trot(1.0, 2.5), duration=0.5, seed=7)
        m = record.manifest()
        assert m["robot"] == "A1"
        assert m["seed"] == 7
        assert m["columns"] == record.columns
        assert m["summary"]["steps"] == 50
        assert m["summary"]["termination_step"] is None
        assert len(m["config_hash"]) == 64


class TestCsvRoundTrip:
    def test_write_read_identity(self, tmp_path):
        record = run_rollout(A1, open_loop_trot(1.0, 2.5), duration=0.5, seed=0)
        path = tmp_path / "rollout.csv"
        write_record_csv(record, str(path))
        columns, rows = read_record_csv(str(path))
        assert columns == record.columns
        assert len(rows) == len(record.rows)
        for a, b in zip(rows, record.rows):
            assert a == b  # repr round-trips floats exactly

    def test_byte_identical_for_same_seed(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_record_csv(run_rollout(A1, open_loop_trot(1.0, 2.5), 1.0, seed=9),
                         str(p1))
        write_record_csv(run_rollout(A1, open_loop_trot(1.0, 2.5), 1.0, seed=9),
                         str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_manifest_json(self, tmp_path):
        record = run_rollout(A1, open_loop_trot(1.0, 2.5), duration=0.2, seed=0)
        path = tmp_path / "manifest.json"
        write_record_manifest(record, str(path))
        doc = json.loads(path.read_text())
        assert doc == record.manifest()

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ValueError):
            read_record_csv(str(path))
