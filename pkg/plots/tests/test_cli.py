import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from fedspec_plot.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


class TestCurveCommand:
    def test_renders_png(self, tmp_path):
        out = tmp_path / "fig2.png"
        code = main(
            [
                "curve",
                "--in",
                str(FIXTURES / "fl.csv"),
                str(FIXTURES / "dl.csv"),
                "--window",
                "10",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        assert out.stat().st_size > 0

    def test_schema_error_exit_1(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("episode,reward\n0,1\n")
        assert main(["curve", "--in", str(bad), "--out", str(tmp_path / "f.png")]) == 1


class TestParticipationCommand:
    def test_renders_png(self, tmp_path):
        out = tmp_path / "fig3.png"
        inputs = [str(FIXTURES / f"u{u}.csv") for u in (2, 4, 6, 8)]
        code = main(["participation", "--in", *inputs, "--window", "20", "--out", str(out)])
        assert code == 0
        assert out.stat().st_size > 0

    def test_bad_filename_exit_1(self, tmp_path):
        src = tmp_path / "four.csv"
        shutil.copy(FIXTURES / "u4.csv", src)
        code = main(["participation", "--in", str(src), "--out", str(tmp_path / "f.png")])
        assert code == 1


@pytest.mark.skipif(shutil.which("fedspec") is None, reason="fedspec CLI not installed")
class TestEndToEnd:
    """Drive the simulator through its CLI, then plot its real output."""

    def test_run_then_curve(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(
            json.dumps({"episodes": 40, "n_agents": 3, "participants_u": 3, "hidden_width": 4})
        )
        fl_csv = tmp_path / "fl.csv"
        dl_csv = tmp_path / "dl.csv"
        for mode, out in (("fl", fl_csv), ("dl", dl_csv)):
            proc = subprocess.run(
                [
                    "fedspec",
                    "run",
                    "--config",
                    str(config),
                    "--mode",
                    mode,
                    "--out",
                    str(out),
                ],
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stderr
        fig = tmp_path / "fig2.png"
        code = main(["curve", "--in", str(fl_csv), str(dl_csv), "--window", "5", "--out", str(fig)])
        assert code == 0
        assert fig.stat().st_size > 0

    def test_sweep_then_participation(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(
            json.dumps({"episodes": 30, "n_agents": 3, "participants_u": 3, "hidden_width": 4})
        )
        sweep_dir = tmp_path / "sweep"
        proc = subprocess.run(
            [
                "fedspec",
                "sweep",
                "--config",
                str(config),
                "--participants",
                "1,2,3",
                "--out-dir",
                str(sweep_dir),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        fig = tmp_path / "fig3.png"
        inputs = [str(sweep_dir / f"u{u}.csv") for u in (1, 2, 3)]
        code = main(["participation", "--in", *inputs, "--window", "10", "--out", str(fig)])
        assert code == 0
        assert fig.stat().st_size > 0
