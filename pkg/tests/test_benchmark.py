import subprocess
import sys
from pathlib import Path

import pytest

from bogofock.fock import BACKEND

SCRIPT = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


@pytest.mark.skipif(BACKEND != "cython", reason="compiled extension not built")
def test_benchmark_runs_on_small_input():
    out = subprocess.run(
        [sys.executable, str(SCRIPT), "--modes", "8", "--particles", "3", "--terms", "20", "--repeat", "1"],
        capture_output=True, text=True, check=True,
    )
    assert "lift" in out.stdout
