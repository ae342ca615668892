import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "lawvere", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("lawvere")

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parents[1] / "src" / "lawvere" / "cli" / "data"


@pytest.fixture(params=["numba", "numpy"])
def impl(request):
    from lawvere import kernels

    if request.param == "numba" and kernels.backend() != "numba":
        pytest.skip("numba not installed")
    return request.param


@pytest.fixture
def data_dir():
    return DATA


def run_cli(*args, env=None):
    """Run the installed CLI in a fresh interpreter; returns (code, stdout, stderr)."""
    full_env = dict(os.environ, **(env or {}))
    proc = subprocess.run([sys.executable, "-m", "lawvere", *map(str, args)], capture_output=True, cwd=DATA,
                          env=full_env, timeout=120)
    return proc.returncode, proc.stdout, proc.stderr
