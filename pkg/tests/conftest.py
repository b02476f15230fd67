import sys
import subprocess

import numpy as np
import pytest


@pytest.fixture()
def run(request, monkeypatch):
    """Exit code of ``python -m kahler_lab`` with the parametrized arguments

    The command runs from the folder of the test module, a string parameter
    is a scenario path to classify.
    """
    monkeypatch.chdir(request.fspath.dirname)
    python = sys.executable
    param = request.param
    cmd_args = ['classify', param] if isinstance(param, str) else list(param)
    args = [python, '-m', 'kahler_lab'] + cmd_args
    result = subprocess.run(args)
    return result.returncode


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
