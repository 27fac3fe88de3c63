import contextlib
import io
import json
from pathlib import Path

import pytest

from invcat.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = FIXTURES / "golden"


def run_cli(*argv):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    argv = [str(FIXTURES / a) if a.endswith(".json") else a for a in argv]
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def golden_index():
    return json.loads((GOLDEN / "index.json").read_text())


@pytest.fixture
def cli():
    return run_cli
