"""The three dispatch examples with golden artifacts under tests/golden/."""

import contextlib
import io
import os
from pathlib import Path

from equidist.cli import main

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "gcdsum.json": ["gcdsum", "--set", "1,2,3", "--alpha", "1"],
    "disc.json": ["disc", "--points", "points.csv"],
    "help.txt": ["--help"],
}


def run_cli(argv, env=None):
    """(exit code, stdout, stderr) of one in-process run, from inside tests/golden."""
    out, err = io.StringIO(), io.StringIO()
    old_cwd, old_env = os.getcwd(), dict(os.environ)
    os.environ["COLUMNS"] = "80"  # argparse wraps help to the terminal width
    os.environ.update(env or {})
    try:
        os.chdir(GOLDEN)
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(list(argv))
    finally:
        os.chdir(old_cwd)
        os.environ.clear()
        os.environ.update(old_env)
    return code, out.getvalue(), err.getvalue()
