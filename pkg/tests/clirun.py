"""Helpers to drive the command line in-process and as a subprocess."""
from __future__ import annotations

import contextlib
import io
import json
import os
import subprocess
import sys
from pathlib import Path

from kql.cli import main

SRC = str(Path(__file__).resolve().parent.parent / "src")


def run(argv, stdin: str = ""):
    """``(exit code, stdout, stderr)`` of ``kql argv`` run in this process."""
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(list(argv))
    finally:
        sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def run_json(argv, stdin: str = ""):
    code, out, err = run(argv, stdin)
    return code, (json.loads(out) if out else None), err


def run_subprocess(argv, stdin: str = "", hashseed: str = "0") -> tuple:
    env = dict(os.environ, PYTHONHASHSEED=hashseed, PYTHONPATH=SRC)
    proc = subprocess.run([sys.executable, "-m", "kql.cli", *argv], input=stdin, capture_output=True, text=True, env=env, check=False)
    return proc.returncode, proc.stdout, proc.stderr
