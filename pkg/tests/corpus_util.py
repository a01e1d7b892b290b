"""Shared runner for corpus cases (used by the corpus and acceptance tests)."""
from __future__ import annotations

import io
import json
import tempfile
from contextlib import redirect_stderr
from dataclasses import dataclass
from pathlib import Path

from flg.cli import main

CASES = Path(__file__).resolve().parent.parent / "corpus" / "cases"


@dataclass
class CaseRun:
    exit: int
    stderr: str
    dumps: dict[str, bytes]


def case_meta(name: str) -> dict:
    return json.loads((CASES / name / "expect.json").read_text())


def all_cases() -> list[str]:
    return sorted(p.name for p in CASES.iterdir() if (p / "expect.json").is_file())


def ok_cases() -> list[str]:
    return [c for c in all_cases() if case_meta(c)["exit"] == 0]


def expected_dumps(name: str) -> dict[str, bytes]:
    d = CASES / name / "expected"
    return {f.name: f.read_bytes() for f in sorted(d.glob("*.tsv"))}


def run_case(name: str, mode: str = "replay", workers: int = 1, solver: str | None = None,
             extra: list[str] = ()) -> CaseRun:
    """Run a case through the CLI; ``mode`` is "replay" or "live"."""
    case = CASES / name
    meta = case_meta(name)
    progs = [str((case / p).resolve()) for p in meta.get("programs", ["program.flg"])]
    with tempfile.TemporaryDirectory() as tmp:
        argv = progs + ["--out", tmp, "--workers", str(workers), *extra]
        if (case / "facts").is_dir():
            argv += ["--facts", str(case / "facts")]
        if mode == "replay":
            argv += ["--backend", "replay", "--replay-dir", str(case / "replay")]
        elif solver is not None:
            argv += ["--solver", solver]
        err = io.StringIO()
        with redirect_stderr(err):
            code = main(argv)
        dumps = {f.name: f.read_bytes() for f in sorted(Path(tmp).glob("*.tsv"))}
    return CaseRun(code, err.getvalue(), dumps)
