"""Regenerate expected dumps and replay transcripts for corpus/cases/* against a live solver.

Usage: python3 scripts/record_corpus.py [case ...]

Each case directory holds program.flg (or names programs in expect.json),
an optional facts/ directory and expect.json.  Successful cases get
expected/<relation>.tsv; every case that reaches the solver gets replay/.
"""
import json
import shutil
import sys
import tempfile
from pathlib import Path

from flg.cli import main

ROOT = Path(__file__).resolve().parent.parent / "corpus" / "cases"


def programs(case: Path, meta: dict) -> list[str]:
    names = meta.get("programs", ["program.flg"])
    return [str((case / n).resolve()) for n in names]


def record(case: Path):
    meta = json.loads((case / "expect.json").read_text())
    replay, expected = case / "replay", case / "expected"
    for d in (replay, expected):
        shutil.rmtree(d, ignore_errors=True)
    with tempfile.TemporaryDirectory() as tmp:
        argv = programs(case, meta) + ["--out", tmp, "--record-dir", str(replay)]
        if (case / "facts").is_dir():
            argv += ["--facts", str(case / "facts")]
        code = main(argv)
        if code != meta["exit"]:
            raise SystemExit(f"{case.name}: exit {code}, expected {meta['exit']}")
        if code == 0:
            expected.mkdir()
            for f in sorted(Path(tmp).glob("*.tsv")):
                shutil.copy(f, expected / f.name)
    if replay.is_dir() and not any(replay.iterdir()):
        replay.rmdir()
    print(f"{case.name}: exit {code}")


if __name__ == "__main__":
    names = sys.argv[1:] or sorted(p.name for p in ROOT.iterdir() if p.is_dir())
    for n in names:
        record(ROOT / n)
