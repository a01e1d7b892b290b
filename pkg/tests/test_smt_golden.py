"""Byte-exact serialization of formula queries against frozen .smt2 files.

Set FLG_REGEN_GOLDEN=1 to rewrite the frozen files after an intended change.
"""
import os
import subprocess

import pytest

from conftest import GOLDEN, CaptureBackend
from flg import compile_source
from flg.engine import SemiNaive, make_world
from flg.smt import SmtContext

PROGRAMS = sorted(GOLDEN.glob("*.flg"))
SEPARATOR = "; ---\n"


def serialize(path):
    prog, _ = compile_source(path.read_text(), str(path))
    cap = CaptureBackend()
    SemiNaive(prog, make_world(prog), SmtContext(prog, cap), 1).run()
    return SEPARATOR.join(s.text for s in cap.seen)


def test_enough_golden_files():
    assert len(PROGRAMS) >= 10


@pytest.mark.parametrize("path", PROGRAMS, ids=lambda p: p.stem)
def test_golden(path):
    got = serialize(path)
    frozen = path.with_suffix(".smt2")
    if os.environ.get("FLG_REGEN_GOLDEN"):
        frozen.write_text(got)
    assert got == frozen.read_text()


@pytest.mark.parametrize("path", PROGRAMS, ids=lambda p: p.stem)
def test_golden_accepted_by_z3(path, z3_path):
    for script in path.with_suffix(".smt2").read_text().split(SEPARATOR):
        out = subprocess.run([z3_path, "-in", "-smt2"], input=script, text=True,
                             capture_output=True, timeout=30).stdout
        assert "error" not in out, out
        assert out.split("\n")[0] in ("sat", "unsat", "unknown")
