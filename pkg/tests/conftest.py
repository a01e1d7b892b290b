import shutil
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
CASES = ROOT / "corpus" / "cases"
GOLDEN = Path(__file__).resolve().parent / "golden"

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))


class CaptureBackend:
    """Records every script and answers a fixed verdict."""

    name = "capture"

    def __init__(self, reply: str = "unsat\n"):
        self.reply = reply
        self.seen = []

    def send(self, script):
        self.seen.append(script)
        return self.reply

    def close(self):
        pass


@pytest.fixture
def z3_path():
    path = shutil.which("z3")
    if path is None:
        pytest.skip("z3 not installed")
    return path


def compile_ok(src: str, path: str = "t.flg"):
    from flg import compile_source
    prog, _warnings = compile_source(src, path)
    return prog


def rejection(src: str, path: str = "t.flg"):
    """Compile ``src`` expecting a static error; return the first diagnostic."""
    from flg import StaticError, compile_source
    from flg.parser import SyntaxErr
    try:
        compile_source(src, path)
    except StaticError as exc:
        return exc.diagnostics[0]
    except SyntaxErr as exc:
        return exc
    raise AssertionError("program was accepted")


def run_program(src: str, workers: int = 1, smt=None, soft: bool = False):
    from flg.engine import SemiNaive, make_world
    prog = compile_ok(src)
    world = make_world(prog)
    SemiNaive(prog, world, smt, workers, soft=soft).run()
    return prog, world
