"""Solver backends: a live SMT-LIB process, a recorder, and transcript replay.

A backend maps a script to the solver's raw reply text: the verdict line,
followed by one model s-expression when the script asks for a model.
"""
from __future__ import annotations

import json
import os
import shutil
import subprocess
import threading
from pathlib import Path

from .sexp import read_prefix
from .serialize import Script

SOLVER_ENV = "FLG_SOLVER"
VERDICTS = ("sat", "unsat", "unknown")


class SolverError(RuntimeError):
    pass


def find_solver(explicit: str | None = None) -> str | None:
    for cand in (explicit, os.environ.get(SOLVER_ENV), shutil.which("z3")):
        if cand and (os.path.isfile(cand) or shutil.which(cand)):
            return cand
    return None


class _Session:
    """One long-lived solver process speaking SMT-LIB over stdin/stdout."""

    def __init__(self, argv: list[str]):
        self.proc = subprocess.Popen(
            argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, stderr=subprocess.STDOUT,
            text=True, bufsize=1)

    def ask(self, script: Script) -> str:
        p = self.proc
        if p.poll() is not None:
            raise SolverError(f"solver exited with status {p.returncode}")
        # each query starts from a clean solver state
        p.stdin.write("(reset)\n" + script.text)
        p.stdin.flush()
        verdict = None
        while verdict is None:
            line = p.stdout.readline()
            if not line:
                raise SolverError("solver closed its output")
            s = line.strip()
            if s in VERDICTS:
                verdict = s
            elif s.startswith("(error"):
                raise SolverError(f"solver error: {s}")
            elif s:
                raise SolverError(f"unexpected solver output: {s}")
        if not script.want_model:
            return verdict + "\n"
        buf = ""
        while True:
            line = p.stdout.readline()
            if not line:
                raise SolverError("solver closed its output while printing a model")
            buf += line
            got = read_prefix(buf)
            if got is not None:
                return verdict + "\n" + buf[:got[1]].strip() + "\n"

    def close(self):
        try:
            self.proc.stdin.write("(exit)\n")
            self.proc.stdin.flush()
        except OSError:
            pass
        try:
            self.proc.wait(timeout=2)
        except subprocess.TimeoutExpired:
            self.proc.kill()


class ProcessBackend:
    """Live solver; one process per thread so concurrent workers never share a session."""

    name = "process"

    def __init__(self, path: str, dialect: str = "z3"):
        self.path = path
        self.dialect = dialect
        self._local = threading.local()
        self._all: list[_Session] = []
        self._lock = threading.Lock()

    def _argv(self) -> list[str]:
        if self.dialect == "z3":
            return [self.path, "-in", "-smt2"]
        return [self.path, "--incremental", "--lang=smt2"]

    def send(self, script: Script) -> str:
        sess = getattr(self._local, "session", None)
        if sess is None:
            sess = _Session(self._argv())
            self._local.session = sess
            with self._lock:
                self._all.append(sess)
        try:
            return sess.ask(script)
        except SolverError:
            # drop a session that may be out of sync
            sess.close()
            self._local.session = None
            raise

    def close(self):
        with self._lock:
            for s in self._all:
                s.close()
            self._all.clear()


class ReplayBackend:
    """Answers from ``<sha256 of script>.json`` transcripts; a miss is an error."""

    name = "replay"

    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)

    def send(self, script: Script) -> str:
        path = self.dir / f"{script.digest}.json"
        if not path.is_file():
            raise SolverError(f"replay miss: no transcript {path.name} in {self.dir}")
        data = json.loads(path.read_text())
        if data.get("request") != script.text:
            raise SolverError(f"replay transcript {path.name} does not match the request")
        return data["reply"]

    def close(self):
        pass


class RecordingBackend:
    """Forwards to another backend and writes a replay transcript for every query."""

    name = "record"

    def __init__(self, inner, directory: str | os.PathLike):
        self.inner = inner
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    def send(self, script: Script) -> str:
        reply = self.inner.send(script)
        data = {"request": script.text, "reply": reply}
        (self.dir / f"{script.digest}.json").write_text(json.dumps(data, indent=1) + "\n")
        return reply

    def close(self):
        self.inner.close()
