"""Command-line driver: parse, type check, rewrite, validate, evaluate, dump."""
from __future__ import annotations

import argparse
import sys
import threading
import time
from pathlib import Path

from .diagnostics import StaticError
from .engine import HardError, SemiNaive, make_world
from .facts import dump_relation, read_facts
from .kernels import IMPLEMENTATION
from .parser import SyntaxErr, desugar, parse_program
from .program import Program
from .smt import ProcessBackend, RecordingBackend, ReplayBackend, SmtContext, SolverError
from .smt import find_solver
from .syntax import SourceProgram
from .typecheck import check_program, stratify

EXIT_OK, EXIT_STATIC, EXIT_RUNTIME = 0, 1, 2
STACK_BYTES = 512 * 1024 * 1024


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flg", description="Evaluate a Datalog program with "
                                "functions and SMT formulas.")
    p.add_argument("programs", nargs="+", type=Path, help="program files, concatenated in order")
    p.add_argument("--facts", type=Path, help="directory of <relation>.tsv input files")
    p.add_argument("--out", type=Path, default=Path("out"), help="directory for output dumps")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--solver", help="solver executable (default: $FLG_SOLVER or z3 on PATH)")
    p.add_argument("--backend", choices=("process", "replay"), default="process")
    p.add_argument("--replay-dir", type=Path, help="transcript directory for --backend replay")
    p.add_argument("--record-dir", type=Path,
                   help="write a replay transcript for every query sent to a live solver")
    p.add_argument("--timeout-ms", type=int, help="per-query solver timeout")
    p.add_argument("--exceptions", choices=("hard", "soft"), default="hard")
    p.add_argument("--dump-smt", action="store_true",
                   help="write every dispatched script to <out>/smt/<hash>.smt2")
    p.add_argument("--stats", action="store_true", help="print relation sizes and SMT counters")
    return p


class _NoSolver:
    name = "none"

    def send(self, script):
        raise SolverError("no SMT solver configured (use --solver or --backend replay)")

    def close(self):
        pass


def load_program(paths: list[Path]) -> Program:
    decls = []
    for path in paths:
        src = parse_program(path.read_text(), str(path))
        decls.extend(src.decls)
    merged = SourceProgram(str(paths[0]), "", decls)
    return desugar(merged)


def rewrite(prog: Program) -> Program:
    """Query-specialization stage; currently the identity."""
    return prog


def _err(msg: str):
    print(msg, file=sys.stderr)


def make_backend(args):
    if args.backend == "replay":
        if args.replay_dir is None:
            raise SolverError("--backend replay needs --replay-dir")
        return ReplayBackend(args.replay_dir)
    path = find_solver(args.solver)
    backend = ProcessBackend(path) if path else _NoSolver()
    if args.record_dir is not None:
        backend = RecordingBackend(backend, args.record_dir)
    return backend


def run(args) -> int:
    if args.workers < 1:
        _err("flg: --workers must be at least 1")
        return EXIT_STATIC
    if args.timeout_ms is not None and args.timeout_ms < 1:
        _err("flg: --timeout-ms must be at least 1")
        return EXIT_STATIC
    # stages 1-4: parse, type check, rewrite, validate
    try:
        prog = load_program(args.programs)
        for d in check_program(prog):
            _err(d.render())
        prog = rewrite(prog)
        stratify(prog)
    except SyntaxErr as exc:
        _err(str(exc))
        return EXIT_STATIC
    except StaticError as exc:
        for d in exc.diagnostics:
            _err(d.render())
        return EXIT_STATIC
    except OSError as exc:
        _err(f"flg: {exc}")
        return EXIT_STATIC

    world = make_world(prog)
    try:
        for rel in prog.inputs():
            f = args.facts / f"{rel}.tsv" if args.facts else None
            if f is None or not f.is_file():
                _err(f"warning: no fact file for input relation {rel}; treating it as empty")
                continue
            world.add_all(rel, read_facts(f, prog, rel))
    except StaticError as exc:
        for d in exc.diagnostics:
            _err(d.render())
        return EXIT_STATIC

    # stage 5: evaluation
    try:
        backend = make_backend(args)
    except SolverError as exc:
        _err(f"flg: {exc}")
        return EXIT_STATIC
    smt = SmtContext(prog, backend, timeout_ms=args.timeout_ms,
                     dump_dir=str(args.out / "smt") if args.dump_smt else None,
                     warn=lambda m: _err(f"warning: {m}"))
    started = time.perf_counter()
    engine = SemiNaive(prog, world, smt, args.workers, soft=args.exceptions == "soft")
    try:
        engine.run()
    except HardError as exc:
        _err(f"{prog.path}: error: runtime: {exc.kind}: {exc.message}")
        return EXIT_RUNTIME
    except RecursionError:
        _err(f"{prog.path}: error: runtime: stack: recursion too deep")
        return EXIT_RUNTIME
    except OSError as exc:
        _err(f"flg: {exc}")
        return EXIT_RUNTIME
    finally:
        smt.close()
    elapsed = time.perf_counter() - started

    try:
        args.out.mkdir(parents=True, exist_ok=True)
        for rel in prog.outputs():
            dump_relation(args.out / f"{rel}.tsv", world[rel].sorted_rows(), prog)
    except OSError as exc:
        _err(f"flg: cannot write output: {exc}")
        return EXIT_RUNTIME

    if args.stats:
        for rel, n in world.sizes().items():
            print(f"{rel}\t{n}")
        st = smt.stats()
        print(f"smt.dispatched\t{st['dispatched']}")
        print(f"smt.memo_hits\t{st['memo_hits']}")
        print(f"eval.iterations\t{engine.stats.iterations}")
        print(f"eval.soft_failures\t{engine.stats.soft_failures}")
        print(f"eval.seconds\t{elapsed:.3f}")
        print(f"kernels\t{IMPLEMENTATION}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    # deep recursion in user functions needs a big stack; run on a dedicated thread
    result = [EXIT_RUNTIME]

    def target():
        result[0] = run(args)

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 200_000))
    old = threading.stack_size(STACK_BYTES)
    try:
        t = threading.Thread(target=target, name="flg-main")
        t.start()
        t.join()
    finally:
        threading.stack_size(old)
    return result[0]


if __name__ == "__main__":
    sys.exit(main())
