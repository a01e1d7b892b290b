"""Acceptance suite: one test per criterion, each timed against its budget.

Every test prints a single line ``ACCEPTANCE <n> PASS|FAIL ...`` to the
terminal, whatever the outcome, so `pytest -v -s` or the tee'd log shows
the scoreboard.  A criterion fails if its checks fail or its budget is
exceeded.
"""
import random
import shutil
import time
import traceback

import pytest

from conftest import GOLDEN, CaptureBackend, compile_ok
from corpus_util import case_meta, expected_dumps, ok_cases, run_case
from flg.engine import HardError, naive_fixpoint, semi_naive_fixpoint, unify, world_problems
from flg.facts import format_row
from flg.kernels import apply_subst, is_ground_under
from flg.smt import SmtContext
from progen import generate
from test_smt import check_props_against_truth_table, formulas, random_prop
from test_smt_golden import PROGRAMS, serialize
from unifgen import new_rng, random_problem


def criterion(capsys, number, title, budget_s, body):
    start = time.perf_counter()
    problem = None
    try:
        detail = body() or ""
    except AssertionError as exc:
        problem = f"{exc}" or traceback.format_exc(limit=1).strip().splitlines()[-1]
        detail = ""
    elapsed = time.perf_counter() - start
    if problem is None and elapsed > budget_s:
        problem = f"over budget ({elapsed:.2f}s > {budget_s}s)"
    verdict = "PASS" if problem is None else "FAIL"
    line = f"ACCEPTANCE {number} {verdict} {title} [{elapsed:.2f}s / {budget_s}s]"
    if detail:
        line += f" {detail}"
    if problem:
        line += f" :: {problem}"
    with capsys.disabled():
        print("\n" + line)
    if problem:
        pytest.fail(line, pytrace=False)


def dumps_of(prog, world):
    return {rel: [format_row(r, prog) for r in world[rel].sorted_rows()]
            for rel in prog.outputs()}


# ---------------------------------------------------------------- 1

FIXTURE_CASES = ["example1", "example2", "explosion", "three_premise", "foo_bar", "cons_model"]


def test_criterion_1_fixtures(capsys):
    z3 = shutil.which("z3")

    def body():
        assert z3 is not None, "live mode needs z3 on PATH"
        for mode in ("replay", "live"):
            for name in FIXTURE_CASES:
                res = run_case(name, mode, solver=z3)
                meta = case_meta(name)
                assert res.exit == meta["exit"], f"{name}/{mode}: exit {res.exit}"
                if res.exit:
                    assert f"error: {meta['rule']}:" in res.stderr, f"{name}/{mode}"
                    continue
                assert res.dumps == expected_dumps(name), f"{name}/{mode}: dump differs"
            ex1 = run_case("example1", mode, solver=z3)
            assert ex1.exit == 1 and "error: e-Fun:" in ex1.stderr
            for name in ("example2", "explosion", "three_premise", "foo_bar"):
                assert run_case(name, mode, solver=z3).dumps["ok.tsv"] == b"\n", name
            assert run_case("cons_model", mode, solver=z3).dumps["head.tsv"] == b"true\n"
        return f"{len(FIXTURE_CASES)} cases x replay+live"

    criterion(capsys, 1, "fixture programs", 10, body)


# ---------------------------------------------------------------- 2

def test_criterion_2_symexec(capsys):
    def body():
        safe = run_case("symexec_safe", "replay")
        wrap = run_case("symexec_wrap", "replay")
        assert safe.exit == 0 and wrap.exit == 0
        assert safe.dumps["failed.tsv"] == b"", "safe program reported failures"
        assert wrap.dumps["failed.tsv"] != b"", "wrapping program reported no failure"
        assert b"some(10)" in safe.dumps["reached.tsv"], "fuel is not 10"
        rows = wrap.dumps["failed.tsv"].count(b"\n")
        return f"wrap failures={rows}"

    criterion(capsys, 2, "symbolic executor", 30, body)


# ---------------------------------------------------------------- 3

def test_criterion_3_fuzz_well_typed(capsys):
    def body():
        hard, problems = [], []
        for seed in range(1000):
            prog = compile_ok(generate(10_000 + seed, max_facts=20))
            try:
                semi_naive_fixpoint(prog, after_stratum=lambda s, w: problems.extend(
                    (seed, p) for p in world_problems(prog, w, s)))
            except HardError as exc:
                hard.append((seed, exc.kind))
        assert hard == [], f"HardErrors: {hard[:5]}"
        assert problems == [], f"ill-typed worlds: {problems[:5]}"
        return "1000 programs"

    criterion(capsys, 3, "SMT-free fuzz programs", 60, body)


# ---------------------------------------------------------------- 4

def test_criterion_4_semi_naive_equals_naive(capsys):
    def body():
        diffs = []
        for seed in range(500):
            prog = compile_ok(generate(20_000 + seed, max_rels=4, max_rules=12, max_facts=50))
            a = dumps_of(prog, naive_fixpoint(prog))
            b = dumps_of(prog, semi_naive_fixpoint(prog))
            if a != b:
                diffs.append(seed)
        assert diffs == [], f"seeds differ: {diffs[:10]}"
        return "500 programs"

    criterion(capsys, 4, "semi-naive equals naive", 60, body)


# ---------------------------------------------------------------- 5

def test_criterion_5_parallel_determinism(capsys):
    def body():
        cases = ok_cases()
        for name in cases:
            one, eight = run_case(name, workers=1), run_case(name, workers=8)
            assert one.exit == eight.exit == 0, name
            assert one.dumps == eight.dumps, f"{name}: dumps differ"
        return f"{len(cases)} cases"

    criterion(capsys, 5, "workers 1 vs 8", 60, body)


# ---------------------------------------------------------------- 6

def test_criterion_6_static_rejections(capsys):
    def body():
        for name, rule in (("strat_cycle", "Stratification"), ("range_restriction", "H-Clause")):
            res = run_case(name)
            assert res.exit == 1, f"{name}: exit {res.exit}"
            assert f"error: {rule}:" in res.stderr, f"{name}: {res.stderr!r}"
            assert "program.flg:" in res.stderr, f"{name}: no location"
        return ""

    criterion(capsys, 6, "negation cycle and range restriction", 10, body)


# ---------------------------------------------------------------- 7

def test_criterion_7_smt_bridge(capsys):
    def body():
        assert len(PROGRAMS) >= 10
        for path in PROGRAMS:
            assert serialize(path) == path.with_suffix(".smt2").read_text(), path.stem
        stems = " ".join(p.stem for p in PROGRAMS)
        for topic in ("adt", "bv", "quant", "usort"):
            assert topic in stems, f"no golden file for {topic}"

        prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
        cap = CaptureBackend("sat\n")
        ctx = SmtContext(prog, cap)
        ctx.op_is_sat(phi)
        ctx.op_is_sat(phi)
        assert len(cap.seen) == 1, "repeated query dispatched twice"

        rng = random.Random(2024)
        trees = [random_prop(rng, rng.randint(1, 5)) for _ in range(200)]
        wrong = check_props_against_truth_table(trees)
        assert wrong == [], f"disagreements: {wrong[:3]}"
        return f"{len(PROGRAMS)} goldens, 200 props"

    criterion(capsys, 7, "SMT bridge", 60, body)


# ---------------------------------------------------------------- 8

def test_criterion_8_unification(capsys):
    def body():
        rng = new_rng(99)
        counts = {"ok": 0, "fail": 0, "hard": 0}
        for _ in range(10_000):
            kind, theta, u1, u2 = random_problem(rng)
            if kind == "freefree":
                try:
                    unify(theta, u1, u2)
                except HardError as exc:
                    assert exc.kind == "uu-FF", exc.kind
                    counts["hard"] += 1
                    continue
                raise AssertionError("free/free pair did not raise uu-FF")
            out = unify(theta, u1, u2)
            if kind == "clash":
                assert out is None, "constructor clash unified"
                counts["fail"] += 1
                continue
            if out is None:
                assert theta, "instance problem failed under an empty substitution"
                counts["fail"] += 1
                continue
            assert all(out[k] == v for k, v in theta.items()), "input binding changed"
            assert is_ground_under(u1, out) and is_ground_under(u2, out)
            assert apply_subst(u1, out) == apply_subst(u2, out), "unsound unifier"
            counts["ok"] += 1
        assert all(counts.values()), counts
        return " ".join(f"{k}={v}" for k, v in counts.items())

    criterion(capsys, 8, "unification", 10, body)
