"""Relation storage and the naive / semi-naive fixpoints."""
import pytest

from conftest import compile_ok, run_program
from flg.engine import (
    HardError, RelStore, SemiNaive, World, make_world, naive_fixpoint, semi_naive_fixpoint,
    world_problems,
)
from flg.facts import format_row
from flg.terms import i32
from progen import generate

TC = """
rel edge(bv[32], bv[32])
output path(bv[32], bv[32])
path(X, Y) :- edge(X, Y).
path(X, Z) :- path(X, Y), path(Y, Z).
"""


def chain_program(n):
    return TC + "".join(f"edge({i}, {i + 1}).\n" for i in range(n))


# ---------------------------------------------------------------- storage

def test_relstore_scan_ranges_and_keys():
    s = RelStore("r", 2)
    for a, b in [(1, 1), (1, 2), (2, 1), (1, 3)]:
        assert s.add((i32(a), i32(b)))
    assert not s.add((i32(1), i32(1)))
    assert len(s) == 4
    assert list(s.scan(pos=(0,), key=(i32(1),))) == [(i32(1), i32(1)), (i32(1), i32(2)),
                                                     (i32(1), i32(3))]
    assert list(s.scan(2, 4, (0,), (i32(1),))) == [(i32(1), i32(3))]
    assert list(s.scan(1, 3)) == [(i32(1), i32(2)), (i32(2), i32(1))]
    # index built before later inserts stays current
    s.add((i32(1), i32(9)))
    assert (i32(1), i32(9)) in list(s.scan(pos=(0,), key=(i32(1),)))
    assert list(s.scan(0, 2, (0, 1), (i32(1), i32(3)))) == []
    assert list(s.scan(0, None, (0, 1), (i32(1), i32(3)))) == [(i32(1), i32(3))]


def test_sorted_rows_use_canonical_order():
    w = World({"r": 1})
    w.add_all("r", [(i32(3),), (i32(-1),), (i32(2),)])
    assert [t[0].value for t in w["r"].sorted_rows()] == [-1, 2, 3]


# ---------------------------------------------------------------- fixpoints

def test_transitive_closure():
    prog, world = run_program(chain_program(30))
    assert len(world["path"]) == 30 * 31 // 2


def test_naive_agrees_on_closure():
    prog = compile_ok(chain_program(12))
    assert naive_fixpoint(prog).as_sets() == semi_naive_fixpoint(prog).as_sets()


@pytest.mark.parametrize("workers", [2, 8])
def test_parallel_dump_identical(workers):
    src = chain_program(60)
    prog, w1 = run_program(src, workers=1)
    _, w2 = run_program(src, workers=workers)
    dump = lambda w: [format_row(t, prog) for t in w["path"].sorted_rows()]
    assert dump(w1) == dump(w2)


def test_iteration_bound():
    src = "rel n(bv[32])\nn(0).\nn(X + 1) :- n(X)."
    prog = compile_ok(src)
    with pytest.raises(HardError) as ei:
        SemiNaive(prog, make_world(prog), max_iterations=50).run()
    assert ei.value.kind == "iteration-bound"
    with pytest.raises(HardError):
        naive_fixpoint(prog, max_iterations=50)


def test_after_stratum_sees_completed_strata():
    prog = compile_ok("rel a(bv[32])\nrel b(bv[32])\na(1).\na(2).\nb(X) :- a(X), !a(X + 1).")
    seen = []
    SemiNaive(prog, make_world(prog)).run(lambda s, w: seen.append((tuple(s), len(w["a"]),
                                                                     len(w["b"]))))
    assert seen == [(("a",), 2, 0), (("b",), 2, 1)]


def test_lowest_task_error_wins_in_parallel():
    src = ("rel n(bv[32])\n" + "".join(f"n({i}).\n" for i in range(5)) +
           "output q(bv[32])\nq(Y) :- n(X), Y = 10 / X.\n"
           "output r(bv[32])\nr(Y) :- n(X), Y = 10 % (X - 3).\n")
    kinds = set()
    for workers in (1, 4):
        with pytest.raises(HardError) as ei:
            run_program(src, workers=workers)
        kinds.add(ei.value.message)
    assert kinds == {"division by zero"}


def test_stats_count_soft_failures():
    prog = compile_ok("rel n(bv[32])\nn(0).\nn(1).\noutput q(bv[32])\nq(Y) :- n(X), Y = 1 / X.")
    eng = SemiNaive(prog, make_world(prog), soft=True)
    eng.run()
    assert eng.stats.soft_failures == 1
    assert eng.stats.iterations >= 1


@pytest.mark.parametrize("seed", range(0, 400, 10))
def test_generated_programs_semi_naive_equals_naive(seed):
    prog = compile_ok(generate(seed))
    assert semi_naive_fixpoint(prog).as_sets() == naive_fixpoint(prog).as_sets()


@pytest.mark.parametrize("seed", range(1, 400, 20))
def test_generated_programs_stay_well_typed(seed):
    prog = compile_ok(generate(seed))
    problems = []
    semi_naive_fixpoint(prog, after_stratum=lambda s, w: problems.extend(
        world_problems(prog, w, s)))
    assert problems == []
