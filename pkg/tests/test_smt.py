"""S-expressions, serialization details, model decoding, memoization and backends."""
import json
import random
import threading

import pytest

from conftest import CaptureBackend, compile_ok, run_program
from flg.engine import HardError
from flg.kernels import to_smt_value
from flg.smt import (
    ModelError, ProcessBackend, RecordingBackend, ReplayBackend, Serializer, SmtContext,
    SolverError, TruthTableBackend, decode_bv, drop_invalid_patterns, parse_model, var_name,
)
from flg.smt.sexp import Kw, Str, Sym, parse_all, parse_one, read_prefix, render
from flg.terms import FALSE, NONE, TRUE, Ctor, ModelValue, i32, make_list, smt_var, string
from flg.types import BOOL, AdtType, bv, list_of


def formulas(src, rel="f"):
    """Evaluate a program and return the values of its one-column relation ``rel``."""
    prog, world = run_program(src)
    return prog, [t[0] for t in world[rel].sorted_rows()]


# ---------------------------------------------------------------- s-expressions

def test_sexp_parse_and_render():
    sx = parse_one('(define-fun |a b| () String "x""y" :named #x0f)')
    assert sx[0] == Sym("define-fun")
    assert sx[1] == Sym("a b", True)
    assert sx[4] == Str('x"y')
    assert sx[5] == Kw("named")
    assert render(sx) == '(define-fun |a b| () String "x""y" :named #x0f)'


def test_sexp_prefix_reading():
    assert read_prefix("(a (b") is None
    got = read_prefix("(a (b)) rest")
    assert got is not None and got[1] == len("(a (b))")
    assert len(parse_all("; comment\n(a) (b)\n")) == 2


# ---------------------------------------------------------------- serialization units

def test_var_names_are_stable_and_typed():
    a = var_name(string("x"), BOOL)
    assert a.startswith("x!") and a.endswith("!bool")
    assert a == var_name(string("x"), BOOL)
    assert var_name(string("x"), bv(32)) != a
    assert var_name(i32(3), BOOL).startswith("sym!")
    assert var_name(string("has space"), BOOL).startswith("sym!")


def test_timeout_line_position_and_memo_key():
    prog = compile_ok("")
    ser = Serializer(prog)
    phi = to_smt_value(TRUE)
    s1 = ser.script([phi], 100, False)
    s2 = ser.script([phi], 200, False)
    lines = s1.text.splitlines()
    assert lines[:3] == ["(set-option :produce-models true)", "(set-option :timeout 100)",
                         "(set-logic ALL)"]
    assert s1.key == s2.key
    assert s1.digest != s2.digest
    assert ser.script([phi], None, False).text.splitlines()[1] == "(set-logic ALL)"


def test_invalid_patterns_are_dropped_with_a_warning():
    prog, [phi] = formulas(
        "uninterpreted fun g(bv[32]) : bool\noutput f(bool smt)\n"
        "f(`forall #a[bv[32]] : (forall #b[bv[32]]. g(#b[bv[32]])). g(#a[bv[32]])`).")
    warnings = []
    drop_invalid_patterns(phi, warnings)
    assert len(warnings) == 1
    script = Serializer(prog).script([phi], None, False)
    assert ":pattern" not in script.text
    assert script.warnings


def test_reserved_names_get_suffix():
    prog, [phi] = formulas("uninterpreted fun distinct(bool) : bool\noutput f(bool smt)\n"
                           "f(`distinct(true)`).")
    text = Serializer(prog).script([phi], None, False).text
    assert "(declare-fun distinct! (Bool) Bool)" in text


def test_serialization_is_deterministic_across_orders():
    prog, phis = formulas("output f(bool smt)\nf(`#a[bool]`).\nf(`#b[bool] \\/ #c[bool]`).")
    ser = Serializer(prog)
    t1 = ser.script(phis, None, False).text
    t2 = ser.script(phis, None, False).text
    assert t1 == t2
    decls = [l for l in t1.splitlines() if l.startswith("(declare-const")]
    assert decls == sorted(decls)


# ---------------------------------------------------------------- models

@pytest.mark.parametrize("sx,width,want", [
    ("#x0000000a", 32, 10), ("#xffffffff", 32, -1), ("#b101", 3, -3),
    ("(_ bv5 32)", 32, 5), ("(_ bv4294967295 32)", 32, -1),
])
def test_decode_bv_twos_complement(sx, width, want):
    from flg.terms import wrap
    assert wrap(decode_bv(parse_one(sx)), width) == want


def test_parse_model_values():
    prog = compile_ok("type pair = | mk(bv[32], bool)")
    x = smt_var(string("x"), bv(32))
    l = smt_var(string("l"), list_of(BOOL))
    p = smt_var(string("p"), AdtType("pair"))
    fv = [(var_name(string("x"), bv(32)), x, bv(32)),
          (var_name(string("l"), list_of(BOOL)), l, list_of(BOOL)),
          (var_name(string("p"), p.params[1]), p, p.params[1])]
    text = ("(model (define-fun %s () (_ BitVec 32) #xfffffffe)"
            " (define-fun %s () (List Bool) (let ((a!1 (cons false (as nil (list Bool)))))"
            " (cons true a!1)))"
            " (define-fun %s () pair (mk #x00000001 false)))") % tuple(f[0] for f in fv)
    m = parse_model(text, fv, prog)
    assert m.get(x) == i32(-2)
    assert m.get(l) == make_list([TRUE, FALSE])
    assert m.get(p) == Ctor("mk", (i32(1), FALSE))


def test_parse_model_omits_unrepresentable_and_unknown():
    prog = compile_ok("uninterpreted sort s")
    x = smt_var(string("x"), bv(32))
    fv = [(var_name(string("x"), bv(32)), x, bv(32))]
    m = parse_model("((define-fun other () Bool true))", fv, prog)
    assert m.get(x) is None
    assert m == ModelValue({})


@pytest.mark.parametrize("text", ["(model (define-fun", "(error \"boom\")", "sat"])
def test_parse_model_errors(text):
    with pytest.raises(ModelError):
        parse_model(text, [], compile_ok(""))


# ---------------------------------------------------------------- dispatcher

class SlowCounting(CaptureBackend):
    def __init__(self):
        super().__init__("sat\n")
        self.gate = threading.Event()

    def send(self, script):
        self.gate.wait(5)
        return super().send(script)


def test_twice_issued_query_dispatches_once():
    prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
    cap = CaptureBackend("sat\n")
    ctx = SmtContext(prog, cap)
    assert ctx.op_is_sat(phi) == TRUE
    assert ctx.op_is_sat(phi) == TRUE
    assert len(cap.seen) == 1
    assert ctx.stats() == {"dispatched": 1, "memo_hits": 1}


def test_timeout_does_not_split_the_memo():
    prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
    cap = CaptureBackend("sat\n")
    ctx = SmtContext(prog, cap)
    lst = make_list([phi])
    ctx.op_is_sat_opt(lst, Ctor("some", (i32(10),)))
    ctx.op_is_sat_opt(lst, Ctor("some", (i32(99),)))
    assert len(cap.seen) == 1


def test_concurrent_identical_queries_single_flight():
    prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
    backend = SlowCounting()
    ctx = SmtContext(prog, backend)
    threads = [threading.Thread(target=ctx.op_is_sat, args=(phi,)) for _ in range(8)]
    for t in threads:
        t.start()
    backend.gate.set()
    for t in threads:
        t.join()
    assert len(backend.seen) == 1
    assert ctx.dispatched == 1 and ctx.hits == 7


def test_unknown_verdicts():
    prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
    ctx = SmtContext(prog, CaptureBackend("unknown\n"))
    with pytest.raises(HardError) as ei:
        ctx.op_is_sat(phi)
    assert ei.value.kind == "smt-unknown"
    assert ctx.op_is_sat_opt(make_list([phi]), NONE) == NONE
    assert ctx.op_get_model(make_list([phi]), NONE) == NONE


def test_bad_timeout_and_protocol_errors():
    prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
    ctx = SmtContext(prog, CaptureBackend("sat\n"))
    with pytest.raises(HardError) as ei:
        ctx.op_is_sat_opt(make_list([phi]), Ctor("some", (i32(0),)))
    assert ei.value.kind == "op-domain"
    ctx = SmtContext(prog, CaptureBackend("(error \"x\")\n"))
    with pytest.raises(HardError) as ei:
        ctx.op_is_sat(phi)
    assert ei.value.kind == "smt-protocol"


def test_dump_dir_writes_scripts(tmp_path):
    prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
    ctx = SmtContext(prog, CaptureBackend("sat\n"), dump_dir=str(tmp_path))
    ctx.op_is_sat(phi)
    files = list(tmp_path.glob("*.smt2"))
    assert len(files) == 1 and "(check-sat)" in files[0].read_text()


# ---------------------------------------------------------------- truth tables

def random_prop(rng, depth, names="pqrs"):
    """A random proposition as a tree: ("var", n) / ("const", b) / (op, *children)."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return ("const", rng.random() < 0.5)
        return ("var", rng.choice(names))
    op = rng.choice(["and", "or", "imp", "iff", "not"])
    if op == "not":
        return ("not", random_prop(rng, depth - 1, names))
    return (op, random_prop(rng, depth - 1, names), random_prop(rng, depth - 1, names))


INFIX = {"and": "/\\", "or": "\\/", "imp": "==>", "iff": "#="}


def prop_source(t):
    if t[0] == "var":
        return f"#{t[1]}[bool]"
    if t[0] == "const":
        return "true" if t[1] else "false"
    if t[0] == "not":
        return f"(~{prop_source(t[1])})"
    return f"({prop_source(t[1])} {INFIX[t[0]]} {prop_source(t[2])})"


def prop_eval(t, env):
    k = t[0]
    if k == "var":
        return env[t[1]]
    if k == "const":
        return t[1]
    if k == "not":
        return not prop_eval(t[1], env)
    a, b = prop_eval(t[1], env), prop_eval(t[2], env)
    return {"and": a and b, "or": a or b, "imp": (not a) or b, "iff": a == b}[k]


def truth_table_valid(t, names="pqrs"):
    import itertools
    return all(prop_eval(t, dict(zip(names, bits)))
               for bits in itertools.product([False, True], repeat=len(names)))


def check_props_against_truth_table(trees):
    """Serialize each proposition, decide validity through the bridge, compare."""
    src = "output f(bool smt)\n" + "".join(f"f(`{prop_source(t)}`).\n" for t in trees)
    prog = compile_ok(src)
    from flg.engine import Evaluator, make_world
    ev = Evaluator(prog, make_world(prog))
    ctx = SmtContext(prog, TruthTableBackend())
    wrong = []
    for clause, t in zip(prog.clauses, trees):
        phi = ev.eval(clause_value(clause), {})
        if ctx.op_is_valid(phi).value != truth_table_valid(t):
            wrong.append(prop_source(t))
    return wrong


def clause_value(clause):
    from flg.syntax import EqExpr
    (eq,) = [p for p in clause.body if isinstance(p, EqExpr)]
    return eq.expr


@pytest.mark.parametrize("seed", range(3))
def test_is_valid_matches_truth_table(seed):
    rng = random.Random(seed)
    trees = [random_prop(rng, rng.randint(1, 4)) for _ in range(25)]
    assert check_props_against_truth_table(trees) == []


def test_truth_table_models():
    prog, [phi] = formulas("output f(bool smt)\nf(`#p[bool] /\\ ~#q[bool]`).")
    ctx = SmtContext(prog, TruthTableBackend())
    m = ctx.op_get_model(make_list([phi]), NONE)
    model = m.args[0]
    assert model.get(smt_var(string("p"), BOOL)) == TRUE


# ---------------------------------------------------------------- backends

def test_replay_round_trip(tmp_path):
    prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
    rec = RecordingBackend(CaptureBackend("unsat\n"), tmp_path)
    SmtContext(prog, rec).op_is_sat(phi)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    data = json.loads(files[0].read_text())
    assert data["reply"] == "unsat\n"
    assert SmtContext(prog, ReplayBackend(tmp_path)).op_is_sat(phi).value is False


def test_replay_miss_and_mismatch(tmp_path):
    prog, [phi] = formulas("output f(bool smt)\nf(`#x[bool]`).")
    ctx = SmtContext(prog, ReplayBackend(tmp_path))
    with pytest.raises(HardError) as ei:
        ctx.op_is_sat(phi)
    assert "replay miss" in ei.value.message
    script = ctx.script([phi], None, False)
    (tmp_path / f"{script.digest}.json").write_text(json.dumps({"request": "x", "reply": "sat\n"}))
    with pytest.raises(SolverError):
        ReplayBackend(tmp_path).send(script)


def test_live_solver_basic(z3_path):
    prog, phis = formulas("output f(bool smt)\nf(`#x[bool] /\\ ~#x[bool]`).\nf(`#x[bool]`).")
    backend = ProcessBackend(z3_path)
    try:
        ctx = SmtContext(prog, backend)
        verdicts = sorted(ctx.op_is_sat(p).value for p in phis)
        assert verdicts == [False, True]
    finally:
        backend.close()


def test_live_model_round_trip(z3_path):
    """Asserting a model's equations next to the original query stays satisfiable."""
    prog, [phi] = formulas(
        "type t = | a(bv[32]) | b(bool, t)\noutput f(bool smt)\n"
        "f(`#is_b(#v[t]) /\\ bv_slt(#n[bv[32]], -3) /\\ #b_2(#v[t]) #= a(#n[bv[32]])`).")
    backend = ProcessBackend(z3_path)
    try:
        ctx = SmtContext(prog, backend)
        m = ctx.op_get_model(make_list([phi]), NONE).args[0]
        assert m.bindings
        eqs = [Ctor("smt_eq", (var, to_smt_value(val))) for var, val in m.bindings]
        assert ctx.check([phi] + eqs).verdict == "sat"
        n = m.get(smt_var(string("n"), bv(32)))
        assert n.value < -3
    finally:
        backend.close()
