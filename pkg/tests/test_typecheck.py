"""Type checking, well-formedness, premise modes and range restriction."""
import pytest

from conftest import compile_ok, rejection
from flg import compile_source
from flg.typecheck import EXP, SMT, erase, to_smt, well_formed
from flg.types import (
    BOOL, MODEL, AdtType, SmtType, SymType, TypeVar, UndefinedForType, bv, list_of,
)

REJECT = [
    ("bool_plus", "rel p(bv[32])\np(X) :- X = true + 1.", "e-Op"),
    ("if_branches", "fun f(b: bool) : bv[32] = if b then 1 else false", "e-Ite"),
    ("if_condition", "fun f(b: bv[32]) : bv[32] = if b then 1 else 2", "e-Ite"),
    ("fun_arity", "fun f(b: bv[32]) : bv[32] = b\nrel p(bv[32])\np(X) :- X = f(1, 2).", "e-Fun"),
    ("ctor_argument", "type t = | k(bool)\nrel p(t)\np(k(1)).", "P-EqCtor-BF"),
    ("neg_unbound", "rel p(bv[32])\nrel q(bv[32])\nq(1).\np(X) :- !q(X).", "P-NegAtom"),
    ("range_restriction", "rel p(bv[32])\nrel q(bv[32])\nq(1).\np(X) :- q(Y).", "H-Clause"),
    ("eq_both_free", "rel p(bv[32])\np(X) :- X = Y.", "P-EqCtor-BF"),
    ("neq_unbound", "rel p(bv[32])\np(1) :- X != 2.", "P-NegEq"),
    ("match_arms", "fun f(x: bv[32] list) : bv[32] = match x with | [] => 0 | h :: _ => true end",
     "e-Match"),
    ("pattern_type", "fun f(x: bv[32] list) : bv[32] = "
     "match x with | [] => 0 | some(h) => h end", "e-Match"),
    ("sym_in_exp", "rel p(bv[32])\np(X) :- X = #x[bv[32]].", "H-Clause"),
    ("formula_type", "rel p(bool smt)\np(`bv_add(#x[bv[32]], 1)`).", "H-Clause"),
    ("is_sat_arg", "rel p(bool)\np(B) :- B = is_sat(true).", "e-Fun"),
    ("mixed_widths", "rel p(bv[64])\np(X) :- X = 1L + 2.", "e-Op"),
    ("string_order", 'rel p(bool)\np(B) :- B = ("a" < "b").', "e-Op"),
    ("example1", "type foo = | bar(bv[32])\n"
     "fun f(x: foo) : bv[32] = match x with | bar(y) => y + y end\n"
     "not_ok :- X = #x[bv[32]], f(bar(X)) = 42.", "e-Fun"),
]


@pytest.mark.parametrize("name,src,rule", REJECT, ids=[r[0] for r in REJECT])
def test_rejected_with_rule(name, src, rule):
    d = rejection(src)
    assert d.rule == rule, d.render()
    assert d.span.line >= 1


ACCEPT = [
    ("formula", "rel p(bool smt)\np(`#x[bool] /\\ true`)."),
    ("implicit_unquote", "rel p(bool smt)\nrel q(bool)\nq(true).\np(`~B`) :- q(B)."),
    ("model_column", "rel p(model)"),
    ("wildcard_projection", "rel q(bv[32], bool)\nrel p(bool list)\nq(1, true).\n"
     "p(L) :- L = q(1, ??)."),
    ("polymorphic_function", "fun id(x: 'a) : 'a = x\nrel p(bv[32])\np(id(1))."),
    ("record_getter", "type r = { a: bv[32]; }\nrel p(bv[32])\np(a({a = 1}))."),
    ("local_function", "fun f(n: bv[32]) : bv[32] = let fun g(m: bv[32]) : bv[32] = m + n in g(1)"),
    ("promotion", "rel p(bool smt)\np(`#x[bool]`)."),
    ("example2", "type foo = | bar(bv[32])\n"
     "ok :- X = #x[bv[32]], is_sat(`bar(X) #= bar(5)`) = true."),
]


@pytest.mark.parametrize("name,src", ACCEPT, ids=[a[0] for a in ACCEPT])
def test_accepted(name, src):
    compile_ok(src)


def test_example1_message_mentions_sym():
    d = rejection(REJECT[-1][1])
    assert "bv[32] sym" in d.message


def test_nonexhaustive_match_warns():
    _, warnings = compile_source(
        "fun f(x: bv[32] option) : bv[32] = match x with | some(y) => y end")
    assert [w.rule for w in warnings] == ["e-Match"]
    assert "none" in warnings[0].message


def test_exhaustive_nested_patterns_do_not_warn():
    _, warnings = compile_source(
        "fun f(x: bool option list) : bv[32] = match x with\n"
        "| [] => 0 | none :: _ => 1 | some(true) :: _ => 2 | some(false) :: _ => 3 end")
    assert warnings == []


@pytest.mark.parametrize("t,mode,ok", [
    (TypeVar("b"), EXP, False),
    (BOOL, EXP, True),
    (MODEL, EXP, True),
    (MODEL, SMT, False),
    (TypeVar("a"), EXP, True),
    (TypeVar("a"), SMT, False),
    (SmtType(bv(32)), EXP, True),
    (SymType(list_of(BOOL)), EXP, True),
    (SmtType(TypeVar("a")), EXP, False),
])
def test_well_formed(t, mode, ok):
    assert well_formed(t, mode, frozenset({"a"})) == ok


def test_smt_list_of_tvar_is_ill_formed_in_smt_mode():
    assert not well_formed(SmtType(list_of(TypeVar("a"))), SMT, frozenset({"a"}))
    assert well_formed(BOOL, SMT)


def test_erase_and_to_smt():
    t = AdtType("pair", (SmtType(BOOL), SymType(bv(32))))
    assert erase(t) == AdtType("pair", (BOOL, bv(32)))
    assert to_smt(BOOL) == SmtType(BOOL)
    with pytest.raises(UndefinedForType):
        erase(MODEL)


def test_checked_program_has_no_unresolved_types():
    prog = compile_ok("fun f(x: 'a list) : bv[32] = match x with | [] => 0 | _ :: t => 1 + f(t) end\n"
                      "rel p(bv[32])\np(f([true, false])).")
    assert "f" in prog.funs
