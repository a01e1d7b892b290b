"""Fact-file ingestion and relation dumps."""
import pytest

from conftest import compile_ok
from flg import StaticError
from flg.facts import FactError, dump_relation, format_row, read_facts, value_of
from flg.parser import parse_expression
from flg.terms import TRUE, Ctor, i32, i64, make_list, show, smt_var, string
from flg.types import BOOL, BV32

PROG = """
type shape = | circle(bv[32]) | dot
type rec = { name: string; size: bv[64]; }
rel r(bv[32], bool, string)
rel s(shape list, rec)
rel f(bool smt, bv[32] sym)
rel z
"""


COLUMN_TYPES = ["bv[32]", "bv[64]", "bool", "string", "shape", "shape list", "bv[32] sym",
                "bool smt", "bv[32] list"]


@pytest.fixture(scope="module")
def prog():
    extra = "".join(f"rel col{i}({t})\n" for i, t in enumerate(COLUMN_TYPES))
    return compile_ok(PROG + extra)


def col(prog, text):
    """The resolved type of a column declared with source text ``text``."""
    return prog.rels[f"col{COLUMN_TYPES.index(text)}"].types[0]


@pytest.mark.parametrize("text,ty,want", [
    ("5", "bv[32]", i32(5)),
    ("-5", "bv[32]", i32(-5)),
    ("4294967295", "bv[32]", i32(-1)),
    ("7", "bv[64]", i64(7)),
    ("true", "bool", TRUE),
    ('"a\\tb"', "string", string("a\tb")),
    ("[circle(1), dot]", "shape list", make_list([Ctor("circle", (i32(1),)), Ctor("dot")])),
    ("#x[bv[32]]", "bv[32] sym", smt_var(string("x"), BV32)),
])
def test_value_of(prog, text, ty, want):
    assert value_of(parse_expression(text), col(prog, ty), prog) == want


@pytest.mark.parametrize("text,ty", [
    ("bar(5)", "bv[32]"),
    ("1L", "bv[32]"),
    ("dot", "bool"),
    ("circle(true)", "shape"),
    ("#x[bool]", "bv[32] sym"),
])
def test_value_of_rejects(prog, text, ty):
    with pytest.raises(FactError):
        value_of(parse_expression(text), col(prog, ty), prog)


def test_read_and_dump_round_trip(prog, tmp_path):
    src = tmp_path / "s.tsv"
    src.write_text('[circle(-3),dot]\t{name="x\\ty";size=9L}\n[]\t{size=1L;name=""}\n')
    rows = read_facts(src, prog, "s")
    assert len(rows) == 2
    out = tmp_path / "out.tsv"
    dump_relation(out, rows, prog)
    again = read_facts(out, prog, "s")
    assert again == rows
    assert out.read_text().splitlines()[0] == '[circle(-3),dot]\t{name="x\\ty";size=9L}'


def test_formula_columns(prog, tmp_path):
    src = tmp_path / "f.tsv"
    src.write_text("`#p[bool]`\t#v[bv[32]]\n`true`\t#{3}[bv[32]]\n")
    rows = read_facts(src, prog, "f")
    assert rows[0][0] == smt_var(string("p"), BOOL)
    assert format_row(rows[1], prog) == "`true`\t#{3}[bv[32]]"


def test_nullary_relation(prog, tmp_path):
    src = tmp_path / "z.tsv"
    src.write_text("\n")
    assert read_facts(src, prog, "z") == [()]


def test_errors_carry_positions(prog, tmp_path):
    src = tmp_path / "r.tsv"
    src.write_text('1\ttrue\t"a"\n2\t3\t"b"\n3\ttrue\n')
    with pytest.raises(StaticError) as ei:
        read_facts(src, prog, "r")
    diags = ei.value.diagnostics
    assert [(d.span.line, d.span.col) for d in diags] == [(2, 3), (3, 1)]
    assert all(d.rule == "facts" for d in diags)


def test_show_is_parseable_for_generated_values(prog):
    for v, ty in [(make_list([i32(-1)]), "bv[32] list"), (string('q"\n'), "string")]:
        assert value_of(parse_expression(show(v)), col(prog, ty), prog) == v
