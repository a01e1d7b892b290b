"""Two-level unification: value unification and bound/free dispatch."""
import pytest

from flg.engine import HardError, unify, value_unify
from flg.kernels import apply_subst, is_ground_under
from flg.terms import TRUE, Ctor, Var, i32
from unifgen import new_rng, random_problem


def check_problem(kind, theta, u1, u2):
    """Assert the expected outcome of one problem; returns the outcome tag."""
    if kind == "freefree":
        with pytest.raises(HardError) as ei:
            unify(theta, u1, u2)
        assert ei.value.kind == "uu-FF"
        return "hard"
    out = unify(theta, u1, u2)
    if kind == "clash":
        assert out is None
        return "fail"
    if out is None:
        # an instance problem fails only when theta contradicts the instance
        assert theta
        return "fail"
    for k, v in theta.items():
        assert out[k] == v
    assert is_ground_under(u1, out) and is_ground_under(u2, out)
    assert apply_subst(u1, out) == apply_subst(u2, out)
    return "ok"


def test_value_unify_binds():
    X = Var("X")
    assert value_unify({}, Ctor("some", (X,)), Ctor("some", (i32(3),))) == {"X": i32(3)}
    assert value_unify({"X": i32(4)}, Ctor("some", (X,)), Ctor("some", (i32(3),))) is None


def test_input_substitution_is_not_mutated():
    theta = {"Y": TRUE}
    unify(theta, Var("X"), i32(1))
    assert theta == {"Y": TRUE}


def test_both_bound_compares():
    assert unify({"X": i32(1)}, Var("X"), i32(1)) == {"X": i32(1)}
    assert unify({"X": i32(1)}, Var("X"), i32(2)) is None


def test_free_free_is_hard_error():
    with pytest.raises(HardError) as ei:
        unify({}, Var("X"), Ctor("f", (Var("Y"),)))
    assert ei.value.kind == "uu-FF"


def test_constructor_clash_is_failure():
    assert unify({}, Ctor("f", (Var("X"),)), Ctor("g", (i32(1),))) is None


def test_repeated_variable():
    u = Ctor("p", (Var("X"), Var("X")))
    assert unify({}, u, Ctor("p", (i32(1), i32(1)))) == {"X": i32(1)}
    assert unify({}, u, Ctor("p", (i32(1), i32(2)))) is None


def test_instances_recover_the_substitution():
    from unifgen import instance_problem
    rng = new_rng(7)
    for _ in range(300):
        theta, u, v, sigma = instance_problem(rng)
        out = unify(theta, u, v)
        assert out is not None
        for name, val in out.items():
            assert sigma[name] == val


@pytest.mark.parametrize("seed", range(4))
def test_random_problems(seed):
    rng = new_rng(seed)
    seen = set()
    for _ in range(500):
        seen.add(check_problem(*random_problem(rng)))
    assert seen == {"ok", "fail", "hard"}
