"""Random unification problems with known outcomes."""
import random

from flg.terms import FALSE, TRUE, Ctor, Var, i32, string

CTORS = {"f": 1, "g": 2, "h": 3, "k": 0, "m": 0}


def ground(rng, depth):
    if depth == 0 or rng.random() < 0.35:
        return rng.choice([i32(rng.randint(-2, 2)), TRUE, FALSE, string("s"), Ctor("k"), Ctor("m")])
    name = rng.choice(["f", "g", "h"])
    return Ctor(name, tuple(ground(rng, depth - 1) for _ in range(CTORS[name])))


def pattern(rng, depth, names):
    if rng.random() < 0.3:
        return Var(rng.choice(names))
    if depth == 0 or rng.random() < 0.3:
        return ground(rng, 0)
    name = rng.choice(["f", "g", "h"])
    return Ctor(name, tuple(pattern(rng, depth - 1, names) for _ in range(CTORS[name])))


def instance_problem(rng):
    """(theta, u, v, sigma): v is u instantiated by sigma, which agrees with theta."""
    names = ["X", "Y", "Z", "W"]
    u = pattern(rng, 3, names)
    sigma = {n: ground(rng, 2) for n in names}
    theta = {n: sigma[n] for n in names if rng.random() < 0.3}
    from flg.kernels import apply_subst
    return theta, u, apply_subst(u, sigma), sigma


def clash_problem(rng):
    names = ["X", "Y"]
    a, b = rng.sample(["f", "g", "h"], 2)
    u = Ctor(a, tuple(pattern(rng, 2, names) for _ in range(CTORS[a])))
    v = Ctor(b, tuple(ground(rng, 2) for _ in range(CTORS[b])))
    return {}, u, v


def free_free_problem(rng):
    u = Ctor("f", (Var("A"),)) if rng.random() < 0.5 else Var("A")
    v = Ctor("g", (Var("B"), ground(rng, 1))) if rng.random() < 0.5 else Var("B")
    return {}, u, v


def random_problem(rng):
    """Mixed problem; (kind, theta, u1, u2) with kind in instance/clash/freefree."""
    r = rng.random()
    if r < 0.6:
        theta, u, v, _ = instance_problem(rng)
        return ("instance", theta, u, v) if rng.random() < 0.5 else ("instance", theta, v, u)
    if r < 0.85:
        theta, u, v = clash_problem(rng)
        return "clash", theta, u, v
    theta, u, v = free_free_problem(rng)
    return "freefree", theta, u, v


def new_rng(seed):
    return random.Random(seed)
