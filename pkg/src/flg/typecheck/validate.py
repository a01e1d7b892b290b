"""Stratification: predicate dependency graph, negative-cycle detection, strata."""
from __future__ import annotations

import networkx as nx

from ..diagnostics import Diagnostic, StaticError
from ..program import Program
from ..syntax import (
    ECall, ECtor, EFormula, EIf, ELet, EMatch, EOp, EPred, EQuote, ESmtVar, EUnquote, EqExpr,
    NegAtom, NegEq, PosAtom,
)


def _expr_refs(e, out_preds: set, out_funs: set):
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, EPred):
            out_preds.add(x.name)
            stack.extend(x.args)
        elif isinstance(x, ECall):
            out_funs.add(x.name)
            stack.extend(x.args)
        elif isinstance(x, (ECtor, EOp, EFormula)):
            stack.extend(x.args)
        elif isinstance(x, EIf):
            stack.extend((x.cond, x.then, x.other))
        elif isinstance(x, ELet):
            stack.extend((x.value, x.body))
        elif isinstance(x, EMatch):
            stack.append(x.scrut)
            stack.extend(b for _, b in x.arms)
        elif isinstance(x, EQuote):
            stack.append(x.formula)
        elif isinstance(x, EUnquote):
            stack.append(x.expr)
        elif isinstance(x, ESmtVar):
            stack.append(x.name)


def function_predicates(prog: Program) -> dict[str, set[str]]:
    """Predicates each function can query, closed under calls."""
    direct, calls = {}, {}
    for name, f in prog.funs.items():
        ps, fs = set(), set()
        _expr_refs(f.body, ps, fs)
        direct[name], calls[name] = ps, fs
    g = nx.DiGraph()
    g.add_nodes_from(prog.funs)
    for n, fs in calls.items():
        g.add_edges_from((n, m) for m in fs if m in prog.funs)
    out = {}
    for n in prog.funs:
        reach = nx.descendants(g, n) | {n}
        out[n] = set().union(*(direct[m] for m in reach))
    return out


def dependency_graph(prog: Program) -> nx.DiGraph:
    """Edge body -> head with attribute ``neg`` (negation or function-call reference)."""
    fpreds = function_predicates(prog)
    g = nx.DiGraph()
    g.add_nodes_from(prog.rels)
    for c in prog.clauses:
        for prem in c.body:
            if isinstance(prem, PosAtom):
                _edge(g, prem.pred, c.head, False, c)
            elif isinstance(prem, NegAtom):
                _edge(g, prem.pred, c.head, True, c)
            elif isinstance(prem, (EqExpr, NegEq)):
                ps, fs = set(), set()
                _expr_refs(prem.expr, ps, fs)
                for f in fs:
                    ps |= fpreds.get(f, set())
                for p in ps:
                    _edge(g, p, c.head, True, c)
    return g


def _edge(g, src, dst, neg, clause):
    if g.has_edge(src, dst):
        d = g.edges[src, dst]
        if neg and not d["neg"]:
            d["neg"], d["clause"] = True, clause
    else:
        g.add_edge(src, dst, neg=neg, clause=clause)


def stratify(prog: Program) -> list[list[str]]:
    """Assign strata; raises StaticError on a cycle through negation."""
    g = dependency_graph(prog)
    sccs = [frozenset(s) for s in nx.strongly_connected_components(g)]
    diags = []
    for s in sorted(sccs, key=lambda s: min(s)):
        bad = [(u, v) for u, v, d in g.subgraph(s).edges(data=True) if d["neg"]]
        if bad:
            u, v = min(bad)
            clause = g.edges[u, v]["clause"]
            try:
                cyc = nx.shortest_path(g.subgraph(s), v, u)
            except nx.NetworkXNoPath:
                cyc = [v]
            cycle = " -> ".join(cyc + [v])
            diags.append(Diagnostic(
                "error", "Stratification",
                f"rule for {clause.head} depends negatively on {u} (through negation or a "
                f"function call) inside a recursive cycle: {cycle}", clause.span))
    if diags:
        raise StaticError(diags)
    cond = nx.condensation(g, scc=sccs)
    order = nx.lexicographical_topological_sort(
        cond, key=lambda n: min(cond.nodes[n]["members"]))
    strata = [sorted(cond.nodes[n]["members"]) for n in order]
    prog.strata = strata
    return strata
