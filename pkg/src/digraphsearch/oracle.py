"""Brute-force oracle: filter all of Sym(n) by direct checks of each constraint.

Nothing here touches refiners, digraph stacks or the search engine.
Permutations are plain image tuples until the final conversion.
"""
from __future__ import annotations

from itertools import permutations
from typing import Callable

from .perm import Permutation, parse_perm

ORACLE_MAX_DEGREE = 8

Check = Callable[[tuple], bool]


class OracleError(ValueError):
    pass


def _closure(n: int, gens: list[tuple]) -> frozenset:
    ident = tuple(range(n))
    seen = {ident}
    todo = [ident]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple(g[x[i]] for i in range(n))
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def _img(p: tuple, pts) -> frozenset:
    return frozenset(p[a - 1] + 1 for a in pts)


def _digraph_parts(obj: dict) -> tuple[list, dict]:
    n = obj["n"]
    vl = obj.get("vertex_labels") or [0] * n
    arcs = [tuple(a) for a in obj.get("arcs", [])]
    al = obj.get("arc_labels") or [0] * len(arcs)
    return [repr(x) for x in vl], {a: repr(lab) for a, lab in zip(arcs, al)}


def _check(n: int, c: dict) -> Check:
    kind = c["kind"]
    if kind in ("set_stab", "set_transport"):
        A = c["set"] if kind == "set_stab" else c["from"]
        B = frozenset(c["set"] if kind == "set_stab" else c["to"])
        return lambda p: _img(p, A) == B
    if kind in ("list_stab", "list_transport"):
        U = c["sets"] if kind == "list_stab" else c["from"]
        V = [frozenset(s) for s in (c["sets"] if kind == "list_stab" else c["to"])]
        return lambda p: len(U) == len(V) and all(_img(p, u) == v for u, v in zip(U, V))
    if kind in ("sets_stab", "sets_transport", "disjoint_stab", "disjoint_transport"):
        stab = kind.endswith("stab")
        U = [frozenset(s) for s in (c["sets"] if stab else c["from"])]
        V = frozenset(frozenset(s) for s in (c["sets"] if stab else c["to"]))
        return lambda p: frozenset(_img(p, u) for u in U) == V
    if kind in ("centralise", "conjugate"):
        g = parse_perm(n, c["perm"] if kind == "centralise" else c["from"]).images
        h = parse_perm(n, c["perm"] if kind == "centralise" else c["to"]).images
        # g^x = h  <=>  (a^g)^x = (a^x)^h for every point a
        return lambda x: all(x[g[a]] == h[x[a]] for a in range(n))
    if kind in ("digraph_auto", "digraph_iso"):
        src = c["digraph"] if kind == "digraph_auto" else c["from"]
        dst = c["digraph"] if kind == "digraph_auto" else c["to"]
        vs, arcs_s = _digraph_parts(src)
        vd, arcs_d = _digraph_parts(dst)

        def iso(p: tuple) -> bool:
            if any(vs[v] != vd[p[v]] for v in range(n)):
                return False
            moved = {(p[u - 1] + 1, p[v - 1] + 1): lab for (u, v), lab in arcs_s.items()}
            return moved == arcs_d

        return iso
    if kind in ("in_group", "in_coset"):
        gens = [parse_perm(n, s).images for s in c["generators"]]
        elements = _closure(n, gens)
        if kind == "in_group":
            return lambda p: p in elements
        rep = parse_perm(n, c["representative"]).images
        coset = frozenset(tuple(rep[g[i]] for i in range(n)) for g in elements)
        return lambda p: p in coset
    raise OracleError(f"unknown constraint kind {kind!r}")


def oracle(n: int, constraints: list[dict]) -> list[Permutation]:
    """Every permutation of degree n satisfying all constraints, sorted."""
    if n > ORACLE_MAX_DEGREE:
        raise OracleError(f"oracle limited to degree {ORACLE_MAX_DEGREE}")
    checks = [_check(n, c) for c in constraints]
    return [Permutation(p) for p in permutations(range(n)) if all(chk(p) for chk in checks)]


def oracle_spec(spec) -> list[Permutation]:
    return oracle(spec.degree, spec.constraints)


def group_elements(n: int, generators: list[str]) -> frozenset:
    """Closure of cycle-string generators, as image tuples."""
    return _closure(n, [parse_perm(n, s).images for s in generators])


def oracle_within(n: int, generators: list[str], constraints: list[dict], representative: str | None = None) -> list[Permutation]:
    """Filter the elements of a group (or one right coset of it) instead of Sym(n).

    Usable beyond the Sym(n) bound whenever the group itself is small.
    """
    elements = group_elements(n, generators)
    if representative is not None:
        rep = parse_perm(n, representative).images
        elements = frozenset(tuple(rep[g[i]] for i in range(n)) for g in elements)
    checks = [_check(n, c) for c in constraints]
    return sorted(Permutation(p) for p in elements if all(chk(p) for chk in checks))
