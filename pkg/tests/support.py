"""Shared test helpers: brute-force isomorphism checks and random instance builders.

The brute-force routines read raw digraph fields and never call the
library's action or equality code.
"""
from __future__ import annotations

import random
from itertools import permutations

from digraphsearch.digraph import LabelledDigraph
from digraphsearch.labels import Int, Str
from digraphsearch.perm import Permutation
from digraphsearch.stack import DigraphStack

LABELS = [Int(0), Int(1), Str("a")]


def _raw(d: LabelledDigraph) -> tuple[tuple, dict]:
    return tuple(d.vertex_labels), dict(zip(d.arcs, d.arc_labels))


def digraph_maps(g: tuple, src: LabelledDigraph, dst: LabelledDigraph) -> bool:
    vs, arcs_s = _raw(src)
    vd, arcs_d = _raw(dst)
    if any(vs[v] is not vd[g[v]] for v in range(len(g))):
        return False
    return {(g[u], g[v]): lab for (u, v), lab in arcs_s.items()} == arcs_d


def brute_iso(S: DigraphStack, T: DigraphStack) -> list[Permutation]:
    """Every g in Sym(n) with S^g == T, by exhaustive enumeration."""
    if len(S.entries) != len(T.entries):
        return []
    return sorted(
        Permutation(g) for g in permutations(range(S.n))
        if all(digraph_maps(g, a, b) for a, b in zip(S.entries, T.entries))
    )


def brute_iso_digraphs(a: LabelledDigraph, b: LabelledDigraph) -> list[Permutation]:
    return sorted(Permutation(g) for g in permutations(range(a.n)) if digraph_maps(g, a, b))


def random_perm(rng: random.Random, n: int) -> Permutation:
    img = list(range(n))
    rng.shuffle(img)
    return Permutation(img)


def random_digraph(rng: random.Random, n: int, density: float | None = None, labels=LABELS) -> LabelledDigraph:
    if density is None:
        density = rng.choice([0.0, 0.15, 0.3, 0.6])
    vl = [rng.choice(labels[:2]) for _ in range(n)]
    arcs = {}
    for u in range(n):
        for v in range(n):
            if rng.random() < density:
                arcs[(u, v)] = rng.choice(labels)
    return LabelledDigraph(n, list(arcs), vl, arcs)


def random_stack(rng: random.Random, n: int, length: int | None = None) -> DigraphStack:
    if length is None:
        length = rng.randint(0, 3)
    return DigraphStack(n, [random_digraph(rng, n) for _ in range(length)])


def related_pair(rng: random.Random, n: int) -> tuple[DigraphStack, DigraphStack]:
    """Half the time T is an image of S, otherwise independent."""
    S = random_stack(rng, n)
    if rng.random() < 0.5:
        return S, S.apply_perm(random_perm(rng, n))
    return S, random_stack(rng, n, len(S))


# ------------------------------------------------------------ random specs

KINDS = (
    "set_stab", "set_transport", "list_stab", "list_transport", "sets_stab", "sets_transport",
    "disjoint_stab", "disjoint_transport", "centralise", "conjugate", "digraph_auto", "digraph_iso",
    "in_group", "in_coset",
)


def _subset(rng, n, lo=0, hi=None):
    k = rng.randint(lo, n if hi is None else hi)
    return sorted(rng.sample(range(1, n + 1), k))


def _img(p: Permutation, pts):
    return sorted(p[a - 1] + 1 for a in pts)


def _disjoint(rng, n):
    pts = list(range(1, n + 1))
    rng.shuffle(pts)
    pts = pts[: rng.randint(1, n)]
    out = []
    while pts:
        k = rng.randint(1, len(pts))
        out.append(sorted(pts[:k]))
        pts = pts[k:]
    return out


def _digraph_json(rng, n):
    return random_digraph(rng, n).to_json()


def _digraph_image(obj: dict, p: Permutation) -> dict:
    return LabelledDigraph.from_json(obj).apply_perm(p).to_json()


def random_constraint(rng: random.Random, n: int, kind: str) -> dict:
    related = rng.random() < 0.7
    p = random_perm(rng, n)
    if kind == "set_stab":
        return {"kind": kind, "set": _subset(rng, n)}
    if kind == "set_transport":
        A = _subset(rng, n)
        return {"kind": kind, "from": A, "to": _img(p, A) if related else _subset(rng, n)}
    if kind in ("list_stab", "list_transport"):
        U = [_subset(rng, n) for _ in range(rng.randint(1, 3))]
        if kind == "list_stab":
            return {"kind": kind, "sets": U}
        V = [_img(p, u) for u in U] if related else [_subset(rng, n) for _ in range(len(U))]
        return {"kind": kind, "from": U, "to": V}
    if kind in ("sets_stab", "sets_transport"):
        U = list({tuple(_subset(rng, n, 1)) for _ in range(rng.randint(1, 3))})
        U = [list(u) for u in U]
        if kind == "sets_stab":
            return {"kind": kind, "sets": U}
        V = [_img(p, u) for u in U] if related else [list(v) for v in {tuple(_subset(rng, n, 1)) for _ in U}]
        return {"kind": kind, "from": U, "to": V}
    if kind in ("disjoint_stab", "disjoint_transport"):
        U = _disjoint(rng, n)
        if kind == "disjoint_stab":
            return {"kind": kind, "sets": U}
        return {"kind": kind, "from": U, "to": [_img(p, u) for u in U] if related else _disjoint(rng, n)}
    if kind == "centralise":
        return {"kind": kind, "perm": str(random_perm(rng, n))}
    if kind == "conjugate":
        g = random_perm(rng, n)
        h = p.inverse() * g * p if related else random_perm(rng, n)
        return {"kind": kind, "from": str(g), "to": str(h)}
    if kind == "digraph_auto":
        return {"kind": kind, "digraph": _digraph_json(rng, n)}
    if kind == "digraph_iso":
        d = _digraph_json(rng, n)
        return {"kind": kind, "from": d, "to": _digraph_image(d, p) if related else _digraph_json(rng, n)}
    gens = [str(random_perm(rng, n)) for _ in range(rng.randint(1, 2))]
    if rng.random() < 0.3:
        gens = ["(1,2)", "(" + ",".join(str(i) for i in range(2, n + 1)) + ")"][: rng.randint(1, 2)]
    strategy = rng.choice(["orbits", "orbital_graphs"])
    if kind == "in_group":
        return {"kind": kind, "generators": gens, "strategy": strategy}
    return {"kind": kind, "generators": gens, "representative": str(p), "strategy": strategy}


def random_spec(rng: random.Random, index: int, n: int | None = None) -> dict:
    """Mixed spec; the first constraint cycles through every kind."""
    if n is None:
        n = rng.randint(3, 6)
    kinds = [KINDS[index % len(KINDS)]] + [rng.choice(KINDS) for _ in range(rng.randint(0, 2))]
    return {
        "degree": n,
        "constraints": [random_constraint(rng, n, k) for k in kinds],
        "goal": ("all", "single", "group")[index % 3],
        "mode": "strong",
        "seed": index,
    }


# ------------------------------------------------------ acceptance reporting

ACCEPTANCE: list[str] = []


def record(number: int, title: str, ok: bool, detail: str = "") -> str:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    return line
