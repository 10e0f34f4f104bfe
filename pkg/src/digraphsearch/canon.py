"""Canonical labelling by individualisation and refinement.

The search tree branches on the first smallest non-singleton cell of the
equitable labelling. Every explored leaf yields a relabelled digraph; the
least one is the canonical form. Leaves whose relabelled digraph matches the
first or best leaf give automorphisms; these prune later branches and let the
search unwind straight to the branching point shared with the matched leaf.
"""
from __future__ import annotations

from dataclasses import dataclass

from .digraph import LabelledDigraph
from .equitable import EMPTY, IsoEstimate, VertexClassification, coset, refine_labels
from .labels import Int
from .perm import Permutation, PermGroup, orbits_of
from .stack import DigraphStack
from .equitable import Approximator


@dataclass(frozen=True)
class CanonResult:
    canonical_perm: Permutation
    automorphisms: PermGroup
    form: tuple
    leaves: int


def _form(gamma: LabelledDigraph, pi: tuple) -> tuple:
    vl = [None] * gamma.n
    for v, lab in enumerate(gamma.vertex_labels):
        vl[pi[v]] = lab
    arcs = sorted((pi[u], pi[v], lab) for (u, v), lab in zip(gamma.arcs, gamma.arc_labels))
    return (tuple(vl), tuple(arcs))


def _target(cls: VertexClassification) -> tuple:
    best = None
    for c in cls.cells:
        if len(c) > 1 and (best is None or len(c) < len(best)):
            best = c
    return best


def canonise(gamma: LabelledDigraph) -> CanonResult:
    cached = gamma._cache.get("canon")
    if cached is not None:
        return cached
    n = gamma.n
    out_adj, in_adj = gamma.adjacency()
    ident = tuple(range(n))
    auts: list[tuple] = []
    state = {"first": None, "best": None, "leaves": 0}

    def leaf(cls: VertexClassification, path: list[int]) -> int | None:
        """Record a leaf; returns the depth to unwind to when it yields an automorphism."""
        state["leaves"] += 1
        pi = [0] * n
        for i, c in enumerate(cls.cells):
            pi[c[0]] = i
        pi = tuple(pi)
        form = _form(gamma, pi)
        first, best = state["first"], state["best"]
        if first is None:
            state["first"] = state["best"] = (pi, form, list(path))
            return None
        for ref_pi, ref_form, ref_path in (first, best):
            if form == ref_form:
                inv = [0] * n
                for i, j in enumerate(pi):
                    inv[j] = i
                aut = tuple(inv[ref_pi[v]] for v in range(n))
                if aut != ident and aut not in auts:
                    auts.append(aut)
                # the automorphism maps this branch onto one already explored
                k = 0
                while path[k] == ref_path[k]:
                    k += 1
                return k
        if form < best[1]:
            state["best"] = (pi, form, list(path))
        return None

    def visit(cls: VertexClassification, path: list[int]) -> int | None:
        if cls.is_discrete():
            return leaf(cls, path)
        depth = len(path)
        cell = _target(cls)
        # cells come sorted by label, so cell indices are invariant and
        # keep labels flat instead of nesting them at every level
        cell_of = cls.cell_of()
        base_labels = [Int(2 * cell_of[v]) for v in range(n)]
        explored: list[int] = []
        for w in cell:
            if explored:
                stab = [a for a in auts if all(a[p] == p for p in path)]
                if stab:
                    orb = next(o for o in orbits_of(n, stab) if w in o)
                    if any(e in orb for e in explored):
                        continue
            labels = list(base_labels)
            labels[w] = Int(2 * cell_of[w] + 1)
            jump = visit(refine_labels(n, out_adj, in_adj, labels), path + [w])
            explored.append(w)
            if jump is not None and jump < depth:
                return jump
        return None

    visit(refine_labels(n, out_adj, in_adj, gamma.vertex_labels), [])
    best_pi, best_form, _ = state["best"]
    result = CanonResult(
        Permutation._raw(best_pi),
        PermGroup(n, [Permutation._raw(a) for a in auts]),
        best_form,
        state["leaves"],
    )
    gamma._cache["canon"] = result
    return result


def canonical_form(gamma: LabelledDigraph) -> LabelledDigraph:
    return gamma.apply_perm(canonise(gamma).canonical_perm)


def _stack_canon(S: DigraphStack) -> CanonResult:
    res = S.cache.get("canon")
    if res is None:
        res = canonise(S.squash())
        S.cache["canon"] = res
    return res


def exact_approx(S: DigraphStack, T: DigraphStack) -> IsoEstimate:
    if len(S) != len(T) or S.n != T.n:
        return EMPTY
    cs = _stack_canon(S)
    if S is T:
        return coset(cs.automorphisms, Permutation.identity(S.n))
    ct = _stack_canon(T)
    if cs.form != ct.form:
        return EMPTY
    return coset(cs.automorphisms, cs.canonical_perm * ct.canonical_perm.inverse())


def exact_fixed(S: DigraphStack) -> list[int]:
    cs = _stack_canon(S)
    moved = set()
    for g in cs.automorphisms.generators:
        moved.update(g.moved_points())
    g = cs.canonical_perm.images
    return sorted((p for p in range(S.n) if p not in moved), key=lambda p: g[p])


EXACT = Approximator("exact", exact_approx, exact_fixed)
