"""Equitable vertex labelling and the weak/strong approximators built on it."""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Sequence

from .digraph import LabelledDigraph
from .labels import Count, Label, _seq_unchecked
from .perm import Permutation, PermGroup
from .stack import DigraphStack


class VertexClassification:
    """Ordered list of (label, cell); cells partition the vertices."""

    __slots__ = ("labels", "cells", "_cell_of")

    def __init__(self, pairs: Sequence[tuple[Label, Sequence[int]]]):
        self.labels = tuple(lab for lab, _ in pairs)
        self.cells = tuple(tuple(sorted(c)) for _, c in pairs)
        self._cell_of = None

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(zip(self.labels, self.cells))

    def cell_of(self) -> list[int]:
        if self._cell_of is None:
            n = sum(len(c) for c in self.cells)
            idx = [0] * n
            for i, c in enumerate(self.cells):
                for v in c:
                    idx[v] = i
            self._cell_of = idx
        return self._cell_of

    def is_discrete(self) -> bool:
        return all(len(c) == 1 for c in self.cells)

    def __repr__(self) -> str:
        return "[" + ", ".join(str([v + 1 for v in c]) for c in self.cells) + "]"


def refine_labels(
    n: int,
    out_adj: Sequence[Sequence[tuple[int, Label]]],
    in_adj: Sequence[Sequence[tuple[int, Label]]],
    vertex_labels: Sequence[Label],
) -> VertexClassification:
    """Equitable labelling on raw adjacency lists.

    Each processed cell U relabels every current cell V: vertices of V are
    split by their (out, in) counts into U per arc label, and each part gets
    the label [y, x, L, f(min part)].
    """
    by_label: dict[Label, list[int]] = {}
    for v in range(n):
        by_label.setdefault(vertex_labels[v], []).append(v)
    next_id = 0
    current: list[tuple[Label, list[int], int]] = []
    queue: OrderedDict[int, tuple[Label, list[int]]] = OrderedDict()
    for lab in sorted(by_label):
        current.append((lab, by_label[lab], next_id))
        queue[next_id] = (lab, by_label[lab])
        next_id += 1

    while queue and len(current) < n:
        _, (x, U) = queue.popitem(last=False)
        outc: dict[int, dict[Label, int]] = {}
        inc: dict[int, dict[Label, int]] = {}
        seen_labels: set[Label] = set()
        for b in U:
            for a, z in in_adj[b]:
                d = outc.get(a)
                if d is None:
                    d = outc[a] = {}
                d[z] = d.get(z, 0) + 1
                seen_labels.add(z)
            for a, z in out_adj[b]:
                d = inc.get(a)
                if d is None:
                    d = inc[a] = {}
                d[z] = d.get(z, 0) + 1
                seen_labels.add(z)
        L = sorted(seen_labels)
        L_label = _seq_unchecked(tuple(L))
        zero = (0,) * (2 * len(L))
        flabels: dict[tuple, Label] = {}

        def f_label(f: tuple) -> Label:
            lab = flabels.get(f)
            if lab is None:
                lab = _seq_unchecked(tuple(Count(f[2 * i], f[2 * i + 1]) for i in range(len(L))))
                flabels[f] = lab
            return lab

        def f_of(a: int) -> tuple:
            o = outc.get(a)
            i = inc.get(a)
            if o is None and i is None:
                return zero
            o = o or {}
            i = i or {}
            vec = []
            for z in L:
                vec.append(o.get(z, 0))
                vec.append(i.get(z, 0))
            return tuple(vec)

        updated = []
        for y, V, vid in current:
            parts: dict[tuple, list[int]] = {}
            for a in V:
                parts.setdefault(f_of(a), []).append(a)
            if len(parts) == 1:
                (f,) = parts
                updated.append((_seq_unchecked((y, x, L_label, f_label(f))), V, vid))
                continue
            queue.pop(vid, None)
            for f in sorted(parts):
                cell = parts[f]
                lab = _seq_unchecked((y, x, L_label, f_label(f)))
                updated.append((lab, cell, next_id))
                queue[next_id] = (lab, cell)
                next_id += 1
        current = updated

    return VertexClassification([(lab, cell) for lab, cell, _ in current])


def equitable_labelling(gamma: LabelledDigraph) -> VertexClassification:
    cls = gamma._cache.get("equitable")
    if cls is None:
        out_adj, in_adj = gamma.adjacency()
        cls = refine_labels(gamma.n, out_adj, in_adj, gamma.vertex_labels)
        gamma._cache["equitable"] = cls
    return cls


@dataclass(frozen=True)
class IsoEstimate:
    """Empty, or the right coset group * rep."""

    group: PermGroup | None
    rep: Permutation | None
    size: int
    cells: tuple | None = field(default=None, compare=False)

    @property
    def is_empty(self) -> bool:
        return self.group is None

    def orbits(self) -> list[list[int]]:
        if self.group is None:
            return []
        return self.group.orbits()

    def contains(self, p: Permutation) -> bool:
        if self.group is None:
            return False
        return self.group.contains(p * self.rep.inverse())

    def elements(self) -> list[Permutation]:
        if self.group is None:
            return []
        return sorted(g * self.rep for g in self.group.elements())

    def __repr__(self) -> str:
        if self.group is None:
            return "IsoEstimate(empty)"
        return f"IsoEstimate(size={self.size}, rep={self.rep})"


EMPTY = IsoEstimate(None, None, 0)


def coset(group: PermGroup, rep: Permutation, cells=None) -> IsoEstimate:
    return IsoEstimate(group, rep, group.order(), cells)


def _matching_perm(n: int, src_cells, dst_cells) -> Permutation:
    img = [0] * n
    for U, V in zip(src_cells, dst_cells):
        for a, b in zip(U, V):
            img[a] = b
    return Permutation._raw(tuple(img))


def _cell_group(S: DigraphStack, key: str, cells) -> PermGroup:
    grp = S.cache.get(key)
    if grp is None:
        grp = PermGroup.cell_stabiliser(S.n, cells)
        S.cache[key] = grp
    return grp


def strong_classification(S: DigraphStack) -> VertexClassification:
    cls = S.cache.get("strong")
    if cls is None:
        cls = equitable_labelling(S.squash())
        S.cache["strong"] = cls
    return cls


def strong_approx(S: DigraphStack, T: DigraphStack) -> IsoEstimate:
    if len(S) != len(T) or S.n != T.n:
        return EMPTY
    cs = strong_classification(S)
    if S is T:
        return coset(_cell_group(S, "strong_group", cs.cells), Permutation.identity(S.n), cs.cells)
    ct = strong_classification(T)
    if len(cs) != len(ct) or cs.labels != ct.labels:
        return EMPTY
    if any(len(U) != len(V) for U, V in zip(cs.cells, ct.cells)):
        return EMPTY
    grp = _cell_group(S, "strong_group", cs.cells)
    return coset(grp, _matching_perm(S.n, cs.cells, ct.cells), cs.cells)


def strong_fixed(S: DigraphStack) -> list[int]:
    return [c[0] for c in strong_classification(S).cells if len(c) == 1]


def weak_classification(S: DigraphStack) -> tuple[tuple, list[tuple], list[tuple]]:
    """(per-entry label signatures, signature keys, intersected cells)."""
    data = S.cache.get("weak")
    if data is None:
        per_entry = [equitable_labelling(e) for e in S.entries]
        sigs = tuple(c.labels for c in per_entry)
        idx = [c.cell_of() for c in per_entry]
        groups: dict[tuple, list[int]] = {}
        for a in range(S.n):
            groups.setdefault(tuple(ix[a] for ix in idx), []).append(a)
        keys = sorted(groups)
        data = (sigs, keys, [tuple(groups[k]) for k in keys])
        S.cache["weak"] = data
    return data


def weak_approx(S: DigraphStack, T: DigraphStack) -> IsoEstimate:
    if len(S) != len(T) or S.n != T.n:
        return EMPTY
    sig_s, keys_s, cells_s = weak_classification(S)
    if S is T:
        return coset(_cell_group(S, "weak_group", cells_s), Permutation.identity(S.n), tuple(cells_s))
    sig_t, keys_t, cells_t = weak_classification(T)
    if sig_s != sig_t:
        return EMPTY
    if keys_s != keys_t or any(len(U) != len(V) for U, V in zip(cells_s, cells_t)):
        return EMPTY
    grp = _cell_group(S, "weak_group", cells_s)
    return coset(grp, _matching_perm(S.n, cells_s, cells_t), tuple(cells_s))


def weak_fixed(S: DigraphStack) -> list[int]:
    return [c[0] for c in weak_classification(S)[2] if len(c) == 1]


class Approximator:
    """An isomorphism approximator paired with its fixed-point approximator."""

    def __init__(self, name: str, approx, fixed):
        self.name = name
        self.approx = approx
        self.fixed = fixed

    def __repr__(self) -> str:
        return f"Approximator({self.name})"


WEAK = Approximator("weak", weak_approx, weak_fixed)
STRONG = Approximator("strong", strong_approx, strong_fixed)
