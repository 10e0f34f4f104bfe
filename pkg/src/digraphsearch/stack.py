"""Digraph stacks and the squash construction."""
from __future__ import annotations

from typing import Iterable

from .digraph import LabelledDigraph
from .labels import EMPTY_SEQ, HASH, _seq_unchecked
from .perm import Permutation


class DigraphStack:
    """An immutable list of labelled digraphs on the same point set.

    Stacks built by ``append`` remember their prefix so that the squash can
    be extended instead of rebuilt. ``cache`` holds derived data (squash,
    classifications, canonical forms) keyed by whoever computes it.
    """

    __slots__ = ("n", "entries", "_parent", "cache")

    def __init__(self, n: int, entries: Iterable[LabelledDigraph] = ()):
        entries = tuple(entries)
        for e in entries:
            if e.n != n:
                raise ValueError("stack entries must share the degree")
        self.n = n
        self.entries = entries
        self._parent = None
        self.cache = {}

    @classmethod
    def empty(cls, n: int) -> "DigraphStack":
        return cls(n)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> LabelledDigraph:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def append(self, other: "DigraphStack | Iterable[LabelledDigraph]") -> "DigraphStack":
        extra = other.entries if isinstance(other, DigraphStack) else tuple(other)
        if isinstance(other, DigraphStack) and other.n != self.n:
            raise ValueError("degree mismatch")
        if not extra:
            return self
        out = DigraphStack(self.n, self.entries + extra)
        out._parent = self
        return out

    def __or__(self, other: "DigraphStack") -> "DigraphStack":
        return self.append(other)

    def apply_perm(self, g: Permutation) -> "DigraphStack":
        if g.degree != self.n:
            raise ValueError("degree mismatch")
        return DigraphStack(self.n, (e.apply_perm(g) for e in self.entries))

    def __xor__(self, g: Permutation) -> "DigraphStack":
        return self.apply_perm(g)

    def strip_arcs(self) -> "DigraphStack":
        return DigraphStack(self.n, (e.strip_arcs() for e in self.entries))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, DigraphStack):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.n, self.entries))

    def __repr__(self) -> str:
        return f"DigraphStack(n={self.n}, len={len(self.entries)})"

    def squash(self) -> LabelledDigraph:
        sq = self.cache.get("squash")
        if sq is not None:
            return sq
        # nearest ancestor whose squash is already known
        anc = self._parent
        while anc is not None and "squash" not in anc.cache:
            anc = anc._parent
        if anc is None:
            base = _empty_squash(self.n)
            done = 0
        else:
            base = anc.cache["squash"]
            done = len(anc.entries)
        sq = _extend_squash(base, done, self.entries[done:])
        self.cache["squash"] = sq
        return sq


def _empty_squash(n: int) -> LabelledDigraph:
    return LabelledDigraph._make(n, (), (EMPTY_SEQ,) * n, ())


def _extend_squash(base: LabelledDigraph, k: int, new: tuple) -> LabelledDigraph:
    if not new:
        return base
    n = base.n
    vl = tuple(
        _seq_unchecked(base.vertex_labels[v].value + tuple(e.vertex_labels[v] for e in new))
        for v in range(n)
    )
    maps = [e.arc_map() for e in new]
    old = base.arc_map()
    arcs = set(old)
    for m in maps:
        arcs.update(m)
    absent = (HASH,) * k
    order = sorted(arcs)
    labels = []
    for a in order:
        prev = old.get(a)
        head = prev.value if prev is not None else absent
        labels.append(_seq_unchecked(head + tuple(m.get(a, HASH) for m in maps)))
    return LabelledDigraph._make(n, tuple(order), vl, tuple(labels))


def append(S: DigraphStack, T: DigraphStack) -> DigraphStack:
    return S.append(T)


def apply_perm(S: DigraphStack, g: Permutation) -> DigraphStack:
    return S.apply_perm(g)


def squash(S: DigraphStack) -> LabelledDigraph:
    return S.squash()
