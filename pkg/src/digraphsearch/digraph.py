"""Vertex- and arc-labelled digraphs with the Sym(n) action."""
from __future__ import annotations

from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from .labels import HASH_KIND, ONE, ZERO, Label, label_from_json
from .perm import Permutation, PermGroup


class LabelledDigraph:
    """Immutable labelled digraph on {0..n-1}; loops allowed.

    ``arcs`` is a sorted tuple of pairs and ``arc_labels`` is aligned with it.
    """

    __slots__ = ("n", "arcs", "vertex_labels", "arc_labels", "_hash", "_cache")

    def __init__(
        self,
        n: int,
        arcs: Iterable[tuple[int, int]] = (),
        vertex_labels: Sequence[Label] | None = None,
        arc_labels: Mapping[tuple[int, int], Label] | Sequence[Label] | None = None,
    ):
        arcs = [tuple(a) for a in arcs]
        if isinstance(arc_labels, Mapping):
            lab_of = {tuple(k): v for k, v in arc_labels.items()}
            if set(lab_of) != set(arcs):
                raise ValueError("arc labels must be keyed exactly by the arcs")
        elif arc_labels is None:
            lab_of = {a: ZERO for a in arcs}
        else:
            arc_labels = list(arc_labels)
            if len(arc_labels) != len(arcs):
                raise ValueError("one label per arc required")
            lab_of = {}
            for a, lab in zip(arcs, arc_labels):
                if a in lab_of and lab_of[a] is not lab:
                    raise ValueError(f"conflicting labels on arc {a}")
                lab_of[a] = lab
        for u, v in lab_of:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc {(u, v)} out of range for degree {n}")
        if vertex_labels is None:
            vertex_labels = (ZERO,) * n
        vertex_labels = tuple(vertex_labels)
        if len(vertex_labels) != n:
            raise ValueError("one label per vertex required")
        for lab in list(vertex_labels) + list(lab_of.values()):
            if not isinstance(lab, Label):
                raise TypeError(f"labels must be Label values, got {lab!r}")
            if lab.kind == HASH_KIND:
                raise ValueError("the absence marker cannot label a vertex or arc")
        order = sorted(lab_of)
        self._init(n, tuple(order), vertex_labels, tuple(lab_of[a] for a in order))

    def _init(self, n, arcs, vlabels, alabels):
        self.n = n
        self.arcs = arcs
        self.vertex_labels = vlabels
        self.arc_labels = alabels
        self._hash = None
        self._cache = {}

    @classmethod
    def _make(cls, n: int, arcs: tuple, vlabels: tuple, alabels: tuple) -> "LabelledDigraph":
        """Trusted constructor: arcs already sorted and aligned with alabels."""
        d = object.__new__(cls)
        d._init(n, arcs, vlabels, alabels)
        return d

    @classmethod
    def from_dict(cls, n: int, vlabels: Sequence[Label], arc_map: Mapping[tuple[int, int], Label]) -> "LabelledDigraph":
        order = sorted(arc_map)
        return cls._make(n, tuple(order), tuple(vlabels), tuple(arc_map[a] for a in order))

    @property
    def degree(self) -> int:
        return self.n

    def arc_map(self) -> dict[tuple[int, int], Label]:
        m = self._cache.get("arc_map")
        if m is None:
            m = dict(zip(self.arcs, self.arc_labels))
            self._cache["arc_map"] = m
        return m

    def adjacency(self) -> tuple[list[list[tuple[int, Label]]], list[list[tuple[int, Label]]]]:
        """(out, in): out[u] lists (v, label) for arcs u->v; in[v] lists (u, label)."""
        adj = self._cache.get("adj")
        if adj is None:
            out = [[] for _ in range(self.n)]
            inn = [[] for _ in range(self.n)]
            for (u, v), lab in zip(self.arcs, self.arc_labels):
                out[u].append((v, lab))
                inn[v].append((u, lab))
            adj = (out, inn)
            self._cache["adj"] = adj
        return adj

    def apply_perm(self, g: Permutation) -> "LabelledDigraph":
        if g.degree != self.n:
            raise ValueError("degree mismatch")
        img = g.images
        vl = [None] * self.n
        for v, lab in enumerate(self.vertex_labels):
            vl[img[v]] = lab
        moved = sorted(((img[u], img[v]), lab) for (u, v), lab in zip(self.arcs, self.arc_labels))
        out = LabelledDigraph._make(
            self.n, tuple(a for a, _ in moved), tuple(vl), tuple(lab for _, lab in moved)
        )
        # the equitable labelling is isomorphism invariant, so carry it across
        cls = self._cache.get("equitable")
        if cls is not None:
            out._cache["equitable"] = type(cls)(
                [(lab, [img[v] for v in cell]) for lab, cell in zip(cls.labels, cls.cells)]
            )
        return out

    def __xor__(self, g: Permutation) -> "LabelledDigraph":
        return self.apply_perm(g)

    def strip_arcs(self) -> "LabelledDigraph":
        if not self.arcs:
            return self
        return LabelledDigraph._make(self.n, (), self.vertex_labels, ())

    def key(self) -> tuple:
        return (self.n, self.vertex_labels, self.arcs, self.arc_labels)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, LabelledDigraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.arcs == other.arcs
            and self.vertex_labels == other.vertex_labels
            and self.arc_labels == other.arc_labels
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        return f"LabelledDigraph(n={self.n}, arcs={len(self.arcs)})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "arcs": [[u + 1, v + 1] for u, v in self.arcs],
            "vertex_labels": [x.to_json() for x in self.vertex_labels],
            "arc_labels": [x.to_json() for x in self.arc_labels],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "LabelledDigraph":
        n = int(obj["n"])
        arcs = [(int(u) - 1, int(v) - 1) for u, v in obj.get("arcs", [])]
        vl = obj.get("vertex_labels")
        al = obj.get("arc_labels")
        vlabels = [label_from_json(x) for x in vl] if vl is not None else None
        alabels = [label_from_json(x) for x in al] if al is not None else None
        return cls(n, arcs, vlabels, alabels)


def apply_perm(gamma: LabelledDigraph, g: Permutation) -> LabelledDigraph:
    return gamma.apply_perm(g)


def induces_isomorphism(gamma: LabelledDigraph, delta: LabelledDigraph, g: Permutation) -> bool:
    if gamma.n != delta.n or g.degree != gamma.n:
        raise ValueError("degree mismatch")
    return gamma.apply_perm(g) == delta


def pair_orbit(gens: Sequence[tuple], alpha: int, beta: int) -> list[tuple[int, int]]:
    start = (alpha, beta)
    seen = {start}
    todo = [start]
    while todo:
        a, b = todo.pop()
        for g in gens:
            p = (g[a], g[b])
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return sorted(seen)


def orbital_graph(G: PermGroup, alpha: int, beta: int) -> LabelledDigraph:
    """Orbit of the base pair (alpha, beta) under G, all labels 0."""
    if alpha == beta:
        raise ValueError("base pair must have distinct points")
    n = G.degree
    if not (0 <= alpha < n and 0 <= beta < n):
        raise ValueError("base pair out of range")
    arcs = pair_orbit([g.images for g in G.generators], alpha, beta)
    return LabelledDigraph._make(n, tuple(arcs), (ZERO,) * n, (ZERO,) * len(arcs))


@lru_cache(maxsize=4096)
def point_digraph(n: int, alpha: int) -> LabelledDigraph:
    """Arc-free digraph with alpha labelled 1 and every other vertex 0."""
    vl = [ZERO] * n
    vl[alpha] = ONE
    return LabelledDigraph._make(n, (), tuple(vl), ())


def subset_digraph(n: int, points: Iterable[int]) -> LabelledDigraph:
    vl = [ZERO] * n
    for a in points:
        vl[a] = ONE
    return LabelledDigraph._make(n, (), tuple(vl), ())
