"""Refiners: pairs of stack functions plus a membership predicate.

A refiner for a set U of permutations satisfies
``left(S) ^ g == right(S ^ g)`` for every g in U. Refiners that read the
fixed points of a stack receive them through ``begin(fixed)``, which the
search calls once before it starts.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .digraph import LabelledDigraph, pair_orbit, subset_digraph
from .labels import ONE, ZERO, Count, Int, Label, Seq
from .perm import Permutation, PermGroup
from .stack import DigraphStack

FixedFn = Callable[[DigraphStack], list]


class Refiner:
    name = "refiner"
    is_group = False
    perfect = False

    def __init__(self, n: int):
        self.n = n
        self._fixed: FixedFn | None = None

    def begin(self, fixed: FixedFn) -> None:
        """Bind the fixed-point approximator and drop per-search state."""
        self._fixed = fixed

    def fixed(self, S: DigraphStack) -> list:
        if self._fixed is None:
            raise RuntimeError(f"{self.name}: no fixed-point approximator bound")
        return self._fixed(S)

    def left(self, S: DigraphStack) -> DigraphStack:
        raise NotImplementedError

    def right(self, T: DigraphStack) -> DigraphStack:
        raise NotImplementedError

    def membership(self, p: Permutation) -> bool:
        raise NotImplementedError

    def apply_left(self, S: DigraphStack) -> DigraphStack:
        return self.left(S)

    def apply_right(self, T: DigraphStack) -> DigraphStack:
        return self.right(T)

    def __repr__(self) -> str:
        return f"<{self.name}>"


class ConstantRefiner(Refiner):
    """Returns the same pair of stacks whatever the input."""

    def __init__(self, name: str, left: Sequence[LabelledDigraph], right: Sequence[LabelledDigraph],
                 predicate: Callable[[Permutation], bool], perfect: bool = True):
        n = left[0].n if left else right[0].n
        super().__init__(n)
        self.name = name
        self.left_stack = DigraphStack(n, left)
        self.right_stack = DigraphStack(n, right)
        self._predicate = predicate
        self.perfect = perfect
        self.is_group = self.left_stack == self.right_stack
        if self.is_group:
            self.right_stack = self.left_stack

    def left(self, S: DigraphStack) -> DigraphStack:
        return self.left_stack

    def right(self, T: DigraphStack) -> DigraphStack:
        return self.right_stack

    def membership(self, p: Permutation) -> bool:
        return self._predicate(p)


def _image(p: Permutation, pts: Iterable[int]) -> frozenset:
    img = p.images
    return frozenset(img[a] for a in pts)


def set_refiner(n: int, A: Iterable[int], B: Iterable[int]) -> ConstantRefiner:
    A, B = frozenset(A), frozenset(B)
    return ConstantRefiner(
        "set", [subset_digraph(n, A)], [subset_digraph(n, B)],
        lambda p: _image(p, A) == B,
    )


def _list_digraph(n: int, sets: Sequence[Iterable[int]]) -> LabelledDigraph:
    member: list[list[Label]] = [[] for _ in range(n)]
    for i, U in enumerate(sets):
        for a in sorted(set(U)):
            member[a].append(Int(i + 1))
    return LabelledDigraph._make(n, (), tuple(Seq(m) for m in member), ())


def list_of_subsets_refiner(n: int, U: Sequence[Iterable[int]], V: Sequence[Iterable[int]]) -> ConstantRefiner:
    U = [frozenset(x) for x in U]
    V = [frozenset(x) for x in V]

    def pred(p: Permutation) -> bool:
        return len(U) == len(V) and all(_image(p, a) == b for a, b in zip(U, V))

    left, right = _list_digraph(n, U), _list_digraph(n, V)
    if len(U) != len(V):
        # the encoding cannot see trailing empty sets, so keep a marker
        left = LabelledDigraph._make(n, (), tuple(Seq((lab, Int(len(U)))) for lab in left.vertex_labels), ())
        right = LabelledDigraph._make(n, (), tuple(Seq((lab, Int(len(V)))) for lab in right.vertex_labels), ())
    return ConstantRefiner("list_of_subsets", [left], [right], pred)


def _sets_digraph(n: int, sets: Iterable[frozenset]) -> LabelledDigraph:
    sets = list(sets)
    width = max((len(s) for s in sets), default=0)
    k = len(sets)
    vcount = [[0] * width for _ in range(n)]
    acount: dict[tuple[int, int], list[int]] = {}
    for s in sets:
        size = len(s)
        for a in s:
            vcount[a][size - 1] += 1
            for b in s:
                if a != b:
                    acount.setdefault((a, b), [0] * width)[size - 1] += 1

    def lab(counts: list[int]) -> Label:
        return Seq(Count(c, k) for c in counts)

    return LabelledDigraph.from_dict(n, [lab(c) for c in vcount], {a: lab(c) for a, c in acount.items()})


def _sets_predicate(U: frozenset, V: frozenset) -> Callable[[Permutation], bool]:
    return lambda p: frozenset(_image(p, s) for s in U) == V


def set_of_subsets_refiner(n: int, U: Iterable[Iterable[int]], V: Iterable[Iterable[int]]) -> ConstantRefiner:
    U = frozenset(frozenset(s) for s in U)
    V = frozenset(frozenset(s) for s in V)
    return ConstantRefiner("set_of_subsets", [_sets_digraph(n, U)], [_sets_digraph(n, V)],
                           _sets_predicate(U, V), perfect=False)


def _disjoint_digraph(n: int, sets: Iterable[frozenset]) -> LabelledDigraph:
    vl = [ZERO] * n
    arcs = {}
    seen: set[int] = set()
    for s in sets:
        if seen & s:
            raise ValueError("subsets are not pairwise disjoint")
        seen |= s
        for a in s:
            vl[a] = ONE
            for b in s:
                if a != b:
                    arcs[(a, b)] = ZERO
    return LabelledDigraph.from_dict(n, vl, arcs)


def disjoint_subsets_refiner(n: int, U: Iterable[Iterable[int]], V: Iterable[Iterable[int]]) -> ConstantRefiner:
    U = frozenset(frozenset(s) for s in U)
    V = frozenset(frozenset(s) for s in V)
    if frozenset() in U or frozenset() in V:
        raise ValueError("empty member in a set of disjoint subsets")
    return ConstantRefiner("disjoint_subsets", [_disjoint_digraph(n, U)], [_disjoint_digraph(n, V)],
                           _sets_predicate(U, V))


def _functional_digraph(g: Permutation) -> LabelledDigraph:
    n = g.degree
    return LabelledDigraph.from_dict(n, [ZERO] * n, {(a, g[a]): ZERO for a in range(n)})


def perm_conjugacy_refiner(g: Permutation, h: Permutation) -> ConstantRefiner:
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    return ConstantRefiner("perm_conjugacy", [_functional_digraph(g)], [_functional_digraph(h)],
                           lambda x: x.inverse() * g * x == h)


def digraph_iso_refiner(gamma: LabelledDigraph, delta: LabelledDigraph) -> ConstantRefiner:
    if gamma.n != delta.n:
        raise ValueError("degree mismatch")
    return ConstantRefiner("digraph_iso", [gamma], [delta], lambda x: gamma.apply_perm(x) == delta)


ORBITS = "orbits"
ORBITAL_GRAPHS = "orbital_graphs"


class GroupRefiner(Refiner):
    """Refiner for membership of a group G, driven by fixed points.

    For each stack length i the first stack seen fixes F_i and a stack V_i
    preserved by the pointwise stabiliser of F_i. Any other stack T of that
    length is answered with V_i moved by an element of G taking F_i to
    Fixed(T), or the empty stack when no such element exists.
    """

    is_group = True
    perfect = False

    def __init__(self, G: PermGroup, strategy: str = ORBITAL_GRAPHS):
        super().__init__(G.degree)
        if strategy not in (ORBITS, ORBITAL_GRAPHS):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.group = G
        self.strategy = strategy
        self.name = f"group[{strategy}]"
        self.table: dict[int, tuple[list, DigraphStack]] = {}
        self.builds = 0

    def begin(self, fixed: FixedFn) -> None:
        super().begin(fixed)
        self.table = {}
        self.builds = 0

    def evaluate(self, S: DigraphStack) -> DigraphStack:
        F = list(self.fixed(S))
        entry = self.table.get(len(S))
        if entry is None:
            V = self.build(F)
            self.table[len(S)] = (F, V)
            self.builds += 1
            return V
        F0, V = entry
        if F0 == F:
            return V
        a = self.group.representative_action(F0, F) if len(F0) == len(F) else None
        if a is None:
            return DigraphStack.empty(self.n)
        return V.apply_perm(a)

    def left(self, S: DigraphStack) -> DigraphStack:
        return self.evaluate(S)

    def right(self, T: DigraphStack) -> DigraphStack:
        if len(T) not in self.table:
            raise RuntimeError("group refiner applied on the right before the left")
        return self.evaluate(T)

    def membership(self, p: Permutation) -> bool:
        return self.group.contains(p)

    def build(self, F: Sequence[int]) -> DigraphStack:
        return DigraphStack(self.n, stabiliser_digraphs(self.group, F, self.strategy))


def stabiliser_digraphs(G: PermGroup, F: Sequence[int], strategy: str) -> list[LabelledDigraph]:
    """Digraphs preserved by the pointwise stabiliser of F in G."""
    n = G.degree
    H = G.pointwise_stabiliser(F)
    orbs = sorted(H.orbits(), key=lambda o: (len(o), o[0]))
    vl = [ZERO] * n
    for i, o in enumerate(orbs):
        for a in o:
            vl[a] = Int(i)
    out = [LabelledDigraph._make(n, (), tuple(vl), ())]
    if strategy == ORBITS:
        return out
    orbit_of = {}
    for o in orbs:
        for a in o:
            orbit_of[a] = o
    gens = [g.images for g in H.generators]
    prefix = list(dict.fromkeys(F))
    for o in sorted(orbs, key=lambda o: o[0]):
        alpha = o[0]
        if alpha in prefix:
            K = G.pointwise_stabiliser(prefix)
        else:
            K = G.pointwise_stabiliser(prefix + [alpha])
        for o2 in K.orbits():
            beta = o2[0]
            if beta == alpha:
                continue
            arcs = pair_orbit(gens, alpha, beta)
            if len(arcs) == len(o) * len(orbit_of[beta]):
                continue
            out.append(LabelledDigraph._make(n, tuple(arcs), (ZERO,) * n, (ZERO,) * len(arcs)))
    return out


class CosetRefiner(Refiner):
    """Refiner for the right coset G * rep, built from a group refiner."""

    perfect = False

    def __init__(self, G: PermGroup, rep: Permutation, strategy: str = ORBITAL_GRAPHS):
        super().__init__(G.degree)
        self.base = GroupRefiner(G, strategy)
        self.rep = rep
        self.rep_inv = rep.inverse()
        self.is_group = G.contains(rep)
        self.name = f"coset[{strategy}]"

    def begin(self, fixed: FixedFn) -> None:
        super().begin(fixed)
        self.base.begin(fixed)

    def left(self, S: DigraphStack) -> DigraphStack:
        return self.base.evaluate(S)

    def right(self, T: DigraphStack) -> DigraphStack:
        if len(T) not in self.base.table:
            raise RuntimeError("coset refiner applied on the right before the left")
        return self.base.evaluate(T.apply_perm(self.rep_inv)).apply_perm(self.rep)

    def membership(self, p: Permutation) -> bool:
        return self.base.group.contains(p * self.rep_inv)


def group_refiner(G: PermGroup, strategy: str = ORBITAL_GRAPHS) -> GroupRefiner:
    return GroupRefiner(G, strategy)


def coset_refiner(G: PermGroup, rep: Permutation, strategy: str = ORBITAL_GRAPHS) -> CosetRefiner:
    return CosetRefiner(G, rep, strategy)


class FixedPointSetsRefiner(Refiner):
    """Arc-free companion for set-of-subsets constraints.

    Labels each point by which fixed points share a member with it, and how
    many members they share. Lets arc-free modes use the set structure once
    points are fixed.
    """

    perfect = False

    def __init__(self, n: int, U: Iterable[Iterable[int]], V: Iterable[Iterable[int]]):
        super().__init__(n)
        self.U = frozenset(frozenset(s) for s in U)
        self.V = frozenset(frozenset(s) for s in V)
        self.is_group = self.U == self.V
        self.name = "fixed_point_sets"
        self._pred = _sets_predicate(self.U, self.V)

    def _digraph(self, sets: frozenset, fixed: list) -> DigraphStack:
        if not fixed:
            return DigraphStack.empty(self.n)
        containing: list[list[frozenset]] = [[] for _ in range(self.n)]
        for s in sets:
            for a in s:
                containing[a].append(s)
        vl = []
        for a in range(self.n):
            marks = []
            for i, f in enumerate(fixed):
                c = sum(1 for s in containing[a] if f in s)
                if c:
                    marks.append(Count(i, c))
            vl.append(Seq(marks))
        return DigraphStack(self.n, [LabelledDigraph._make(self.n, (), tuple(vl), ())])

    def left(self, S: DigraphStack) -> DigraphStack:
        return self._digraph(self.U, self.fixed(S))

    def right(self, T: DigraphStack) -> DigraphStack:
        return self._digraph(self.V, self.fixed(T))

    def membership(self, p: Permutation) -> bool:
        return self._pred(p)


class StrippedRefiner(Refiner):
    """Wraps a refiner and removes every arc from its output."""

    def __init__(self, inner: Refiner):
        super().__init__(inner.n)
        self.inner = inner
        self.is_group = inner.is_group
        self.name = f"stripped[{inner.name}]"
        self._cache: dict[int, tuple[DigraphStack, DigraphStack]] = {}

    def begin(self, fixed: FixedFn) -> None:
        super().begin(fixed)
        self.inner.begin(fixed)

    def _strip(self, S: DigraphStack) -> DigraphStack:
        hit = self._cache.get(id(S))
        if hit is not None and hit[0] is S:
            return hit[1]
        out = S.strip_arcs()
        self._cache[id(S)] = (S, out)
        return out

    def left(self, S: DigraphStack) -> DigraphStack:
        return self._strip(self.inner.left(S))

    def right(self, T: DigraphStack) -> DigraphStack:
        return self._strip(self.inner.right(T))

    def membership(self, p: Permutation) -> bool:
        return self.inner.membership(p)


class ShiftedRefiner(Refiner):
    """Refiner for U * g^-1 given a refiner for U and some g in U."""

    is_group = True

    def __init__(self, inner: Refiner, g: Permutation):
        super().__init__(inner.n)
        self.inner = inner
        self.g = g
        self.name = f"shifted[{inner.name}]"

    def begin(self, fixed: FixedFn) -> None:
        super().begin(fixed)
        self.inner.begin(fixed)

    def left(self, S: DigraphStack) -> DigraphStack:
        return self.inner.left(S)

    def right(self, T: DigraphStack) -> DigraphStack:
        return self.inner.left(T)

    def membership(self, p: Permutation) -> bool:
        return self.inner.membership(p * self.g)
