"""Backtrack search over digraph stacks.

``search_all`` returns every permutation in the intersection of the
constraint sets, ``search_single`` the first one found and ``search_gens``
a base and strong generating set when the intersection is a group.
``search_group`` handles cosets by finding one element first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .equitable import STRONG, WEAK, Approximator, IsoEstimate
from .perm import Permutation, PermGroup, orbits_of, schreier_sims
from .refiners import Refiner, ShiftedRefiner
from .splitter import split
from .stack import DigraphStack


class SearchError(RuntimeError):
    pass


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    refiner_calls: int = 0
    approx_calls: int = 0
    trace_hits: int = 0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.leaves += other.leaves
        self.refiner_calls += other.refiner_calls
        self.approx_calls += other.approx_calls
        self.trace_hits += other.trace_hits

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "leaves": self.leaves,
            "refiner_calls": self.refiner_calls,
            "approx_calls": self.approx_calls,
            "trace_hits": self.trace_hits,
        }


def node_count(stats: SearchStats) -> int:
    return stats.nodes


@dataclass
class Problem:
    n: int
    refiners: list[Refiner]
    approximator: Approximator = STRONG
    mode: str = ""

    def accepts(self, p: Permutation) -> bool:
        return all(r.membership(p) for r in self.refiners)


@dataclass
class BSGSResult:
    degree: int
    base: list[int]
    strong_generators: list[Permutation]
    _group: PermGroup | None = field(default=None, repr=False)

    @property
    def group(self) -> PermGroup:
        if self._group is None:
            self._group = PermGroup(self.degree, self.strong_generators)
        return self._group

    def order(self) -> int:
        return self.group.order()

    def verify(self) -> bool:
        """True when the generators are strong relative to the base."""
        chain = schreier_sims(self.degree, self.strong_generators, self.base)
        if chain.base != list(self.base):
            return False
        gens = [g.images for g in self.strong_generators]
        for i, b in enumerate(self.base):
            level = [g for g in gens if all(g[c] == c for c in self.base[:i])]
            orb = next(o for o in orbits_of(self.degree, level) if b in o)
            if sorted(orb) != sorted(chain.levels[i].orbit):
                return False
        return True


@dataclass
class GroupResult:
    """Result of a group/coset search: ``None`` when empty."""

    bsgs: BSGSResult | None
    representative: Permutation | None

    @property
    def empty(self) -> bool:
        return self.bsgs is None

    def order(self) -> int:
        return 0 if self.bsgs is None else self.bsgs.order()

    def contains(self, p: Permutation) -> bool:
        if self.bsgs is None:
            return False
        return self.bsgs.group.contains(p * self.representative.inverse())

    def elements(self) -> list[Permutation]:
        if self.bsgs is None:
            return []
        return sorted(g * self.representative for g in self.bsgs.group.elements())


class LeftTrace:
    """Memo of left-stack transitions, shared by every branch of one search.

    Left stacks evolve identically in every branch, so each transition is
    computed once and later branches receive the very same stack objects.
    """

    def __init__(self, debug: bool = False):
        self.debug = debug
        self._steps: dict[tuple, tuple] = {}
        self._states: dict[tuple[int, int], DigraphStack] = {}
        self.hits = 0

    def apply(self, S: DigraphStack, i: int, refiner: Refiner) -> DigraphStack:
        key = (id(S), "refine", i)
        hit = self._steps.get(key)
        if hit is not None:
            self.hits += 1
            if self.debug:
                fresh = refiner.left(S)
                if S.append(fresh) != hit[1]:
                    raise SearchError(f"left trace mismatch at refiner {refiner.name}")
            return hit[1]
        out = S.append(refiner.left(S))
        self._steps[key] = (S, out)
        return out

    def extend(self, S: DigraphStack, ext: DigraphStack) -> DigraphStack:
        key = (id(S), "extend", id(ext))
        hit = self._steps.get(key)
        if hit is not None:
            self.hits += 1
            return hit[1]
        out = S.append(ext)
        self._steps[key] = (S, out, ext)
        return out

    def record(self, depth: int, step: int, S: DigraphStack) -> None:
        old = self._states.get((depth, step))
        if old is None:
            self._states[(depth, step)] = S
        elif old is not S and old != S:
            raise SearchError(f"left stack differs at depth {depth}, step {step}")

    def replay(self, depth: int, step: int) -> DigraphStack:
        try:
            return self._states[(depth, step)]
        except KeyError:
            raise SearchError(f"no left state recorded at depth {depth}, step {step}") from None


class Search:
    def __init__(self, problem: Problem, debug: bool = False, prune: bool = True):
        self.problem = problem
        self.n = problem.n
        self.approximator = problem.approximator
        self.refiners = list(problem.refiners)
        self.debug = debug
        self.prune = prune
        self.stats = SearchStats()
        self.trace = LeftTrace(debug)
        self.base: list[int] = []
        for r in self.refiners:
            if r.n != self.n:
                raise ValueError("refiner degree mismatch")
            r.begin(self.approximator.fixed)

    def approx(self, S: DigraphStack, T: DigraphStack) -> IsoEstimate:
        self.stats.approx_calls += 1
        return self.approximator.approx(S, T)

    def refine(self, S: DigraphStack, T: DigraphStack, depth: int = 0, bound: int | None = None):
        """Grow both stacks until the estimate stops shrinking."""
        est = self.approx(S, T)
        if bound is not None and est.size >= bound:
            raise SearchError(f"estimate did not shrink after split: {est.size} >= {bound}")
        step = 0
        self.trace.record(depth, step, S)
        while not est.is_empty:
            S0, T0, est0 = S, T, est
            for i, r in enumerate(self.refiners):
                if len(S) != len(T):
                    break
                same = S is T
                S_next = self.trace.apply(S, i, r)
                if same and r.is_group:
                    T = S_next
                else:
                    T = T.append(r.right(T))
                S = S_next
                self.stats.refiner_calls += 1
                step += 1
                self.trace.record(depth, step, S)
            est = self.approx(S, T)
            if not est.size < est0.size:
                return S0, T0, est0
        return S, T, est

    def _leaf(self, S: DigraphStack, T: DigraphStack, est: IsoEstimate) -> Permutation | None:
        self.stats.leaves += 1
        h = est.rep
        if S.apply_perm(h) == T and self.problem.accepts(h):
            return h
        return None

    def _children(self, S: DigraphStack, T: DigraphStack, est: IsoEstimate):
        sp = split(S, T, est)
        for left, right in sp.pairs:
            S1 = self.trace.extend(S, left)
            T1 = S1 if (S is T and right is left) else T.append(right)
            yield sp, S1, T1

    def all(self, S: DigraphStack, T: DigraphStack, depth: int, bound: int | None, out: list) -> None:
        S, T, est = self.refine(S, T, depth, bound)
        if est.is_empty:
            return
        if est.size == 1:
            h = self._leaf(S, T, est)
            if h is not None:
                out.append(h)
            return
        for _, S1, T1 in self._children(S, T, est):
            self.stats.nodes += 1
            self.all(S1, T1, depth + 1, est.size, out)

    def single(self, S: DigraphStack, T: DigraphStack, depth: int, bound: int | None) -> Permutation | None:
        S, T, est = self.refine(S, T, depth, bound)
        if est.is_empty:
            return None
        if est.size == 1:
            return self._leaf(S, T, est)
        for _, S1, T1 in self._children(S, T, est):
            self.stats.nodes += 1
            found = self.single(S1, T1, depth + 1, est.size)
            if found is not None:
                return found
        return None

    def gens(self, S: DigraphStack, depth: int, bound: int | None) -> list[Permutation]:
        S, T, est = self.refine(S, S, depth, bound)
        if est.is_empty:
            raise SearchError("identity excluded from a group search")
        if est.size == 1:
            return []
        sp = split(S, T, est)
        if len(self.base) == depth:
            self.base.append(sp.point)
        left = sp.pairs[0][0]
        child = self.trace.extend(S, left)
        self.stats.nodes += 1
        X = self.gens(child, depth + 1, est.size)
        orbit_id = self._orbit_index(X)
        searched: list[int] = [sp.images[0]]
        for (_, right), beta in zip(sp.pairs[1:], sp.images[1:]):
            if self.prune and any(orbit_id[beta] == orbit_id[b] for b in searched):
                searched.append(beta)
                continue
            self.stats.nodes += 1
            found = self.single(child, T.append(right), depth + 1, est.size)
            if found is not None:
                X.append(found)
                orbit_id = self._orbit_index(X)
            searched.append(beta)
        return X

    def _orbit_index(self, X: Sequence[Permutation]) -> list[int]:
        idx = [0] * self.n
        for k, o in enumerate(orbits_of(self.n, [g.images for g in X])):
            for a in o:
                idx[a] = k
        return idx

    def root(self) -> DigraphStack:
        return DigraphStack.empty(self.n)


def search_all(problem: Problem, debug: bool = False) -> tuple[list[Permutation], SearchStats]:
    s = Search(problem, debug)
    E = s.root()
    out: list[Permutation] = []
    s.all(E, E, 0, None, out)
    s.stats.trace_hits = s.trace.hits
    return sorted(out), s.stats


def search_single(problem: Problem, debug: bool = False) -> tuple[Permutation | None, SearchStats]:
    s = Search(problem, debug)
    E = s.root()
    found = s.single(E, E, 0, None)
    s.stats.trace_hits = s.trace.hits
    return found, s.stats


def search_gens(problem: Problem, prune: bool = True, debug: bool = False) -> tuple[BSGSResult, SearchStats]:
    ident = Permutation.identity(problem.n)
    for r in problem.refiners:
        if not r.membership(ident):
            raise SearchError(f"identity is not in the set of {r.name}")
    s = Search(problem, debug, prune)
    E = s.root()
    X = s.gens(E, 0, None)
    s.stats.trace_hits = s.trace.hits
    gens = list(dict.fromkeys(g for g in X if not g.is_identity()))
    return BSGSResult(problem.n, list(s.base), gens), s.stats


def search_group(problem: Problem, prune: bool = True, debug: bool = False) -> tuple[GroupResult, SearchStats]:
    """Intersection of groups and cosets as generators plus representative."""
    ident = Permutation.identity(problem.n)
    if problem.accepts(ident):
        bsgs, stats = search_gens(problem, prune, debug)
        return GroupResult(bsgs, ident), stats
    g, stats = search_single(problem, debug)
    if g is None:
        return GroupResult(None, None), stats
    shifted = Problem(problem.n, [ShiftedRefiner(r, g) for r in problem.refiners], problem.approximator, problem.mode)
    bsgs, more = search_gens(shifted, prune, debug)
    stats.merge(more)
    return GroupResult(bsgs, g), stats


__all__ = [
    "BSGSResult", "GroupResult", "LeftTrace", "Problem", "Search", "SearchError", "SearchStats",
    "node_count", "search_all", "search_gens", "search_group", "search_single", "WEAK", "STRONG",
]
