"""Desk-scale experiment harness: grid groups and subdirect products.

Every instance draws its randomness from its own counter-based generator
(Philox keyed by the run seed and the instance index), so instances are
independent of each other and of the mode being run.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial

import numpy as np

from .oracle import oracle_within
from .perm import Permutation, PermGroup
from .problem import APPROXIMATORS, MODES, build_refiner
from .refiners import ORBITAL_GRAPHS, ORBITS, CosetRefiner, GroupRefiner
from .search import GroupResult, Problem, SearchStats, search_group, search_single

CSV_HEADER = ("seed", "mode", "nodes", "zero", "order", "empty", "ms")
GRID_KINDS = ("i", "ii", "iii")


class ExperimentError(ValueError):
    pass


def instance_seed(seed: int, index: int) -> int:
    ss = np.random.SeedSequence([seed, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def instance_rng(inst_seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(inst_seed))


# ---------------------------------------------------------------- grid groups

def _cycle(n: int) -> list[int]:
    return [(i + 1) % n for i in range(n)]


def _swap(n: int) -> list[int]:
    img = list(range(n))
    img[0], img[1] = 1, 0
    return img


def _grid_perm(n: int, rows: list[int], cols: list[int]) -> Permutation:
    return Permutation._raw(tuple(rows[r] * n + cols[c] for r in range(n) for c in range(n)))


@lru_cache(maxsize=None)
def make_grid_group(n: int) -> PermGroup:
    """Sym(n) x Sym(n) acting on cells r*n + c of the n x n grid."""
    if n < 2:
        raise ExperimentError("grid groups need n >= 2")
    ident = list(range(n))
    gens = [
        _grid_perm(n, _swap(n), ident),
        _grid_perm(n, _cycle(n), ident),
        _grid_perm(n, ident, _swap(n)),
        _grid_perm(n, ident, _cycle(n)),
    ]
    return PermGroup(n * n, list(dict.fromkeys(gens)))


def grid_constraint(n: int, kind: str, rng: np.random.Generator) -> dict:
    """The random stabiliser constraint of one grid instance, 1-based."""
    N = n * n
    if kind == "i":
        cells = rng.permutation(N)[: N // 2]
        return {"kind": "set_stab", "set": sorted(int(x) + 1 for x in cells)}
    if kind == "ii":
        pts = []
        for r in range(n):
            cols = rng.permutation(n)[: n // 2]
            pts.extend(r * n + int(c) + 1 for c in cols)
        return {"kind": "set_stab", "set": sorted(pts)}
    if kind == "iii":
        if n % 2:
            raise ExperimentError("problem iii needs even n")
        order = [int(x) + 1 for x in rng.permutation(N)]
        return {"kind": "disjoint_stab", "sets": [sorted(order[: N // 2]), sorted(order[N // 2:])]}
    raise ExperimentError(f"unknown grid problem kind {kind!r}")


def grid_problem(n: int, constraint: dict, mode: str) -> Problem:
    G = make_grid_group(n)
    strategy = ORBITS if mode == "leon" else ORBITAL_GRAPHS
    refiners = [GroupRefiner(G, strategy)] + build_refiner(n * n, constraint, mode)
    return Problem(n * n, refiners, APPROXIMATORS[mode], mode)


def grid_stabiliser_order(n: int, constraint: dict) -> int:
    """Stabiliser order in the grid group by direct counting over row permutations.

    For a fixed row permutation the admissible column permutations are the
    bijections matching columns of the original 0/1 matrix with equal
    columns of the row-permuted one, so they are counted by factorials of
    column multiplicities. Problem iii also admits swapping the two cells.
    """
    M = np.zeros((n, n), dtype=np.int64)
    first = constraint["set"] if constraint["kind"] == "set_stab" else constraint["sets"][0]
    for p in first:
        M[(p - 1) // n, (p - 1) % n] = 1
    targets = [M]
    if constraint["kind"] == "disjoint_stab":
        targets.append(1 - M)
    sigmas = np.array(list(permutations(range(n))), dtype=np.int64)
    weights = 1 << np.arange(n, dtype=np.int64)
    # column codes of M[sigma(r)][c] for every sigma at once
    permuted = M[sigmas]
    codes = np.sort(np.einsum("srk,r->sk", permuted, weights), axis=1)
    total = 0
    for target in targets:
        tcodes = target.T @ weights
        _, mult = np.unique(tcodes, return_counts=True)
        ways = int(np.prod([factorial(int(m)) for m in mult]))
        hits = int(np.all(codes == np.sort(tcodes), axis=1).sum())
        total += hits * ways
    return total


@dataclass
class Row:
    seed: int
    mode: str
    nodes: int
    zero: bool
    order: int
    empty: bool
    ms: float

    def values(self) -> tuple:
        return (self.seed, self.mode, self.nodes, int(self.zero), self.order, int(self.empty), f"{self.ms:.1f}")


@dataclass
class GridOutcome:
    row: Row
    constraint: dict
    result: GroupResult
    stats: SearchStats


def run_grid_instance(n: int, kind: str, mode: str, inst_seed: int) -> GridOutcome:
    constraint = grid_constraint(n, kind, instance_rng(inst_seed))
    problem = grid_problem(n, constraint, mode)
    t0 = time.perf_counter()
    result, stats = search_group(problem)
    ms = (time.perf_counter() - t0) * 1000
    row = Row(inst_seed, mode, stats.nodes, stats.nodes == 0, result.order(), result.empty, ms)
    return GridOutcome(row, constraint, result, stats)


def grid_experiments(n: int, count: int, kind: str, mode: str, seed: int = 0) -> list[Row]:
    if kind not in GRID_KINDS:
        raise ExperimentError(f"unknown grid problem kind {kind!r}")
    if mode not in MODES:
        raise ExperimentError(f"unknown mode {mode!r}")
    return [run_grid_instance(n, kind, mode, instance_seed(seed, i)).row for i in range(count)]


# ------------------------------------------------------- transitive catalogue

def _primitive_root(p: int) -> int:
    for g in range(2, p):
        if len({pow(g, k, p) for k in range(1, p)}) == p - 1:
            return g
    return 1


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def transitive_catalogue(n: int) -> list[tuple[str, list[Permutation]]]:
    """Named generating sets of transitive groups of degree n."""
    P = Permutation._raw
    cyc = P(tuple(_cycle(n)))
    out: list[tuple[str, list[Permutation]]] = [(f"C{n}", [cyc])]
    if n >= 3:
        if n >= 4:
            out.append((f"D{n}", [cyc, P(tuple((-i) % n for i in range(n)))]))
        three = P(tuple([1, 2, 0] + list(range(3, n))))
        if n % 2:
            alt_other = cyc
        else:
            alt_other = P(tuple([0] + [(i % (n - 1)) + 1 for i in range(1, n)]))
        if n >= 4:
            out.append((f"A{n}", [three, alt_other]))
        out.append((f"S{n}", [P(tuple(_swap(n))), cyc]))
    if _is_prime(n) and n >= 5:
        g = _primitive_root(n)
        out.append((f"AGL(1,{n})", [cyc, P(tuple((g * i) % n for i in range(n)))]))
    for a in range(2, n):
        if n % a or n // a < 2:
            continue
        b = n // a
        # S_a wr S_b: blocks {j*a .. j*a+a-1}
        inner_swap = list(range(n))
        inner_swap[0], inner_swap[1] = 1, 0
        inner_cyc = list(range(n))
        for i in range(a):
            inner_cyc[i] = (i + 1) % a
        block_swap = [((j + 1) % 2 if j < 2 else j) * a + i for j in range(b) for i in range(a)]
        block_cyc = [((j + 1) % b) * a + i for j in range(b) for i in range(a)]
        gens = [P(tuple(inner_swap)), P(tuple(block_cyc))]
        if a > 2:
            gens.append(P(tuple(inner_cyc)))
        if b > 2:
            gens.append(P(tuple(block_swap)))
        out.append((f"S{a}wrS{b}", list(dict.fromkeys(gens))))
    # D4 and S2wrS2 coincide up to conjugacy; in this list equal orders mean conjugate groups
    seen: set[int] = set()
    unique = []
    for name, gens in out:
        order = PermGroup(n, gens).order()
        if order not in seen:
            seen.add(order)
            unique.append((name, gens))
    return unique


# -------------------------------------------------------- subdirect products

@dataclass
class Subdirect:
    group: PermGroup
    factors: list[str]
    k: int
    n: int
    attempts: int

    @property
    def blocks(self) -> list[list[int]]:
        return [list(range(j * self.n, (j + 1) * self.n)) for j in range(self.k)]


def _random_perm(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation._raw(tuple(int(x) for x in rng.permutation(n)))


def _place(g: Permutation, j: int, n: int, k: int) -> Permutation:
    img = list(range(n * k))
    for i, x in enumerate(g.images):
        img[j * n + i] = j * n + x
    return Permutation._raw(tuple(img))


def _project(g: Permutation, j: int, n: int) -> Permutation:
    return Permutation._raw(tuple(g.images[j * n + i] - j * n for i in range(n)))


def make_subdirect(k: int, n: int, rng: np.random.Generator | int, max_attempts: int = 200,
                   max_samples: int = 40) -> Subdirect:
    """A random proper subdirect product of k transitive groups of degree n."""
    if k < 2 or n < 2:
        raise ExperimentError("subdirect products need k, n >= 2")
    if isinstance(rng, (int, np.integer)):
        rng = instance_rng(int(rng))
    catalogue = transitive_catalogue(n)
    for attempt in range(1, max_attempts + 1):
        picks = [catalogue[int(rng.integers(len(catalogue)))] for _ in range(k)]
        factors: list[PermGroup] = []
        placed: list[Permutation] = []
        for j, (_, gens) in enumerate(picks):
            c = _random_perm(n, rng)
            conj = [c.inverse() * g * c for g in gens]
            factors.append(PermGroup(n, conj))
            placed.extend(_place(g, j, n, k) for g in conj)
        full_order = 1
        for F in factors:
            full_order *= F.order()
        direct = PermGroup(n * k, placed, order=full_order)
        sample: list[Permutation] = []
        for _ in range(max_samples):
            sample.append(direct.random_element(rng))
            if all(PermGroup(n, [_project(x, j, n) for x in sample]).order() == factors[j].order()
                   for j in range(k)):
                H = PermGroup(n * k, sample)
                if H.order() < full_order:
                    return Subdirect(H, [name for name, _ in picks], k, n, attempt)
                break
    raise ExperimentError(f"no proper ({k},{n})-subdirect product after {max_attempts} attempts")


def orbit_preserving_rep(sd: Subdirect, rng: np.random.Generator) -> Permutation:
    """Uniform element of the stabiliser of the ordered list of orbits."""
    return PermGroup.cell_stabiliser(sd.k * sd.n, sd.blocks).random_element(rng)


@dataclass
class SubdirectInstance:
    k: int
    n: int
    first: Subdirect
    second: Subdirect
    rep1: Permutation
    rep2: Permutation

    def constraints(self) -> list[dict]:
        def enc(sd: Subdirect, rep: Permutation) -> dict:
            return {"kind": "in_coset", "generators": [str(g) for g in sd.group.generators],
                    "representative": str(rep)}
        return [enc(self.first, self.rep1), enc(self.second, self.rep2)]

    def problem(self, mode: str) -> Problem:
        strategy = ORBITS if mode == "leon" else ORBITAL_GRAPHS
        refiners = [CosetRefiner(self.first.group, self.rep1, strategy),
                    CosetRefiner(self.second.group, self.rep2, strategy)]
        return Problem(self.k * self.n, refiners, APPROXIMATORS[mode], mode)


def make_subdirect_instance(k: int, n: int, inst_seed: int) -> SubdirectInstance:
    rng = instance_rng(inst_seed)
    first = make_subdirect(k, n, rng)
    second = make_subdirect(k, n, rng)
    return SubdirectInstance(k, n, first, second, orbit_preserving_rep(first, rng), orbit_preserving_rep(second, rng))


def coset_intersection_oracle(inst: SubdirectInstance) -> bool:
    """Non-emptiness by filtering the closure of the first coset."""
    first, second = inst.constraints()
    found = oracle_within(inst.k * inst.n, first["generators"], [second], first["representative"])
    return bool(found)


def subdirect_experiments(k: int, n: int, count: int, seed: int = 0, modes=MODES,
                          check_oracle: bool = True, offset: int = 0) -> list[Row]:
    """Emptiness of coset intersections; one row per instance and mode.

    The order column is 1 for a non-empty intersection and 0 otherwise.
    """
    rows: list[Row] = []
    for i in range(offset, offset + count):
        s = instance_seed(seed, i)
        inst = make_subdirect_instance(k, n, s)
        verdicts = set()
        for mode in modes:
            t0 = time.perf_counter()
            found, stats = search_single(inst.problem(mode))
            ms = (time.perf_counter() - t0) * 1000
            empty = found is None
            verdicts.add(empty)
            rows.append(Row(s, mode, stats.nodes, stats.nodes == 0, 0 if empty else 1, empty, ms))
        if len(verdicts) != 1:
            raise ExperimentError(f"modes disagree on instance {s}")
        if check_oracle and k * n <= 8:
            if coset_intersection_oracle(inst) == verdicts.pop():
                raise ExperimentError(f"oracle disagrees on instance {s}")
    return rows


def rows_to_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.values())
    return buf.getvalue()


def grid_order_reference(n: int) -> int:
    return factorial(n) ** 2
