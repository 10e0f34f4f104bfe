"""Permutations, generator-specified groups and stabiliser chains.

Points are 0-based internally. Cycle strings in and out are 1-based,
for example ``"(1,2)(3,6,5)"``. Products compose left to right, so
``x ^ (p * q) == (x ^ p) ^ q``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from operator import itemgetter
from typing import Iterable, Sequence


def _compose(p: tuple, q: tuple) -> tuple:
    if len(p) > 1:
        return itemgetter(*p)(q)
    return tuple(q[i] for i in p)


def _invert(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


class Permutation:
    """An element of Sym(n), stored as an image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _raw(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 0-based cycles."""
        img = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for k, a in enumerate(cyc):
                if not 0 <= a < n or a in seen:
                    raise ValueError(f"bad cycle {cyc} for degree {n}")
                seen.add(a)
                img[a] = cyc[(k + 1) % len(cyc)]
        return cls._raw(tuple(img))

    @classmethod
    def parse(cls, n: int, text: str) -> "Permutation":
        return parse_perm(n, text)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __len__(self) -> int:
        return len(self.images)

    def __getitem__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self.images) != len(other.images):
            raise ValueError("degree mismatch")
        return Permutation._raw(_compose(self.images, other.images))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(len(self.images))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        return Permutation._raw(_invert(self.images))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point (0-based)."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start] or self.images[start] == start:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def moved_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i != j]

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(a + 1) for a in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation<{self}>"


def compose(p: Permutation, q: Permutation) -> Permutation:
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_perm(n: int, text: str) -> Permutation:
    """Parse 1-based cycle notation; commas or spaces separate points."""
    text = text.strip()
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise ValueError(f"malformed cycle string: {text!r}")
    cycles = []
    for body in _CYCLE.findall(text):
        pts = [int(tok) - 1 for tok in re.split(r"[,\s]+", body.strip()) if tok]
        if pts:
            cycles.append(pts)
    return Permutation.from_cycles(n, cycles)


def format_perm(p: Permutation) -> str:
    return str(p)


def orbits_of(n: int, gens: Iterable[tuple]) -> list[list[int]]:
    """Orbits of the group generated by image tuples, by least element."""
    gens = list(gens)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        orb = [start]
        seen[start] = True
        i = 0
        while i < len(orb):
            x = orb[i]
            i += 1
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        orb.sort()
        out.append(orb)
    return out


class _Level:
    __slots__ = ("point", "gens", "orbit", "transversal", "inv_transversal", "checked")

    def __init__(self, point: int, n: int):
        self.point = point
        self.gens: list[tuple] = []
        self.orbit: list[int] = [point]
        self.transversal: dict[int, tuple] = {point: tuple(range(n))}
        self.inv_transversal: dict[int, tuple] = {}
        self.checked: set[tuple[int, int]] = set()

    def extend(self) -> None:
        # keeps existing transversal entries so earlier Schreier checks stay valid
        tr = self.transversal
        i = 0
        while i < len(self.orbit):
            x = self.orbit[i]
            i += 1
            ux = tr[x]
            for g in self.gens:
                y = g[x]
                if y not in tr:
                    tr[y] = _compose(ux, g)
                    self.orbit.append(y)

    def inv(self, x: int) -> tuple:
        u = self.inv_transversal.get(x)
        if u is None:
            u = _invert(self.transversal[x])
            self.inv_transversal[x] = u
        return u


class StabChain:
    """A base and strong generating set with explicit transversals."""

    def __init__(self, n: int, levels: list[_Level]):
        self.degree = n
        self._levels = levels

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self._levels]

    @property
    def levels(self) -> list[_Level]:
        return self._levels

    def basic_orbits(self) -> list[list[int]]:
        return [sorted(lv.orbit) for lv in self._levels]

    def order(self) -> int:
        k = 1
        for lv in self._levels:
            k *= len(lv.orbit)
        return k

    def strong_generators(self) -> list[Permutation]:
        seen = {}
        for lv in self._levels:
            for g in lv.gens:
                seen.setdefault(g, None)
        return [Permutation._raw(g) for g in seen]

    def level_generators(self, i: int) -> list[Permutation]:
        """Strong generators fixing the first i base points."""
        if i >= len(self._levels):
            return []
        return [Permutation._raw(g) for g in self._levels[i].gens]

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        for j in range(start, len(self._levels)):
            lv = self._levels[j]
            b = g[lv.point]
            if b not in lv.transversal:
                return g, j
            if b != lv.point:
                g = _compose(g, lv.inv(b))
        return g, len(self._levels)

    def contains(self, p: Permutation) -> bool:
        g, j = self.sift(p.images)
        return j == len(self._levels) and all(i == x for i, x in enumerate(g))

    def random_element(self, rng) -> Permutation:
        """Uniform element: product of random transversal entries."""
        g = tuple(range(self.degree))
        for lv in reversed(self._levels):
            x = lv.orbit[int(rng.integers(len(lv.orbit)))]
            g = _compose(g, lv.transversal[x])
        return Permutation._raw(g)


def schreier_sims(
    n: int,
    generators: Iterable[Permutation | tuple],
    base_prefix: Sequence[int] = (),
    known_order: int | None = None,
) -> StabChain:
    """Deterministic Schreier-Sims.

    The base starts with ``base_prefix`` and is extended by the least
    point moved by a generator that fixes the current base. When
    ``known_order`` is given the build stops as soon as the chain
    reaches that order.
    """
    ident = tuple(range(n))
    gens = []
    for g in generators:
        t = g.images if isinstance(g, Permutation) else tuple(g)
        if len(t) != n:
            raise ValueError("degree mismatch")
        if t != ident and t not in gens:
            gens.append(t)

    base: list[int] = []
    for b in base_prefix:
        if b not in base:
            base.append(b)
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(n) if g[i] != i))
    levels = [_Level(b, n) for b in base]

    def fixes_prefix(g: tuple, i: int) -> bool:
        return all(g[levels[j].point] == levels[j].point for j in range(i))

    for i, lv in enumerate(levels):
        lv.gens = [g for g in gens if fixes_prefix(g, i)]
        lv.extend()

    def done() -> bool:
        if known_order is None:
            return False
        k = 1
        for lv in levels:
            k *= len(lv.orbit)
        return k == known_order

    chain = StabChain(n, levels)
    i = len(levels) - 1
    while i >= 0 and not done():
        lv = levels[i]
        restarted = False
        for x in list(lv.orbit):
            ux = lv.transversal[x]
            for gi, s in enumerate(lv.gens):
                key = (x, gi)
                if key in lv.checked:
                    continue
                y = s[x]
                sg = _compose(_compose(ux, s), lv.inv(y))
                lv.checked.add(key)
                if sg == ident:
                    continue
                h, j = chain.sift(sg, i + 1)
                if j == len(levels) and h == ident:
                    continue
                if j == len(levels):
                    levels.append(_Level(next(p for p in range(n) if h[p] != p), n))
                for m in range(i + 1, j + 1):
                    levels[m].gens.append(h)
                    levels[m].extend()
                i = j
                restarted = True
                break
            if restarted:
                break
        if not restarted:
            i -= 1
    return chain


class PermGroup:
    """A group given by generators, with lazily built chains."""

    def __init__(self, degree: int, generators: Iterable[Permutation] = (), order: int | None = None):
        self.degree = degree
        self.generators = tuple(generators)
        for g in self.generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
        self._order = order
        self._chains: dict[tuple, StabChain] = {}
        self._orbits: list[list[int]] | None = None

    @classmethod
    def symmetric(cls, n: int) -> "PermGroup":
        return cls.cell_stabiliser(n, [list(range(n))])

    @classmethod
    def trivial(cls, n: int) -> "PermGroup":
        return cls(n, [], order=1)

    @classmethod
    def cell_stabiliser(cls, n: int, cells: Sequence[Sequence[int]]) -> "PermGroup":
        """Direct product of the symmetric groups on the given cells."""
        gens = []
        order = 1
        for cell in cells:
            c = sorted(cell)
            for k in range(2, len(c) + 1):
                order *= k
            if len(c) >= 2:
                gens.append(Permutation.from_cycles(n, [c[:2]]))
            if len(c) >= 3:
                gens.append(Permutation.from_cycles(n, [c]))
        grp = cls(n, gens, order=order)
        cover = sorted([sorted(c) for c in cells] + [[x] for x in range(n) if not any(x in c for c in cells)])
        grp._orbits = cover
        return grp

    def chain(self, base_prefix: Sequence[int] = ()) -> StabChain:
        key = tuple(base_prefix)
        ch = self._chains.get(key)
        if ch is None:
            ch = schreier_sims(self.degree, self.generators, key, self._order)
            if self._order is None:
                self._order = ch.order()
            self._chains[key] = ch
        return ch

    def order(self) -> int:
        if self._order is None:
            self.chain()
        return self._order

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise ValueError("degree mismatch")
        return self.chain().contains(p)

    def __contains__(self, p: Permutation) -> bool:
        return self.contains(p)

    def orbits(self) -> list[list[int]]:
        if self._orbits is None:
            self._orbits = orbits_of(self.degree, [g.images for g in self.generators])
        return [list(o) for o in self._orbits]

    def orbit(self, x: int) -> list[int]:
        for o in self.orbits():
            if x in o:
                return o
        raise ValueError(x)

    def pointwise_stabiliser(self, points: Sequence[int]) -> "PermGroup":
        pts = list(dict.fromkeys(points))
        ch = self.chain(pts)
        gens = ch.level_generators(len(pts))
        order = 1
        for lv in ch.levels[len(pts):]:
            order *= len(lv.orbit)
        return PermGroup(self.degree, gens, order=order)

    def representative_action(self, src: Sequence[int], dst: Sequence[int]) -> Permutation | None:
        """Some g in the group with src[i]^g == dst[i], or None."""
        if len(src) != len(dst):
            raise ValueError("length mismatch")
        n = self.degree
        want: dict[int, int] = {}
        for a, b in zip(src, dst):
            if want.setdefault(a, b) != b:
                return None
        if len(set(want.values())) != len(want):
            return None
        pts = list(want)
        ch = self.chain(pts)
        x = tuple(range(n))
        x_inv = x
        for i, a in enumerate(pts):
            lv = ch.levels[i]
            t = x_inv[want[a]]
            u = lv.transversal.get(t)
            if u is None:
                return None
            x = _compose(u, x)
            x_inv = _invert(x)
        return Permutation._raw(x)

    def random_element(self, rng) -> Permutation:
        return self.chain().random_element(rng)

    def elements(self) -> list[Permutation]:
        """All elements by closure. Only for small groups."""
        ident = tuple(range(self.degree))
        seen = {ident}
        frontier = [ident]
        gens = [g.images for g in self.generators]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = _compose(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(Permutation._raw(t) for t in seen)

    def __repr__(self) -> str:
        return f"PermGroup({self.degree}, [{', '.join(map(str, self.generators))}])"


@dataclass(frozen=True)
class RightCoset:
    group: PermGroup
    representative: Permutation

    def __post_init__(self):
        if self.representative.degree != self.group.degree:
            raise ValueError("degree mismatch")

    def contains(self, p: Permutation) -> bool:
        return self.group.contains(p * self.representative.inverse())

    def size(self) -> int:
        return self.group.order()

    def elements(self) -> list[Permutation]:
        return sorted(g * self.representative for g in self.group.elements())


def orbits(G: PermGroup) -> list[list[int]]:
    return G.orbits()


def contains(G: PermGroup, p: Permutation) -> bool:
    return G.contains(p)


def representative_action(G: PermGroup, src: Sequence[int], dst: Sequence[int]) -> Permutation | None:
    return G.representative_action(src, dst)
