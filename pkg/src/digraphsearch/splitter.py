"""The fixed-point splitter."""
from __future__ import annotations

from dataclasses import dataclass

from .digraph import point_digraph
from .equitable import IsoEstimate
from .stack import DigraphStack


@dataclass(frozen=True)
class SplitResult:
    point: int
    pairs: tuple[tuple[DigraphStack, DigraphStack], ...]
    images: tuple[int, ...]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def split_point(est: IsoEstimate) -> int:
    """Least minimum among the smallest orbits of size at least 2."""
    orbs = [o for o in est.orbits() if len(o) >= 2]
    if not orbs:
        raise ValueError("cannot split an estimate of size <= 1")
    smallest = min(len(o) for o in orbs)
    return min(o[0] for o in orbs if len(o) == smallest)


def point_stack(n: int, alpha: int) -> DigraphStack:
    return _point_stacks(n)[alpha]


_POINT_STACKS: dict[int, list[DigraphStack]] = {}


def _point_stacks(n: int) -> list[DigraphStack]:
    stacks = _POINT_STACKS.get(n)
    if stacks is None:
        stacks = [DigraphStack(n, [point_digraph(n, a)]) for a in range(n)]
        _POINT_STACKS[n] = stacks
    return stacks


def split(S: DigraphStack, T: DigraphStack, est: IsoEstimate) -> SplitResult:
    """Children [Γ_α] against [Γ_β] for β in the image of α's orbit."""
    if est.is_empty or est.size <= 1:
        raise ValueError("cannot split an estimate of size <= 1")
    alpha = split_point(est)
    orbit = next(o for o in est.orbits() if alpha in o)
    rep = est.rep.images
    images = sorted(rep[x] for x in orbit)
    if S is T or S == T:
        images.remove(alpha)
        images.insert(0, alpha)
    stacks = _point_stacks(S.n)
    left = stacks[alpha]
    return SplitResult(alpha, tuple((left, stacks[b]) for b in images), tuple(images))
