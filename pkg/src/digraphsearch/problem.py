"""Problem specifications and their translation into search problems.

Specs are JSON-shaped with 1-based points and cycle-string permutations.
Each search mode chooses an approximator and adjusts the refiners:

* ``leon``: weak approximator, group refiners use orbits only, every
  constraint digraph loses its arcs.
* ``orbital``: weak approximator with the full refiners.
* ``strong``: strong approximator.
* ``full``: exact approximator via canonical labelling.

The two weak modes also receive an arc-free fixed-point refiner for each
set-of-subsets constraint (see ``FixedPointSetsRefiner``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .canon import EXACT
from .digraph import LabelledDigraph
from .equitable import STRONG, WEAK
from .perm import Permutation, PermGroup, parse_perm
from .refiners import (
    ORBITAL_GRAPHS, ORBITS, CosetRefiner, FixedPointSetsRefiner, GroupRefiner, Refiner, StrippedRefiner,
    digraph_iso_refiner, disjoint_subsets_refiner, list_of_subsets_refiner, perm_conjugacy_refiner,
    set_of_subsets_refiner, set_refiner,
)
from .search import Problem

MODES = ("leon", "orbital", "strong", "full")
GOALS = ("all", "single", "group")
KINDS = (
    "set_stab", "set_transport", "list_stab", "list_transport", "sets_stab", "sets_transport",
    "disjoint_stab", "disjoint_transport", "centralise", "conjugate", "digraph_auto", "digraph_iso",
    "in_group", "in_coset",
)
APPROXIMATORS = {"leon": WEAK, "orbital": WEAK, "strong": STRONG, "full": EXACT}


class SpecError(ValueError):
    pass


def _points(n: int, pts) -> list[int]:
    out = []
    for p in pts:
        if not isinstance(p, int) or isinstance(p, bool) or not 1 <= p <= n:
            raise SpecError(f"point {p!r} outside 1..{n}")
        out.append(p - 1)
    return out


def _sets(n: int, sets) -> list[list[int]]:
    if not isinstance(sets, list):
        raise SpecError("expected a list of point lists")
    return [_points(n, s) for s in sets]


def _perm(n: int, text) -> Permutation:
    if not isinstance(text, str):
        raise SpecError(f"expected a cycle string, got {text!r}")
    try:
        return parse_perm(n, text)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def _digraph(n: int, obj) -> LabelledDigraph:
    try:
        d = LabelledDigraph.from_json(obj)
    except (KeyError, ValueError, TypeError) as exc:
        raise SpecError(f"bad digraph: {exc}") from None
    if d.n != n:
        raise SpecError("digraph degree differs from the problem degree")
    return d


def _strategy(c: dict) -> str:
    s = c.get("strategy", ORBITAL_GRAPHS)
    if s not in (ORBITS, ORBITAL_GRAPHS):
        raise SpecError(f"unknown strategy {s!r}")
    return s


def _require(c: dict, *keys: str) -> None:
    for k in keys:
        if k not in c:
            raise SpecError(f"constraint {c.get('kind')!r} needs field {k!r}")


def build_refiner(n: int, c: dict, mode: str = "strong") -> list[Refiner]:
    """Refiners for one constraint under the given mode."""
    kind = c.get("kind")
    if kind not in KINDS:
        raise SpecError(f"unknown constraint kind {kind!r}")
    weak_mode = mode in ("leon", "orbital")
    extra: list[Refiner] = []
    if kind == "set_stab":
        _require(c, "set")
        A = _points(n, c["set"])
        r: Refiner = set_refiner(n, A, A)
    elif kind == "set_transport":
        _require(c, "from", "to")
        r = set_refiner(n, _points(n, c["from"]), _points(n, c["to"]))
    elif kind == "list_stab":
        _require(c, "sets")
        U = _sets(n, c["sets"])
        r = list_of_subsets_refiner(n, U, U)
    elif kind == "list_transport":
        _require(c, "from", "to")
        r = list_of_subsets_refiner(n, _sets(n, c["from"]), _sets(n, c["to"]))
    elif kind in ("sets_stab", "sets_transport", "disjoint_stab", "disjoint_transport"):
        if kind.endswith("stab"):
            _require(c, "sets")
            U = V = _sets(n, c["sets"])
        else:
            _require(c, "from", "to")
            U, V = _sets(n, c["from"]), _sets(n, c["to"])
        make = set_of_subsets_refiner if kind.startswith("sets") else disjoint_subsets_refiner
        try:
            r = make(n, U, V)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
        if weak_mode:
            extra.append(FixedPointSetsRefiner(n, U, V))
    elif kind == "centralise":
        _require(c, "perm")
        g = _perm(n, c["perm"])
        r = perm_conjugacy_refiner(g, g)
    elif kind == "conjugate":
        _require(c, "from", "to")
        r = perm_conjugacy_refiner(_perm(n, c["from"]), _perm(n, c["to"]))
    elif kind == "digraph_auto":
        _require(c, "digraph")
        d = _digraph(n, c["digraph"])
        r = digraph_iso_refiner(d, d)
    elif kind == "digraph_iso":
        _require(c, "from", "to")
        r = digraph_iso_refiner(_digraph(n, c["from"]), _digraph(n, c["to"]))
    else:
        _require(c, "generators")
        G = PermGroup(n, [_perm(n, g) for g in c["generators"]])
        strategy = ORBITS if mode == "leon" else _strategy(c)
        if kind == "in_group":
            return [GroupRefiner(G, strategy)]
        _require(c, "representative")
        return [CosetRefiner(G, _perm(n, c["representative"]), strategy)]
    if mode == "leon":
        r = StrippedRefiner(r)
    return [r] + extra


def build_problem(n: int, constraints: list[dict], mode: str = "strong") -> Problem:
    if mode not in MODES:
        raise SpecError(f"unknown mode {mode!r}")
    refiners: list[Refiner] = []
    for c in constraints:
        refiners.extend(build_refiner(n, c, mode))
    return Problem(n, refiners, APPROXIMATORS[mode], mode)


@dataclass
class ProblemSpec:
    degree: int
    constraints: list[dict] = field(default_factory=list)
    goal: str = "all"
    mode: str = "strong"
    seed: int = 0

    def validate(self) -> None:
        if not isinstance(self.degree, int) or self.degree < 1:
            raise SpecError("degree must be a positive integer")
        if self.goal not in GOALS:
            raise SpecError(f"unknown goal {self.goal!r}")
        if self.mode not in MODES:
            raise SpecError(f"unknown mode {self.mode!r}")
        build_problem(self.degree, self.constraints, self.mode)

    def problem(self, mode: str | None = None) -> Problem:
        return build_problem(self.degree, self.constraints, mode or self.mode)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "ProblemSpec":
        if not isinstance(obj, dict) or "degree" not in obj:
            raise SpecError("spec must be an object with a 'degree'")
        spec = cls(
            degree=obj["degree"],
            constraints=list(obj.get("constraints", [])),
            goal=obj.get("goal", "all"),
            mode=obj.get("mode", "strong"),
            seed=int(obj.get("seed", 0)),
        )
        spec.validate()
        return spec

    @classmethod
    def loads(cls, text: str) -> "ProblemSpec":
        return cls.from_json(json.loads(text))

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "constraints": self.constraints,
            "goal": self.goal,
            "mode": self.mode,
            "seed": self.seed,
        }
