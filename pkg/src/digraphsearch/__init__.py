"""Backtrack search in symmetric groups driven by stacks of labelled digraphs."""
from .canon import EXACT, canonise
from .digraph import LabelledDigraph
from .equitable import STRONG, WEAK, IsoEstimate
from .labels import Count, Int, Label, Seq, Str
from .perm import Permutation, PermGroup, parse_perm
from .problem import ProblemSpec, SpecError, build_problem
from .search import Problem, search_all, search_gens, search_group, search_single
from .stack import DigraphStack

__all__ = [
    "Count", "DigraphStack", "EXACT", "Int", "IsoEstimate", "Label", "LabelledDigraph", "PermGroup",
    "Permutation", "Problem", "ProblemSpec", "STRONG", "Seq", "SpecError", "Str", "WEAK", "build_problem",
    "canonise", "parse_perm", "search_all", "search_gens", "search_group", "search_single",
]
