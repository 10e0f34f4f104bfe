import random

import pytest

from digraphsearch.equitable import STRONG, WEAK
from digraphsearch.oracle import oracle
from digraphsearch.perm import Permutation, PermGroup, parse_perm
from digraphsearch.problem import MODES, build_problem
from digraphsearch.refiners import GroupRefiner, set_refiner
from digraphsearch.search import (
    Problem, Search, SearchError, node_count, search_all, search_gens, search_group, search_single,
)
from digraphsearch.stack import DigraphStack

from support import brute_iso, random_constraint, random_spec


def test_set_stabiliser_in_s4():
    for mode in MODES:
        found, _ = search_all(build_problem(4, [{"kind": "set_stab", "set": [1, 2]}], mode))
        assert {str(p) for p in found} == {"()", "(1,2)", "(3,4)", "(1,2)(3,4)"}


def test_centraliser_example():
    c = [{"kind": "centralise", "perm": "(1,2)(3,6,5)"}]
    want = {str(p) for p in PermGroup(6, [parse_perm(6, "(1,2)"), parse_perm(6, "(3,6,5)")]).elements()}
    for mode in MODES:
        found, _ = search_all(build_problem(6, c, mode))
        assert {str(p) for p in found} == want


def test_single_transporter_and_not_found():
    p = build_problem(4, [{"kind": "set_transport", "from": [1, 2], "to": [3, 4]}])
    g, _ = search_single(p)
    assert g is not None and p.accepts(g) and {g[0], g[1]} == {2, 3}
    bad = [{"kind": "sets_transport", "from": [[1], [1, 2, 3], [2, 4]], "to": [[5], [2, 3, 4], [3, 4]]}]
    for mode in MODES:
        g, stats = search_single(build_problem(5, bad, mode))
        assert g is None
    g, stats = search_single(build_problem(5, bad, "strong"))
    assert node_count(stats) == 0


def test_trivial_group_has_empty_base():
    c = [{"kind": "list_stab", "sets": [[i] for i in range(1, 6)]}]
    for mode in MODES:
        res, stats = search_gens(build_problem(5, c, mode))
        assert res.base == [] and res.strong_generators == [] and res.order() == 1
        assert node_count(stats) == 0


def test_partition_stabiliser_order_two():
    res, _ = search_gens(build_problem(4, [{"kind": "sets_stab", "sets": [[1, 2], [3]]}]))
    assert res.order() == 2 and res.verify()
    assert {str(g) for g in res.group.elements()} == {"()", "(1,2)"}


def test_identity_required_for_gens():
    with pytest.raises(SearchError):
        search_gens(build_problem(3, [{"kind": "set_transport", "from": [1], "to": [2]}]))


def test_refine_without_refiners_is_identity():
    s = Search(Problem(4, [], STRONG))
    S = DigraphStack.empty(4)
    S1, T1, est = s.refine(S, S)
    assert S1 is S and T1 is S and est.size == 24
    found, _ = search_all(Problem(3, [], WEAK))
    assert len(found) == 6


def test_single_set_refiner_appends_once():
    r = set_refiner(5, [0, 1], [0, 1])
    s = Search(Problem(5, [r], STRONG))
    E = DigraphStack.empty(5)
    S, T, est = s.refine(E, E)
    assert len(S) == 1 and len(T) == 1 and est.size == 12


def test_refine_preserves_solutions():
    rng = random.Random(51)
    for i in range(100):
        n = rng.randint(3, 5)
        spec = random_spec(rng, i, n)
        want = set(oracle(n, spec["constraints"]))
        for mode in ("leon", "strong"):
            p = build_problem(n, spec["constraints"], mode)
            s = Search(p)
            E = DigraphStack.empty(n)
            S, T, est = s.refine(E, E)
            # solutions survive refinement: each lies in Iso(S,T) and in the estimate
            assert want <= set(brute_iso(S, T))
            assert all(est.contains(g) for g in want)


def test_debug_trace_and_group_table_builds():
    rng = random.Random(52)
    for i in range(60):
        n = rng.randint(4, 6)
        c = [random_constraint(rng, n, "in_group"), random_constraint(rng, n, "set_stab")]
        p = build_problem(n, c, "orbital")
        found, stats = search_all(p, debug=True)
        assert set(found) == set(oracle(n, c))
        for r in p.refiners:
            if isinstance(r, GroupRefiner):
                assert r.builds == len(r.table)


def test_trace_reuses_left_states():
    p = build_problem(5, [{"kind": "set_stab", "set": [1, 2, 3]}, {"kind": "centralise", "perm": "(4,5)"}])
    _, stats = search_all(p, debug=True)
    assert stats.trace_hits > 0


def test_gens_verify_prune_and_order():
    rng = random.Random(53)
    for i in range(50):
        n = rng.randint(3, 6)
        kinds = ["set_stab", "list_stab", "sets_stab", "disjoint_stab", "centralise", "digraph_auto", "in_group"]
        c = [random_constraint(rng, n, rng.choice(kinds)) for _ in range(rng.randint(1, 2))]
        for mode in ("leon", "strong"):
            p = build_problem(n, c, mode)
            res, _ = search_gens(p)
            assert res.verify()
            everything, _ = search_all(build_problem(n, c, mode))
            assert res.order() == len(everything)
            unpruned, _ = search_gens(build_problem(n, c, mode), prune=False)
            assert set(unpruned.group.elements()) == set(res.group.elements())


def test_search_group_on_cosets():
    rng = random.Random(54)
    for i in range(40):
        n = rng.randint(3, 5)
        c = [random_constraint(rng, n, "in_coset"), random_constraint(rng, n, "set_transport")]
        want = oracle(n, c)
        res, _ = search_group(build_problem(n, c, "strong"))
        assert res.elements() == sorted(want)
        assert res.empty == (not want)


def test_determinism():
    rng = random.Random(55)
    for i in range(20):
        spec = random_spec(rng, i)
        runs = [search_all(build_problem(spec["degree"], spec["constraints"], "orbital")) for _ in range(2)]
        assert runs[0][0] == runs[1][0] and runs[0][1].as_dict() == runs[1][1].as_dict()


def test_zero_nodes_at_root():
    empty = build_problem(4, [{"kind": "set_transport", "from": [1], "to": [2, 3]}])
    found, stats = search_all(empty)
    assert found == [] and node_count(stats) == 0
    single = build_problem(3, [{"kind": "list_stab", "sets": [[1], [2]]}])
    found, stats = search_all(single)
    assert found == [Permutation.identity(3)] and node_count(stats) == 0
