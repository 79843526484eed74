import itertools
import random

import pytest
from hypothesis import given

from pohpp import oracle
from pohpp.core import CYCLE, MIN, PATH, Graph, Instance, TooLarge, build_poset
from pohpp.generate import random_instance
from pohpp.transforms import (
    Verdict,
    check_traceable_bounds,
    compute_treedepth_exact,
    cycle_via_path,
    fix_endpoints,
    min_vertex_cover_size,
    path_to_cycle,
)

from .strategies import instances


def _inst(n, edges, pairs=(), variant=PATH, weighted=False):
    g = Graph.from_edges(n, edges, weighted=weighted)
    return Instance(g, build_poset(n, pairs), variant, MIN if weighted else "decision")


def _path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def test_path_to_cycle_single_edge_gives_k3():
    out = path_to_cycle(_inst(2, [(0, 1)]))
    assert out.n == 3 and out.graph.m == 3
    assert set(out.poset.constraints) == {(0, 2), (1, 2)}
    assert oracle.solve_exact(out) is not None


def test_path_to_cycle_keeps_infeasibility():
    inst = _inst(3, [(0, 1), (1, 2)], [(0, 1), (2, 1)])
    assert oracle.solve_exact(inst) is None
    assert oracle.solve_exact(path_to_cycle(inst)) is None


@given(instances(max_n=7, variants=(PATH,)))
def test_path_to_cycle_sizes_and_weights(inst):
    out = path_to_cycle(inst)
    assert out.n == inst.n + 1
    assert out.graph.m == inst.graph.m + inst.n
    if inst.objective == MIN:
        assert all(out.graph.weight(v, inst.n) == 0 for v in range(inst.n))


def test_cycle_via_path_c4():
    inst = _inst(4, [(0, 1), (1, 2), (2, 3), (3, 0)], variant=CYCLE)
    assert cycle_via_path(inst, oracle.solve_exact) is not None


def test_cycle_via_path_p4_absent():
    inst = _inst(4, [(0, 1), (1, 2), (2, 3)], variant=CYCLE)
    assert cycle_via_path(inst, oracle.solve_exact) is None


def test_cycle_via_path_min_k4():
    w = {(0, 1): 1, (0, 2): 5, (0, 3): 5, (1, 2): 1, (1, 3): 5, (2, 3): 1}
    inst = _inst(4, [(u, v, c) for (u, v), c in w.items()], variant=CYCLE, weighted=True)
    # the three distinct 4-cycles of K4
    tours = [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)]
    best = min(sum(w[tuple(sorted((t[i], t[(i + 1) % 4])))] for i in range(4)) for t in tours)
    assert best == 8
    assert cycle_via_path(inst, oracle.solve_exact).cost == best


def test_fix_endpoints_first_and_last():
    p = fix_endpoints(build_poset(3, []), 0, 2)
    assert p.pred[0] == 0 and p.succ[2] == 0
    assert p.succ[0] == 0b110 and p.pred[2] == 0b011


def test_fix_endpoints_blocked_start():
    assert fix_endpoints(build_poset(2, [(1, 0)]), 0, None) is None


def test_fix_endpoints_idempotent():
    p = build_poset(4, [(1, 2)])
    once = fix_endpoints(p, 0, 3)
    assert fix_endpoints(once, 0, 3) == once


def test_fix_endpoints_requires_distinct():
    with pytest.raises(ValueError):
        fix_endpoints(build_poset(2, []), 1, 1)


def test_treedepth_of_path_7():
    assert compute_treedepth_exact(_path(7)) == 3


@pytest.mark.parametrize("n", range(1, 13))
def test_treedepth_of_paths(n):
    # smallest d with 2^d - 1 >= n
    assert compute_treedepth_exact(_path(n)) == (n).bit_length()


def test_treedepth_small_cases():
    assert compute_treedepth_exact(Graph.from_edges(1, [])) == 1
    assert compute_treedepth_exact(Graph.from_edges(5, [(0, i) for i in range(1, 5)])) == 2
    assert compute_treedepth_exact(Graph.from_edges(0, [])) == 0


def test_treedepth_limit():
    with pytest.raises(TooLarge):
        compute_treedepth_exact(_path(16))


def test_traceable_bound_examples():
    assert check_traceable_bounds(_path(6), "vertex-cover", 2) is Verdict.INFEASIBLE
    assert check_traceable_bounds(_path(8), "treedepth", 3) is Verdict.INFEASIBLE
    assert check_traceable_bounds(_path(5), "vertex-cover", 2) is Verdict.UNKNOWN


def test_round_trips_on_random_instances():
    rng = random.Random(3)
    for _ in range(200):
        inst = random_instance(rng, rng.randint(1, 8), rng.random(), objective=rng.choice(["decision", MIN]))
        direct = oracle.solve_exact(inst)
        via = oracle.solve_exact(path_to_cycle(inst))
        assert (direct is None) == (via is None)
        if direct is not None and inst.objective == MIN:
            assert direct.cost == via.cost
        cyc = inst.replace(variant=CYCLE)
        a = oracle.solve_exact(cyc)
        b = cycle_via_path(cyc, oracle.solve_exact)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.cost == b.cost


def test_traceable_graphs_respect_size_bounds():
    rng = random.Random(4)
    seen = 0
    for _ in range(150):
        n = rng.randint(1, 9)
        g = Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.35])
        inst = Instance(g, build_poset(n, []))
        if oracle.solve_exact(inst) is None:
            continue
        seen += 1
        assert n <= 2 * min_vertex_cover_size(g) + 1
        assert n < 2 ** compute_treedepth_exact(g)
    assert seen > 20
