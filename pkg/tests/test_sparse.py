import itertools
import math
import random

from hypothesis import given

from pohpp import oracle
from pohpp.core import Graph, Instance, build_poset
from pohpp.generate import random_fes_instance, random_tree_plus_edges
from pohpp.sparse import count_simple_paths, enumerate_simple_paths, feedback_edge_number, solve_fes

from .strategies import graphs, instances


def _brute_paths(g):
    """Simple paths with >= 2 vertices by checking every vertex sequence."""
    out = set()
    for r in range(2, g.n + 1):
        for seq in itertools.permutations(range(g.n), r):
            if seq[0] < seq[-1] and all(g.has_edge(a, b) for a, b in zip(seq, seq[1:])):
                out.add(seq)
    return out


def test_p4_has_six_paths():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert len(list(enumerate_simple_paths(g))) == 6 == 2**0 * math.comb(4, 2)


def test_k3_has_six_paths():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert feedback_edge_number(g) == 1
    assert len(list(enumerate_simple_paths(g))) == 6


def test_edgeless_has_none():
    assert list(enumerate_simple_paths(Graph.from_edges(4, []))) == []


@given(graphs(max_n=6))
def test_enumeration_matches_definition(g):
    paths = list(enumerate_simple_paths(g))
    assert len(paths) == len(set(paths))
    assert set(paths) == _brute_paths(g)
    assert count_simple_paths(g) == len(paths)


def test_fes_examples():
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert solve_fes(Instance(p3, build_poset(3, [(2, 0)]))).order == (2, 1, 0)
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    inst = Instance(c4, build_poset(4, [(0, 2), (3, 1)]))
    assert (solve_fes(inst) is None) == (oracle.solve_exact(inst) is None)
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert solve_fes(Instance(star, build_poset(4, []))) is None


def test_fes_single_vertex():
    assert solve_fes(Instance(Graph.from_edges(1, []), build_poset(1, []))).order == (0,)


def test_path_count_bound():
    rng = random.Random(8)
    for _ in range(100):
        n = rng.randint(2, 12)
        g = random_tree_plus_edges(rng, n, rng.randint(0, 4))
        k = feedback_edge_number(g)
        assert count_simple_paths(g) <= 2**k * math.comb(n, 2)


@given(instances(max_n=8))
def test_fes_matches_oracle_on_arbitrary_graphs(inst):
    a = solve_fes(inst)
    b = oracle.solve_exact(inst)
    assert (a is None) == (b is None)
    if a is not None:
        assert a.cost == b.cost


def test_fes_matches_oracle_on_sparse_family():
    rng = random.Random(9)
    for _ in range(100):
        inst = random_fes_instance(
            rng, rng.randint(1, 10), rng.randint(0, 3), variant=rng.choice(["path", "cycle"]),
            objective=rng.choice(["decision", "min"]),
        )
        a, b = solve_fes(inst), oracle.solve_exact(inst)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.cost == b.cost
