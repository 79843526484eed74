import itertools
import random

import networkx as nx
import pytest

from pohpp import oracle
from pohpp.core import MIN, PATH, CYCLE, Embedding, Graph, Instance, InvalidCertificate, InvalidEmbedding, build_poset, validate_solution
from pohpp.generate import random_embedded_instance, random_outerplanar_plus, random_plane_instance
from pohpp.planar import (
    find_outerplanar_deletion_set,
    outer_walk,
    prefix_interval_count,
    recognize_outerplanar,
    solve_distance_outerplanar,
    solve_inner_vertices,
    trace_faces,
    trace_faces_raw,
)

K4 = list(itertools.combinations(range(4), 2))


def _rotation(n, edges):
    h = nx.Graph(edges)
    h.add_nodes_from(range(n))
    ok, emb = nx.check_planarity(h)
    assert ok
    return tuple(tuple(emb.neighbors_cw_order(v)) if h.degree(v) else () for v in range(n))


def _embedding_with_outer(n, edges, outer_vertices):
    rot = _rotation(n, edges)
    face = next(f for f in trace_faces_raw(rot, range(n)) if set(f) == set(outer_vertices))
    return Embedding(rot, face)


def _cyclic_equal(a, b):
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False
    doubled = a + a
    return any(doubled[i:i + len(b)] == b for i in range(len(a))) or any(
        doubled[i:i + len(b)] == b[::-1] for i in range(len(a))
    )


def _inst(n, edges, pairs=(), weighted=False, variant=PATH, certs=None):
    g = Graph.from_edges(n, edges, weighted=weighted)
    return Instance(g, build_poset(n, pairs), variant, MIN if weighted else "decision", certs or {})


def test_triangle_has_two_faces():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    for rot in ([(1, 2), (0, 2), (0, 1)], [(2, 1), (0, 2), (1, 0)]):
        assert len(trace_faces(Embedding(tuple(map(tuple, rot)), (0, 1, 2)), g)) == 2


def test_k4_has_four_faces():
    g = Graph.from_edges(4, K4)
    assert len(trace_faces(Embedding(_rotation(4, K4), ()), g)) == 4


def test_inconsistent_rotation():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(InvalidEmbedding):
        trace_faces(Embedding(((1,), (0, 2), (0, 1)), (0, 1, 2)), g)


def test_nonplanar_rotation_fails_euler():
    # K4 with a rotation that is not planar: swap two neighbours at one vertex
    rot = list(_rotation(4, K4))
    rot[0] = (rot[0][1], rot[0][0], rot[0][2])
    with pytest.raises(InvalidEmbedding):
        trace_faces(Embedding(tuple(rot), ()), Graph.from_edges(4, K4))


def test_outer_face_must_be_a_face():
    g = Graph.from_edges(4, K4)
    with pytest.raises(InvalidEmbedding):
        outer_walk(Embedding(_rotation(4, K4), (0, 1, 2, 3)), g)


def test_prefix_interval_examples():
    assert prefix_interval_count((0, 1, 2, 3), {0, 1}) == 1
    assert prefix_interval_count((0, 1, 2, 3), {0, 2}) == 2
    assert prefix_interval_count((0, 1, 2, 3), set()) == 0
    assert prefix_interval_count((0, 1, 2, 3), {3, 0}) == 1
    assert prefix_interval_count((0, 1, 2, 3), {0, 1, 2, 3}) == 1


def test_prefix_interval_on_walk_with_repeats():
    # walk of the path 0-1-2 visits 1 twice
    assert prefix_interval_count((0, 1, 2, 1), {0, 2}) == 2
    assert prefix_interval_count((0, 1, 2, 1), {0, 1, 2}) == 1
    assert prefix_interval_count((0, 1, 2, 1), {1}) == 1


def _brute_interval_count(face, prefix):
    """Fewest cyclic intervals of positions whose vertex set is exactly prefix ∩ face."""
    L = len(face)
    target = set(prefix) & set(face)
    if not target:
        return 0
    cands = []
    for s in range(L):
        for length in range(1, L + 1):
            vs = {face[(s + i) % L] for i in range(length)}
            if vs <= target:
                cands.append(frozenset(vs))
    for r in range(1, len(target) + 1):
        for combo in itertools.combinations(set(cands), r):
            if frozenset().union(*combo) == target:
                return r
    raise AssertionError


def test_prefix_interval_matches_brute_force():
    rng = random.Random(1)
    for _ in range(300):
        L = rng.randint(1, 7)
        face = [rng.randrange(5) for _ in range(L)]
        prefix = {v for v in range(5) if rng.random() < 0.5}
        assert prefix_interval_count(face, prefix) == _brute_interval_count(face, prefix)


def test_k4_inner_vertex_unit_weights():
    emb = _embedding_with_outer(4, K4, {0, 1, 2})
    inst = _inst(4, [(u, v, 1) for u, v in K4], weighted=True, certs={"embedding": emb})
    assert solve_inner_vertices(inst).cost == 3


def test_k4_inner_vertex_first():
    emb = _embedding_with_outer(4, K4, {0, 1, 2})
    inst = _inst(4, [(u, v, 1) for u, v in K4], [(3, v) for v in range(3)], weighted=True, certs={"embedding": emb})
    sol = solve_inner_vertices(inst)
    assert sol is not None and sol.order[0] == 3
    assert oracle.solve_exact(inst).cost == sol.cost


def test_c5_outerplanar():
    edges = [(i, (i + 1) % 5) for i in range(5)]
    inst = _inst(5, edges, [(0, 2), (2, 4)])
    inst = inst.replace(certificates={"embedding": recognize_outerplanar(inst.graph)})
    a, b = solve_inner_vertices(inst), oracle.solve_exact(inst)
    assert (a is None) == (b is None)


def test_inner_vertices_needs_embedding_for_non_outerplanar():
    with pytest.raises(InvalidCertificate):
        solve_inner_vertices(_inst(4, K4))


def test_dist_outerplanar_empty_w_on_c4():
    inst = _inst(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [(3, 1)])
    a, b = solve_distance_outerplanar(inst, []), oracle.solve_exact(inst)
    assert (a is None) == (b is None)


def _wheel():
    rim = [(i, (i + 1) % 5) for i in range(5)]
    return rim + [(i, 5) for i in range(5)]


def test_wheel_with_hub_deleted():
    inst = _inst(6, _wheel())
    sol = solve_distance_outerplanar(inst, [5])
    assert sol is not None and validate_solution(inst, sol.order).ok
    assert oracle.solve_exact(inst) is not None


def test_segment_tuple_count_spot_check():
    inst = _inst(6, [(u, v, 1) for u, v in _wheel()], weighted=True)
    stats = {}
    solve_distance_outerplanar(inst, [5], stats=stats)
    k, n = 1, 6
    assert stats["tuples"] <= 2**k * n ** (2 * (k + 1)) * n


def test_dist_outerplanar_disconnected_host_rejected():
    # deleting the middle of a path disconnects it
    inst = _inst(3, [(0, 1), (1, 2)])
    with pytest.raises(InvalidCertificate):
        solve_distance_outerplanar(inst, [1])


def test_dist_outerplanar_host_not_outerplanar():
    with pytest.raises(InvalidCertificate):
        solve_distance_outerplanar(_inst(4, K4), [])


def test_recognize_c5():
    g = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    emb = recognize_outerplanar(g)
    assert _cyclic_equal(emb.outer_face, range(5))


def test_recognize_k4_absent():
    assert recognize_outerplanar(Graph.from_edges(4, K4)) is None


def test_recognize_p3_walk():
    emb = recognize_outerplanar(Graph.from_edges(3, [(0, 1), (1, 2)]))
    assert _cyclic_equal(emb.outer_face, (0, 1, 2, 1))


def test_recognize_matches_networkx_minor_test():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(1, 7)
        h = nx.gnp_random_graph(n, rng.random(), seed=rng.randrange(10**6))
        if not nx.is_connected(h):
            continue
        g = Graph.from_edges(n, list(h.edges()))
        apex = h.copy()
        apex.add_edges_from((n, v) for v in range(n))
        expected = nx.check_planarity(apex)[0]
        emb = recognize_outerplanar(g)
        assert (emb is not None) == expected
        if emb is not None:
            assert set(emb.outer_face) == set(range(n))
            trace_faces(emb, g)


def test_outerplanar_deletion_search():
    assert find_outerplanar_deletion_set(Graph.from_edges(4, K4), 0) is None
    assert find_outerplanar_deletion_set(Graph.from_edges(4, K4), 1) == [0]
    # removing rim vertex 0 already leaves a fan, which is outerplanar
    assert find_outerplanar_deletion_set(Graph.from_edges(6, _wheel()), 1) == [0]
    assert find_outerplanar_deletion_set(Graph.from_edges(6, _wheel()), 0) is None


def _hamiltonian_prefixes(inst):
    sol = oracle.solve_exact(inst)
    if sol is None:
        return []
    return [set(sol.order[:i]) for i in range(1, inst.n + 1)]


def test_outerplanar_prefixes_are_intervals():
    rng = random.Random(3)
    seen = 0
    for _ in range(80):
        inst = random_outerplanar_plus(rng, rng.randint(3, 9), 0, objective="decision")
        faces = trace_faces(inst.embedding, inst.graph)
        outer = outer_walk(inst.embedding, inst.graph)
        for prefix in _hamiltonian_prefixes(inst):
            seen += 1
            assert prefix_interval_count(outer, prefix) <= 1
            for f in faces:
                assert prefix_interval_count(f, prefix) <= 1
    assert seen > 50


def test_inner_vertices_matches_oracle():
    rng = random.Random(4)
    for _ in range(80):
        inst = random_plane_instance(
            rng, rng.randint(3, 7), rng.randint(0, 3), chords=rng.randint(0, 3),
            objective=rng.choice([MIN, "decision"]), variant=rng.choice([PATH, CYCLE]),
        )
        stats = {}
        a = solve_inner_vertices(inst, stats=stats) if inst.variant == PATH else solve_inner_vertices(inst)
        b = oracle.solve_exact(inst)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.cost == b.cost and validate_solution(inst, a.order).ok
        if stats:
            k, n = stats["k"], inst.n
            assert stats["tuples"] <= 2**k * (k + 2) * n * n


def test_inner_vertices_non_2_connected():
    rng = random.Random(5)
    for _ in range(60):
        inst = random_embedded_instance(rng, rng.randint(2, 9), rng.randint(0, 4))
        a, b = solve_inner_vertices(inst), oracle.solve_exact(inst)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.cost == b.cost


def test_dist_outerplanar_matches_oracle():
    rng = random.Random(6)
    for _ in range(80):
        inst = random_outerplanar_plus(
            rng, rng.randint(2, 7), rng.randint(0, 2), objective=rng.choice([MIN, "decision"]),
            variant=rng.choice([PATH, CYCLE]),
        )
        a, b = solve_distance_outerplanar(inst), oracle.solve_exact(inst)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.cost == b.cost
