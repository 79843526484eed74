"""Graphs, partial orders, instances and the JSON instance format.

Vertex sets are Python ints used as bitsets throughout; ``1 << v`` is vertex
``v``. Partial orders keep their strict predecessor/successor sets as bitsets
and expose the full reflexive closure as a boolean numpy matrix on demand.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

PATH = "path"
CYCLE = "cycle"
DECISION = "decision"
MIN = "min"


class PohppError(Exception):
    """Base class for all errors raised by this package."""


class CycleInConstraints(PohppError):
    pass


class ParseError(PohppError):
    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class RangeError(ParseError):
    pass


class TooLarge(PohppError):
    pass


class InvalidCertificate(PohppError):
    pass


class NotBlockGraph(PohppError):
    pass


class InvalidEmbedding(PohppError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on ``range(n)`` with optional integer weights."""

    n: int
    adj: tuple[int, ...]
    weights: Mapping[tuple[int, int], int] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], weighted: bool | None = None) -> "Graph":
        adj = [0] * n
        weights: dict[tuple[int, int], int] = {}
        saw_weight = saw_plain = False
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            if len(e) > 2:
                w = int(e[2])
                if w < 0:
                    raise ValueError(f"negative weight on edge ({u},{v})")
                weights[_edge_key(u, v)] = w
                saw_weight = True
            else:
                saw_plain = True
        if weighted is None:
            weighted = saw_weight
        if weighted:
            if saw_plain:
                for u, v in _iter_edges(adj):
                    weights.setdefault((u, v), 1)
            return cls(n, tuple(adj), weights)
        return cls(n, tuple(adj), None)

    @property
    def m(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def edges(self) -> list[tuple[int, int]]:
        return list(_iter_edges(self.adj))

    def weight(self, u: int, v: int) -> int:
        if self.weights is None:
            return 1
        return self.weights[_edge_key(u, v)]

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def without_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in edges:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        weights = None
        if self.weights is not None:
            weights = {e: w for e, w in self.weights.items() if adj[e[0]] >> e[1] & 1}
        return Graph(self.n, tuple(adj), weights)

    def induced_adj(self, mask: int) -> list[int]:
        """Adjacency restricted to ``mask``; rows outside the mask are zero."""
        return [(a & mask) if mask >> v & 1 else 0 for v, a in enumerate(self.adj)]

    def components(self, mask: int | None = None) -> list[int]:
        """Connected components of the subgraph induced by ``mask``."""
        if mask is None:
            mask = self.all_mask
        comps = []
        rest = mask
        while rest:
            seed = rest & -rest
            comp = frontier = seed
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.adj[v]
                nxt &= mask & ~comp
                comp |= nxt
                frontier = nxt
            comps.append(comp)
            rest &= ~comp
        return comps

    def is_connected(self, mask: int | None = None) -> bool:
        return len(self.components(mask)) <= 1

    def is_clique(self, mask: int) -> bool:
        return all((self.adj[v] | (1 << v)) & mask == mask for v in bits(mask))

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


def _iter_edges(adj: Sequence[int]) -> Iterator[tuple[int, int]]:
    for u, a in enumerate(adj):
        for v in bits(a >> (u + 1)):
            yield u, u + 1 + v


@dataclass(frozen=True, eq=False)
class Poset:
    """A partial order on ``range(n)`` stored as closed strict relations.

    ``pred[v]`` is the bitset of all ``u != v`` with ``u`` before ``v``;
    ``succ[v]`` the mirror image. ``constraints`` keeps the generating pairs
    for serialization.
    """

    n: int
    pred: tuple[int, ...]
    succ: tuple[int, ...]
    constraints: tuple[tuple[int, int], ...] = ()

    @property
    def closure(self) -> np.ndarray:
        mat = np.eye(self.n, dtype=bool)
        for v, s in enumerate(self.succ):
            for u in bits(s):
                mat[v, u] = True
        return mat

    def less(self, a: int, b: int) -> bool:
        """True if ``a`` must come strictly before ``b``."""
        return bool(self.succ[a] >> b & 1)

    def leq(self, a: int, b: int) -> bool:
        return a == b or self.less(a, b)

    def comparable(self, a: int, b: int) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def pairs(self) -> list[tuple[int, int]]:
        """All strict pairs of the closure."""
        return [(a, b) for a in range(self.n) for b in bits(self.succ[a])]

    def minimal_in(self, mask: int, visited: int) -> list[int]:
        """Vertices of ``mask`` whose predecessors all lie in ``visited``."""
        return [v for v in bits(mask) if self.pred[v] & ~visited == 0]

    def is_linear_extension(self, order: Sequence[int]) -> bool:
        seen = 0
        for v in order:
            if self.pred[v] & ~seen:
                return False
            seen |= 1 << v
        return True

    def with_pairs(self, pairs: Iterable[tuple[int, int]]) -> "Poset":
        """Add constraints, keeping the relation closed.

        Raises CycleInConstraints when antisymmetry would break.
        """
        pred = list(self.pred)
        succ = list(self.succ)
        added = list(self.constraints)
        for a, b in pairs:
            if a == b:
                continue
            added.append((a, b))
            if succ[a] >> b & 1:
                continue
            if succ[b] >> a & 1:
                raise CycleInConstraints(f"constraint {a} before {b} closes a cycle")
            down = pred[a] | (1 << a)
            up = succ[b] | (1 << b)
            for x in bits(down):
                succ[x] |= up
            for y in bits(up):
                pred[y] |= down
        return Poset(self.n, tuple(pred), tuple(succ), _normalize_pairs(added))

    def restrict_order(self, mask: int) -> list[int]:
        """Topological order of ``mask`` under this order, smallest id first."""
        order = []
        seen = ~mask
        remaining = mask
        while remaining:
            for v in bits(remaining):
                if self.pred[v] & ~seen & mask == 0:
                    break
            else:  # pragma: no cover - closed relations are acyclic
                raise CycleInConstraints("cycle detected")
            order.append(v)
            seen |= 1 << v
            remaining &= ~(1 << v)
        return order

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.n == other.n and self.succ == other.succ

    def __hash__(self) -> int:
        return hash((self.n, self.succ))


def _normalize_pairs(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted({(int(a), int(b)) for a, b in pairs if a != b}))


def build_poset(n: int, constraints: Iterable[Sequence[int]] = ()) -> Poset:
    """Reflexive-transitive closure of ``constraints`` (pairs ``a`` before ``b``)."""
    pairs = []
    for c in constraints:
        a, b = int(c[0]), int(c[1])
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"constraint ({a},{b}) out of range for n={n}")
        pairs.append((a, b))
    succ = [0] * n
    for a, b in pairs:
        if a != b:
            succ[a] |= 1 << b
    # Warshall over bitset rows
    for k in range(n):
        kb = 1 << k
        sk = succ[k]
        if not sk:
            continue
        for i in range(n):
            if succ[i] & kb:
                succ[i] |= sk
    pred = [0] * n
    for a in range(n):
        if succ[a] >> a & 1:
            raise CycleInConstraints(f"vertex {a} precedes itself")
        for b in bits(succ[a]):
            pred[b] |= 1 << a
    return Poset(n, tuple(pred), tuple(succ), _normalize_pairs(pairs))


def empty_poset(n: int) -> Poset:
    return Poset(n, (0,) * n, (0,) * n, ())


@dataclass(frozen=True)
class Embedding:
    """Rotation system plus the outer face walk."""

    rotation: tuple[tuple[int, ...], ...]
    outer_face: tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    graph: Graph
    poset: Poset
    variant: str = PATH
    objective: str = DECISION
    certificates: Mapping[str, object] = field(default_factory=dict)
    names: Mapping[str, str] | None = None
    meta: Mapping[str, object] | None = None

    def __post_init__(self):
        if self.poset.n != self.graph.n:
            raise ValueError("poset and graph sizes differ")
        if self.variant not in (PATH, CYCLE):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.objective not in (DECISION, MIN):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.objective == MIN and not self.graph.weighted:
            raise ValueError("objective 'min' requires edge weights")

    @property
    def n(self) -> int:
        return self.graph.n

    def replace(self, **changes) -> "Instance":
        fields = dict(
            graph=self.graph,
            poset=self.poset,
            variant=self.variant,
            objective=self.objective,
            certificates=self.certificates,
            names=self.names,
            meta=self.meta,
        )
        fields.update(changes)
        return Instance(**fields)

    @property
    def deletion_vertices(self) -> list[int] | None:
        w = self.certificates.get("deletion_vertices")
        return None if w is None else list(w)

    @property
    def deletion_edges(self) -> list[tuple[int, int]] | None:
        f = self.certificates.get("deletion_edges")
        return None if f is None else [_edge_key(u, v) for u, v in f]

    @property
    def embedding(self) -> Embedding | None:
        return self.certificates.get("embedding")


@dataclass(frozen=True)
class Solution:
    order: tuple[int, ...]
    cost: int = 0


def order_cost(graph: Graph, order: Sequence[int], closed: bool) -> int:
    cost = sum(graph.weight(u, v) for u, v in zip(order, order[1:]))
    if closed and len(order) > 1:
        cost += graph.weight(order[-1], order[0])
    return cost


def make_solution(inst: Instance, order: Sequence[int]) -> Solution:
    order = tuple(order)
    if inst.objective == MIN:
        return Solution(order, order_cost(inst.graph, order, inst.variant == CYCLE))
    return Solution(order, 0)


@dataclass(frozen=True)
class ValidationReport:
    is_permutation: bool
    edges_present: bool
    cycle_closed: bool | None
    extends_poset: bool
    cost: int | None

    @property
    def ok(self) -> bool:
        return (
            self.is_permutation
            and self.edges_present
            and self.cycle_closed is not False
            and self.extends_poset
        )


def validate_solution(inst: Instance, order: Sequence[int]) -> ValidationReport:
    g = inst.graph
    order = [int(v) for v in order]
    is_perm = sorted(order) == list(range(g.n))
    in_range = all(0 <= v < g.n for v in order)
    edges_ok = in_range and all(g.has_edge(u, v) for u, v in zip(order, order[1:]))
    closed = None
    if inst.variant == CYCLE:
        closed = in_range and len(order) >= 2 and g.has_edge(order[-1], order[0])
    extends = is_perm and inst.poset.is_linear_extension(order)
    cost = None
    if edges_ok and (closed is not False):
        cost = order_cost(g, order, inst.variant == CYCLE) if g.weighted else 0
    return ValidationReport(is_perm, edges_ok, closed, extends, cost)


# --------------------------------------------------------------------------
# instance files


def _require(doc: Mapping, key: str, kind, location: str):
    if key not in doc:
        raise ParseError(f"missing key {key!r}", location)
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"{key!r} has wrong type {type(value).__name__}", f"{location}.{key}".lstrip("."))
    return value


def _int_id(value, n: int, location: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError("vertex id must be an integer", location)
    if not 0 <= value < n:
        raise RangeError(f"vertex id {value} out of range [0,{n})", location)
    return value


def instance_from_dict(doc: Mapping) -> Instance:
    if not isinstance(doc, Mapping):
        raise ParseError("document must be an object", "$")
    n = _require(doc, "n", int, "$")
    if n < 0:
        raise RangeError("n must be nonnegative", "n")
    variant = doc.get("variant", PATH)
    if variant not in (PATH, CYCLE):
        raise ParseError(f"unknown variant {variant!r}", "variant")
    objective = doc.get("objective", DECISION)
    if objective not in (DECISION, MIN):
        raise ParseError(f"unknown objective {objective!r}", "objective")
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise ParseError("edges must be a list", "edges")
    edges = []
    seen = set()
    for i, e in enumerate(raw_edges):
        loc = f"edges[{i}]"
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise ParseError("edge must be [u,v] or [u,v,w]", loc)
        u = _int_id(e[0], n, loc)
        v = _int_id(e[1], n, loc)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", loc)
        key = _edge_key(u, v)
        if key in seen:
            raise ParseError(f"duplicate edge {list(key)}", loc)
        seen.add(key)
        if len(e) == 3:
            w = e[2]
            if not isinstance(w, int) or isinstance(w, bool) or w < 0:
                raise ParseError("weight must be a nonnegative integer", loc)
            edges.append((u, v, w))
        else:
            edges.append((u, v))
    # an edgeless graph carries (vacuous) weights when the objective needs them
    weighted = any(len(e) == 3 for e in edges) or (objective == MIN and not edges)
    if weighted and not all(len(e) == 3 for e in edges):
        raise ParseError("either all edges carry weights or none", "edges")
    graph = Graph.from_edges(n, edges, weighted=weighted)
    raw_cons = doc.get("constraints", [])
    if not isinstance(raw_cons, list):
        raise ParseError("constraints must be a list", "constraints")
    cons = []
    for i, c in enumerate(raw_cons):
        loc = f"constraints[{i}]"
        if not isinstance(c, list) or len(c) != 2:
            raise ParseError("constraint must be [a,b]", loc)
        cons.append((_int_id(c[0], n, loc), _int_id(c[1], n, loc)))
    try:
        poset = build_poset(n, cons)
    except CycleInConstraints as exc:
        raise ParseError(str(exc), "constraints") from exc
    certs = _parse_certificates(doc.get("certificates", {}) or {}, graph)
    names = doc.get("names")
    if names is not None:
        if not isinstance(names, dict):
            raise ParseError("names must be an object", "names")
        names = {str(k): str(v) for k, v in names.items()}
    meta = doc.get("meta")
    if objective == MIN and not graph.weighted:
        raise ParseError("objective 'min' requires weighted edges", "objective")
    return Instance(graph, poset, variant, objective, certs, names, meta)


def _parse_certificates(raw: Mapping, graph: Graph) -> dict:
    if not isinstance(raw, dict):
        raise ParseError("certificates must be an object", "certificates")
    n = graph.n
    certs: dict = {}
    if "deletion_vertices" in raw:
        lst = raw["deletion_vertices"]
        if not isinstance(lst, list):
            raise ParseError("must be a list", "certificates.deletion_vertices")
        vs = [_int_id(v, n, f"certificates.deletion_vertices[{i}]") for i, v in enumerate(lst)]
        certs["deletion_vertices"] = tuple(sorted(set(vs)))
    if "deletion_edges" in raw:
        lst = raw["deletion_edges"]
        if not isinstance(lst, list):
            raise ParseError("must be a list", "certificates.deletion_edges")
        es = []
        for i, e in enumerate(lst):
            loc = f"certificates.deletion_edges[{i}]"
            if not isinstance(e, list) or len(e) != 2:
                raise ParseError("edge must be [u,v]", loc)
            u, v = _int_id(e[0], n, loc), _int_id(e[1], n, loc)
            if not graph.has_edge(u, v):
                raise ParseError(f"deletion edge ({u},{v}) is not an edge", loc)
            es.append(_edge_key(u, v))
        certs["deletion_edges"] = tuple(sorted(set(es)))
    if "embedding" in raw:
        emb = raw["embedding"]
        loc = "certificates.embedding"
        if not isinstance(emb, dict) or "rotation" not in emb or "outer_face" not in emb:
            raise ParseError("embedding needs rotation and outer_face", loc)
        rot = emb["rotation"]
        if not isinstance(rot, list):
            raise ParseError("rotation must be a list", loc + ".rotation")
        rotation = []
        for i, row in enumerate(rot):
            if not isinstance(row, list):
                raise ParseError("rotation row must be a list", f"{loc}.rotation[{i}]")
            rotation.append(tuple(_int_id(v, n, f"{loc}.rotation[{i}][{j}]") for j, v in enumerate(row)))
        outer = emb["outer_face"]
        if not isinstance(outer, list):
            raise ParseError("outer_face must be a list", loc + ".outer_face")
        outer_face = tuple(_int_id(v, n, f"{loc}.outer_face[{j}]") for j, v in enumerate(outer))
        certs["embedding"] = Embedding(tuple(rotation), outer_face)
    for key in raw:
        if key not in ("deletion_vertices", "deletion_edges", "embedding"):
            certs[key] = raw[key]
    return certs


def instance_to_dict(inst: Instance) -> dict:
    g = inst.graph
    if g.weighted:
        edges = [[u, v, g.weight(u, v)] for u, v in g.edges()]
    else:
        edges = [[u, v] for u, v in g.edges()]
    doc: dict = {
        "variant": inst.variant,
        "objective": inst.objective,
        "n": g.n,
        "edges": edges,
        "constraints": [list(c) for c in inst.poset.constraints],
    }
    certs: dict = {}
    for key, value in inst.certificates.items():
        if key == "deletion_vertices":
            certs[key] = sorted(value)
        elif key == "deletion_edges":
            certs[key] = [list(e) for e in sorted(value)]
        elif key == "embedding":
            certs[key] = {
                "rotation": [list(r) for r in value.rotation],
                "outer_face": list(value.outer_face),
            }
        else:
            certs[key] = value
    if certs:
        doc["certificates"] = certs
    if inst.names:
        doc["names"] = dict(sorted(inst.names.items(), key=lambda kv: _name_key(kv[0])))
    if inst.meta:
        doc["meta"] = inst.meta
    return doc


def _name_key(k: str):
    return (0, int(k)) if k.lstrip("-").isdigit() else (1, k)


def read_instance(data: bytes | str) -> Instance:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}", "$") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return instance_from_dict(doc)


def write_instance(inst: Instance) -> bytes:
    return (json.dumps(instance_to_dict(inst), sort_keys=True, separators=(",", ":")) + "\n").encode()


def load_instance(path) -> Instance:
    with open(path, "rb") as fh:
        return read_instance(fh.read())


def save_instance(inst: Instance, path) -> None:
    with open(path, "wb") as fh:
        fh.write(write_instance(inst))
