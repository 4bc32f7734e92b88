"""Loopless multigraph with stable ids, structural queries, and instance generators."""
from __future__ import annotations

import json
import math
import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

MULTI_EDGE = "multi-edge"
TRIANGLE = "triangle"
K33 = "k33"
K24 = "k24"
K23 = "k23"
C4 = "c4"
C5 = "c5"

#: Search order used by the reduction solver; earlier kinds are assumed absent
#: by the completion recipes of later ones.
CONFIGURATION_KINDS = (MULTI_EDGE, TRIANGLE, K33, K24, K23, C4, C5)

INFINITE = math.inf


class Graph:
    """Undirected loopless multigraph.

    Vertex and edge ids are non-negative integers that stay stable under
    deletion: removing a vertex or edge never renumbers the survivors.
    Parallel edges are allowed and get distinct ids; self-loops are rejected.
    All iteration helpers return ascending ids so callers are deterministic.
    """

    __slots__ = ("_adj", "_edges", "_next_vertex", "_next_edge")

    def __init__(self, n: int = 0):
        self._adj: dict[int, list[int]] = {v: [] for v in range(n)}
        self._edges: dict[int, tuple[int, int]] = {}
        self._next_vertex = n
        self._next_edge = 0

    # -- construction -----------------------------------------------------

    def add_vertex(self) -> int:
        v = self._next_vertex
        self._adj[v] = []
        self._next_vertex += 1
        return v

    def add_edge(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError(f"self-loop at vertex {u} is not allowed")
        if u not in self._adj or v not in self._adj:
            raise ValueError(f"unknown endpoint in ({u}, {v})")
        e = self._next_edge
        self._next_edge += 1
        self._edges[e] = (u, v)
        self._adj[u].append(e)
        self._adj[v].append(e)
        return e

    def remove_edge(self, e: int) -> None:
        u, v = self.endpoints(e)
        self._adj[u].remove(e)
        self._adj[v].remove(e)
        del self._edges[e]

    def remove_vertex(self, v: int) -> None:
        if v not in self._adj:
            raise ValueError(f"unknown vertex {v}")
        for e in list(self._adj[v]):
            self.remove_edge(e)
        del self._adj[v]

    def copy(self) -> "Graph":
        g = Graph(0)
        g._adj = {v: list(es) for v, es in self._adj.items()}
        g._edges = dict(self._edges)
        g._next_vertex = self._next_vertex
        g._next_edge = self._next_edge
        return g

    def restore_vertex(self, v: int) -> None:
        """Re-insert a previously removed vertex id with no edges."""
        if v in self._adj or v >= self._next_vertex:
            raise ValueError(f"vertex {v} cannot be restored")
        self._adj[v] = []

    def restore_edge(self, e: int, u: int, v: int) -> None:
        """Re-insert a previously removed edge under its old id."""
        if e in self._edges or e >= self._next_edge:
            raise ValueError(f"edge {e} cannot be restored")
        if u == v or u not in self._adj or v not in self._adj:
            raise ValueError(f"bad endpoints ({u}, {v}) for restore")
        self._edges[e] = (u, v)
        self._adj[u].append(e)
        self._adj[v].append(e)

    def induced_subgraph(self, vertices) -> "Graph":
        """Subgraph on `vertices` keeping vertex and edge ids.

        Id counters carry over, so ids of later additions never collide with
        ids of the parent graph.
        """
        keep = set(vertices)
        g = Graph(0)
        g._adj = {v: [] for v in sorted(keep)}
        for e in self.edges():
            u, v = self._edges[e]
            if u in keep and v in keep:
                g._edges[e] = (u, v)
                g._adj[u].append(e)
                g._adj[v].append(e)
        g._next_vertex = self._next_vertex
        g._next_edge = self._next_edge
        return g

    # -- queries ----------------------------------------------------------

    def num_vertices(self) -> int:
        return len(self._adj)

    def num_edges(self) -> int:
        return len(self._edges)

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def edges(self) -> list[int]:
        return sorted(self._edges)

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge_id(self, e: int) -> bool:
        return e in self._edges

    def endpoints(self, e: int) -> tuple[int, int]:
        try:
            return self._edges[e]
        except KeyError:
            raise ValueError(f"unknown edge id {e}") from None

    def other_end(self, e: int, v: int) -> int:
        a, b = self.endpoints(e)
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError(f"vertex {v} is not an endpoint of edge {e}")

    def incident(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(es) for es in self._adj.values()), default=0)

    def neighbors(self, v: int) -> list[int]:
        return sorted({self.other_end(e, v) for e in self._adj[v]})

    def adjacent(self, u: int, v: int) -> bool:
        if len(self._adj[u]) > len(self._adj[v]):
            u, v = v, u
        return any(self.other_end(e, u) == v for e in self._adj[u])

    def edges_between(self, u: int, v: int) -> list[int]:
        return sorted(e for e in self._adj[u] if self.other_end(e, u) == v)

    def measure(self) -> int:
        """Recursion measure |V| + |E|."""
        return len(self._adj) + len(self._edges)

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for root in self.vertices():
            if root in seen:
                continue
            comp = [root]
            seen.add(root)
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for e in self._adj[u]:
                    w = self.other_end(e, u)
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def __repr__(self):
        return f"Graph(n={self.num_vertices()}, m={self.num_edges()})"


@dataclass
class Configuration:
    """A forbidden pattern found in a graph: the kind tag plus one embedding.

    The embedding lists vertex ids realizing the pattern, in the conventional
    order for the kind (e.g. for k23 the three-side first, then the two-side).
    """

    kind: str
    vertices: list[int]


@dataclass
class EdgeCut:
    """A two-sided edge cut: removing `cut_edges` disconnects the sides."""

    side1: list[int]
    side2: list[int]
    cut_edges: list[int]

    def size(self) -> int:
        return len(self.cut_edges)


# -- girth ------------------------------------------------------------------


def _dist_avoiding(g: Graph, src: int, dst: int, skip_edge: int, limit=INFINITE):
    """BFS distance from src to dst not using edge `skip_edge`.

    Paths longer than `limit` are not explored; INFINITE means none within it.
    """
    if src == dst:
        return 0
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if dist[u] >= limit:
            continue
        for e in g.incident(u):
            if e == skip_edge:
                continue
            w = g.other_end(e, u)
            if w not in dist:
                dist[w] = dist[u] + 1
                if w == dst:
                    return dist[w]
                queue.append(w)
    return INFINITE


def girth(g: Graph):
    """Length of the shortest cycle; a parallel pair counts as a 2-cycle.

    Returns math.inf for forests.
    """
    best = INFINITE
    for e in g.edges():
        u, v = g.endpoints(e)
        limit = best - 2 if best != INFINITE else INFINITE
        d = _dist_avoiding(g, u, v, e, limit)
        if d + 1 < best:
            best = d + 1
            if best == 2:
                break
    return best


# -- minimum edge cut ---------------------------------------------------------


def _augment(g: Graph, flow: dict[int, int], s: int, t: int) -> bool:
    """One BFS augmenting path for unit-capacity undirected edges."""
    parent: dict[int, tuple[int, int]] = {}
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            break
        for e in g.incident(u):
            w = g.other_end(e, u)
            a, _ = g.endpoints(e)
            # flow is stored relative to the (a, b) orientation of the edge
            f = flow[e] if u == a else -flow[e]
            if f < 1 and w not in seen:
                seen.add(w)
                parent[w] = (u, e)
                queue.append(w)
    if t not in seen:
        return False
    v = t
    while v != s:
        u, e = parent[v]
        a, _ = g.endpoints(e)
        flow[e] += 1 if u == a else -1
        v = u
    return True


def _max_flow(g: Graph, s: int, t: int, stop_at=None):
    """Unit-capacity max flow value and the flow map; stops early at stop_at."""
    flow = {e: 0 for e in g.edges()}
    value = 0
    while stop_at is None or value < stop_at:
        if not _augment(g, flow, s, t):
            break
        value += 1
    return value, flow


def _residual_side(g: Graph, flow: dict[int, int], s: int) -> set[int]:
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for e in g.incident(u):
            w = g.other_end(e, u)
            a, _ = g.endpoints(e)
            f = flow[e] if u == a else -flow[e]
            if f < 1 and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def find_edge_cut_at_most(g: Graph, k: int):
    """Minimum edge cut of a connected graph if its size is at most k.

    Returns an EdgeCut whose cut is globally minimum, or None when every edge
    cut has more than k edges.  Raises on disconnected input; callers must
    split components first.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if g.num_vertices() <= 1:
        return None
    if not g.is_connected():
        raise ValueError("graph is disconnected; handle components separately")
    verts = g.vertices()
    s = verts[0]
    best_value = None
    best_t = None
    for t in verts[1:]:
        cap = best_value if best_value is not None else g.degree(s) + 1
        value, _ = _max_flow(g, s, t, stop_at=cap)
        if best_value is None or value < best_value:
            best_value, best_t = value, t
    if best_value is None or best_value > k:
        return None
    _, flow = _max_flow(g, s, best_t)
    side1 = _residual_side(g, flow, s)
    side2 = [v for v in verts if v not in side1]
    cut = [e for e in g.edges()
           if (g.endpoints(e)[0] in side1) != (g.endpoints(e)[1] in side1)]
    return EdgeCut(sorted(side1), side2, cut)


# -- forbidden configurations -------------------------------------------------


def _find_multi_edge(g: Graph):
    seen: dict[tuple[int, int], int] = {}
    for e in g.edges():
        u, v = g.endpoints(e)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            return Configuration(MULTI_EDGE, [key[0], key[1]])
        seen[key] = e
    return None


def _find_triangle(g: Graph):
    for e in g.edges():
        u, v = g.endpoints(e)
        common = sorted(set(g.neighbors(u)) & set(g.neighbors(v)))
        if common:
            a, b = (u, v) if u < v else (v, u)
            return Configuration(TRIANGLE, sorted([a, b, common[0]]))
    return None


def _pairs_with_common(g: Graph, need: int):
    """Vertex pairs (a < b) with at least `need` common neighbors."""
    for a in g.vertices():
        na = set(g.neighbors(a))
        candidates = sorted({w for n in na for w in g.neighbors(n)})
        for b in candidates:
            if b <= a:
                continue
            common = sorted(na & set(g.neighbors(b)) - {a, b})
            if len(common) >= need:
                yield a, b, common


def _find_k23(g: Graph):
    for a, b, common in _pairs_with_common(g, 3):
        return Configuration(K23, common[:3] + [a, b])
    return None


def _find_k24(g: Graph):
    for a, b, common in _pairs_with_common(g, 4):
        return Configuration(K24, common[:4] + [a, b])
    return None


def _find_k33(g: Graph):
    for v1 in g.vertices():
        for triple in combinations(g.neighbors(v1), 3):
            common = set(g.neighbors(triple[0]))
            common &= set(g.neighbors(triple[1]))
            common &= set(g.neighbors(triple[2]))
            common.discard(v1)
            common -= set(triple)
            if len(common) >= 2:
                others = sorted(common)[:2]
                return Configuration(K33, list(triple) + sorted([v1] + others))
    return None


def _find_c4(g: Graph):
    for a, b, common in _pairs_with_common(g, 2):
        p, q = common[0], common[1]
        return Configuration(C4, [a, p, b, q])
    return None


def _find_c5(g: Graph):
    for a in g.vertices():
        for b in g.neighbors(a):
            if b <= a:
                continue
            for c in g.neighbors(b):
                if c == a or c <= a:
                    continue
                for d in g.neighbors(c):
                    if d in (a, b) or d <= a:
                        continue
                    for e in g.neighbors(d):
                        if e in (a, b, c) or e <= b:
                            continue
                        if g.adjacent(e, a):
                            return Configuration(C5, [a, b, c, d, e])
    return None


_FINDERS = {
    MULTI_EDGE: _find_multi_edge,
    TRIANGLE: _find_triangle,
    K33: _find_k33,
    K24: _find_k24,
    K23: _find_k23,
    C4: _find_c4,
    C5: _find_c5,
}


def find_configuration(g: Graph, kind: str):
    """First embedding of the named pattern, scanning ascending vertex ids.

    Patterns are matched as subgraphs (not induced).  Returns None when the
    pattern is absent.
    """
    try:
        finder = _FINDERS[kind]
    except KeyError:
        raise ValueError(f"unknown configuration kind {kind!r}") from None
    return finder(g)


# -- generators ----------------------------------------------------------------


def gen_blowup_c5(t: int) -> Graph:
    """Blow-up of the 5-cycle: five independent t-sets, consecutive sets
    completely joined.  2t-regular with 5*t*t edges and no pair of edges at
    distance two or more.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    g = Graph(5 * t)
    group = [list(range(i * t, (i + 1) * t)) for i in range(5)]
    for i in range(5):
        for u in group[i]:
            for v in group[(i + 1) % 5]:
                g.add_edge(u, v)
    return g


def gen_incidence_pg(q: int) -> Graph:
    """Point-line incidence graph of the projective plane of order q.

    Supported orders: 2 (Heawood graph) and 3.  The result is bipartite,
    (q+1)-regular on 2*(q*q+q+1) vertices, with girth 6.
    """
    if q not in (2, 3):
        raise ValueError(f"unsupported projective plane order {q}")

    def normalized_triples():
        triples = []
        for x in range(q * q * q):
            a, b, c = x // (q * q), (x // q) % q, x % q
            if (a, b, c) == (0, 0, 0):
                continue
            # keep triples whose first nonzero coordinate is 1
            lead = a if a else (b if b else c)
            if lead == 1:
                triples.append((a, b, c))
        return triples

    points = normalized_triples()
    lines = normalized_triples()
    n = len(points)
    g = Graph(2 * n)
    for i, p in enumerate(points):
        for j, line in enumerate(lines):
            if sum(p[k] * line[k] for k in range(3)) % q == 0:
                g.add_edge(i, n + j)
    return g


def gen_random_regular(d: int, n: int, seed: int, max_tries: int = 2000) -> Graph:
    """Random simple d-regular graph via the pairing model with rejection.

    Deterministic for a fixed seed.  Raises after max_tries rejected pairings.
    """
    if (d * n) % 2 != 0:
        raise ValueError("d * n must be even")
    if not 0 <= d < n:
        raise ValueError("need 0 <= d < n")
    rng = random.Random(seed)
    for _ in range(max_tries):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            key = (u, v) if u < v else (v, u)
            if key in edges:
                ok = False
                break
            edges.add(key)
        if ok:
            g = Graph(n)
            for u, v in sorted(edges):
                g.add_edge(u, v)
            return g
    raise RuntimeError(f"pairing model failed after {max_tries} tries "
                       f"(d={d}, n={n}, seed={seed})")


def is_2k2_free(g: Graph) -> bool:
    """True iff every pair of edges shares an endpoint or is joined by an edge."""
    eids = g.edges()
    nbr = {v: set(g.neighbors(v)) for v in g.vertices()}
    for i, e in enumerate(eids):
        u1, v1 = g.endpoints(e)
        for f in eids[i + 1:]:
            u2, v2 = g.endpoints(f)
            if u2 in (u1, v1) or v2 in (u1, v1):
                continue
            if u2 in nbr[u1] or u2 in nbr[v1] or v2 in nbr[u1] or v2 in nbr[v1]:
                continue
            return False
    return True


# -- text / JSON formats -------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: "p <n> <m>" then m lines "e <u> <v>".

    Edge ids are assigned in line order.  Repeated lines give parallel edges.
    """
    g = None
    m_declared = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if g is not None:
                raise ValueError(f"line {lineno}: duplicate p line")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'p <n> <m>'")
            n, m_declared = int(parts[1]), int(parts[2])
            g = Graph(n)
        elif parts[0] == "e":
            if g is None:
                raise ValueError(f"line {lineno}: edge before p line")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'e <u> <v>'")
            g.add_edge(int(parts[1]), int(parts[2]))
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if g is None:
        raise ValueError("missing p line")
    if g.num_edges() != m_declared:
        raise ValueError(f"p line declared {m_declared} edges, found {g.num_edges()}")
    return g


def format_edge_list(g: Graph) -> str:
    """Serialize to the edge-list format, remapping vertices to 0..n-1."""
    verts = g.vertices()
    remap = {v: i for i, v in enumerate(verts)}
    lines = [f"p {len(verts)} {g.num_edges()}"]
    for e in g.edges():
        u, v = g.endpoints(e)
        lines.append(f"e {remap[u]} {remap[v]}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> str:
    verts = g.vertices()
    remap = {v: i for i, v in enumerate(verts)}
    edges = [[remap[u], remap[v]] for u, v in
             (g.endpoints(e) for e in g.edges())]
    return json.dumps({"n": len(verts), "edges": edges}, sort_keys=True)


def graph_from_json(text: str) -> Graph:
    data = json.loads(text)
    g = Graph(int(data["n"]))
    for u, v in data["edges"]:
        g.add_edge(int(u), int(v))
    return g
