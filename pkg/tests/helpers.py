"""Independent brute-force oracles and instance builders for the test suite.

Everything here deliberately avoids the library's own algorithms: girth via
per-root BFS, cuts via bipartition enumeration, patterns via itertools over
vertex tuples, chromatic numbers via plain backtracking in id order, and
distinct-representative checks via exhaustive assignment search.
"""
import random
from itertools import combinations, permutations

from strongedge.graph import Graph


def circulant(n, dists):
    g = Graph(n)
    seen = set()
    for i in range(n):
        for d in dists:
            j = (i + d) % n
            key = (min(i, j), max(i, j))
            if key not in seen:
                seen.add(key)
                g.add_edge(*key)
    return g


def bip_circulant(n, dists):
    """Bipartite circulant: a_i ~ b_{(i+d) mod n} for d in dists."""
    g = Graph(2 * n)
    for i in range(n):
        for d in dists:
            g.add_edge(i, n + (i + d) % n)
    return g


def cycle(n):
    g = Graph(n)
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
    return g


def path(n_edges):
    g = Graph(n_edges + 1)
    for i in range(n_edges):
        g.add_edge(i, i + 1)
    return g


def star(leaves):
    g = Graph(leaves + 1)
    for i in range(1, leaves + 1):
        g.add_edge(0, i)
    return g


def complete(n):
    g = Graph(n)
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j)
    return g


def complete_bipartite(a, b):
    g = Graph(a + b)
    for i in range(a):
        for j in range(b):
            g.add_edge(i, a + j)
    return g


def petersen():
    g = Graph(10)
    for i in range(5):
        g.add_edge(i, (i + 1) % 5)
        g.add_edge(i, i + 5)
        g.add_edge(i + 5, 5 + (i + 2) % 5)
    return g


def random_graph_max_deg(n, m, dmax, seed):
    """Random simple graph with at most m edges and max degree <= dmax."""
    rng = random.Random(seed)
    g = Graph(n)
    tries = 0
    while g.num_edges() < m and tries < 20 * m:
        tries += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v or g.adjacent(u, v):
            continue
        if g.degree(u) >= dmax or g.degree(v) >= dmax:
            continue
        g.add_edge(u, v)
    return g


def random_graph(n, m, seed):
    rng = random.Random(seed)
    g = Graph(n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng.shuffle(pairs)
    for u, v in pairs[:m]:
        g.add_edge(u, v)
    return g


# -- oracles ------------------------------------------------------------------


def girth_oracle(g: Graph):
    """Shortest cycle by per-root BFS plus explicit parallel-pair check."""
    best = float("inf")
    pairs = {}
    for e in g.edges():
        u, v = g.endpoints(e)
        key = (min(u, v), max(u, v))
        pairs[key] = pairs.get(key, 0) + 1
    if any(c >= 2 for c in pairs.values()):
        return 2
    adj = {v: set(g.neighbors(v)) for v in g.vertices()}
    for root in g.vertices():
        dist = {root: 0}
        parent = {root: None}
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
                    elif parent[u] != w:
                        best = min(best, dist[u] + dist[w] + 1)
            queue = nxt
    return best


def brute_min_cut(g: Graph):
    """Minimum edge cut by enumerating all bipartitions; None if disconnected."""
    verts = g.vertices()
    n = len(verts)
    if n < 2 or not g.is_connected():
        return None
    best = None
    anchor = verts[0]
    rest = verts[1:]
    for mask in range(2 ** (n - 1)):
        side = {anchor} | {rest[i] for i in range(n - 1) if mask >> i & 1}
        if len(side) == n:
            continue
        cut = [e for e in g.edges()
               if (g.endpoints(e)[0] in side) != (g.endpoints(e)[1] in side)]
        if best is None or len(cut) < best:
            best = len(cut)
    return best


def brute_has_configuration(g: Graph, kind: str) -> bool:
    verts = g.vertices()
    adj = {v: set(g.neighbors(v)) for v in verts}

    if kind == "multi-edge":
        seen = set()
        for e in g.edges():
            u, v = g.endpoints(e)
            key = (min(u, v), max(u, v))
            if key in seen:
                return True
            seen.add(key)
        return False
    if kind == "triangle":
        return any(b in adj[a] and c in adj[a] and c in adj[b]
                   for a, b, c in combinations(verts, 3))
    if kind == "c4":
        for quad in permutations(verts, 4):
            if quad[0] != min(quad):
                continue
            a, b, c, d = quad
            if b in adj[a] and c in adj[b] and d in adj[c] and a in adj[d]:
                return True
        return False
    if kind == "c5":
        for tup in permutations(verts, 5):
            if tup[0] != min(tup):
                continue
            if all(tup[(i + 1) % 5] in adj[tup[i]] for i in range(5)):
                return True
        return False
    if kind in ("k23", "k24", "k33"):
        a_size, b_size = {"k23": (3, 2), "k24": (4, 2), "k33": (3, 3)}[kind]
        for aset in combinations(verts, a_size):
            for bset in combinations(verts, b_size):
                if set(aset) & set(bset):
                    continue
                if all(b in adj[a] for a in aset for b in bset):
                    return True
        return False
    raise ValueError(kind)


def brute_chromatic(adj: list) -> int:
    """Chromatic number by plain backtracking over vertices in id order."""
    n = len(adj)
    if n == 0:
        return 0

    def colorable(k):
        colors = [0] * n

        def rec(i):
            if i == n:
                return True
            used = {colors[j] for j in adj[i] if j < i}
            for c in range(1, k + 1):
                if c not in used:
                    colors[i] = c
                    if rec(i + 1):
                        return True
            colors[i] = 0
            return False

        return rec(0)

    k = 1
    while not colorable(k):
        k += 1
    return k


def brute_chromatic_check(adj: list, k: int) -> bool:
    """Whether the graph given by adjacency lists is k-colorable."""
    n = len(adj)
    colors = [0] * n

    def rec(i):
        if i == n:
            return True
        used = {colors[j] for j in adj[i] if j < i}
        for c in range(1, k + 1):
            if c not in used:
                colors[i] = c
                if rec(i + 1):
                    return True
        colors[i] = 0
        return False

    return rec(0)


def brute_distinct_assignment(avail: dict):
    """Exhaustive search for a distinct-representative assignment.

    Returns a dict or None; independent of the matching-based implementation.
    """
    targets = sorted(avail)

    def rec(i, used, acc):
        if i == len(targets):
            return dict(acc)
        t = targets[i]
        for c in sorted(avail[t]):
            if c in used:
                continue
            acc[t] = c
            result = rec(i + 1, used | {c}, acc)
            if result is not None:
                return result
            del acc[t]
        return None

    return rec(0, frozenset(), {})


def strong_adjacency(g: Graph):
    """Adjacency lists of the seeing-relation graph over 0..m-1 edge indices."""
    from strongedge.coloring import edge_neighborhood
    eids = g.edges()
    index = {e: i for i, e in enumerate(eids)}
    adj = [set() for _ in eids]
    for i, e in enumerate(eids):
        for f in edge_neighborhood(g, e).all:
            adj[i].add(index[f])
    return [sorted(s) for s in adj]
