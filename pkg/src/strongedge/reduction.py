"""Recursive 21-color strong edge-coloring for multigraphs of max degree four.

The solver peels a graph down by a fixed ladder of reductions: tiny instances
go to the exact solver, then low-degree vertices, parallel edges, small edge
cuts, and short-cycle patterns are removed and recolored from availability
counts.  What survives is 4-regular with girth at least six and no cut of
three or fewer edges; those graphs are handled by an anchored decomposition:
a three-color seed around an anchor vertex, a reverse-greedy edge sequence,
and, when the sequence stalls, a left/mid/right vertex split whose two sides
are colored independently and stitched together by color renaming.

Every proof-backed step checks availability before assigning.  If a step is
ever blocked (which indicates a bug or a gap in the underlying argument) the
solver logs a fallback event and finishes that subinstance with the exact
solver, so correctness never depends on the constructive path.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import (
    C4,
    C5,
    CONFIGURATION_KINDS,
    Configuration,
    EdgeCut,
    Graph,
    K23,
    K24,
    K33,
    MULTI_EDGE,
    TRIANGLE,
    find_configuration,
    find_edge_cut_at_most,
    girth,
)
from .coloring import (
    PartialColoring,
    _match_distinct,
    available_colors,
    colors_seen,
    edge_neighborhood,
    exact_strong_index,
    sees,
    verify_strong_coloring,
)

PALETTE = 21

#: Maximum instance size handed straight to the exact solver.
BASE_CASE_EDGES = 20


class FallbackTriggered(Exception):
    """A proof-backed step found no valid move; the exact solver takes over."""


@dataclass
class TraceStep:
    depth: int
    tag: str
    params: str
    n: int
    m: int

    def format(self) -> str:
        body = f"{self.depth} {self.tag}"
        if self.params:
            body += f" {self.params}"
        return f"{body} |V|={self.n} |E|={self.m}"


class ReductionTrace:
    """Ordered log of reduction steps, one line per event."""

    def __init__(self):
        self.steps: list[TraceStep] = []
        self.fallback_count = 0

    def record(self, depth: int, tag: str, params: str, g: Graph) -> None:
        self.steps.append(TraceStep(depth, tag, params,
                                    g.num_vertices(), g.num_edges()))
        if tag == "fallback":
            self.fallback_count += 1

    def tags(self) -> list[str]:
        return [s.tag for s in self.steps]

    def collaborative_cases(self) -> list[str]:
        out = []
        for s in self.steps:
            if s.tag == "collaborative":
                out.append(s.params.split("case=", 1)[1].split()[0])
        return out

    def format_text(self) -> str:
        return "\n".join(s.format() for s in self.steps) + "\n" if self.steps else ""

    def to_json_obj(self):
        return [{"depth": s.depth, "tag": s.tag, "params": s.params,
                 "n": s.n, "m": s.m} for s in self.steps]


# -- shared assignment helpers -------------------------------------------------


def _greedy_assign(g: Graph, col: dict, e: int, why: str) -> None:
    avail = available_colors(g, col, e, PALETTE)
    if not avail:
        raise FallbackTriggered(f"no color available for edge {e} during {why}")
    col[e] = min(avail)


def _checked_assign(g: Graph, col: dict, e: int, c: int, why: str) -> None:
    if e in col:
        raise FallbackTriggered(f"edge {e} already colored during {why}")
    if c in colors_seen(g, col, e):
        raise FallbackTriggered(f"color {c} blocked on edge {e} during {why}")
    col[e] = c


def _colors_at(g: Graph, col: dict, v: int) -> set[int]:
    return {col[e] for e in g.incident(v) if e in col}


def _verify_dict(g: Graph, col: dict):
    return verify_strong_coloring(g, PartialColoring(PALETTE, col))


# -- color permutations ----------------------------------------------------------


def _find_permutation(k: int, fixed: dict, forbid: dict):
    """Permutation of 1..k meeting color-level point and avoidance constraints.

    fixed maps a source color to its required image; forbid maps a source
    color to images it must avoid.  Returns the permutation as a dict or None.
    """
    targets = set(fixed.values())
    if len(targets) != len(fixed):
        return None
    allowed = {}
    full = set(range(1, k + 1))
    for s in range(1, k + 1):
        if s in fixed:
            if fixed[s] in forbid.get(s, ()):
                return None
            allowed[s] = {fixed[s]}
        else:
            allowed[s] = full - set(forbid.get(s, ()))
    assigned, _ = _match_distinct(sorted(allowed), allowed)
    return assigned


def _rename_dict(col: dict, fixed_edges: dict, forbid_edges=None, k=PALETTE):
    """Rename a raw coloring so listed edges carry required colors.

    fixed_edges maps edge id -> required color; forbid_edges maps edge id ->
    colors that edge must avoid.  Returns the renamed dict or None when no
    color permutation of 1..k satisfies the constraints.
    """
    fixed: dict[int, int] = {}
    for e, t in fixed_edges.items():
        s = col[e]
        if s in fixed and fixed[s] != t:
            return None
        fixed[s] = t
    forbid: dict[int, set] = {}
    for e, bad in (forbid_edges or {}).items():
        forbid.setdefault(col[e], set()).update(bad)
    perm = _find_permutation(k, fixed, forbid)
    if perm is None:
        return None
    return {e: perm[c] for e, c in col.items()}


def rename_colors(coloring: PartialColoring, fixed, forbid=(), distinct=()):
    """Globally permute colors to satisfy point and distinctness constraints.

    fixed is a list of (edge, required color) pairs; forbid is a list of
    (edge, forbidden color set) pairs; each group in distinct lists edges
    whose colors must be pairwise different (a permutation can only achieve
    this when they already are).  Returns a new coloring or None.  Permuting
    colors never invalidates a good partial coloring.
    """
    col = coloring.as_dict()
    for group in distinct:
        seen = {}
        for e in group:
            c = col[e]
            if c in seen and seen[c] != e:
                return None
            seen[c] = e
    renamed = _rename_dict(col, dict(fixed),
                           {e: set(bad) for e, bad in forbid},
                           k=coloring.k)
    if renamed is None:
        return None
    return PartialColoring(coloring.k, renamed)


# -- anchored decomposition: labels, seed coloring, edge sequence ------------------


def _kids(g: Graph, v: int, parent: int) -> list[int]:
    return sorted(set(g.neighbors(v)) - {parent})


def _eid(g: Graph, a: int, b: int) -> int:
    es = g.edges_between(a, b)
    if len(es) != 1:
        raise FallbackTriggered(f"expected one edge between {a} and {b}, found {len(es)}")
    return es[0]


@dataclass
class BranchLabels:
    """Anchor vertex, its four branches, and per-vertex child orderings.

    branch lists the anchor's neighbors in role order; the first three carry
    the seed colors, the last is the free branch.  children maps a labeled
    vertex to its ordered children (neighbors away from the anchor side).
    Orders may be permuted by the collaborative recipes; the underlying sets
    never change.
    """

    x: int
    branch: list[int]
    children: dict[int, list[int]] = field(default_factory=dict)

    @property
    def u(self):
        return self.branch[0]

    @property
    def v(self):
        return self.branch[1]

    @property
    def w(self):
        return self.branch[2]

    @property
    def y(self):
        return self.branch[3]

    def swap_uv(self):
        self.branch[0], self.branch[1] = self.branch[1], self.branch[0]

    def copy(self) -> "BranchLabels":
        return BranchLabels(self.x, list(self.branch),
                            {k: list(v) for k, v in self.children.items()})


@dataclass
class SequencePlan:
    """Seed coloring plus the reverse-greedy edge sequence ending in the tail.

    Every edge of the sequence before the fixed eight-edge tail sees at least
    four later sequence edges, so a forward greedy pass with 21 colors always
    has room; the tail itself is saved by color repetition in the seed and by
    one sanctioned recolor move.
    """

    labels: BranchLabels
    precolor: PartialColoring
    tail: list[int]
    order: list[int]

    def sequence_set(self) -> set[int]:
        return set(self.order)

    def covers_all(self, g: Graph) -> bool:
        uncolored = set(g.edges()) - set(self.precolor.colored())
        return self.sequence_set() == uncolored


def build_precolor_and_sequence(g: Graph, x: int) -> SequencePlan:
    """Seed three colors around anchor x and grow the edge sequence to a fixpoint.

    Requires a 4-regular simple graph of girth at least six, which makes the
    anchor's two-ball a tree of distinct vertices.  The sequence starts from
    the fixed tail (two grandchild edges on the third branch, that branch's
    two child edges, then the four anchor edges) and repeatedly prepends any
    uncolored edge already seeing four sequence edges; the result is maximal,
    so no outside edge sees four sequence edges.
    """
    if any(g.degree(v) != 4 for v in g.vertices()):
        raise ValueError("anchored decomposition needs a 4-regular graph")
    if girth(g) < 6:
        raise ValueError("anchored decomposition needs girth at least six")
    nx = sorted(g.neighbors(x))
    labels = BranchLabels(x, nx)
    for z in nx:
        labels.children[z] = _kids(g, z, x)
    u, v, w, y = labels.branch
    two_ball = [x] + nx + [c for z in nx for c in labels.children[z]]
    if len(set(two_ball)) != 17:
        raise ValueError("two-ball around anchor is not a tree; girth check failed")

    psi = PartialColoring(PALETTE)
    for i in range(3):
        psi.assign(_eid(g, u, labels.children[u][i]), i + 1)
        psi.assign(_eid(g, v, labels.children[v][i]), i + 1)
    psi.assign(_eid(g, w, labels.children[w][0]), 1)
    precolored = set(psi.colored())

    w1, w2, w3 = labels.children[w]
    w21 = _kids(g, w2, w)[0]
    w31 = _kids(g, w3, w)[0]
    tail = [
        _eid(g, w2, w21), _eid(g, w3, w31),
        _eid(g, w, w2), _eid(g, w, w3),
        _eid(g, x, u), _eid(g, x, v), _eid(g, x, y), _eid(g, x, w),
    ]

    # Grow to the closure: an edge joins once four of its neighborhood are in.
    neighborhoods = {e: edge_neighborhood(g, e).all for e in g.edges()}
    count = {e: 0 for e in g.edges()}
    in_seq = set(tail)
    added: list[int] = []
    queue = list(tail)
    qi = 0
    while qi < len(queue):
        f = queue[qi]
        qi += 1
        for e in sorted(neighborhoods[f]):
            if e in in_seq or e in precolored:
                continue
            count[e] += 1
            if count[e] == 4:
                in_seq.add(e)
                added.append(e)
                queue.append(e)
    order = list(reversed(added)) + tail
    return SequencePlan(labels, psi, tail, order)


def audit_sequence(g: Graph, plan: SequencePlan) -> dict:
    """Rule checks for a sequence plan, for assertions and tests."""
    psi = plan.precolor
    seq = plan.sequence_set()
    position = {e: i for i, e in enumerate(plan.order)}
    body_ok = True
    for e in plan.order[:-len(plan.tail)]:
        behind = sum(1 for f in edge_neighborhood(g, e).all
                     if f in position and position[f] > position[e])
        if behind < 4:
            body_ok = False
    outside_max = 0
    for e in g.edges():
        if e in seq or psi.color(e) is not None:
            continue
        seen = sum(1 for f in edge_neighborhood(g, e).all if f in seq)
        outside_max = max(outside_max, seen)
    good, _ = verify_strong_coloring(g, psi)
    return {
        "precolored_edges": psi.num_colored(),
        "precolor_valid": good,
        "tail_is_suffix": plan.order[-len(plan.tail):] == plan.tail,
        "rule_behind_ok": body_ok,
        "outside_max_seen": outside_max,
    }


def extend_sequence(g: Graph, plan: SequencePlan) -> PartialColoring:
    """Greedy-color the sequence in order on top of the seed coloring.

    The only edges allowed to stall are the two grandchild edges at the head
    of the tail; a stall there means their whole colored neighborhood shows
    all 21 colors, so the seed color 1 on the third branch's first child edge
    is moved onto the stalled edge and that child edge is recolored once its
    slack returns.  A stall anywhere else raises FallbackTriggered.
    """
    col = plan.precolor.as_dict()
    labels = plan.labels
    w = labels.w
    e_ww1 = _eid(g, w, labels.children[w][0])
    allowed_stalls = {plan.tail[0], plan.tail[1]}
    flush_after = plan.tail[1]
    pending_recolor = None

    for e in plan.order:
        avail = available_colors(g, col, e, PALETTE)
        if avail:
            col[e] = min(avail)
        else:
            if e not in allowed_stalls:
                raise FallbackTriggered(f"sequence stalled at edge {e}")
            moved = col.get(e_ww1)
            if moved is None:
                raise FallbackTriggered("sequence stalled twice; donor edge already moved")
            del col[e_ww1]
            if moved in colors_seen(g, col, e):
                raise FallbackTriggered("donor color still blocked after removal")
            col[e] = moved
            pending_recolor = e_ww1
        if e == flush_after and pending_recolor is not None:
            _greedy_assign(g, col, pending_recolor, "recolor of moved seed edge")
            pending_recolor = None
    if pending_recolor is not None:
        _greedy_assign(g, col, pending_recolor, "recolor of moved seed edge")
    return PartialColoring(PALETTE, col)


# -- the left/mid/right partition -------------------------------------------------


@dataclass
class VertexPartition:
    """Vertex split derived from a stalled sequence.

    left spans the leftover uncolored edges, right is everything at distance
    two or more from left, and mid is the small separator near the anchor.
    crossing lists the edges between left and mid; designated holds the seven
    second-shell vertices that crossing edges must touch.
    """

    labels: BranchLabels
    left: set
    mid: set
    right: set
    left_edges: set
    crossing: list
    designated: set
    crossing_mid: set
    crossing_left: set

    def right_degree(self, g: Graph, v: int) -> int:
        return sum(1 for e in g.incident(v)
                   if g.other_end(e, v) in self.right and v in self.right)


def _partition_check(cond: bool, why: str) -> None:
    if not cond:
        raise FallbackTriggered(f"partition invariant failed: {why}")


def build_partition(g: Graph, plan: SequencePlan) -> VertexPartition:
    """Derive and validate the left/mid/right split from a non-covering plan.

    Raises FallbackTriggered when any structural invariant fails, which would
    indicate the sequence or the input violates the decomposition's
    assumptions.
    """
    labels = plan.labels
    x, (u, v, w, y) = labels.x, labels.branch
    psi_edges = set(plan.precolor.colored())
    seq = plan.sequence_set()
    h = {e for e in g.edges() if e not in psi_edges and e not in seq}
    _partition_check(bool(h), "no leftover uncolored edges")

    left = {p for e in h for p in g.endpoints(e)}
    w1, w2, w3 = labels.children[w]
    protected = {x, u, v, w, y, w2, w3}
    _partition_check(not (left & protected),
                     "left block touches the anchor's protected vertices")

    inner = {e for e in g.edges()
             if g.endpoints(e)[0] in left and g.endpoints(e)[1] in left}
    _partition_check(inner == h, "left block spans more than the leftover edges")

    crossing = sorted(e for e in g.edges()
                      if (g.endpoints(e)[0] in left) != (g.endpoints(e)[1] in left))
    designated = set(labels.children[u] + labels.children[v] + [w1])
    for e in crossing:
        ends = set(g.endpoints(e))
        _partition_check(len(ends & designated) == 1,
                         f"crossing edge {e} misses the designated ring")
    for a in sorted(designated):
        deg_f = sum(1 for e in crossing if a in g.endpoints(e))
        _partition_check(deg_f <= 2, f"designated vertex {a} meets 3+ crossing edges")
    for l in sorted(left):
        deg_f = sum(1 for e in crossing if l in g.endpoints(e))
        _partition_check(deg_f <= 1, f"left vertex {l} meets two crossing edges")

    crossing_mid = {p for e in crossing for p in g.endpoints(e)} - left
    crossing_left = {p for e in crossing for p in g.endpoints(e)} & left
    _partition_check(crossing_mid <= designated | {x, u, v, w},
                     "crossing endpoint outside designated ring and anchor core")
    mid = {x, u, v, w} | crossing_mid
    right = set(g.vertices()) - left - mid
    _partition_check({y, w2, w3} <= right, "free branch not in the right block")
    _partition_check(len(crossing) >= 4, "fewer than four crossing edges")

    part = VertexPartition(labels, left, mid, right, h, crossing,
                           designated, crossing_mid, crossing_left)
    # no edge may join left to right
    for e in g.edges():
        a, b = g.endpoints(e)
        _partition_check(not ((a in left and b in right) or (a in right and b in left)),
                         f"edge {e} joins left to right")
    _check_partition_structure(g, part)
    return part


def _check_partition_structure(g: Graph, part: VertexPartition) -> None:
    """Per-branch structural facts used by the collaborative recipes."""
    labels = part.labels
    left, mid, right = part.left, part.mid, part.right
    crossing = set(part.crossing)
    w1 = labels.children[labels.w][0]
    for z in (labels.u, labels.v, labels.w):
        for zi in labels.children[z]:
            kids = _kids(g, zi, z)
            kid_edges = [(_eid(g, zi, c), c) for c in kids]
            if zi in mid:
                has_f = any(e in crossing for e, _ in kid_edges)
                has_mr = any(c in right for _, c in kid_edges)
                _partition_check(has_f and has_mr,
                                 f"mid vertex {zi} lacks a crossing or outward edge")
            for e, c in kid_edges:
                if e in crossing:
                    _partition_check(zi in mid and c in left,
                                     f"crossing child edge {e} misplaced")
                    left_deg = sum(1 for f in g.incident(c)
                                   if g.other_end(f, c) in left)
                    _partition_check(left_deg == 3,
                                     f"crossing target {c} lacks three left edges")
            if zi in left:
                _partition_check(all(c in left for _, c in kid_edges),
                                 f"left vertex {zi} has a child outside left")
            if zi in right:
                _partition_check(all(c in right for _, c in kid_edges),
                                 f"right vertex {zi} has a child outside right")
            for e, c in kid_edges:
                if zi in mid and c in right:
                    _partition_check(part.right_degree(g, c) >= 1,
                                     f"outward target {c} has no right edge")
            if zi in mid and zi != w1:
                rkids = [c for _, c in kid_edges if c in right]
                if len(rkids) == 2:
                    total = sum(part.right_degree(g, c) for c in rkids)
                    _partition_check(total >= 3,
                                     f"double outward vertex {zi} has thin right side")
    for c in _kids(g, labels.y, labels.x):
        _partition_check(c in right, "free-branch child outside right block")


# -- the reduction solver -----------------------------------------------------------


class _Solver:
    def __init__(self):
        self.trace = ReductionTrace()

    # .. top level ..

    def solve(self, g: Graph, depth: int, parent_measure=None) -> dict:
        if parent_measure is not None and g.measure() >= parent_measure:
            raise RuntimeError("recursion measure did not decrease")
        try:
            return self._dispatch(g, depth)
        except FallbackTriggered as exc:
            self.trace.record(depth, "fallback", f"reason={exc}", g)
            return self._exact_finish(g, depth)

    def _dispatch(self, g: Graph, depth: int) -> dict:
        if g.num_edges() <= BASE_CASE_EDGES:
            self.trace.record(depth, "base-case", "", g)
            return exact_strong_index(g).coloring.as_dict()

        comps = g.components()
        if len(comps) > 1:
            self.trace.record(depth, "components", f"count={len(comps)}", g)
            col: dict = {}
            for comp in comps:
                col.update(self.solve(g.induced_subgraph(comp), depth + 1, g.measure()))
            return col

        low = next((v for v in g.vertices() if g.degree(v) <= 3), None)
        if low is not None:
            return self._low_degree_batch(g, depth)

        conf = find_configuration(g, MULTI_EDGE)
        if conf is not None:
            return self._short_cycle(g, conf, depth)

        cut = find_edge_cut_at_most(g, 3)
        if cut is not None:
            return self._small_cut(g, cut, depth)

        for kind in (TRIANGLE, K33, K24, K23, C4, C5):
            conf = find_configuration(g, kind)
            if conf is not None:
                return self._short_cycle(g, conf, depth)

        return self._anchored(g, depth)

    def _exact_finish(self, g: Graph, depth: int) -> dict:
        res = exact_strong_index(g, stop_at=PALETTE)
        if res.upper > PALETTE:
            raise RuntimeError(f"exact fallback needed {res.upper} colors")
        return res.coloring.as_dict()

    # .. simple reductions ..

    def _low_degree(self, g: Graph, v: int, depth: int) -> dict:
        self.trace.record(depth, "low-degree", f"v={v}", g)
        pendant = g.incident(v)
        g2 = g.copy()
        g2.remove_vertex(v)
        col = self.solve(g2, depth + 1, g.measure())
        for e in pendant:
            _greedy_assign(g, col, e, "low-degree extension")
        return col

    def _low_degree_batch(self, g: Graph, depth: int) -> dict:
        """Peel low-degree vertices iteratively, recurse once, extend back.

        Each peeled vertex had degree at most three at its peel step, so its
        edges regain at least one available color when restored in reverse
        order; availability is checked against the intermediate graph of each
        step, matching the one-vertex argument exactly.
        """
        g2 = g.copy()
        peeled = []
        while g2.num_edges() > BASE_CASE_EDGES:
            v = next((u for u in g2.vertices() if g2.degree(u) <= 3), None)
            if v is None:
                break
            pendant = [(e, *g2.endpoints(e)) for e in g2.incident(v)]
            peeled.append((v, pendant))
            g2.remove_vertex(v)
        if not peeled:
            raise RuntimeError("low-degree batch called with nothing to peel")
        self.trace.record(depth, "low-degree",
                          f"v={peeled[0][0]} count={len(peeled)}", g)
        col = self.solve(g2, depth + 1, g.measure())
        for v, pendant in reversed(peeled):
            g2.restore_vertex(v)
            for e, a, b in pendant:
                g2.restore_edge(e, a, b)
            for e, _, _ in pendant:
                _greedy_assign(g2, col, e, "low-degree extension")
        return col

    def _small_cut(self, g: Graph, cut: EdgeCut, depth: int) -> dict:
        self.trace.record(depth, "small-cut", f"edges={cut.cut_edges}", g)
        side1, side2 = set(cut.side1), set(cut.side2)
        cut_edges = sorted(cut.cut_edges)
        t = len(cut_edges)

        def build(side):
            sub = g.induced_subgraph(side)
            apex = sub.add_vertex()
            stubs = []
            for e in cut_edges:
                a, b = g.endpoints(e)
                stubs.append(sub.add_edge(apex, a if a in side else b))
            return sub, stubs

        g1, stubs1 = build(side1)
        g2, stubs2 = build(side2)
        col1 = self.solve(g1, depth + 1, g.measure())
        col2 = self.solve(g2, depth + 1, g.measure())

        col1 = _rename_dict(col1, {stubs1[s]: s + 1 for s in range(t)})
        col2 = _rename_dict(col2, {stubs2[s]: s + 1 for s in range(t)})
        if col1 is None or col2 is None:
            raise FallbackTriggered("cut stub renaming infeasible")

        def boundary_colors(col, sub, side, stubs):
            verts = {g.endpoints(e)[0] if g.endpoints(e)[0] in side
                     else g.endpoints(e)[1] for e in cut_edges}
            out = set()
            for a in verts:
                for e in sub.incident(a):
                    if e not in stubs:
                        out.add(col[e])
            return out

        a_colors = boundary_colors(col1, g1, side1, set(stubs1))
        b_colors = boundary_colors(col2, g2, side2, set(stubs2))
        fixed = {s + 1: s + 1 for s in range(t)}
        forbid = {c: a_colors | set(fixed) for c in b_colors if c not in fixed}
        perm = _find_permutation(PALETTE, fixed, forbid)
        if perm is None:
            raise FallbackTriggered("cut boundary separation infeasible")
        col2 = {e: perm[c] for e, c in col2.items()}

        working = {e: col1[e] for e in g1.edges() if g.has_edge_id(e)}
        working.update({e: col2[e] for e in g2.edges() if g.has_edge_id(e)})
        for s, e in enumerate(cut_edges):
            working[e] = s + 1
        ok, witness = _verify_dict(g, working)
        if not ok:
            raise FallbackTriggered(f"cut splice produced conflict {witness}")
        return working

    # .. short-cycle reductions ..

    def _short_cycle(self, g: Graph, conf: Configuration, depth: int) -> dict:
        self.trace.record(depth, "short-cycle",
                          f"kind={conf.kind} embed={conf.vertices}", g)
        if conf.kind == MULTI_EDGE:
            a, b = conf.vertices
            e = g.edges_between(a, b)[-1]
            g2 = g.copy()
            g2.remove_edge(e)
            col = self.solve(g2, depth + 1, g.measure())
            _greedy_assign(g, col, e, "parallel edge reinsertion")
            return col

        if conf.kind == K23:
            return self._k23(g, conf, depth)

        if conf.kind == TRIANGLE or conf.kind == C4 or conf.kind == C5:
            delete = conf.vertices
        elif conf.kind == K33:
            delete = conf.vertices
        elif conf.kind == K24:
            delete = conf.vertices[4:]
        else:
            raise ValueError(f"unhandled configuration {conf.kind}")
        targets = sorted({e for d in delete for e in g.incident(d)})
        g2 = g.copy()
        for d in delete:
            g2.remove_vertex(d)
        col = self.solve(g2, depth + 1, g.measure())
        self._complete_targets(g, col, targets, depth)
        return col

    def _k23(self, g: Graph, conf: Configuration, depth: int) -> dict:
        u_side = conf.vertices[:3]
        v1, v2 = conf.vertices[3:]
        z1 = [p for p in g.neighbors(v1) if p not in u_side]
        z2 = [p for p in g.neighbors(v2) if p not in u_side]
        if len(z1) != 1 or len(z2) != 1 or z1[0] == z2[0]:
            raise FallbackTriggered("unexpected fourth neighbors at the two-side")
        z1, z2 = z1[0], z2[0]
        targets = sorted(set(g.incident(v1)) | set(g.incident(v2)))
        if g.adjacent(z1, z2):
            g2 = g.copy()
            g2.remove_vertex(v1)
            g2.remove_vertex(v2)
            col = self.solve(g2, depth + 1, g.measure())
            self._complete_targets(g, col, targets, depth)
            return col
        e_v1z1 = _eid(g, v1, z1)
        e_v2z2 = _eid(g, v2, z2)
        g2 = g.copy()
        g2.remove_vertex(v1)
        g2.remove_vertex(v2)
        helper = g2.add_edge(z1, z2)
        col = self.solve(g2, depth + 1, g.measure())
        shared = col.pop(helper)
        try:
            _checked_assign(g, col, e_v1z1, shared, "bridged spoke transfer")
            _checked_assign(g, col, e_v2z2, shared, "bridged spoke transfer")
            remaining = [e for e in targets if e not in (e_v1z1, e_v2z2)]
        except FallbackTriggered:
            # The forced transfer can collide with an edge at a three-side
            # vertex: that edge sees both spokes here but not the bridge in
            # the reduced graph, so nothing steered it off the shared color.
            # The completion search over all eight targets still closes it.
            col.pop(e_v1z1, None)
            col.pop(e_v2z2, None)
            remaining = targets
        self._complete_targets(g, col, remaining, depth)
        return col

    # .. completion strategies for short-cycle targets ..

    def _complete_targets(self, g: Graph, col: dict, targets, depth: int) -> None:
        targets = sorted(t for t in targets if t not in col)
        if not targets:
            return
        if self._try_sdr(g, col, targets):
            self.trace.record(depth, "sdr", f"targets={len(targets)} outcome=direct", g)
            return
        if self._try_pair_families(g, col, targets):
            self.trace.record(depth, "sdr", f"targets={len(targets)} outcome=paired", g)
            return
        if self._try_recolor_two(g, col, targets):
            self.trace.record(depth, "sdr", f"targets={len(targets)} outcome=recolored", g)
            return
        if self._try_backtrack(g, col, targets):
            self.trace.record(depth, "sdr", f"targets={len(targets)} outcome=search", g)
            return
        raise FallbackTriggered(f"completion exhausted for {len(targets)} target edges")

    def _try_sdr(self, g: Graph, col: dict, targets) -> bool:
        avail = {t: available_colors(g, col, t, PALETTE) for t in targets}
        assigned, _ = _match_distinct(sorted(targets), avail)
        if assigned is None:
            return False
        col.update(assigned)
        return True

    def _candidate_pairs(self, g: Graph, col: dict, targets):
        un = [t for t in targets if t not in col]
        pairs = []
        for i, e in enumerate(un):
            for f in un[i + 1:]:
                if not sees(g, e, f):
                    pairs.append((e, f))
        return pairs

    def _apply_family(self, g: Graph, col: dict, targets, family) -> bool:
        placed = []
        ok = True
        for e, f in family:
            common = (available_colors(g, col, e, PALETTE)
                      & available_colors(g, col, f, PALETTE))
            if not common:
                ok = False
                break
            c = min(common)
            col[e] = c
            col[f] = c
            placed += [e, f]
        if ok:
            rest = [t for t in targets if t not in col]
            if not rest or self._try_sdr(g, col, rest):
                return True
        for e in placed:
            del col[e]
        return False

    def _try_pair_families(self, g: Graph, col: dict, targets) -> bool:
        pairs = self._candidate_pairs(g, col, targets)
        if not pairs:
            return False
        # each single pair, then a greedy maximal family seeded by each pair
        for p in pairs:
            if self._apply_family(g, col, targets, [p]):
                return True
        for start in range(len(pairs)):
            family = [pairs[start]]
            used = set(pairs[start])
            for p in pairs:
                if p[0] not in used and p[1] not in used:
                    family.append(p)
                    used.update(p)
            if len(family) > 1 and self._apply_family(g, col, targets, family):
                return True
        return False

    def _try_recolor_two(self, g: Graph, col: dict, targets) -> bool:
        near = set()
        for t in targets:
            near |= edge_neighborhood(g, t).all
        cand = sorted(e for e in near if e in col)
        attempts = 0
        for i, f1 in enumerate(cand):
            for f2 in cand[i + 1:]:
                if col[f1] == col[f2] or sees(g, f1, f2):
                    continue
                attempts += 1
                if attempts > 4000:
                    return False
                c1, c2 = col.pop(f1), col.pop(f2)
                common = (available_colors(g, col, f1, PALETTE)
                          & available_colors(g, col, f2, PALETTE))
                if common:
                    c = min(common)
                    col[f1] = col[f2] = c
                    if self._try_sdr(g, col, targets) \
                            or self._try_pair_families(g, col, targets):
                        return True
                col[f1], col[f2] = c1, c2
        return False

    def _try_backtrack(self, g: Graph, col: dict, targets, node_cap=200000) -> bool:
        un = sorted(t for t in targets if t not in col)
        nodes = 0

        def rec():
            nonlocal nodes
            if nodes > node_cap:
                return False
            nodes += 1
            pick, avail = None, None
            for t in un:
                if t in col:
                    continue
                a = available_colors(g, col, t, PALETTE)
                if avail is None or len(a) < len(avail):
                    pick, avail = t, a
                    if not a:
                        break
            if pick is None:
                return True
            if not avail:
                return False
            for c in sorted(avail):
                col[pick] = c
                if rec():
                    return True
                del col[pick]
            return False

        return rec()

    # .. the anchored decomposition ..

    def _anchored(self, g: Graph, depth: int) -> dict:
        x = g.vertices()[0]
        plan = build_precolor_and_sequence(g, x)
        if plan.covers_all(g):
            self.trace.record(depth, "sequence-complete",
                              f"anchor={x} len={len(plan.order)}", g)
            return extend_sequence(g, plan).as_dict()
        self.trace.record(depth, "partition", f"anchor={x}", g)
        part = build_partition(g, plan)
        return self._collaborative(g, part, depth)

    # .. collaborative coloring of the two blocks ..

    def _collaborative(self, g: Graph, part: VertexPartition, depth: int) -> dict:
        labels = part.labels.copy()
        # structure with one child in each block fires the simplest recipe
        for z in sorted((labels.u, labels.v, labels.w)):
            ks = labels.children[z]
            lk = [c for c in ks if c in part.left]
            rk = [c for c in ks if c in part.right]
            mk = [c for c in ks if c in part.mid]
            if lk and rk and not mk:
                z2 = [c for c in ks if c != lk[0] and c != rk[0]]
                labels.children[z] = [lk[0], z2[0], rk[0]]
                self.trace.record(depth, "collaborative", "case=mixed-branch", g)
                return self._recipe_mixed_branch(g, part, labels, z, depth)

        m_a = sorted(part.mid & part.designated)
        if not m_a:
            raise FallbackTriggered("mid block misses the designated ring entirely")
        marked = {zi: self._mark_children(g, part, labels, zi) for zi in m_a}
        for zi in m_a:
            labels.children[zi] = marked[zi]

        def rich(zi):
            k2, k3 = labels.children[zi][1], labels.children[zi][2]
            total = part.right_degree(g, k3)
            if k2 in part.right:
                total += part.right_degree(g, k2)
            return total >= 3

        candidates = [zi for zi in m_a if rich(zi)]
        if candidates:
            for zi in candidates:
                z = self._branch_of(labels, zi)
                siblings = [c for c in labels.children[z] if c != zi]
                r_sib = sorted(c for c in siblings if c in part.right)
                if r_sib:
                    other = [c for c in siblings if c != r_sib[0]]
                    labels.children[z] = [zi, other[0], r_sib[0]]
                    self.trace.record(depth, "collaborative", "case=r-sibling", g)
                    return self._recipe_r_sibling(g, part, labels, z, depth)
            chosen = candidates[0]
            return self._rich_anchor_cases(g, part, labels, chosen, depth)

        w1 = labels.children[labels.w][0]
        if w1 in m_a:
            hub = labels.children[w1][2]
            r = part.right_degree(g, hub)
            if r == 1:
                self.trace.record(depth, "collaborative", "case=hub-deg1", g)
                return self._recipe_hub1(g, part, labels, depth)
            if r == 2:
                self.trace.record(depth, "collaborative", "case=hub-deg2", g)
                return self._recipe_hub2(g, part, labels, depth)
            raise FallbackTriggered(f"unexpected hub degree {r} on the third branch")
        self.trace.record(depth, "collaborative", "case=twin-anchors", g)
        return self._recipe_twin(g, part, labels, m_a, depth)

    # .. label utilities ..

    def _branch_of(self, labels: BranchLabels, zi: int) -> int:
        for z in labels.branch:
            if zi in labels.children[z]:
                return z
        raise FallbackTriggered(f"vertex {zi} is not a child of any branch")

    def _mark_children(self, g: Graph, part: VertexPartition,
                       labels: BranchLabels, zi: int) -> list[int]:
        """Order zi's children: crossing child first, outward child last.

        When two children sit in the right block, the one with three right
        edges (if any) becomes the outward child so the recipes can route the
        right-side helper through it.
        """
        parent = self._branch_of(labels, zi)
        ks = _kids(g, zi, parent)
        lk = sorted(c for c in ks if c in part.left)
        rk = sorted(c for c in ks if c in part.right)
        mk = [c for c in ks if c in part.mid]
        if mk or not lk or not rk:
            raise FallbackTriggered(f"mid vertex {zi} has unusable child structure")
        if len(lk) == 2:
            return [lk[0], lk[1], rk[0]]
        full = [c for c in rk if part.right_degree(g, c) == 3]
        k3 = full[0] if full else rk[0]
        k2 = [c for c in rk if c != k3][0]
        return [lk[0], k2, k3]

    def _rich_anchor_cases(self, g: Graph, part: VertexPartition,
                       labels: BranchLabels, chosen: int, depth: int) -> dict:
        z = self._branch_of(labels, chosen)
        if z == labels.v:
            labels.swap_uv()
        elif z != labels.u:
            raise FallbackTriggered("chosen outward-rich vertex on the third branch")
        siblings = [c for c in labels.children[labels.u] if c != chosen]
        l_sib = sorted(c for c in siblings if c in part.left)
        m_sib = sorted(c for c in siblings if c in part.mid)
        if any(c in part.right for c in siblings):
            raise FallbackTriggered("outward-rich vertex kept a right sibling")
        if l_sib:
            u3 = [c for c in siblings if c != l_sib[0]][0]
            labels.children[labels.u] = [chosen, l_sib[0], u3]
            self.trace.record(depth, "collaborative", "case=l-sibling", g)
            return self._recipe_l_sibling(g, part, labels, depth)
        if len(m_sib) != 2:
            raise FallbackTriggered("sibling placement escaped the case split")
        for sib in m_sib:
            labels.children[sib] = self._mark_children(g, part, labels, sib)
        middles = {}
        for zi in [chosen] + m_sib:
            k2 = labels.children[zi][1]
            middles[zi] = "crossing" if k2 in part.left else "outward"
        kinds = set(middles.values())
        if kinds == {"crossing", "outward"}:
            first = min(zi for zi in middles if middles[zi] == "crossing")
            second = min(zi for zi in middles if middles[zi] == "outward")
            third = [zi for zi in middles if zi not in (first, second)][0]
            labels.children[labels.u] = [first, second, third]
            self.trace.record(depth, "collaborative", "case=mixed-middles", g)
            return self._recipe_mixed_middles(g, part, labels, depth)
        others = sorted(m_sib)
        labels.children[labels.u] = [chosen, others[0], others[1]]
        if kinds == {"crossing"}:
            self.trace.record(depth, "collaborative", "case=middles-left", g)
            return self._recipe_same_middles(g, part, labels, depth, crossing_mid=True)
        self.trace.record(depth, "collaborative", "case=middles-right", g)
        return self._recipe_same_middles(g, part, labels, depth, crossing_mid=False)

    # .. shared recipe plumbing ..

    def _left_edges_at(self, g: Graph, part: VertexPartition, v: int) -> list[int]:
        return [e for e in g.incident(v)
                if g.other_end(e, v) in part.left and v in part.left]

    def _right_edges_at(self, g: Graph, part: VertexPartition, v: int) -> list[int]:
        return [e for e in g.incident(v)
                if g.other_end(e, v) in part.right and v in part.right]

    def _right_triple(self, g: Graph, part: VertexPartition,
                      primary: int, secondary=None) -> list[int]:
        edges = self._right_edges_at(g, part, primary)[:3]
        if len(edges) < 3 and secondary is not None:
            edges += self._right_edges_at(g, part, secondary)[:3 - len(edges)]
        if len(edges) != 3:
            raise FallbackTriggered("fewer than three right edges for the helper triple")
        return edges

    def _fresh_edge(self, sub: Graph, a: int, b: int, why: str) -> int:
        if sub.adjacent(a, b):
            raise FallbackTriggered(f"unexpected adjacency {a}-{b} while {why}")
        return sub.add_edge(a, b)

    def _solve_block(self, g: Graph, sub: Graph, depth: int) -> dict:
        if sub.max_degree() > 4:
            raise FallbackTriggered("block exceeded degree four")
        return self.solve(sub, depth + 1, g.measure())

    def _transfer(self, g: Graph, *block_colorings) -> dict:
        working: dict = {}
        for sub, col in block_colorings:
            for e in sub.edges():
                if g.has_edge_id(e):
                    working[e] = col[e]
        ok, witness = _verify_dict(g, working)
        if not ok:
            raise FallbackTriggered(f"block transfer produced conflict {witness}")
        return working

    def _rename_or_fail(self, col: dict, fixed: dict, why: str) -> dict:
        renamed = _rename_dict(col, fixed)
        if renamed is None:
            raise FallbackTriggered(f"renaming infeasible while {why}")
        return renamed

    def _greedy_grandkids(self, g: Graph, col: dict, labels: BranchLabels,
                          branch_vertex: int, skip=()) -> None:
        for zi in labels.children[branch_vertex]:
            self._greedy_down(g, col, zi, branch_vertex, skip)

    def _greedy_down(self, g: Graph, col: dict, vertex: int, parent: int,
                     skip=()) -> None:
        for c in _kids(g, vertex, parent):
            e = _eid(g, vertex, c)
            if e not in col and e not in skip:
                _greedy_assign(g, col, e, "shell pass")

    def _greedy_children(self, g: Graph, col: dict, labels: BranchLabels,
                         branch_vertex: int) -> None:
        for zi in labels.children[branch_vertex]:
            e = _eid(g, branch_vertex, zi)
            if e not in col:
                _greedy_assign(g, col, e, "branch pass")

    def _run_order(self, g: Graph, col: dict, order) -> None:
        for e in order:
            if e in col:
                raise FallbackTriggered(f"ordered edge {e} was already colored")
            _greedy_assign(g, col, e, "final order")

    def _finish(self, g: Graph, col: dict) -> dict:
        missing = [e for e in g.edges() if e not in col]
        if missing:
            raise FallbackTriggered(f"recipe left {len(missing)} edges uncolored")
        ok, witness = _verify_dict(g, col)
        if not ok:
            raise FallbackTriggered(f"recipe produced conflict {witness}")
        return col

    def _crossing_partner(self, g: Graph, part: VertexPartition,
                          excluded_edge: int) -> int:
        """Left endpoint of the first crossing edge other than the excluded one."""
        for e in part.crossing:
            if e == excluded_edge:
                continue
            a, b = g.endpoints(e)
            return a if a in part.left else b
        raise FallbackTriggered("no spare crossing edge")

    # .. recipes ..

    def _recipe_mixed_branch(self, g: Graph, part: VertexPartition,
                             labels: BranchLabels, z: int, depth: int) -> dict:
        x = labels.x
        z1, z2, z3 = labels.children[z]
        y = labels.y
        y1 = _kids(g, y, x)[0]

        a_prime = self._crossing_partner(g, part, _eid(g, z, z1))
        gl = g.induced_subgraph(part.left)
        helper_l = gl.add_edge(z1, a_prime)  # parallel copy is fine
        gr = g.induced_subgraph(part.right)
        helper_r = self._fresh_edge(gr, z3, y, "joining outward child to free branch")

        col_l = self._solve_block(g, gl, depth)
        col_l = self._rename_or_fail(
            col_l, {e: i + 1 for i, e in enumerate(
                sorted(_eid(g, z1, c) for c in _kids(g, z1, z)))},
            "normalizing left child colors")
        d = col_l[helper_l]

        col_r = self._solve_block(g, gr, depth)
        fixed = {e: i + 1 for i, e in enumerate(
            sorted(_eid(g, z3, c) for c in _kids(g, z3, z)))}
        fixed[_eid(g, y, y1)] = d
        col_r = self._rename_or_fail(col_r, fixed, "normalizing right child colors")

        col = self._transfer(g, (gl, col_l), (gr, col_r))
        for zp in sorted(set(labels.branch[:3]) - {z}):
            self._greedy_grandkids(g, col, labels, zp)
            self._greedy_children(g, col, labels, zp)
        others = sorted(set(labels.branch[:3]) - {z})
        head = [_eid(g, x, others[0]), _eid(g, x, others[1]), _eid(g, x, y)]
        if d in _colors_at(g, col, z2):
            order = head + [_eid(g, z, z1), _eid(g, z, z3), _eid(g, z, z2),
                            _eid(g, x, z)]
        else:
            _checked_assign(g, col, _eid(g, z, z1), d, "seeding the left child edge")
            order = head + [_eid(g, z, z3), _eid(g, z, z2), _eid(g, x, z)]
        self._run_order(g, col, order)
        return self._finish(g, col)

    def _recipe_r_sibling(self, g: Graph, part: VertexPartition,
                          labels: BranchLabels, z: int, depth: int) -> dict:
        x = labels.x
        z1, z2, z3 = labels.children[z]
        z11, z12, z13 = labels.children[z1]

        a_prime = self._crossing_partner(g, part, _eid(g, z1, z11))
        gl = g.induced_subgraph(part.left)
        helper_l = gl.add_edge(z11, a_prime)
        variant_full = part.right_degree(g, z13) == 3
        gr = g.induced_subgraph(part.right)
        if not variant_full:
            if z12 not in part.right:
                raise FallbackTriggered("thin outward child without a right twin")
            self._fresh_edge(gr, z13, z12, "pairing the outward children")
        self._fresh_edge(gr, z13, z3, "joining outward child to right sibling")

        col_l = self._solve_block(g, gl, depth)
        col_l = self._rename_or_fail(
            col_l, {e: i + 1 for i, e in enumerate(
                sorted(_eid(g, z11, c) for c in _kids(g, z11, z1)))},
            "normalizing left target colors")
        d = col_l[helper_l]

        col_r = self._solve_block(g, gr, depth)
        triple = self._right_triple(g, part, z13, None if variant_full else z12)
        triple_fixed = {e: i + 1 for i, e in enumerate(triple)}
        triple_sources = {col_r[e] for e in triple}
        pick = next((e for e in self._right_edges_at(g, part, z3)
                     if col_r[e] not in triple_sources), None)
        if pick is None:
            raise FallbackTriggered("right sibling edges all collide with the triple")
        triple_fixed[pick] = d
        col_r = self._rename_or_fail(col_r, triple_fixed, "normalizing right target colors")

        col = self._transfer(g, (gl, col_l), (gr, col_r))
        for zp in sorted(set(labels.branch[:3]) - {z}):
            self._greedy_grandkids(g, col, labels, zp)
            self._greedy_children(g, col, labels, zp)
        self._greedy_down(g, col, z2, z)
        others = sorted(set(labels.branch[:3]) - {z})
        head = [_eid(g, x, others[0]), _eid(g, x, others[1]),
                _eid(g, x, labels.y), _eid(g, x, z),
                _eid(g, z, z2), _eid(g, z, z3)]
        if d not in _colors_at(g, col, z12):
            _checked_assign(g, col, _eid(g, z1, z11), d, "seeding the crossing child edge")
            order = head + [_eid(g, z1, z12), _eid(g, z1, z13), _eid(g, z, z1)]
        else:
            order = head + [_eid(g, z1, z11), _eid(g, z1, z12),
                            _eid(g, z1, z13), _eid(g, z, z1)]
        self._run_order(g, col, order)
        return self._finish(g, col)

    def _recipe_l_sibling(self, g: Graph, part: VertexPartition,
                          labels: BranchLabels, depth: int) -> dict:
        x, u, v, w, y = labels.x, labels.u, labels.v, labels.w, labels.y
        u1, u2, u3 = labels.children[u]
        u11, u12, u13 = labels.children[u1]
        u21 = _kids(g, u2, u)[0]

        gl = g.induced_subgraph(part.left)
        self._fresh_edge(gl, u11, u2, "joining crossing target to left sibling")
        variant_full = part.right_degree(g, u13) == 3
        gr = g.induced_subgraph(part.right)
        if not variant_full:
            if u12 not in part.right:
                raise FallbackTriggered("thin outward child without a right twin")
            self._fresh_edge(gr, u13, u12, "pairing the outward children")
        helper_ry = self._fresh_edge(gr, u13, y, "joining outward child to free branch")

        col_l = self._solve_block(g, gl, depth)
        col_l = self._rename_or_fail(
            col_l, {e: i + 1 for i, e in enumerate(
                sorted(self._left_edges_at(g, part, u11)))},
            "normalizing left target colors")
        d = col_l[_eid(g, u2, u21)]
        if d in (1, 2, 3):
            raise FallbackTriggered("sibling seed color collided with the base colors")

        col_r = self._solve_block(g, gr, depth)
        triple = self._right_triple(g, part, u13, None if variant_full else u12)
        fixed = {e: i + 1 for i, e in enumerate(triple)}
        fixed[helper_ry] = d
        col_r = self._rename_or_fail(col_r, fixed, "normalizing right target colors")

        col = self._transfer(g, (gl, col_l), (gr, col_r))
        for zp in (v, w):
            self._greedy_grandkids(g, col, labels, zp)
        self._greedy_down(g, col, u3, u)
        for zp in (v, w):
            self._greedy_children(g, col, labels, zp)
        head = [_eid(g, x, v), _eid(g, x, w), _eid(g, x, y), _eid(g, x, u),
                _eid(g, u, u2), _eid(g, u, u3)]
        if d not in _colors_at(g, col, u12):
            _checked_assign(g, col, _eid(g, u1, u13), d, "seeding the outward child edge")
            order = head + [_eid(g, u1, u11), _eid(g, u1, u12), _eid(g, u, u1)]
        else:
            order = head + [_eid(g, u1, u11), _eid(g, u1, u12),
                            _eid(g, u1, u13), _eid(g, u, u1)]
        self._run_order(g, col, order)
        return self._finish(g, col)

    def _recipe_mixed_middles(self, g: Graph, part: VertexPartition,
                              labels: BranchLabels, depth: int) -> dict:
        x, u, v, w, y = labels.x, labels.u, labels.v, labels.w, labels.y
        u1, u2, u3 = labels.children[u]
        u11, u12, u13 = labels.children[u1]
        u21, u22, u23 = labels.children[u2]
        u31, u32, u33 = labels.children[u3]

        gl = g.induced_subgraph(part.left)
        apex_a = gl.add_vertex()
        ea11 = gl.add_edge(apex_a, u11)
        ea12 = gl.add_edge(apex_a, u12)
        ea21 = gl.add_edge(apex_a, u21)
        gl.add_edge(apex_a, u31)
        gr = g.induced_subgraph(part.right)
        apex_b = gr.add_vertex()
        eb13 = gr.add_edge(apex_b, u13)
        eb22 = gr.add_edge(apex_b, u22)
        eb23 = gr.add_edge(apex_b, u23)
        gr.add_edge(apex_b, u33)

        col_l = self._solve_block(g, gl, depth)
        col_l = self._rename_or_fail(col_l, {ea11: 1, ea12: 2, ea21: 3},
                                     "normalizing left apex colors")
        d = col_l[min(self._left_edges_at(g, part, u31))]
        if d in (1, 2, 3):
            raise FallbackTriggered("shared seed color collided with the base colors")

        col_r = self._solve_block(g, gr, depth)
        u33_edges = self._right_edges_at(g, part, u33)
        if not u33_edges:
            raise FallbackTriggered("outward child of the third sibling has no right edge")
        col_r = self._rename_or_fail(
            col_r, {eb23: 1, eb22: 2, eb13: 3, min(u33_edges): d},
            "normalizing right apex colors")

        col = self._transfer(g, (gl, col_l), (gr, col_r))
        pairs = [
            (_eid(g, u1, u11), 1), (_eid(g, u2, u23), 1),
            (_eid(g, u1, u12), 2), (_eid(g, u2, u22), 2),
            (_eid(g, u1, u13), 3), (_eid(g, u2, u21), 3),
        ]
        for e, c in pairs:
            _checked_assign(g, col, e, c, "seeding the paired child edges")
        for zp in (v, w):
            self._greedy_grandkids(g, col, labels, zp)
        for zp in (v, w):
            self._greedy_children(g, col, labels, zp)
        order = [_eid(g, x, v), _eid(g, x, w), _eid(g, x, y), _eid(g, x, u),
                 _eid(g, u3, u31), _eid(g, u3, u32), _eid(g, u3, u33),
                 _eid(g, u, u1), _eid(g, u, u2), _eid(g, u, u3)]
        self._run_order(g, col, order)
        return self._finish(g, col)

    def _recipe_same_middles(self, g: Graph, part: VertexPartition,
                             labels: BranchLabels, depth: int,
                             crossing_mid: bool) -> dict:
        x, u, v, w, y = labels.x, labels.u, labels.v, labels.w, labels.y
        u1, u2, u3 = labels.children[u]
        u11, u12, u13 = labels.children[u1]
        u21, u22, u23 = labels.children[u2]
        u31, u32, u33 = labels.children[u3]

        if crossing_mid:
            if part.right_degree(g, u13) != 3:
                raise FallbackTriggered("outward child lacks three right edges")
            gl = g.induced_subgraph(part.left)
            apex_a = gl.add_vertex()
            ea11 = gl.add_edge(apex_a, u11)
            gl.add_edge(apex_a, u12)
            gl.add_edge(apex_a, u21)
            gl.add_edge(apex_a, u22)
            gr = g.induced_subgraph(part.right)
            helper_r = self._fresh_edge(gr, u13, u23, "pairing the outward children")
            col_l = self._solve_block(g, gl, depth)
            col_l = self._rename_or_fail(
                col_l, {e: i + 1 for i, e in enumerate(
                    sorted(self._left_edges_at(g, part, u11)))},
                "normalizing left target colors")
            d = col_l[ea11]
            col_r = self._solve_block(g, gr, depth)
            triple = self._right_triple(g, part, u13)
            fixed = {e: i + 1 for i, e in enumerate(triple)}
            fixed[helper_r] = d
            col_r = self._rename_or_fail(col_r, fixed, "normalizing right target colors")
        else:
            gl = g.induced_subgraph(part.left)
            helper_l = self._fresh_edge(gl, u11, u21, "pairing the crossing targets")
            gr = g.induced_subgraph(part.right)
            apex_b = gr.add_vertex()
            gr.add_edge(apex_b, u12)
            gr.add_edge(apex_b, u13)
            gr.add_edge(apex_b, u22)
            eb23 = gr.add_edge(apex_b, u23)
            if part.right_degree(g, u13) < 3:
                self._fresh_edge(gr, u12, u13, "pairing the outward children")
            col_l = self._solve_block(g, gl, depth)
            col_l = self._rename_or_fail(
                col_l, {e: i + 1 for i, e in enumerate(
                    sorted(self._left_edges_at(g, part, u11)))},
                "normalizing left target colors")
            d = col_l[helper_l]
            col_r = self._solve_block(g, gr, depth)
            triple = self._right_triple(g, part, u13, u12)
            fixed = {e: i + 1 for i, e in enumerate(triple)}
            fixed[eb23] = d
            col_r = self._rename_or_fail(col_r, fixed, "normalizing right target colors")
        if d in (1, 2, 3):
            raise FallbackTriggered("shared seed color collided with the base colors")

        col = self._transfer(g, (gl, col_l), (gr, col_r))
        _checked_assign(g, col, _eid(g, u1, u11), d, "seeding the paired child edges")
        _checked_assign(g, col, _eid(g, u2, u23), d, "seeding the paired child edges")
        for zp in (v, w):
            self._greedy_grandkids(g, col, labels, zp)
        for zp in (v, w):
            self._greedy_children(g, col, labels, zp)
        order = [_eid(g, x, v), _eid(g, x, w), _eid(g, x, y),
                 _eid(g, u2, u21), _eid(g, u2, u22),
                 _eid(g, u3, u31), _eid(g, u3, u32), _eid(g, u3, u33),
                 _eid(g, x, u), _eid(g, u, u2), _eid(g, u, u3),
                 _eid(g, u1, u12), _eid(g, u1, u13), _eid(g, u, u1)]
        self._run_order(g, col, order)
        return self._finish(g, col)

    def _relabel_partner(self, g: Graph, part: VertexPartition,
                         labels: BranchLabels, partner: int, hub: int,
                         branch_vertex: int) -> None:
        """Put `partner` first among its branch's children and mark its kids
        with the hub forced into the outward slot."""
        ks = labels.children[branch_vertex]
        if partner not in ks:
            raise FallbackTriggered("hub partner not on the expected branch")
        labels.children[branch_vertex] = [partner] + [c for c in ks if c != partner]
        kids = _kids(g, partner, branch_vertex)
        if hub not in kids:
            raise FallbackTriggered("hub is not a child of its partner")
        lk = sorted(c for c in kids if c in part.left)
        if not lk:
            raise FallbackTriggered("hub partner has no crossing child")
        middle = sorted(set(kids) - {hub, lk[0]})
        labels.children[partner] = [lk[0], middle[0], hub]

    def _hub_partners(self, g: Graph, part: VertexPartition, hub: int,
                      exclude: int) -> list[int]:
        return sorted(p for p in g.neighbors(hub)
                      if p in part.mid and p != exclude)

    def _recipe_hub1(self, g: Graph, part: VertexPartition,
                     labels: BranchLabels, depth: int) -> dict:
        x, u, v, w, y = labels.x, labels.u, labels.v, labels.w, labels.y
        w1 = labels.children[w][0]
        w11, w12, hub = labels.children[w1]
        partners = self._hub_partners(g, part, hub, w1)
        if len(partners) != 2:
            raise FallbackTriggered(f"hub has {len(partners)} partners, expected 2")
        pu = [p for p in partners if p in labels.children[u]]
        pv = [p for p in partners if p in labels.children[v]]
        if len(pu) != 1 or len(pv) != 1:
            raise FallbackTriggered("hub partners not spread over both branches")
        self._relabel_partner(g, part, labels, pu[0], hub, u)
        self._relabel_partner(g, part, labels, pv[0], hub, v)
        u1 = labels.children[u][0]
        v1 = labels.children[v][0]
        u11 = labels.children[u1][0]
        v11, v12 = labels.children[v1][0], labels.children[v1][1]
        u12 = labels.children[u1][1]

        u_prime_edges = sorted(self._left_edges_at(g, part, u11))
        for e in u_prime_edges:
            if set(g.endpoints(e)) & {w11, w12}:
                raise FallbackTriggered("crossing target adjacent to the third branch pair")
        gl = g.induced_subgraph(part.left)
        self._fresh_edge(gl, w11, u11, "joining the two crossing targets")
        gr = g.induced_subgraph(part.right)
        e_h2 = self._fresh_edge(gr, hub, labels.children[w][1], "spreading the hub")
        e_h3 = self._fresh_edge(gr, hub, labels.children[w][2], "spreading the hub")
        e_hy = self._fresh_edge(gr, hub, y, "spreading the hub")

        col_l = self._solve_block(g, gl, depth)
        col_l = self._rename_or_fail(
            col_l, {e: i + 1 for i, e in enumerate(
                sorted(self._left_edges_at(g, part, w11)))},
            "normalizing left target colors")
        d = col_l[u_prime_edges[0]]
        if d in (1, 2, 3):
            raise FallbackTriggered("shared seed color collided with the base colors")

        col_r = self._solve_block(g, gr, depth)
        hub_right = self._right_edges_at(g, part, hub)
        if len(hub_right) != 1:
            raise FallbackTriggered("hub right degree changed under the recipe")
        col_r = self._rename_or_fail(
            col_r, {hub_right[0]: 1, e_h2: 2, e_h3: 3, e_hy: d},
            "normalizing right target colors")

        col = self._transfer(g, (gl, col_l), (gr, col_r))
        w2, w3 = labels.children[w][1], labels.children[w][2]
        _checked_assign(g, col, _eid(g, x, y), d, "seeding the free branch edge")
        _checked_assign(g, col, _eid(g, w, w2), 2, "seeding the third branch edges")
        _checked_assign(g, col, _eid(g, w, w3), 3, "seeding the third branch edges")

        d_present = d in _colors_at(g, col, w12)
        if not d_present:
            _checked_assign(g, col, _eid(g, w1, hub), d, "seeding the hub edge")
        u2, u3 = labels.children[u][1], labels.children[u][2]
        v2, v3 = labels.children[v][1], labels.children[v][2]
        for zi, zp in ((u2, u), (u3, u), (v2, v), (v3, v)):
            self._greedy_down(g, col, zi, zp)
        order = [_eid(g, u1, u11), _eid(g, u1, u12), _eid(g, u, u1),
                 _eid(g, u, u2), _eid(g, u, u3), _eid(g, x, u),
                 _eid(g, v1, v11), _eid(g, v1, v12), _eid(g, v, v2),
                 _eid(g, v, v3), _eid(g, x, v), _eid(g, v, v1),
                 _eid(g, v1, hub), _eid(g, u1, hub), _eid(g, x, w),
                 _eid(g, w1, w11), _eid(g, w1, w12)]
        if d_present:
            order.append(_eid(g, w1, hub))
        order.append(_eid(g, w, w1))
        self._run_order(g, col, order)
        return self._finish(g, col)

    def _recipe_hub2(self, g: Graph, part: VertexPartition,
                     labels: BranchLabels, depth: int) -> dict:
        x, w, y = labels.x, labels.w, labels.y
        w1 = labels.children[w][0]
        w11, w12, hub = labels.children[w1]
        if w12 not in part.left:
            raise FallbackTriggered("second child of the third-branch anchor not in left")
        partners = self._hub_partners(g, part, hub, w1)
        if len(partners) != 1:
            raise FallbackTriggered(f"hub has {len(partners)} partners, expected 1")
        partner = partners[0]
        if partner in labels.children[labels.v]:
            labels.swap_uv()
        if partner not in labels.children[labels.u]:
            raise FallbackTriggered("hub partner on an unexpected branch")
        u, v = labels.u, labels.v
        self._relabel_partner(g, part, labels, partner, hub, u)
        u1 = labels.children[u][0]

        gl = g.induced_subgraph(part.left)
        self._fresh_edge(gl, w11, w12, "joining the two crossing targets")
        gr = g.induced_subgraph(part.right)
        w2, w3 = labels.children[w][1], labels.children[w][2]
        e_h2 = self._fresh_edge(gr, hub, w2, "spreading the hub")
        self._fresh_edge(gr, hub, w3, "spreading the hub")

        col_l = self._solve_block(g, gl, depth)
        col_l = self._rename_or_fail(
            col_l, {e: i + 1 for i, e in enumerate(
                sorted(self._left_edges_at(g, part, w11)))},
            "normalizing left target colors")
        d = col_l[min(self._left_edges_at(g, part, w12))]
        if d in (1, 2, 3):
            raise FallbackTriggered("shared seed color collided with the base colors")

        col_r = self._solve_block(g, gr, depth)
        hub_right = sorted(self._right_edges_at(g, part, hub))
        if len(hub_right) != 2:
            raise FallbackTriggered("hub right degree changed under the recipe")
        w31 = _kids(g, w3, w)[0]
        fixed = {hub_right[0]: 1, hub_right[1]: 2, e_h2: 3, _eid(g, w3, w31): d}
        col_r = self._rename_or_fail(col_r, fixed, "normalizing right target colors")

        col = self._transfer(g, (gl, col_l), (gr, col_r))
        _checked_assign(g, col, _eid(g, w, w2), 3, "seeding the third branch edge")
        e_u1hub = _eid(g, u1, hub)
        for zi in labels.children[u]:
            self._greedy_down(g, col, zi, u, skip=(e_u1hub,))
        for zi in labels.children[v]:
            self._greedy_down(g, col, zi, v)
        self._greedy_children(g, col, labels, u)
        self._greedy_children(g, col, labels, v)
        order = [_eid(g, x, v), _eid(g, x, y), _eid(g, x, u), e_u1hub,
                 _eid(g, x, w), _eid(g, w, w3),
                 _eid(g, w1, w11), _eid(g, w1, w12), _eid(g, w1, hub),
                 _eid(g, w, w1)]
        self._run_order(g, col, order)
        return self._finish(g, col)

    def _recipe_twin(self, g: Graph, part: VertexPartition,
                     labels: BranchLabels, m_a: list, depth: int) -> dict:
        x, y, w = labels.x, labels.y, labels.w
        w1 = labels.children[w][0]
        if w1 not in part.right:
            raise FallbackTriggered("third-branch anchor neither mid nor right")
        chosen = m_a[0]
        if chosen in labels.children[labels.v]:
            labels.swap_uv()
        if chosen not in labels.children[labels.u]:
            raise FallbackTriggered("chosen anchor on an unexpected branch")
        u, v = labels.u, labels.v
        ks = labels.children[u]
        labels.children[u] = [chosen] + [c for c in ks if c != chosen]
        u1 = chosen
        kids = _kids(g, u1, u)
        lk = sorted(c for c in kids if c in part.left)
        rk = [c for c in kids if c in part.right]
        if len(lk) != 2 or len(rk) != 1:
            raise FallbackTriggered("twin anchor does not carry two crossing children")
        hub = rk[0]
        labels.children[u1] = [lk[0], lk[1], hub]
        if part.right_degree(g, hub) != 2:
            raise FallbackTriggered("twin hub lacks exactly two right edges")
        partners = self._hub_partners(g, part, hub, u1)
        if len(partners) != 1:
            raise FallbackTriggered(f"twin hub has {len(partners)} partners, expected 1")
        v1 = partners[0]
        if v1 not in labels.children[v]:
            raise FallbackTriggered("twin partner on an unexpected branch")
        labels.children[v] = [v1] + [c for c in labels.children[v] if c != v1]
        vkids = _kids(g, v1, v)
        vlk = sorted(c for c in vkids if c in part.left)
        if len(vlk) != 2 or hub not in vkids:
            raise FallbackTriggered("twin partner does not mirror the anchor")
        labels.children[v1] = [vlk[0], vlk[1], hub]
        u11, u12 = labels.children[u1][0], labels.children[u1][1]
        v11, v12 = labels.children[v1][0], labels.children[v1][1]

        gl = g.induced_subgraph(part.left)
        helper_l = self._fresh_edge(gl, u11, u12, "joining the two crossing targets")
        gr = g.induced_subgraph(part.right)
        apex_b = gr.add_vertex()
        w2, w3 = labels.children[w][1], labels.children[w][2]
        eb_w1 = gr.add_edge(w1, apex_b)
        eb_w2 = gr.add_edge(w2, apex_b)
        eb_w3 = gr.add_edge(w3, apex_b)
        eb_hub = gr.add_edge(hub, apex_b)
        e_hy = self._fresh_edge(gr, hub, y, "joining the hub to the free branch")

        col_l = self._solve_block(g, gl, depth)
        col_l = self._rename_or_fail(
            col_l, {e: i + 1 for i, e in enumerate(
                sorted(self._left_edges_at(g, part, u11)))},
            "normalizing left target colors")
        d = col_l[helper_l]

        col_r = self._solve_block(g, gr, depth)
        hub_right = sorted(self._right_edges_at(g, part, hub))
        fixed = {hub_right[0]: 1, hub_right[1]: 2, e_hy: 3, eb_hub: d}
        col_r = self._rename_or_fail(col_r, fixed, "normalizing right target colors")
        d1, d2, d3 = col_r[eb_w1], col_r[eb_w2], col_r[eb_w3]

        col = self._transfer(g, (gl, col_l), (gr, col_r))
        shown = _colors_at(g, col, v11) | _colors_at(g, col, v12)
        claim = {1, 2, 3} <= shown
        u2, u3 = labels.children[u][1], labels.children[u][2]
        v2, v3 = labels.children[v][1], labels.children[v][2]
        if not claim:
            missing = sorted({1, 2, 3} - shown)
            if 3 not in missing:
                swap_with = missing[0]
                for e in sorted(part.left_edges):
                    if col.get(e) == 3:
                        col[e] = swap_with
                    elif col.get(e) == swap_with:
                        col[e] = 3
            _checked_assign(g, col, _eid(g, v1, hub), 3, "seeding the partner hub edge")
            _checked_assign(g, col, _eid(g, x, y), 3, "seeding the free branch edge")
            _checked_assign(g, col, _eid(g, w, w1), d1, "seeding the third branch edges")
            _checked_assign(g, col, _eid(g, w, w2), d2, "seeding the third branch edges")
            _checked_assign(g, col, _eid(g, w, w3), d3, "seeding the third branch edges")
            for zi, zp in ((u2, u), (u3, u), (v2, v), (v3, v)):
                self._greedy_down(g, col, zi, zp)
            order = [_eid(g, v1, v11), _eid(g, v1, v12), _eid(g, v, v1),
                     _eid(g, v, v2), _eid(g, v, v3), _eid(g, x, v),
                     _eid(g, x, w), _eid(g, x, u),
                     _eid(g, u, u2), _eid(g, u, u3),
                     _eid(g, u1, u11), _eid(g, u1, u12),
                     _eid(g, u1, hub), _eid(g, u, u1)]
        else:
            _checked_assign(g, col, _eid(g, x, y), 3, "seeding the free branch edge")
            _checked_assign(g, col, _eid(g, x, w), d, "seeding the anchor edge")
            _checked_assign(g, col, _eid(g, u1, hub), d, "seeding the hub edge")
            _checked_assign(g, col, _eid(g, w, w1), d1, "seeding the third branch edges")
            _checked_assign(g, col, _eid(g, w, w2), d2, "seeding the third branch edges")
            _checked_assign(g, col, _eid(g, w, w3), d3, "seeding the third branch edges")
            for zi, zp in ((u2, u), (u3, u), (v2, v), (v3, v)):
                self._greedy_down(g, col, zi, zp)
            order = [_eid(g, u, u2), _eid(g, u, u3),
                     _eid(g, u1, u11), _eid(g, u1, u12),
                     _eid(g, x, u), _eid(g, x, v),
                     _eid(g, v, v2), _eid(g, v, v3),
                     _eid(g, v1, v11), _eid(g, v1, v12),
                     _eid(g, v1, hub), _eid(g, v, v1), _eid(g, u, u1)]
        self._run_order(g, col, order)
        return self._finish(g, col)


# -- public operations ----------------------------------------------------------


def solve21(g: Graph):
    """Strong edge-coloring with at most 21 colors for max degree four.

    Returns (coloring, trace).  The coloring always verifies; if any
    proof-backed step failed along the way the trace shows fallback events
    and the affected subinstances were finished by the exact solver.
    """
    if g.max_degree() > 4:
        raise ValueError("solver requires maximum degree at most four")
    solver = _Solver()
    col = solver.solve(g, 0)
    coloring = PartialColoring(PALETTE, col)
    missing = set(g.edges()) - set(col)
    if missing:
        raise RuntimeError(f"solver left {len(missing)} edges uncolored")
    ok, witness = verify_strong_coloring(g, coloring)
    if not ok:
        raise RuntimeError(f"solver produced an invalid coloring: {witness}")
    return coloring, solver.trace


def reduce_low_degree(g: Graph, v: int):
    """Recursively color g - v and extend over v's at most three edges."""
    if g.degree(v) > 3:
        raise ValueError("vertex degree exceeds three")
    solver = _Solver()
    col = solver._low_degree(g, v, 0)
    return PartialColoring(PALETTE, col), solver.trace


def reduce_small_cut(g: Graph, cut: EdgeCut):
    """Split along a cut of at most three edges, color both sides, splice."""
    if len(cut.cut_edges) > 3:
        raise ValueError("cut has more than three edges")
    if not cut.side1 or not cut.side2:
        raise ValueError("cut sides must be nonempty")
    solver = _Solver()
    col = solver._small_cut(g, cut, 0)
    return PartialColoring(PALETTE, col), solver.trace


def reduce_short_cycle(g: Graph, conf: Configuration):
    """Delete the configuration's prescribed vertices, recurse, and complete."""
    if conf.kind not in CONFIGURATION_KINDS:
        raise ValueError(f"unknown configuration kind {conf.kind}")
    solver = _Solver()
    col = solver._short_cycle(g, conf, 0)
    return PartialColoring(PALETTE, col), solver.trace


def collaborative_color(g: Graph, part: VertexPartition) -> PartialColoring:
    """Color the two blocks independently and stitch them over the mid edges."""
    solver = _Solver()
    col = solver._collaborative(g, part, 0)
    return PartialColoring(PALETTE, col)
