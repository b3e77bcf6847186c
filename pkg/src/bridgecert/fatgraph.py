"""Fat-vertex graphs: plane multigraphs whose vertices are disks.

The embedding is a rotation system: each vertex carries the
counterclockwise cyclic order of its edge-ends (darts).  Besides the
usual graph operations this module implements the segment coloring
calculus: a *segment* is an edge or a boundary arc of a fat vertex
between consecutive edge-ends, an edge may be colored once both arcs
flanking one of its ends are colored, and an arc may be colored once a
flanking edge is.  The minimum number of arc seeds that color every
segment bounds the Wirtinger number of any diagram the graph came from.

Graphs with no cut vertex, no cut edge and no valency-one vertex (the
class written frak-G below) can be built from a single vertex by adding
loops, subdividing edges and adding edges; ``decompose`` recovers such
a build script and ``constructive_coloring`` turns it into a coloring
whose seed count is the number of faces, i.e. the number of vertices of
the plane dual.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .search import min_seed_cover, SearchStats


class FatGraphError(ValueError):
    pass


@dataclass(frozen=True)
class FatGraph:
    """Immutable fat graph: per-vertex dart rotations plus edge weights.

    Edge e has darts 2e and 2e + 1; every dart appears in exactly one
    rotation, exactly once.
    """

    rotations: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        n_darts = 2 * len(self.weights)
        seen: set[int] = set()
        for rot in self.rotations:
            for d in rot:
                if not (0 <= d < n_darts) or d in seen:
                    raise FatGraphError("invalid rotation system")
                seen.add(d)
        if len(seen) != n_darts:
            raise FatGraphError("some darts are missing from the rotations")
        for w in self.weights:
            if w == 0:
                raise FatGraphError("edge weights must be nonzero")

    @property
    def num_vertices(self) -> int:
        return len(self.rotations)

    @property
    def num_edges(self) -> int:
        return len(self.weights)

    def vertex_of_dart(self, d: int) -> int:
        return self._vertex_of[d]

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def endpoints(self, e: int) -> tuple[int, int]:
        return (self._vertex_of[2 * e], self._vertex_of[2 * e + 1])

    def __len__(self) -> int:
        return self.num_vertices

    def __post_init_maps__(self):
        pass

    def __getattr__(self, name):
        if name == "_vertex_of":
            vmap: dict[int, int] = {}
            for v, rot in enumerate(self.rotations):
                for d in rot:
                    vmap[d] = v
            object.__setattr__(self, "_vertex_of", vmap)
            return vmap
        raise AttributeError(name)

    def to_json(self) -> dict:
        return {
            "version": 1,
            "rotations": [list(r) for r in self.rotations],
            "weights": list(self.weights),
        }

    @staticmethod
    def from_json(data: dict) -> "FatGraph":
        if data.get("version") != 1:
            raise FatGraphError("unsupported fat graph JSON version")
        return FatGraph(
            tuple(tuple(r) for r in data["rotations"]),
            tuple(data["weights"]),
        )


def single_vertex() -> FatGraph:
    """The base graph: one fat vertex, no edges."""
    return FatGraph(((),), ())


def is_connected(g: FatGraph) -> bool:
    if g.num_vertices == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for d in g.rotations[v]:
            w = g.vertex_of_dart(d ^ 1)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.num_vertices


# -- faces and the dual ------------------------------------------------


@dataclass(frozen=True)
class FatFace:
    """One complementary region: the darts walked and the boundary arcs
    (vertex, arc index) passed along the way."""

    index: int
    darts: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]


def faces(g: FatGraph) -> tuple[FatFace, ...]:
    """Face orbits of the rotation system.

    Walking dart d, the next dart is the rotation successor of the
    opposite dart; the step passes the boundary arc just before it.
    Raises unless the embedding is planar (Euler count) and connected.
    """
    if not is_connected(g):
        raise FatGraphError("fat graph is not connected")
    if g.num_edges == 0:
        return (FatFace(0, (), ((0, 0),)),)
    pos: dict[int, tuple[int, int]] = {}
    for v, rot in enumerate(g.rotations):
        for i, d in enumerate(rot):
            pos[d] = (v, i)
    todo = set(pos)
    out: list[FatFace] = []
    for start in sorted(todo):
        if start not in todo:
            continue
        darts: list[int] = []
        arcs: list[tuple[int, int]] = []
        d = start
        while True:
            todo.discard(d)
            darts.append(d)
            v, i = pos[d ^ 1]
            deg = len(g.rotations[v])
            arcs.append((v, i))
            d = g.rotations[v][(i + 1) % deg]
            if d == start:
                break
        out.append(FatFace(len(out), tuple(darts), tuple(arcs)))
    if g.num_vertices - g.num_edges + len(out) != 2:
        raise FatGraphError(
            "rotation system is not a sphere embedding "
            "(V - E + F = %d)" % (g.num_vertices - g.num_edges + len(out))
        )
    return tuple(out)


@dataclass(frozen=True)
class DualGraph:
    """Plane dual: one vertex per region, one edge per fat-graph edge,
    weights inherited in absolute value."""

    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]

    def is_simple(self) -> tuple[bool, list[str]]:
        reasons = []
        pairs: set[tuple[int, int]] = set()
        for (u, v, _w) in self.edges:
            if u == v:
                reasons.append("dual has a loop at region %d" % u)
            key = (min(u, v), max(u, v))
            if key in pairs:
                reasons.append("dual has parallel edges between regions %d, %d" % key)
            pairs.add(key)
        return (not reasons, reasons)

    def to_json(self) -> dict:
        return {
            "version": 1,
            "num_vertices": self.num_vertices,
            "edges": [list(e) for e in self.edges],
        }


def gamma_dual(g: FatGraph) -> DualGraph:
    """The dual of the embedding: regions become vertices, and each edge
    joins the regions on its two sides (a loop when they coincide)."""
    fs = faces(g)
    face_of_dart: dict[int, int] = {}
    for f in fs:
        for d in f.darts:
            face_of_dart[d] = f.index
    edges = tuple(
        (face_of_dart[2 * e], face_of_dart[2 * e + 1], abs(g.weights[e]))
        for e in range(g.num_edges)
    )
    return DualGraph(len(fs), edges)


def is_twisted(g: FatGraph) -> tuple[bool, list[str]]:
    """A fat graph is twisted when every band has a full twist
    (|weight| >= 2) and the plane dual is a simple graph."""
    reasons = []
    for e, w in enumerate(g.weights):
        if abs(w) < 2:
            reasons.append("band %d below full twist (weight %d)" % (e, w))
    simple, dual_reasons = gamma_dual(g).is_simple()
    if not simple:
        reasons.extend("dual not simple: " + r for r in dual_reasons)
    return (not reasons, reasons)


# -- segments and the coloring calculus --------------------------------


@dataclass(frozen=True)
class Segment:
    """An edge of the graph, or a boundary arc of a fat vertex."""

    index: int
    kind: str  # "edge" | "arc"
    owner: tuple  # (edge,) or (vertex, arc position)


def segments(g: FatGraph) -> tuple[Segment, ...]:
    out = [Segment(e, "edge", (e,)) for e in range(g.num_edges)]
    for v in range(g.num_vertices):
        for i in range(max(g.degree(v), 1)):
            out.append(Segment(len(out), "arc", (v, i)))
    return tuple(out)


def _segment_tables(g: FatGraph):
    """Index arithmetic for the move rules.

    Arc (v, i) sits between rotation positions i and i+1 (mod deg); a
    dart at position p is flanked by arcs (v, p-1) and (v, p).
    """
    arc_base: dict[int, int] = {}
    nseg = g.num_edges
    for v in range(g.num_vertices):
        arc_base[v] = nseg
        nseg += max(g.degree(v), 1)

    # For each edge end: the two flanking arc segment ids.
    edge_flanks: list[tuple[tuple[int, int], tuple[int, int]]] = []
    for e in range(g.num_edges):
        ends = []
        for d in (2 * e, 2 * e + 1):
            v = g.vertex_of_dart(d)
            deg = g.degree(v)
            p = g.rotations[v].index(d)
            ends.append(
                (arc_base[v] + (p - 1) % deg, arc_base[v] + p)
            )
        edge_flanks.append((ends[0], ends[1]))

    # For each arc: the ids of the (up to two) incident edges.
    arc_edges: dict[int, tuple[int, ...]] = {}
    for v in range(g.num_vertices):
        deg = g.degree(v)
        if deg == 0:
            arc_edges[arc_base[v]] = ()
            continue
        for i in range(deg):
            e1 = g.rotations[v][i] // 2
            e2 = g.rotations[v][(i + 1) % deg] // 2
            arc_edges[arc_base[v] + i] = (e1, e2)
    return nseg, arc_base, edge_flanks, arc_edges


def num_segments(g: FatGraph) -> int:
    return _segment_tables(g)[0]


def propagate_fat(
    g: FatGraph,
    colored: set[int] | frozenset[int],
    rng: random.Random | None = None,
) -> tuple[frozenset[int], list[int]]:
    """Closure of a set of segments under the two coloring moves.

    Returns the closure and one witness order; the closure does not
    depend on the order moves are tried.
    """
    if not colored:
        raise ValueError("partial coloring must be nonempty")
    nseg, _base, edge_flanks, arc_edges = _segment_tables(g)
    for s in colored:
        if not (0 <= s < nseg):
            raise ValueError("unknown segment id %d" % s)
    mask = set(colored)
    order: list[int] = []
    items = list(range(nseg))
    progress = True
    while progress:
        progress = False
        if rng is not None:
            rng.shuffle(items)
        for s in items:
            if s in mask:
                continue
            if s < g.num_edges:
                # move (1) needs two distinct flanking arcs, both colored
                (a1, a2), (b1, b2) = edge_flanks[s]
                ok = (a1 != a2 and a1 in mask and a2 in mask) or (
                    b1 != b2 and b1 in mask and b2 in mask
                )
            else:
                ok = any(e in mask for e in arc_edges[s])
            if ok:
                mask.add(s)
                order.append(s)
                progress = True
    return frozenset(mask), order


def replay_fat(g: FatGraph, seeds: tuple[int, ...], order: tuple[int, ...]) -> bool:
    """Validate a fat-graph coloring sequence move by move.

    Seeds must be boundary arcs; together with the moves they must cover
    every segment exactly once.
    """
    nseg, _base, edge_flanks, arc_edges = _segment_tables(g)
    mask = set(seeds)
    if len(mask) != len(seeds) or not mask:
        return False
    if any(s < g.num_edges for s in seeds):
        return False
    for s in order:
        if s in mask or not (0 <= s < nseg):
            return False
        if s < g.num_edges:
            (a1, a2), (b1, b2) = edge_flanks[s]
            if not (
                (a1 != a2 and a1 in mask and a2 in mask)
                or (b1 != b2 and b1 in mask and b2 in mask)
            ):
                return False
        else:
            if not any(e in mask for e in arc_edges[s]):
                return False
        mask.add(s)
    return mask == set(range(nseg))


def omega_fat(
    g: FatGraph,
    *,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
) -> tuple[int, tuple[tuple[int, ...], tuple[int, ...]], SearchStats]:
    """Exact Wirtinger number of a fat graph by exhaustive seed search.

    Seeds range over non-edge segments only.  Returns
    (k, (seeds, move order), stats).
    """
    nseg, _base, _ef, _ae = _segment_tables(g)
    closure_cache: dict[int, int] = {}

    def close(mask_int: int) -> int:
        got = closure_cache.get(mask_int)
        if got is not None:
            return got
        colored = {i for i in range(nseg) if mask_int >> i & 1}
        closed, _ = propagate_fat(g, colored)
        out = 0
        for s in closed:
            out |= 1 << s
        closure_cache[mask_int] = out
        return out

    candidates = 0
    for s in range(g.num_edges, nseg):
        candidates |= 1 << s
    seeds, stats = min_seed_cover(
        nseg,
        close,
        candidates=candidates,
        budget_nodes=budget_nodes,
        budget_seconds=budget_seconds,
    )
    assert seeds is not None  # seeding every arc always colors everything
    closure, order = propagate_fat(g, set(seeds))
    assert closure == frozenset(range(nseg))
    return len(seeds), (tuple(seeds), tuple(order)), stats


# -- the class frak-G and its decomposition ----------------------------


def in_frak_g(g: FatGraph) -> tuple[bool, list[str]]:
    """Connected, no cut vertex, no cut edge, no valency-one vertex."""
    reasons: list[str] = []
    if not is_connected(g):
        return (False, ["not connected"])
    for v in range(g.num_vertices):
        if g.degree(v) == 1:
            reasons.append("vertex %d has valency one" % v)
    m = _Mutable.from_fatgraph(g)
    for v in sorted(m.rot):
        if m.is_cut_vertex(v):
            reasons.append("vertex %d is a cut vertex" % v)
    for e in sorted(m.weights):
        if m.is_cut_edge(e):
            reasons.append("edge %d is a cut edge" % e)
    return (not reasons, reasons)


class _Mutable:
    """Mutable fat graph with stable vertex/edge keys, used by the
    decomposition machinery.  Darts are (edge key, end)."""

    def __init__(self):
        self.rot: dict[int, list[tuple[int, int]]] = {}
        self.weights: dict[int, int] = {}

    @staticmethod
    def from_fatgraph(g: FatGraph) -> "_Mutable":
        m = _Mutable()
        for v, rot in enumerate(g.rotations):
            m.rot[v] = [(d // 2, d % 2) for d in rot]
        for e, w in enumerate(g.weights):
            m.weights[e] = w
        return m

    def copy(self) -> "_Mutable":
        m = _Mutable()
        m.rot = {v: list(r) for v, r in self.rot.items()}
        m.weights = dict(self.weights)
        return m

    def to_fatgraph(self) -> tuple["FatGraph", dict[int, int], dict[int, int]]:
        vmap = {v: i for i, v in enumerate(sorted(self.rot))}
        emap = {e: i for i, e in enumerate(sorted(self.weights))}
        rotations = tuple(
            tuple(2 * emap[e] + end for (e, end) in self.rot[v])
            for v in sorted(self.rot)
        )
        weights = tuple(self.weights[e] for e in sorted(self.weights))
        return FatGraph(rotations, weights), vmap, emap

    def vertex_of(self, dart: tuple[int, int]) -> int:
        for v, rot in self.rot.items():
            if dart in rot:
                return v
        raise KeyError(dart)

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def edge_ends(self, e: int) -> tuple[int, int]:
        return (self.vertex_of((e, 0)), self.vertex_of((e, 1)))

    def is_loop(self, e: int) -> bool:
        u, v = self.edge_ends(e)
        return u == v

    def connected_ignoring(self, skip_vertex=None, skip_edge=None) -> bool:
        verts = [v for v in self.rot if v != skip_vertex]
        if not verts:
            return True
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for (e, end) in self.rot[v]:
                if e == skip_edge:
                    continue
                w = self.vertex_of((e, end ^ 1))
                if w == skip_vertex or w in seen:
                    continue
                seen.add(w)
                stack.append(w)
        return len(seen) == len(verts)

    def is_cut_vertex(self, v: int) -> bool:
        if len(self.rot) <= 2:
            return False
        return not self.connected_ignoring(skip_vertex=v)

    def is_cut_edge(self, e: int) -> bool:
        if self.is_loop(e):
            return False
        return not self.connected_ignoring(skip_edge=e)

    # -- mutations, each also usable as an exact replay step ----------

    def insert_dart_after(self, v: int, dart, anchor) -> None:
        rot = self.rot[v]
        if anchor is None:
            rot.insert(0, dart)
        else:
            rot.insert(rot.index(anchor) + 1, dart)

    def remove_edge(self, e: int) -> dict:
        """Delete edge e; returns the forward add_edge op that restores it."""
        d0, d1 = (e, 0), (e, 1)
        v0, v1 = self.vertex_of(d0), self.vertex_of(d1)

        def anchor(v, dart, other_removed):
            rot = self.rot[v]
            i = rot.index(dart)
            for step in range(1, len(rot) + 1):
                cand = rot[(i - step) % len(rot)]
                if cand == other_removed or cand == dart:
                    continue
                return cand
            return None

        # d0 is re-inserted first on replay, so d1 may anchor on d0.
        a0 = anchor(v0, d0, d1)
        a1_rot = self.rot[v1]
        i1 = a1_rot.index(d1)
        a1 = None
        for step in range(1, len(a1_rot) + 1):
            cand = a1_rot[(i1 - step) % len(a1_rot)]
            if cand == d1:
                continue
            a1 = cand
            break
        op = {
            "kind": "add_edge",
            "edge": e,
            "weight": self.weights[e],
            "v0": v0,
            "anchor0": a0,
            "v1": v1,
            "anchor1": a1,
        }
        self.rot[v0].remove(d0)
        self.rot[v1].remove(d1)
        del self.weights[e]
        return op

    def apply_add_edge(self, op: dict) -> None:
        e = op["edge"]
        self.weights[e] = op["weight"]
        self.insert_dart_after(op["v0"], (e, 0), op["anchor0"])
        self.insert_dart_after(op["v1"], (e, 1), op["anchor1"])

    def smooth_vertex(self, v: int) -> dict:
        """Undo a subdivision at a degree-2 vertex with two distinct
        edges; returns the forward subdivide op.  The smaller edge id is
        kept as the merged edge."""
        (ea, enda), (eb, endb) = self.rot[v]
        assert ea != eb
        if eb < ea:
            (ea, enda), (eb, endb) = (eb, endb), (ea, enda)
        far_b = (eb, endb ^ 1)
        y = self.vertex_of(far_b)
        op = {
            "kind": "subdivide",
            "edge": ea,
            "moved_end": enda,
            "new_vertex": v,
            "new_edge": eb,
            "new_edge_far_end": endb ^ 1,
            "v_rotation": list(self.rot[v]),
            "weight_kept": self.weights[ea],
            "weight_new": self.weights[eb],
        }
        # The merged edge reuses ea's v-dart at y, in far_b's place.
        i = self.rot[y].index(far_b)
        self.rot[y][i] = (ea, enda)
        del self.rot[v]
        del self.weights[eb]
        return op

    def apply_subdivide(self, op: dict) -> None:
        e1 = op["edge"]
        moved = (e1, op["moved_end"])
        v = op["new_vertex"]
        e2 = op["new_edge"]
        far2 = (e2, op["new_edge_far_end"])
        y = None
        for vv, rot in self.rot.items():
            if moved in rot:
                y = vv
                break
        assert y is not None
        i = self.rot[y].index(moved)
        self.rot[y][i] = far2
        self.rot[v] = list(op["v_rotation"])
        self.weights[e1] = op["weight_kept"]
        self.weights[e2] = op["weight_new"]

    def apply(self, op: dict) -> None:
        if op["kind"] == "add_edge":
            self.apply_add_edge(op)
        else:
            self.apply_subdivide(op)


@dataclass(frozen=True)
class BuildScript:
    """Forward construction of a frak-G graph from a single vertex.

    ``ops`` carry exact replay data; ``summary()`` classifies each as
    add_loop / subdivide / add_edge.
    """

    start_vertex: int
    ops: tuple[dict, ...] = field(repr=False)

    def summary(self) -> list[str]:
        out = []
        for op in self.ops:
            if op["kind"] == "subdivide":
                out.append("subdivide")
            elif op["v0"] == op["v1"]:
                out.append("add_loop")
            else:
                out.append("add_edge")
        return out

    def replay(self) -> FatGraph:
        m = _Mutable()
        m.rot = {self.start_vertex: []}
        for op in self.ops:
            m.apply(op)
        return m.to_fatgraph()[0]


def decompose(g: FatGraph) -> BuildScript:
    """A build script for a frak-G graph, by undoing operations.

    Undo priority: loops first, then degree-2 vertices, then one edge of
    a theta subgraph.  Every intermediate stays in frak-G.
    """
    ok, reasons = in_frak_g(g)
    if not ok:
        raise FatGraphError("not in frak-G: " + "; ".join(reasons))
    m = _Mutable.from_fatgraph(g)
    undone: list[dict] = []
    while len(m.rot) + len(m.weights) > 1:
        loops = sorted(e for e in m.weights if m.is_loop(e))
        if loops:
            undone.append(m.remove_edge(loops[0]))
        else:
            deg2 = sorted(
                v
                for v in m.rot
                if m.degree(v) == 2 and m.rot[v][0][0] != m.rot[v][1][0]
            )
            if deg2:
                undone.append(m.smooth_vertex(deg2[0]))
            else:
                e1 = _theta_removal_edge(m)
                undone.append(m.remove_edge(e1))
        frozen = m.to_fatgraph()[0]
        ok, reasons = in_frak_g(frozen)
        if not ok:
            raise AssertionError(
                "decomposition left frak-G: " + "; ".join(reasons)
            )
    assert len(m.rot) == 1 and not m.weights
    return BuildScript(next(iter(m.rot)), tuple(reversed(undone)))


def _theta_removal_edge(m: _Mutable) -> int:
    """The edge to delete in the theta case: the smallest edge on the
    first path of the best embedded theta (shortest first path, then
    smallest vertex ids)."""
    g, vmap, emap = m.to_fatgraph()
    verdict = find_theta_or_cycle(g)
    if verdict[0] != "theta":
        raise AssertionError("loop-free, no degree-2 vertices, yet a cycle")
    _tag, (_u, _w, paths) = verdict
    inv_e = {i: e for e, i in emap.items()}
    first = paths[0]
    return min(inv_e[e] for e in first[0])


def find_theta_or_cycle(g: FatGraph):
    """Either the graph is a cycle or it contains an embedded theta.

    Requires a connected graph with no loops, no cut vertices and no cut
    edges.  Returns ("cycle", vertex list) or
    ("theta", (u, w, (path1, path2, path3))) with each path a pair
    (edge ids, vertex list) and the three paths internally disjoint.
    """
    for e in range(g.num_edges):
        u, v = g.endpoints(e)
        if u == v:
            raise FatGraphError("graph has a loop")
    ok, reasons = in_frak_g(g)
    if not ok:
        raise FatGraphError("precondition failed: " + "; ".join(reasons))
    if all(g.degree(v) == 2 for v in range(g.num_vertices)):
        order = [0]
        d = g.rotations[0][0]
        while True:
            far = d ^ 1
            w = g.vertex_of_dart(far)
            if w == 0:
                break
            order.append(w)
            r = g.rotations[w]
            d = r[1] if r[0] == far else r[0]
        return ("cycle", tuple(order))

    adjacency: dict[int, list[tuple[int, int]]] = {
        v: [] for v in range(g.num_vertices)
    }
    for e in range(g.num_edges):
        u, v = g.endpoints(e)
        adjacency[u].append((e, v))
        adjacency[v].append((e, u))

    def simple_paths(u, w):
        out = []

        def walk(v, edges, verts):
            if v == w:
                out.append((tuple(edges), tuple(verts)))
                return
            for (e, x) in sorted(adjacency[v]):
                if e in edges:
                    continue
                if x in verts[:-1] or (x in verts and x != w):
                    continue
                if x == u:
                    continue
                walk(x, edges + [e], verts + [x])

        walk(u, [], [u])
        return sorted(out, key=lambda p: (len(p[0]), p[0]))

    best = None
    for u in range(g.num_vertices):
        for w in range(u + 1, g.num_vertices):
            paths = simple_paths(u, w)
            for i in range(len(paths)):
                for j in range(i + 1, len(paths)):
                    if not _disjoint(paths[i], paths[j], u, w):
                        continue
                    for k in range(j + 1, len(paths)):
                        if _disjoint(paths[i], paths[k], u, w) and _disjoint(
                            paths[j], paths[k], u, w
                        ):
                            cand = (u, w, (paths[i], paths[j], paths[k]))
                            key = (len(paths[i][0]), u, w)
                            if best is None or key < best[0]:
                                best = (key, cand)
                            break
                    else:
                        continue
                    break
                else:
                    continue
                break
    if best is None:
        raise AssertionError("no theta found in a non-cycle frak-G graph")
    return ("theta", best[1])


def _disjoint(p, q, u, w) -> bool:
    if set(p[0]) & set(q[0]):
        return False
    inner_p = set(p[1]) - {u, w}
    inner_q = set(q[1]) - {u, w}
    return not (inner_p & inner_q)


def split_at_cut_vertices(g: FatGraph) -> list[FatGraph]:
    """Block factors of a connected fat graph.

    Each factor keeps a copy of every cut vertex it meets; gluing the
    factors back at those copies reconstructs the graph.
    """
    if not is_connected(g):
        raise FatGraphError("fat graph is not connected")
    result: list[FatGraph] = []
    queue = [_Mutable.from_fatgraph(g)]
    fresh = g.num_vertices
    while queue:
        m = queue.pop()
        cuts = sorted(v for v in m.rot if m.is_cut_vertex(v))
        loop_cut = None
        if not cuts:
            # A vertex carrying a loop plus anything else still splits.
            for v in sorted(m.rot):
                loops = [(e, end) for (e, end) in m.rot[v] if m.is_loop(e)]
                if loops and len(loops) < m.degree(v):
                    loop_cut = v
                    break
            if loop_cut is None:
                result.append(m.to_fatgraph()[0])
                continue
        v = cuts[0] if cuts else loop_cut
        groups: dict[int, list[int]] = {}
        for (e, end) in m.rot[v]:
            if m.is_loop(e):
                groups.setdefault(-1 - e, []).append(e)
            else:
                far = m.vertex_of((e, end ^ 1))
                comp = _component_without(m, far, v)
                key = min(comp)
                groups.setdefault(key, []).append(e)
        for key, edge_list in sorted(groups.items()):
            part = _Mutable()
            edge_set = set(edge_list)
            if key >= 0:
                comp = _component_without(m, key, v)
                for u in comp:
                    part.rot[u] = list(m.rot[u])
                    for (e, _end) in m.rot[u]:
                        edge_set.add(e)
            part.rot[fresh] = [
                (e, end) for (e, end) in m.rot[v] if e in edge_set
            ]
            for e in edge_set:
                part.weights[e] = m.weights[e]
            fresh += 1
            queue.append(part)
    return sorted(
        result, key=lambda h: (h.num_vertices, h.num_edges, canonical_code(h))
    )


def _component_without(m: _Mutable, start: int, banned: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for (e, end) in m.rot[x]:
            y = m.vertex_of((e, end ^ 1))
            if y != banned and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


# -- canonical codes and isomorphism -----------------------------------


def canonical_code(g: FatGraph) -> tuple:
    """A complete invariant of the embedded graph up to relabeling and
    reflection (weights ignored)."""
    if g.num_edges == 0:
        return ("trivial", g.num_vertices)

    def code_from(rotations, start):
        pos = {}
        for v, rot in enumerate(rotations):
            for i, d in enumerate(rot):
                pos[d] = (v, i)
        label = {start: 0}
        order = [start]
        out = []
        i = 0
        while i < len(order):
            d = order[i]
            i += 1
            v, p = pos[d]
            rot = rotations[v]
            succ = rot[(p + 1) % len(rot)]
            opp = d ^ 1
            for nxt in (succ, opp):
                if nxt not in label:
                    label[nxt] = len(order)
                    order.append(nxt)
            out.append((label[succ], label[opp]))
        return tuple(out)

    best = None
    for mirror in (False, True):
        rotations = (
            tuple(tuple(reversed(r)) for r in g.rotations)
            if mirror
            else g.rotations
        )
        for start in range(2 * g.num_edges):
            code = code_from(rotations, start)
            if best is None or code < best:
                best = code
    return best


def isomorphic(a: FatGraph, b: FatGraph) -> bool:
    return canonical_code(a) == canonical_code(b)


# -- constructive coloring along a build script ------------------------


def constructive_coloring(g: FatGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """A coloring sequence for a frak-G graph with one seed per region.

    Built inductively along the decomposition: a subdivision splices the
    two half-edges and the new vertex's arcs into the old sequence
    without new seeds, and a new edge adds exactly one new seed.  The
    result is replay-validated; seed count equals the number of faces.
    """
    script = decompose(g)
    m = _Mutable()
    m.rot = {script.start_vertex: []}
    seq: list[tuple] = [("arc", script.start_vertex, None)]
    n_seeds = 1

    for op in script.ops:
        if op["kind"] == "subdivide":
            seq = _splice_subdivide(m, seq, n_seeds, op)
        else:
            seq, n_seeds = _splice_add_edge(m, seq, n_seeds, op)
        m.apply(op)
        assert _replay_keys(m, seq, n_seeds), "splice broke the coloring"

    final, vmap, emap = m.to_fatgraph()
    assert isomorphic(final, g)
    ids = [_key_to_id(g, vmap, emap, key) for key in seq]
    seeds, order = tuple(ids[:n_seeds]), tuple(ids[n_seeds:])
    if not replay_fat(g, seeds, order):
        raise AssertionError("constructive coloring fails replay")
    if len(seeds) != len(faces(g)):
        raise AssertionError("seed count differs from region count")
    return seeds, order


def _arc_keys(m: _Mutable, v: int) -> list[tuple]:
    rot = m.rot[v]
    if not rot:
        return [("arc", v, None)]
    return [("arc", v, d) for d in rot]


def _arc_before(m: _Mutable, v: int, dart) -> tuple:
    """The arc ending at (i.e. counterclockwise before) a dart."""
    rot = m.rot[v]
    i = rot.index(dart)
    return ("arc", v, rot[(i - 1) % len(rot)])


def _arc_after(m: _Mutable, v: int, dart) -> tuple:
    return ("arc", v, dart)


def _edge_flank_keys(m: _Mutable, e: int):
    out = []
    for end in (0, 1):
        d = (e, end)
        v = m.vertex_of(d)
        out.append((_arc_before(m, v, d), _arc_after(m, v, d)))
    return out


def _arc_edge_keys(m: _Mutable, key) -> tuple[int, ...]:
    _tag, v, d = key
    if d is None:
        return ()
    rot = m.rot[v]
    i = rot.index(d)
    return (d[0], rot[(i + 1) % len(rot)][0])


def _replay_keys(m: _Mutable, seq: list[tuple], n_seeds: int) -> bool:
    all_segments = {("edge", e) for e in m.weights}
    for v in m.rot:
        all_segments.update(_arc_keys(m, v))
    colored = set(seq[:n_seeds])
    if len(colored) != n_seeds:
        return False
    if any(key[0] == "edge" for key in colored):
        return False
    for key in seq[n_seeds:]:
        if key in colored or key not in all_segments:
            return False
        if key[0] == "edge":
            fl = _edge_flank_keys(m, key[1])
            if not any(
                a != b and a in colored and b in colored for (a, b) in fl
            ):
                return False
        else:
            if not any(("edge", e) in colored for e in _arc_edge_keys(m, key)):
                return False
        colored.add(key)
    return colored == all_segments


def _splice_subdivide(m: _Mutable, seq: list[tuple], n_seeds: int, op: dict):
    e1 = op["edge"]
    moved = (e1, op["moved_end"])
    v = op["new_vertex"]
    e2 = op["new_edge"]
    far2 = (e2, op["new_edge_far_end"])
    y = m.vertex_of(moved)

    r = seq.index(("edge", e1))
    assert r >= n_seeds

    # Which endpoint could have colored e1 at its position in the old
    # sequence?  The half at that endpoint is colored first.
    colored = set(seq[:r])
    flanks = _edge_flank_keys(m, e1)
    from_x = flanks[op["moved_end"] ^ 1]
    from_y = flanks[op["moved_end"]]
    can_x = from_x[0] in colored and from_x[1] in colored
    assert can_x or (from_y[0] in colored and from_y[1] in colored)

    # After the op: e1 spans x..v, e2 spans v..y; v's arcs follow its
    # recorded rotation.
    rot_v = op["v_rotation"]
    arc_a = ("arc", v, rot_v[0])
    arc_b = ("arc", v, rot_v[1])
    half_x = ("edge", e1)
    half_y = ("edge", e2)
    first, second = (half_x, half_y) if can_x else (half_y, half_x)

    out = []
    for i, key in enumerate(seq):
        if i == r:
            out.extend([first, arc_a, arc_b, second])
        elif key[0] == "arc" and key[1] == y and key[2] == moved:
            out.append(("arc", y, far2))
        else:
            out.append(key)
    return out


def _splice_add_edge(m: _Mutable, seq: list[tuple], n_seeds: int, op: dict):
    """Insert a new edge's segments into an existing coloring sequence.

    The new edge subdivides one or two boundary arcs.  If the earlier of
    them was a seed, its two pieces flanking one endpoint become seeds
    (the paper's Case B1); otherwise the piece away from the edge that
    colored it becomes a fresh seed and the other piece is recolored in
    place (Case B2).  Either way the seed count grows by exactly one.
    """
    e = op["edge"]
    edge_key = ("edge", e)

    def target_arc(v, anchor):
        rot = m.rot[v]
        if not rot:
            return ("arc", v, None)
        if anchor is None:
            return ("arc", v, rot[-1])
        return ("arc", v, anchor)

    arc_a = target_arc(op["v0"], op["anchor0"])
    anchor1 = op["anchor1"]
    if anchor1 == (e, 0):
        arc_b = arc_a
    else:
        arc_b = target_arc(op["v1"], anchor1)
    same_arc = arc_a == arc_b

    # Inspect the post-op graph: piece structure and the flank pairs of
    # the new edge fall out of it directly.
    scratch = m.copy()
    scratch.apply_add_edge(op)
    flank_pairs = _edge_flank_keys(scratch, e)

    def pieces_of(old_arc):
        _tag, v, start = old_arc
        rot = scratch.rot[v]
        if start is None:
            # the full-circle arc of a bare vertex: two cyclic pieces
            return [("arc", v, d) for d in rot]
        out = [old_arc]
        i = rot.index(start)
        # walk forward collecting pieces created by newly inserted darts
        for step in range(1, len(rot)):
            d = rot[(i + step) % len(rot)]
            if d in ((e, 0), (e, 1)):
                out.append(("arc", v, d))
            else:
                break
        return out

    if same_arc:
        i0 = seq.index(arc_a)
        pieces = pieces_of(arc_a)
        assert len(pieces) in (2, 3)
        b_pos = None
    else:
        ia, ib = seq.index(arc_a), seq.index(arc_b)
        if ib < ia:
            arc_a, arc_b = arc_b, arc_a
            ia, ib = ib, ia
        i0, b_pos = ia, ib
        pieces = pieces_of(arc_a)
        pieces_b = pieces_of(arc_b)
        assert len(pieces) == 2 and len(pieces_b) == 2

    a_is_seed = i0 < n_seeds
    piece_set = set(pieces)

    if a_is_seed:
        # Use a flank pair of the new edge consisting of a-pieces only.
        seed_pair = None
        for pair in flank_pairs:
            if pair[0] in piece_set and pair[1] in piece_set:
                seed_pair = pair
                break
        assert seed_pair is not None
        new_seeds: list[tuple] = []
        b_was_seed = (not same_arc) and b_pos < n_seeds
        for key in seq[:n_seeds]:
            if key == arc_a:
                new_seeds.extend(dict.fromkeys(seed_pair))
            elif (not same_arc) and key == arc_b and b_was_seed:
                continue
            else:
                new_seeds.append(key)
        if same_arc:
            leftover = [p for p in pieces if p not in seed_pair]
            chunk = [edge_key] + leftover
            rest = list(seq[n_seeds:])
        else:
            chunk = [edge_key] + pieces_b
            rest = [k for k in seq[n_seeds:] if k != arc_b]
        return new_seeds + chunk + rest, len(new_seeds)

    # Case B2: arc_a was colored via an incident colored edge s_l.
    colored = set(seq[:i0])
    s_l = None
    for inc in _arc_edge_keys(m, arc_a):
        if ("edge", inc) in colored:
            s_l = inc
            break
    if s_l is None:
        raise AssertionError("arc was colored without an incident colored edge")
    # a2 = the piece still incident to s_l after subdivision.
    a2 = None
    for p in pieces:
        if s_l in _arc_edge_keys(scratch, p):
            a2 = p
            break
    assert a2 is not None
    # a1 = the piece flanking the same endpoint of the new edge as a2.
    a1 = None
    for pair in flank_pairs:
        if a2 in pair:
            other = pair[0] if pair[1] == a2 else pair[1]
            if other in piece_set and other != a2:
                a1 = other
                break
    assert a1 is not None
    if same_arc:
        leftover = [p for p in pieces if p not in (a1, a2)]
        chunk = [a2, edge_key] + leftover
        tail = list(seq[i0 + 1:])
    else:
        chunk = [a2, edge_key] + pieces_b
        tail = [k for k in seq[i0 + 1:] if k != arc_b]
    out = [a1] + list(seq[:i0]) + chunk + tail
    return out, n_seeds + 1


def _key_to_id(g: FatGraph, vmap, emap, key) -> int:
    """Translate a stable segment key into the input graph's segment id.

    The replayed mutable agrees with the input up to cyclic rotation of
    each vertex's dart list, so arc positions are located in the input's
    rotation tuples.
    """
    _nseg, arc_base, _ef, _ae = _segment_tables(g)
    if key[0] == "edge":
        return emap[key[1]]
    _tag, v, d = key
    cv = vmap[v]
    if d is None:
        return arc_base[cv]
    dart = 2 * emap[d[0]] + d[1]
    i = g.rotations[cv].index(dart)
    return arc_base[cv] + i


# -- enumeration of frak-G graphs --------------------------------------


def enumerate_frak_g(max_edges: int):
    """All frak-G graphs with at most ``max_edges`` edges, one per
    isomorphism class of embedded graphs, by closure under the three
    building operations."""
    g0 = single_vertex()
    seen = {canonical_code(g0)}
    frontier = [g0]
    yield g0
    while frontier:
        g = frontier.pop()
        if g.num_edges >= max_edges:
            continue
        for h in _extensions(g):
            code = canonical_code(h)
            if code in seen:
                continue
            seen.add(code)
            frontier.append(h)
            yield h


def _extensions(g: FatGraph):
    m0 = _Mutable.from_fatgraph(g)
    new_e = g.num_edges

    arcs_by_face: list[list[tuple]] = []
    if g.num_edges == 0:
        arcs_by_face = [[(0, None)]]
    else:
        for f in faces(g):
            arcs = []
            for (v, i) in f.arcs:
                arcs.append((v, g.rotations[v][i] if g.degree(v) else None))
            arcs_by_face.append(arcs)

    # add an edge between two arcs on a common face (both orders give
    # the same graph, and same-arc insertion is the loop case)
    for arcs in arcs_by_face:
        for i in range(len(arcs)):
            for j in range(i, len(arcs)):
                m = m0.copy()
                (va, da) = arcs[i]
                (vb, db) = arcs[j]
                va_key = _mut_vertex(m, va)
                vb_key = _mut_vertex(m, vb)
                anchor_a = _mut_dart(da)
                anchor_b = _mut_dart(db) if i != j else (new_e, 0)
                m.apply_add_edge(
                    {
                        "kind": "add_edge",
                        "edge": new_e,
                        "weight": 1,
                        "v0": va_key,
                        "anchor0": anchor_a,
                        "v1": vb_key,
                        "anchor1": anchor_b,
                    }
                )
                h = m.to_fatgraph()[0]
                if in_frak_g(h)[0]:
                    yield h

    # subdivide each edge
    for e in range(g.num_edges):
        m = m0.copy()
        m.apply_subdivide(
            {
                "kind": "subdivide",
                "edge": e,
                "moved_end": 1,
                "new_vertex": g.num_vertices,
                "new_edge": new_e,
                "new_edge_far_end": 1,
                "v_rotation": [(e, 1), (new_e, 0)],
                "weight_kept": 1,
                "weight_new": 1,
            }
        )
        h = m.to_fatgraph()[0]
        if in_frak_g(h)[0]:
            yield h


def _mut_vertex(m: _Mutable, v: int) -> int:
    return v


def _mut_dart(d):
    if d is None:
        return None
    return (d // 2, d % 2)
