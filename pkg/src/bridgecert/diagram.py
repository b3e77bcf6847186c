"""Combinatorial link diagrams from PD codes.

A diagram is stored as a list of crossings, each a counterclockwise
rotation of four arc labels with slot 0 the incoming under-arc (the usual
PD convention).  All derived structure -- strands, faces, twist regions,
under/over adjacency -- is computed eagerly at parse time and the whole
object is immutable afterwards.

Conventions fixed by this package (the source papers work from pictures
and never pin these down):

* Slots 0 and 2 of a crossing carry the under-strand, slots 1 and 3 the
  over-strand.  Slot order is counterclockwise in the plane.
* Faces are traced with the rule ``next dart = rotate(other end of arc)``,
  which walks each complementary region once; a connected diagram with n
  crossings has exactly n + 2 faces.
* Face 0, the first face traced from the lowest-numbered crossing's slot
  0, plays the role of the unbounded region wherever a choice is needed.
  Nothing downstream depends on the choice mathematically.
* The sign of a twist region is computed from the rotation system by
  orienting both of its strands along the chain of crossings; this is
  well defined for chains of length >= 2 and set to +1 for isolated
  crossings, where no chain direction exists.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field


class DiagramError(ValueError):
    """Raised for malformed PD input or invalid diagram structure."""


# A dart is a pair (crossing index, slot); it points out of the crossing
# into the arc attached at that slot.
Dart = tuple[int, int]


@dataclass(frozen=True)
class Crossing:
    """One crossing: four arc labels in counterclockwise rotation order.

    ``slots[0]`` is the incoming under-arc; the under-strand occupies
    slots 0 and 2, the over-strand slots 1 and 3.
    """

    index: int
    slots: tuple[int, int, int, int]

    @property
    def under_arcs(self) -> tuple[int, int]:
        return (self.slots[0], self.slots[2])

    @property
    def over_arcs(self) -> tuple[int, int]:
        return (self.slots[1], self.slots[3])


@dataclass(frozen=True)
class Arc:
    """An arc of the diagram: a segment between two crossing slots."""

    label: int
    endpoints: tuple[Dart, Dart]

    def other_end(self, dart: Dart) -> Dart:
        a, b = self.endpoints
        return b if dart == a else a


@dataclass(frozen=True)
class Strand:
    """A maximal over-path: arcs glued through over-passages.

    Every strand ends in an under-passage at both ends (possibly at the
    same crossing), so a connected n-crossing diagram has n strands.
    """

    index: int
    arcs: tuple[int, ...]


@dataclass(frozen=True)
class Face:
    """A complementary region, as the cyclic list of darts along it.

    ``corners`` lists the (crossing, corner) visits of the walk, where
    corner c sits between slots c and c+1 of the crossing.  Corner parity
    is constant along a face and gives the checkerboard coloring.
    """

    index: int
    darts: tuple[Dart, ...]
    corners: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class TwistRegion:
    """A maximal chain of crossings linked end-to-end by bigon faces."""

    crossings: tuple[int, ...]
    signed_length: int
    bigon_faces: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.crossings)


@dataclass(frozen=True)
class Diagram:
    """A validated link diagram with all derived structure populated."""

    crossings: tuple[Crossing, ...]
    arcs: dict[int, Arc] = field(repr=False)
    strands: tuple[Strand, ...] = field(repr=False)
    faces: tuple[Face, ...] = field(repr=False)
    twist_regions: tuple[TwistRegion, ...] = field(repr=False)
    # One triple (under strand, under strand, over strand) per crossing.
    adjacency: tuple[tuple[int, int, int], ...] = field(repr=False)
    strand_of_arc: dict[int, int] = field(repr=False)

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)

    @property
    def num_strands(self) -> int:
        return len(self.strands)

    def face_of_corner(self, crossing: int, corner: int) -> int:
        return self._corner_face[(crossing, corner)]

    def face_of_dart(self, dart: Dart) -> int:
        return self._dart_face[dart]

    def arc_sides(self, label: int) -> tuple[int, int]:
        """The two faces flanking an arc (one per dart)."""
        a, b = self.arcs[label].endpoints
        return (self._dart_face[a], self._dart_face[b])

    def __post_init__(self) -> None:
        dart_face: dict[Dart, int] = {}
        corner_face: dict[tuple[int, int], int] = {}
        for f in self.faces:
            for d in f.darts:
                dart_face[d] = f.index
            for c in f.corners:
                corner_face[c] = f.index
        object.__setattr__(self, "_dart_face", dart_face)
        object.__setattr__(self, "_corner_face", corner_face)

    # -- serialization -------------------------------------------------

    def to_pd(self) -> str:
        return " ".join(
            "X[%d,%d,%d,%d]" % c.slots for c in self.crossings
        )

    def to_json(self) -> dict:
        return {"version": 1, "crossings": [list(c.slots) for c in self.crossings]}

    @staticmethod
    def from_json(data: dict) -> "Diagram":
        if data.get("version") != 1:
            raise DiagramError("unsupported diagram JSON version")
        return parse_pd(
            " ".join("X[%d,%d,%d,%d]" % tuple(c) for c in data["crossings"])
        )


_TOKEN = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


def parse_pd(text: str) -> Diagram:
    """Parse a PD-code string like ``"X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]"``.

    Arc labels are positive integers, each appearing exactly twice.  The
    slot order of each token is taken verbatim as the counterclockwise
    rotation, with the first entry the incoming under-arc.
    """
    stripped = text.strip()
    if not stripped:
        raise DiagramError("empty PD code")
    pos = 0
    slots_list: list[tuple[int, int, int, int]] = []
    for m in _TOKEN.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise DiagramError(
                "malformed token near %r" % stripped[pos:m.start()].strip()
            )
        a, b, c, d = (int(m.group(i)) for i in range(1, 5))
        if 0 in (a, b, c, d):
            raise DiagramError("arc labels must be positive")
        slots_list.append((a, b, c, d))
        pos = m.end()
    if stripped[pos:].strip():
        raise DiagramError("malformed token near %r" % stripped[pos:].strip())
    return _build(slots_list)


def _build(slots_list: list[tuple[int, int, int, int]]) -> Diagram:
    try:
        return _build_exact(slots_list)
    except DiagramError as err:
        if "not planar" not in str(err):
            raise
    # Classical PD sources leave the over-strand slot order at each
    # crossing undetermined, so a verbatim reading of such a code can
    # fail to be planar.  Resolve deterministically: try swapping the
    # over slots (b and d) at crossings, in lexicographic order of the
    # swap set, and keep the first planar reading.
    n = len(slots_list)
    if n > 16:
        raise DiagramError(
            "rotation system is not planar and the diagram is too large "
            "for planar resolution (%d crossings > 16)" % n
        )
    for mask in range(1, 1 << n):
        resolved = [
            (a, d, c, b) if mask >> i & 1 else (a, b, c, d)
            for i, (a, b, c, d) in enumerate(slots_list)
        ]
        try:
            return _build_exact(resolved)
        except DiagramError as err:
            if "not planar" not in str(err):
                raise
    raise DiagramError("no planar resolution of the PD code exists")


def _build_exact(slots_list: list[tuple[int, int, int, int]]) -> Diagram:
    crossings = tuple(Crossing(i, s) for i, s in enumerate(slots_list))

    ends: dict[int, list[Dart]] = {}
    for c in crossings:
        for slot, label in enumerate(c.slots):
            ends.setdefault(label, []).append((c.index, slot))
    bad = sorted(lab for lab, es in ends.items() if len(es) != 2)
    if bad:
        raise DiagramError(
            "arc labels %s do not appear exactly twice" % bad
        )
    arcs = {
        lab: Arc(lab, (es[0], es[1])) for lab, es in sorted(ends.items())
    }

    _check_connected(crossings, arcs)

    strands, strand_of_arc = _trace_strands(crossings, arcs)
    faces = _trace_faces(crossings, arcs)
    twist_regions = _twist_regions(crossings, arcs, faces)

    adjacency = []
    for c in crossings:
        i = strand_of_arc[c.slots[0]]
        j = strand_of_arc[c.slots[2]]
        k = strand_of_arc[c.slots[1]]
        if strand_of_arc[c.slots[3]] != k:
            raise DiagramError(
                "over-arcs of crossing %d lie on different strands" % c.index
            )
        adjacency.append((i, j, k))

    return Diagram(
        crossings=crossings,
        arcs=arcs,
        strands=strands,
        faces=faces,
        twist_regions=twist_regions,
        adjacency=tuple(adjacency),
        strand_of_arc=strand_of_arc,
    )


def _check_connected(crossings, arcs) -> None:
    if not crossings:
        raise DiagramError("diagram has no crossings")
    seen = {0}
    stack = [0]
    while stack:
        ci = stack.pop()
        for label in crossings[ci].slots:
            for (cj, _slot) in arcs[label].endpoints:
                if cj not in seen:
                    seen.add(cj)
                    stack.append(cj)
    if len(seen) != len(crossings):
        raise DiagramError("diagram is not connected")


def _trace_strands(crossings, arcs):
    """Glue arcs through over-passages into strands.

    At each crossing the arcs in slots 1 and 3 belong to one strand; the
    arcs in slots 0 and 2 terminate there.
    """
    glue: dict[int, set[int]] = {lab: set() for lab in arcs}
    for c in crossings:
        glue[c.slots[1]].add(c.slots[3])
        glue[c.slots[3]].add(c.slots[1])

    unvisited = set(arcs)
    raw: list[list[int]] = []
    while unvisited:
        start = min(unvisited)
        comp = [start]
        unvisited.discard(start)
        frontier = [start]
        while frontier:
            lab = frontier.pop()
            for nxt in glue[lab]:
                if nxt in unvisited:
                    unvisited.discard(nxt)
                    comp.append(nxt)
                    frontier.append(nxt)
        raw.append(sorted(comp))

    raw.sort(key=lambda c: c[0])
    strands = []
    strand_of_arc: dict[int, int] = {}
    for i, comp in enumerate(raw):
        ordered = _order_strand_arcs(comp, glue)
        strands.append(Strand(i, tuple(ordered)))
        for lab in comp:
            strand_of_arc[lab] = i
    return tuple(strands), strand_of_arc


def _order_strand_arcs(comp: list[int], glue) -> list[int]:
    if len(comp) == 1:
        return comp
    degree = {lab: len(glue[lab] & set(comp)) for lab in comp}
    endpoints = sorted(lab for lab, d in degree.items() if d == 1)
    start = endpoints[0] if endpoints else min(comp)
    ordered = [start]
    prev = None
    cur = start
    while len(ordered) < len(comp):
        nxts = [x for x in glue[cur] if x != prev and x in degree]
        nxt = nxts[0]
        ordered.append(nxt)
        prev, cur = cur, nxt
    return ordered


def _trace_faces(crossings, arcs) -> tuple[Face, ...]:
    """Orbit decomposition of darts under sigma(alpha(dart)).

    Each orbit is a face; the step arriving at (c, s) and leaving at
    (c, s + 1) records the corner s of crossing c.
    """
    todo: set[Dart] = {
        (c.index, s) for c in crossings for s in range(4)
    }
    order = sorted(todo)
    faces: list[Face] = []
    for start in order:
        if start not in todo:
            continue
        darts: list[Dart] = []
        corners: list[tuple[int, int]] = []
        d = start
        while True:
            todo.discard(d)
            darts.append(d)
            ci, slot = d
            far = arcs[crossings[ci].slots[slot]].other_end(d)
            fc, fs = far
            corners.append((fc, fs))
            d = (fc, (fs + 1) % 4)
            if d == start:
                break
        faces.append(Face(len(faces), tuple(darts), tuple(corners)))

    n = len(crossings)
    if len(faces) != n + 2:
        raise DiagramError(
            "face count %d does not match crossings + 2 = %d; "
            "rotation system is not planar" % (len(faces), n + 2)
        )
    return tuple(faces)


def _twist_regions(crossings, arcs, faces) -> tuple[TwistRegion, ...]:
    """Partition the crossings into maximal bigon chains.

    Bigon faces whose two corners sit at distinct crossings link those
    crossings.  Links are adopted in ascending face order, skipping any
    that would give a crossing three chain neighbours or close a cycle;
    this breaks the (rare) cyclic and branching ambiguities
    deterministically.
    """
    n = len(crossings)
    neighbours: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    links: list[tuple[int, int, int]] = []
    for f in faces:
        if len(f) != 2:
            continue
        (c1, _), (c2, _) = f.corners
        if c1 == c2:
            continue
        links.append((f.index, c1, c2))
    used_pairs: set[tuple[int, int]] = set()
    for fid, c1, c2 in links:
        pair = (min(c1, c2), max(c1, c2))
        if pair in used_pairs:
            continue
        if len(neighbours[c1]) >= 2 or len(neighbours[c2]) >= 2:
            continue
        if find(c1) == find(c2):
            continue
        used_pairs.add(pair)
        neighbours[c1].append((c2, fid))
        neighbours[c2].append((c1, fid))
        parent[find(c1)] = find(c2)

    seen: set[int] = set()
    regions: list[TwistRegion] = []
    for start in range(n):
        if start in seen:
            continue
        comp = _component(start, neighbours)
        seen.update(comp)
        chain, bigons = _order_chain(comp, neighbours)
        sign = _chain_sign(chain, bigons, crossings, arcs, faces)
        regions.append(
            TwistRegion(tuple(chain), sign * len(chain), tuple(bigons))
        )
    return tuple(regions)


def _component(start, neighbours):
    comp = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for (y, _f) in neighbours[x]:
            if y not in comp:
                comp.add(y)
                stack.append(y)
    return comp


def _order_chain(comp, neighbours):
    if len(comp) == 1:
        return [next(iter(comp))], []
    endpoints = sorted(c for c in comp if len(neighbours[c]) == 1)
    cur = endpoints[0]
    chain = [cur]
    bigons = []
    prev = None
    while True:
        nxts = [(y, f) for (y, f) in neighbours[cur] if y != prev]
        if not nxts:
            break
        (y, f) = nxts[0]
        bigons.append(f)
        chain.append(y)
        prev, cur = cur, y
    return chain, bigons


def _chain_sign(chain, bigons, crossings, arcs, faces) -> int:
    """Sign of a twist region from chain-oriented strands.

    With both strands of the region oriented along the chain, all
    crossings of a genuine (alternating) twist region share one sign; it
    is +1 exactly when the slot counterclockwise-after the incoming under
    slot also points backward along the chain.
    """
    if len(chain) == 1:
        return 1
    signs = []
    for pos, ci in enumerate(chain):
        if pos < len(chain) - 1:
            link_face = faces[bigons[pos]]
            toward_next = True
        else:
            link_face = faces[bigons[pos - 1]]
            toward_next = False
        link_arcs = {crossings[d[0]].slots[d[1]] for d in link_face.darts}
        link_slots = {
            s for s in range(4) if crossings[ci].slots[s] in link_arcs
        }
        # The linking bigon occupies one corner: two adjacent slots.
        if len(link_slots) != 2:
            continue
        forward = link_slots if toward_next else {0, 1, 2, 3} - link_slots
        under_in = 0 if 0 not in forward else 2
        succ = (under_in + 1) % 4
        signs.append(1 if succ not in forward else -1)
    if not signs:
        return 1
    if all(s == signs[0] for s in signs):
        return signs[0]
    # Mixed signs only occur in reducible chains; report the net twist.
    return 1 if sum(signs) >= 0 else -1


def faces_of(diagram: Diagram) -> tuple[Face, ...]:
    return diagram.faces


def twist_regions_of(diagram: Diagram) -> tuple[TwistRegion, ...]:
    return diagram.twist_regions


def is_reduced(diagram: Diagram) -> tuple[bool, list[dict]]:
    """Check for reducing moves of type I and II, syntactically.

    Returns ``(flag, violations)`` where each violation names a face:
    a monogon (a kink, removable by a type I move) or a cancellable
    bigon, i.e. one whose two crossings are passed over by the same
    strand (removable by a type II move).
    """
    violations: list[dict] = []
    for f in diagram.faces:
        if len(f) == 1:
            violations.append({"face": f.index, "kind": "monogon"})
        elif len(f) == 2:
            (c1, _), (c2, _) = f.corners
            if c1 == c2:
                continue
            for d in f.darts:
                ci, slot = d
                label = diagram.crossings[ci].slots[slot]
                far_ci, far_slot = diagram.arcs[label].other_end(d)
                if slot % 2 == 1 and far_slot % 2 == 1:
                    violations.append(
                        {"face": f.index, "kind": "cancellable bigon"}
                    )
                    break
    return (not violations, violations)


def checkerboard_classes(diagram: Diagram) -> tuple[frozenset[int], frozenset[int]]:
    """The two checkerboard face classes.

    Faces on the two sides of each arc get opposite colors; this always
    succeeds for the shadow of a link diagram since every vertex has
    even degree.  The class containing the designated unbounded face
    (face 0) is returned second, so the first class is "shaded with
    face 0 unshaded".
    """
    color: dict[int, int] = {0: 0}
    queue = [0]
    while queue:
        fid = queue.pop()
        for dart in diagram.faces[fid].darts:
            label = diagram.crossings[dart[0]].slots[dart[1]]
            a, b = diagram.arc_sides(label)
            other = b if a == fid else a
            if other == fid:
                raise DiagramError(
                    "arc %d borders face %d on both sides; diagram is "
                    "not checkerboard colorable" % (label, fid)
                )
            want = 1 - color[fid]
            if other in color:
                if color[other] != want:
                    raise DiagramError(
                        "faces cannot be two-colored; diagram is not "
                        "checkerboard colorable"
                    )
            else:
                color[other] = want
                queue.append(other)
    if len(color) != len(diagram.faces):
        raise DiagramError("face adjacency is not connected")
    zero = frozenset(f for f, c in color.items() if c == 0)
    one = frozenset(f for f, c in color.items() if c == 1)
    return (one, zero)


def serialize(diagram: Diagram) -> str:
    return json.dumps(diagram.to_json(), sort_keys=True)
