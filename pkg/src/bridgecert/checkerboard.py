"""Checkerboard surfaces of diagrams, their fat-vertex graphs, and the
reflection labeling they induce.

A checkerboard coloring shades one of the two face classes.  The shaded
surface retracts to a fat-vertex graph: one fat vertex per shaded face,
one band per crossing.  A maximal twist region whose intermediate
bigons are shaded is a single band through those bigon disks, so the
chain collapses to one edge weighted by the region's signed length;
twist regions whose bigons are unshaded contribute one unit-weight band
per crossing.  (Only the collapsed bands can reach |weight| >= 2, which
is why the twisted condition below singles them out.)

When the graph is twisted -- every weight at least two in absolute
value and a simple plane dual -- the link group surjects onto the
Coxeter group of the dual, sending meridians to reflections.  The
labeling realizing this is reconstructed here by anchoring each strand
that runs along a fat-vertex boundary to the generator of the region it
borders, propagating through crossings, and verifying every Wirtinger
relation; verification is the source of truth.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from .coxeter import CoxeterGraph, StrandLabeling, Word, reduce_word, verify_labeling
from .diagram import Diagram, DiagramError, checkerboard_classes, is_reduced
from .fatgraph import DualGraph, FatGraph, faces as gamma_faces, gamma_dual, is_twisted


def checkerboard_color(diagram: Diagram) -> tuple[frozenset[int], frozenset[int]]:
    """Both checkerboard colorings, as sets of shaded face ids.

    The coloring in which the designated unbounded face (face 0) is
    unshaded comes first.
    """
    return checkerboard_classes(diagram)


@dataclass(frozen=True)
class GammaExtraction:
    """A fat-vertex graph together with its diagram provenance."""

    graph: FatGraph
    shaded: frozenset[int]
    vertex_face: tuple[int, ...]  # D-face id per fat vertex
    edge_source: tuple[tuple, ...]  # per edge: ("region", idx) or ("crossing", idx)
    arc_to_diagram_arc: dict[tuple[int, int], int]  # boundary arc -> D-arc label

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "shaded_faces": sorted(self.shaded),
            "vertex_face": list(self.vertex_face),
            "edge_source": [list(s) for s in self.edge_source],
        }


def extract_gamma(diagram: Diagram, shaded: frozenset[int]) -> GammaExtraction:
    """Retract the shaded checkerboard surface to its fat-vertex graph.

    Requires a reduced diagram.  Shaded faces that serve as the linking
    bigons of a twist region are absorbed into that region's band; every
    other shaded face becomes a fat vertex whose rotation is read off
    its boundary walk.
    """
    ok, violations = is_reduced(diagram)
    if not ok:
        raise DiagramError("diagram is not reduced: %r" % violations)

    # Attachment corners: (crossing, corner) -> (edge index, signed weight
    # share).  Built region by region.
    absorbed: set[int] = set()
    edge_corners: list[tuple[tuple[int, int], tuple[int, int]]] = []
    edge_weight: list[int] = []
    edge_source: list[tuple] = []

    def shaded_corners(ci: int) -> list[int]:
        return [
            s
            for s in range(4)
            if diagram.face_of_corner(ci, s) in shaded
        ]

    for ridx, region in enumerate(diagram.twist_regions):
        chain = region.crossings
        bigons = region.bigon_faces
        bigon_shaded = {b in shaded for b in bigons}
        if len(chain) >= 2 and bigon_shaded == {True}:
            # One band through the shaded bigon disks.
            first, last = chain[0], chain[-1]
            ends = []
            for ci, bigon in ((first, bigons[0]), (last, bigons[-1])):
                corners = shaded_corners(ci)
                assert len(corners) == 2
                non_bigon = [
                    s
                    for s in corners
                    if diagram.face_of_corner(ci, s) != bigon
                ]
                assert len(non_bigon) == 1
                ends.append((ci, non_bigon[0]))
            for b in bigons:
                absorbed.add(b)
            edge_corners.append((ends[0], ends[1]))
            edge_weight.append(region.signed_length)
            edge_source.append(("region", ridx))
        else:
            if len(chain) >= 2 and True in bigon_shaded and False in bigon_shaded:
                raise AssertionError(
                    "twist region %d has bigons in both face classes" % ridx
                )
            sign = 1 if region.signed_length >= 0 else -1
            for ci in chain:
                corners = shaded_corners(ci)
                assert len(corners) == 2
                edge_corners.append(((ci, corners[0]), (ci, corners[1])))
                edge_weight.append(sign)
                edge_source.append(("crossing", ci))

    survivors = sorted(f for f in shaded if f not in absorbed)
    vertex_of_face = {f: i for i, f in enumerate(survivors)}

    corner_to_end: dict[tuple[int, int], int] = {}
    for e, (c0, c1) in enumerate(edge_corners):
        corner_to_end[c0] = 2 * e
        corner_to_end[c1] = 2 * e + 1

    rotations: list[tuple[int, ...]] = []
    arc_to_diagram_arc: dict[tuple[int, int], int] = {}
    for f in survivors:
        face = diagram.faces[f]
        rot = []
        for t, corner in enumerate(face.corners):
            if corner not in corner_to_end:
                raise AssertionError(
                    "face %d visits corner %r outside any band attachment"
                    % (f, corner)
                )
            rot.append(corner_to_end[corner])
            # The boundary arc after this attachment is the walk arc
            # toward the next corner.
            nxt = face.darts[(t + 1) % len(face.darts)]
            label = diagram.crossings[nxt[0]].slots[nxt[1]]
            arc_to_diagram_arc[(vertex_of_face[f], t)] = label
        rotations.append(tuple(rot))

    graph = FatGraph(tuple(rotations), tuple(edge_weight))
    return GammaExtraction(
        graph=graph,
        shaded=shaded,
        vertex_face=tuple(survivors),
        edge_source=tuple(edge_source),
        arc_to_diagram_arc=arc_to_diagram_arc,
    )


def twisted_extractions(diagram: Diagram) -> list[tuple[GammaExtraction, bool, list[str]]]:
    """Both colorings' extractions with their twistedness verdicts."""
    out = []
    for shaded in checkerboard_color(diagram):
        extraction = extract_gamma(diagram, shaded)
        flag, reasons = is_twisted(extraction.graph)
        out.append((extraction, flag, reasons))
    return out


def _generator_names(n: int) -> list[str]:
    letters = string.ascii_lowercase
    if n <= len(letters):
        return list(letters[:n])
    return ["g%d" % i for i in range(n)]


def brunner_labeling(
    diagram: Diagram, extraction: GammaExtraction
) -> tuple[CoxeterGraph, StrandLabeling]:
    """The reflection labeling of a twisted diagram.

    Generators correspond to the regions of the fat graph's complement;
    each strand running along a fat-vertex boundary arc is anchored to
    the generator of the region that arc borders, and the remaining
    strands are filled in through the Wirtinger conjugation at each
    crossing.  The result must verify; failure means the extraction does
    not support the surjection and is reported as an error.
    """
    flag, reasons = is_twisted(extraction.graph)
    if not flag:
        raise ValueError("fat graph is not twisted: " + "; ".join(reasons))

    g = extraction.graph
    regions = gamma_faces(g)
    names = _generator_names(len(regions))
    face_of_dart: dict[int, int] = {}
    region_of_arc: dict[tuple[int, int], int] = {}
    for f in regions:
        for d in f.darts:
            face_of_dart[d] = f.index
        for arc in f.arcs:
            region_of_arc[arc] = f.index

    edges = []
    for e in range(g.num_edges):
        u = names[face_of_dart[2 * e]]
        v = names[face_of_dart[2 * e + 1]]
        edges.append((u, v, abs(g.weights[e])))
    graph = CoxeterGraph(tuple(names), tuple(edges))

    labels: dict[int, Word] = {}
    for arc_key, label in extraction.arc_to_diagram_arc.items():
        strand = diagram.strand_of_arc[label]
        gen: Word = (names[region_of_arc[arc_key]],)
        old = labels.get(strand)
        if old is not None and old != gen:
            raise AssertionError(
                "strand %d anchored to two different generators" % strand
            )
        labels[strand] = gen

    # Fill in the rest by Wirtinger conjugation.
    progress = True
    while progress:
        progress = False
        for (i, j, k) in diagram.adjacency:
            if k not in labels:
                continue
            for (src, dst) in ((i, j), (j, i)):
                if src in labels and dst not in labels:
                    labels[dst] = reduce_word(
                        graph, labels[k] + labels[src] + labels[k]
                    )
                    progress = True
    if len(labels) != diagram.num_strands:
        raise AssertionError(
            "label propagation stalled at %d of %d strands"
            % (len(labels), diagram.num_strands)
        )

    labeling = StrandLabeling(
        tuple(labels[s] for s in range(diagram.num_strands))
    )
    ok, failures = verify_labeling(diagram, graph, labeling)
    if not ok:
        raise AssertionError(
            "reconstructed labeling failed verification: %r" % failures[:3]
        )
    return graph, labeling


def dual_of(extraction: GammaExtraction) -> DualGraph:
    return gamma_dual(extraction.graph)
