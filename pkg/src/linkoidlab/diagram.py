"""Dart-based combinatorial maps for linkoid and generalized knotoid diagrams.

An edge ``e`` owns two darts: ``2e`` at its source node and ``2e+1`` at its
target node.  Every positive-degree node stores its incident darts in
counterclockwise order; faces are traced with the face on the left of each
directed dart, so one global convention covers the whole code base.

Diagrams are treated as immutable once validated: every rewrite elsewhere in
the package builds a fresh diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

CROSSING = "crossing"
TAIL = "tail"
HEAD = "head"
STAR = "star"
REV2 = "rev2"
V3 = "v3"

SPHERE = "sphere"
PLANE = "plane"


class DiagramError(ValueError):
    pass


def src(edge: int) -> int:
    return 2 * edge


def tgt(edge: int) -> int:
    return 2 * edge + 1


def partner(dart: int) -> int:
    return dart ^ 1


def edge_of(dart: int) -> int:
    return dart // 2


def is_source(dart: int) -> bool:
    return dart % 2 == 0


@dataclass
class Node:
    kind: str
    slots: Tuple[int, ...] = ()
    starred: bool = False          # crossings only
    anchor: Optional[int] = None   # star nodes: representative dart of their face
    name: Optional[str] = None

    def degree(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class Face:
    id: int
    darts: Tuple[int, ...]
    corners: frozenset            # of (node_id, slot_index) pairs
    occupants: Tuple[int, ...]    # star node ids sitting inside this face


@dataclass(frozen=True)
class Components:
    kappa: int
    ell: int
    edge_component: Tuple[int, ...]
    # component index -> ("knotoidal"|"loop"|"arc", ordered edge steps)
    kinds: Tuple[str, ...]
    walks: Tuple[Tuple, ...]


class Diagram:
    def __init__(self, surface: str, nodes: Sequence[Node], n_edges: int):
        self.surface = surface
        self.nodes = list(nodes)
        self.n_edges = n_edges
        self._dart_pos: Optional[Dict[int, Tuple[int, int]]] = None
        self._faces: Optional[List[Face]] = None
        self._corner_face: Optional[Dict[Tuple[int, int], int]] = None
        self._components: Optional[Components] = None

    # -- basic accessors ------------------------------------------------

    @property
    def dart_pos(self) -> Dict[int, Tuple[int, int]]:
        if self._dart_pos is None:
            pos: Dict[int, Tuple[int, int]] = {}
            for i, nd in enumerate(self.nodes):
                for j, d in enumerate(nd.slots):
                    if d in pos:
                        raise DiagramError(f"dart {d} multiply attached")
                    pos[d] = (i, j)
            self._dart_pos = pos
        return self._dart_pos

    def crossings(self, starred: Optional[bool] = None) -> List[int]:
        out = []
        for i, nd in enumerate(self.nodes):
            if nd.kind == CROSSING and (starred is None or nd.starred == starred):
                out.append(i)
        return out

    def stars(self) -> List[int]:
        return [i for i, nd in enumerate(self.nodes) if nd.kind == STAR]

    def crossing_sign(self, node_id: int) -> int:
        """+1 iff the over strand runs left-to-right seen along the under strand."""
        nd = self.nodes[node_id]
        if nd.kind != CROSSING:
            raise DiagramError(f"node {node_id} is not a crossing")
        return 1 if not is_source(nd.slots[3]) else -1

    # -- validation -------------------------------------------------------

    def validate(self) -> List[str]:
        """Return a list of invariant violations; empty means the diagram is ok."""
        errors: List[str] = []
        if self.n_edges == 0:
            return ["empty diagram: no edges"]
        pos: Dict[int, Tuple[int, int]] = {}
        for i, nd in enumerate(self.nodes):
            for j, d in enumerate(nd.slots):
                if not (0 <= d < 2 * self.n_edges):
                    errors.append(f"node {i}: dart {d} out of range")
                elif d in pos:
                    errors.append(f"dart {d} multiply attached (nodes {pos[d][0]} and {i})")
                else:
                    pos[d] = (i, j)
        for d in range(2 * self.n_edges):
            if d not in pos:
                errors.append(f"dart {d} not attached to any node")
        for i, nd in enumerate(self.nodes):
            k = nd.kind
            if k == CROSSING:
                if len(nd.slots) != 4:
                    errors.append(f"crossing {i}: needs 4 slots")
                    continue
                if is_source(nd.slots[0]) or not is_source(nd.slots[2]):
                    errors.append(f"crossing {i}: under-strand continuity violated")
                roles = [is_source(nd.slots[1]), is_source(nd.slots[3])]
                if roles[0] == roles[1]:
                    errors.append(f"crossing {i}: over-strand continuity violated")
            elif k == TAIL:
                if len(nd.slots) != 1 or not is_source(nd.slots[0]):
                    errors.append(f"tail {i}: needs a single source dart")
            elif k == HEAD:
                if len(nd.slots) != 1 or is_source(nd.slots[0]):
                    errors.append(f"head {i}: needs a single target dart")
            elif k == REV2:
                if len(nd.slots) != 2:
                    errors.append(f"rev2 {i}: needs 2 slots")
                elif is_source(nd.slots[0]) != is_source(nd.slots[1]):
                    errors.append(f"rev2 {i}: orientation must reverse (equal dart roles)")
            elif k == V3:
                if len(nd.slots) != 3:
                    errors.append(f"v3 {i}: needs 3 slots")
            elif k == STAR:
                if nd.slots:
                    errors.append(f"star {i}: must have no slots")
                if nd.anchor is None or not (0 <= nd.anchor < 2 * self.n_edges):
                    errors.append(f"star {i}: invalid face anchor")
            else:
                errors.append(f"node {i}: unknown kind {k!r}")
        if self.surface == PLANE:
            inf = [i for i in self.stars() if self.nodes[i].name == "infinity"]
            if len(inf) != 1:
                errors.append("plane surface requires exactly one star named 'infinity'")
        elif self.surface != SPHERE:
            errors.append(f"unknown surface {self.surface!r}")
        if errors:
            return errors
        # strand continuity: every tail must reach a head
        try:
            self.components()
        except DiagramError as exc:
            errors.append(str(exc))
        return errors

    def check(self) -> "Diagram":
        errs = self.validate()
        if errs:
            raise DiagramError("; ".join(errs))
        return self

    # -- face tracing -----------------------------------------------------

    def next_dart(self, dart: int) -> int:
        """Face successor: turn left at the far end of this dart's edge."""
        n, j = self.dart_pos[partner(dart)]
        nd = self.nodes[n]
        return nd.slots[(j + 1) % len(nd.slots)]

    def faces(self) -> List[Face]:
        if self._faces is not None:
            return self._faces
        pos = self.dart_pos
        seen = set()
        raw: List[Tuple[Tuple[int, ...], frozenset]] = []
        for d0 in range(2 * self.n_edges):
            if d0 in seen:
                continue
            cycle = []
            corners = set()
            d = d0
            while True:
                cycle.append(d)
                seen.add(d)
                n, j = pos[partner(d)]
                corners.add((n, j))
                d = self.nodes[n].slots[(j + 1) % len(self.nodes[n].slots)]
                if d == d0:
                    break
            raw.append((tuple(cycle), frozenset(corners)))
        raw.sort(key=lambda t: min(t[0]))
        dart_face = {}
        for fid, (cycle, _) in enumerate(raw):
            for d in cycle:
                dart_face[d] = fid
        occ: Dict[int, List[int]] = {}
        for i in self.stars():
            a = self.nodes[i].anchor
            occ.setdefault(dart_face[a], []).append(i)
        faces = [
            Face(fid, cycle, corners, tuple(occ.get(fid, ())))
            for fid, (cycle, corners) in enumerate(raw)
        ]
        self._faces = faces
        self._corner_face = {c: f.id for f in faces for c in f.corners}
        return faces

    def face_of_dart(self, dart: int) -> Face:
        for f in self.faces():
            if dart in f.darts:
                return f
        raise DiagramError(f"dart {dart} not on any face")

    def face_of_corner(self, node_id: int, slot: int) -> Face:
        self.faces()
        return self._faces[self._corner_face[(node_id, slot)]]

    def quadrant_face(self, crossing: int, quadrant: int) -> Face:
        """Face holding the quadrant between slots q and q+1 of a crossing."""
        return self.face_of_corner(crossing, quadrant)

    # -- Euler / obstruction ----------------------------------------------

    def vertex_count(self) -> int:
        return sum(1 for nd in self.nodes if nd.slots)

    def genus(self) -> int:
        if not self.is_connected():
            raise DiagramError("genus undefined for disconnected universe")
        chi = self.vertex_count() - self.n_edges + len(self.faces())
        if chi % 2:
            raise DiagramError("invalid rotation system: odd Euler characteristic")
        g = (2 - chi) // 2
        if g < 0:
            raise DiagramError("invalid rotation system: negative genus")
        return g

    def is_connected(self) -> bool:
        deg_nodes = [i for i, nd in enumerate(self.nodes) if nd.slots]
        if not deg_nodes:
            return False
        pos = self.dart_pos
        seen = {deg_nodes[0]}
        stack = [deg_nodes[0]]
        while stack:
            n = stack.pop()
            for d in self.nodes[n].slots:
                m = pos[partner(d)][0]
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(deg_nodes)

    def _require_connected(self, what: str):
        if not self.is_connected():
            raise DiagramError(f"{what} undefined for split diagrams")

    def obstruction(self) -> int:
        """Crossings minus regions, all of them counted."""
        self._require_connected("obstruction")
        return len(self.crossings()) - len(self.faces())

    def obstruction_starred(self) -> int:
        """Unstarred crossings minus unstarred regions."""
        self._require_connected("obstruction")
        n = len(self.crossings(starred=False))
        f = sum(1 for fc in self.faces() if not fc.occupants)
        return n - f

    def obstruction_generalized(self) -> int:
        """Crossings minus disk regions (faces free of degree-zero nodes)."""
        self._require_connected("obstruction")
        n = len(self.crossings())
        f = sum(1 for fc in self.faces() if not fc.occupants)
        return n - f

    # -- strand structure ---------------------------------------------------

    def _leave_slot(self, node_id: int, arrive_slot: int) -> Optional[int]:
        nd = self.nodes[node_id]
        if nd.kind == CROSSING:
            return (arrive_slot + 2) % 4
        if nd.kind == REV2:
            return 1 - arrive_slot
        return None

    def strand_walk(self, start_dart: int):
        """Walk a strand starting away from `start_dart`.

        Yields (dart_left_from, arrive_node, arrive_slot, leave_dart_or_None)
        and stops at endpoints, v3 nodes, or when the walk closes up.
        """
        pos = self.dart_pos
        x = start_dart
        while True:
            y = partner(x)
            n, j = pos[y]
            k = self._leave_slot(n, j)
            if k is None:
                yield (x, n, j, None)
                return
            z = self.nodes[n].slots[k]
            yield (x, n, j, z)
            x = z
            if x == start_dart:
                return

    def components(self) -> Components:
        if self._components is not None:
            return self._components
        pos = self.dart_pos
        edge_comp = [-1] * self.n_edges
        kinds: List[str] = []
        walks: List[Tuple] = []

        def run(start_dart: int, kind_open: str):
            cid = len(kinds)
            steps = []
            closed = True
            end_kind = None
            for x, n, j, z in self.strand_walk(start_dart):
                e = edge_of(x)
                if edge_comp[e] not in (-1, cid):
                    raise DiagramError("inconsistent strand structure")
                edge_comp[e] = cid
                steps.append((x, n, j, z))
                if z is None:
                    closed = False
                    end_kind = self.nodes[n].kind
            if kind_open == "loop":
                kinds.append("loop")
            else:
                if closed:
                    raise DiagramError("strand from an endpoint closed on itself")
                if kind_open == TAIL and end_kind == HEAD:
                    kinds.append("knotoidal")
                else:
                    # same-role endpoint pairs happen through reversal nodes
                    kinds.append("arc")
            walks.append(tuple(steps))
            return cid

        tails = [i for i, nd in enumerate(self.nodes) if nd.kind == TAIL]
        for t in tails:
            d = self.nodes[t].slots[0]
            if edge_comp[edge_of(d)] == -1:
                run(d, TAIL)
        for i, nd in enumerate(self.nodes):
            if nd.kind == V3:
                for d in nd.slots:
                    # walk away from the v3 node along this edge regardless of direction
                    if edge_comp[edge_of(d)] == -1:
                        run(d, V3)
        for i, nd in enumerate(self.nodes):
            # a head not reached from any tail starts a head-to-head strand
            if nd.kind == HEAD and edge_comp[edge_of(nd.slots[0])] == -1:
                run(nd.slots[0], HEAD)
        for e in range(self.n_edges):
            if edge_comp[e] == -1:
                run(src(e), "loop")
        kappa = sum(1 for k in kinds if k == "knotoidal")
        ell = sum(1 for k in kinds if k == "loop")
        self._components = Components(kappa, ell, tuple(edge_comp), tuple(kinds), tuple(walks))
        return self._components

    # -- equality / canonical form -----------------------------------------

    def _struct(self):
        return (
            self.surface,
            self.n_edges,
            tuple((nd.kind, nd.slots, nd.starred, nd.anchor) for nd in self.nodes),
        )

    def __eq__(self, other):
        return isinstance(other, Diagram) and self._struct() == other._struct()

    def __hash__(self):
        return hash(self._struct())

    def canonical_signature(self) -> tuple:
        """Relabelling-invariant signature; equal iff diagrams are isomorphic.

        Star faces are compared through face corner multisets, so the
        particular anchor dart does not matter.
        """
        pos = self.dart_pos
        star_corner_sets = []
        for i in self.stars():
            f = self.face_of_dart(self.nodes[i].anchor)
            star_corner_sets.append(f.corners)

        def signature_from(d0: int):
            order: Dict[int, int] = {}
            queue = [d0]
            sig = []
            while queue:
                d = queue.pop(0)
                if d in order:
                    continue
                order[d] = len(order)
                n, j = pos[d]
                nd = self.nodes[n]
                queue.append(partner(d))
                queue.append(nd.slots[(j + 1) % len(nd.slots)])
            if len(order) != 2 * self.n_edges:
                return None  # disconnected; signature per component not needed
            node_label = {}
            for i, nd in enumerate(self.nodes):
                if nd.slots:
                    node_label[i] = (nd.kind, nd.starred, tuple(order[d] for d in nd.slots))
            entries = []
            for d in sorted(order, key=order.get):
                n, j = pos[d]
                entries.append((order[partner(d)], node_label[n], j))
            starsig = []
            for cs in star_corner_sets:
                starsig.append(tuple(sorted((node_label[n], j) for (n, j) in cs)))
            return (tuple(entries), tuple(sorted(starsig)), self.surface)

        best = None
        for d0 in range(2 * self.n_edges):
            s = signature_from(d0)
            if s is not None and (best is None or s < best):
                best = s
        if best is None:
            raise DiagramError("canonical signature requires a connected universe")
        return best

    def __repr__(self):
        kinds = {}
        for nd in self.nodes:
            kinds[nd.kind] = kinds.get(nd.kind, 0) + 1
        parts = ", ".join(f"{v} {k}" for k, v in sorted(kinds.items()))
        return f"<Diagram {self.surface}: {self.n_edges} edges, {parts}>"


# ---------------------------------------------------------------------------
# Mutable builder used by every rewrite
# ---------------------------------------------------------------------------


class Builder:
    """Scratch representation for diagram surgery.

    Node and edge ids are stable while editing (deletions leave tombstones);
    `build()` compacts both and returns the dart renumbering map so callers
    can fix up any references they kept.
    """

    def __init__(self, diagram: Optional[Diagram] = None, surface: str = SPHERE):
        self.surface = diagram.surface if diagram else surface
        self.nodes: List[Optional[Node]] = []
        self.alive_edges: List[bool] = []
        if diagram:
            for nd in diagram.nodes:
                self.nodes.append(Node(nd.kind, tuple(nd.slots), nd.starred, nd.anchor, nd.name))
            self.alive_edges = [True] * diagram.n_edges

    def new_edge(self) -> int:
        self.alive_edges.append(True)
        return len(self.alive_edges) - 1

    def delete_edge(self, e: int):
        self.alive_edges[e] = False

    def add_node(self, kind, slots=(), starred=False, anchor=None, name=None) -> int:
        self.nodes.append(Node(kind, tuple(slots), starred, anchor, name))
        return len(self.nodes) - 1

    def delete_node(self, i: int):
        self.nodes[i] = None

    def replace_dart(self, node_id: int, old_dart: int, new_dart: int):
        nd = self.nodes[node_id]
        slots = list(nd.slots)
        slots[slots.index(old_dart)] = new_dart
        nd.slots = tuple(slots)

    def find_dart(self, dart: int) -> Tuple[int, int]:
        for i, nd in enumerate(self.nodes):
            if nd is not None and dart in nd.slots:
                return (i, nd.slots.index(dart))
        raise DiagramError(f"dart {dart} not attached")

    def splice_through(self, node_id: int):
        """Dissolve a degree-2 node with one incoming and one outgoing edge."""
        nd = self.nodes[node_id]
        assert nd is not None and len(nd.slots) == 2
        a, b = nd.slots
        if is_source(a) == is_source(b):
            raise DiagramError("splice requires a through-oriented degree-2 node")
        inc = a if not is_source(a) else b     # target dart: edge arriving here
        out = a if a != inc else b             # source dart: edge leaving here
        e_in, e_out = edge_of(inc), edge_of(out)
        self.delete_node(node_id)
        if e_in == e_out:
            # closing a strand onto itself would orphan the loop edge; keep the
            # edge and give it a positive kink so the loop still carries a node
            self._kink_edge(e_in)
            return
        # merge: redirect the far end of e_out's edge onto e_in
        far = partner(out)                      # target dart of e_out
        n, j = self.find_dart(far)
        self.replace_dart(n, far, tgt(e_in))
        # the old target dart of e_in (== inc) disappears with e_out's source
        self.delete_edge(e_out)
        # remap any star anchors sitting on the deleted edge
        for nd2 in self.nodes:
            if nd2 is not None and nd2.kind == STAR and nd2.anchor is not None:
                if edge_of(nd2.anchor) == e_out:
                    nd2.anchor = src(e_in) if is_source(nd2.anchor) else tgt(e_in)

    def _kink_edge(self, e: int):
        """Close an edge whose darts are both detached with a positive kink.

        The monogon quadrant weighs exactly +1, so this keeps loops
        representable without touching the state sum.
        """
        loop = self.new_edge()
        self.add_node(CROSSING, slots=(tgt(e), src(e), src(loop), tgt(loop)))

    def build(self, validate: bool = True) -> Tuple[Diagram, Dict[int, int], Dict[int, int]]:
        edge_map: Dict[int, int] = {}
        for e, alive in enumerate(self.alive_edges):
            if alive:
                edge_map[e] = len(edge_map)
        dart_map: Dict[int, int] = {}
        for e, ne in edge_map.items():
            dart_map[src(e)] = src(ne)
            dart_map[tgt(e)] = tgt(ne)
        node_map: Dict[int, int] = {}
        new_nodes: List[Node] = []
        for i, nd in enumerate(self.nodes):
            if nd is None:
                continue
            node_map[i] = len(new_nodes)
            slots = tuple(dart_map[d] for d in nd.slots)
            anchor = dart_map[nd.anchor] if nd.anchor is not None else None
            new_nodes.append(Node(nd.kind, slots, nd.starred, anchor, nd.name))
        d = Diagram(self.surface, new_nodes, len(edge_map))
        if validate:
            d.check()
        return d, node_map, dart_map


def trivial_knotoid() -> Diagram:
    """One edge from a tail to a head; the simplest legal diagram."""
    return Diagram(SPHERE, [Node(TAIL, (0,)), Node(HEAD, (1,))], 1).check()
