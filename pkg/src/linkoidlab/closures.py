"""Closure constructions that turn linkoids into admissible diagrams.

A closure arc is a combinatorial pushoff: it runs alongside its component on
the LEFT (facing along the orientation), so a passage entering a crossing at
slot j sends the arc across the edge attached at slot j-1, right next to the
crossing.  All insertions are expressed in a compass frame local to each
original crossing (S = slot 0, E = slot 1, N = slot 2, W = slot 3, listed
counterclockwise), which pins every rotation without any geometric search.
The only searched choice is the junction rotation of the theta closure,
where the candidate preserving the surface is selected.

The module also provides handle connections (joining two endpoints through a
handle, raising the genus by one), the virtual closure built on top of them,
and the starring helpers used by the canonical polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .diagram import (
    CROSSING,
    HEAD,
    REV2,
    STAR,
    TAIL,
    V3,
    Builder,
    Diagram,
    DiagramError,
    Face,
    Node,
    edge_of,
    is_source,
    partner,
    src,
    tgt,
)
from .moves import MoveError, MoveSite, apply_move


class ClosureError(ValueError):
    pass


# Compass directions of the four slots of a crossing, in counterclockwise
# order: the under strand runs S -> N, the over strand W -> E or E -> W.
_CCW = ("S", "E", "N", "W")


@dataclass(frozen=True)
class ClosureSpec:
    """Which components to close and how.

    style: arc-arc crossings copy their original crossing (shadow) or switch
    it (mirror).  position: the arcs pass under or over every pre-existing
    strand.  orientation: parallel arcs keep the component's direction and
    join through two reversal nodes; antiparallel arcs close it into a loop.
    """

    components: Tuple[int, ...]
    style: str = "shadow"
    position: str = "under"
    orientation: str = "parallel"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(set(self.components))))
        if not self.components:
            raise ClosureError("closure needs at least one component")
        if self.style not in ("shadow", "mirror"):
            raise ClosureError(f"unknown closure style {self.style!r}")
        if self.position not in ("under", "over"):
            raise ClosureError(f"unknown closure position {self.position!r}")
        if self.orientation not in ("parallel", "antiparallel"):
            raise ClosureError(f"unknown closure orientation {self.orientation!r}")


# ---------------------------------------------------------------------------
# port-level assembler
# ---------------------------------------------------------------------------


class _Asm:
    """Rebuilds a diagram from scratch at port granularity.

    Nodes declare counterclockwise port keys; every connect() becomes one
    edge of the compiled diagram, source side first.
    """

    def __init__(self, surface: str):
        self.surface = surface
        self._nodes: List[Tuple[str, Tuple, bool, Optional[str]]] = []
        self._conns: List[Tuple[Tuple[int, object], Tuple[int, object]]] = []
        self._used = set()

    def add(self, kind, keys, starred=False, name=None) -> int:
        self._nodes.append((kind, tuple(keys), starred, name))
        return len(self._nodes) - 1

    def connect(self, src_port, tgt_port) -> int:
        for p in (src_port, tgt_port):
            n, k = p
            if k not in self._nodes[n][1]:
                raise ClosureError(f"internal error: unknown port {p}")
            if p in self._used:
                raise ClosureError(f"internal error: port {p} connected twice")
            self._used.add(p)
        self._conns.append((src_port, tgt_port))
        return len(self._conns) - 1

    def compile(self):
        port_dart: Dict[Tuple[int, object], int] = {}
        for e, (p, q) in enumerate(self._conns):
            port_dart[p] = src(e)
            port_dart[q] = tgt(e)
        nodes = []
        for i, (kind, keys, starred, name) in enumerate(self._nodes):
            try:
                slots = tuple(port_dart[(i, k)] for k in keys)
            except KeyError as exc:
                raise ClosureError(f"internal error: unconnected port on node {i}") from exc
            nodes.append(Node(kind, slots, starred=starred, name=name))
        return nodes, len(self._conns), port_dart


def _add_cross(asm: _Asm, v_north: bool, h_east: bool, v_under: bool) -> int:
    """A crossing between a vertical strand (S/N ports) and a horizontal one
    (W/E ports), with the given flow directions and the vertical strand
    passing under iff v_under.  Slot 0 lands on the under strand's entry."""
    v_in = "S" if v_north else "N"
    h_in = "W" if h_east else "E"
    under_in = v_in if v_under else h_in
    k = _CCW.index(under_in)
    return asm.add(CROSSING, _CCW[k:] + _CCW[:k])


# ---------------------------------------------------------------------------
# the pushoff engine
# ---------------------------------------------------------------------------


def _close_impl(d: Diagram, comp_ids, position: str, style: str, terminals: str):
    """Add a left pushoff arc for every component in comp_ids.

    terminals: "parallel" joins arc and component through two reversal
    nodes, "anti" fuses them into a loop (reversing the arc), "free" leaves
    the arc as a strand of its own with fresh endpoints.

    Returns (diagram, info) where info carries node and edge maps for
    callers that keep references across the rebuild.
    """
    comps = d.components()
    S = set(comp_ids)
    for cid in S:
        if not (0 <= cid < len(comps.kinds)):
            raise ClosureError(f"unknown component {cid}")
        if comps.kinds[cid] != "knotoidal":
            raise ClosureError(f"component {cid} is not knotoidal")
        for (x, n, j, z) in comps.walks[cid]:
            if z is not None and d.nodes[n].kind != CROSSING:
                raise ClosureError(
                    f"closure arc cannot follow a component through a "
                    f"{d.nodes[n].kind} node"
                )
    forward = terminals != "anti"
    under_arc = position == "under"
    asm = _Asm(d.surface)

    # endpoints of the closed components
    ep_mode: Dict[int, Tuple[int, str]] = {}
    for cid in S:
        walk = comps.walks[cid]
        ep_mode[d.dart_pos[walk[0][0]][0]] = (cid, "tail")
        ep_mode[walk[-1][1]] = (cid, "head")

    # copy the original nodes (stars are re-anchored after compilation)
    orig_new: Dict[int, Optional[int]] = {}
    rev2_t: Dict[int, int] = {}
    rev2_h: Dict[int, int] = {}
    arc_t: Dict[int, int] = {}
    arc_h: Dict[int, int] = {}
    for i, nd in enumerate(d.nodes):
        if nd.kind == STAR:
            continue
        if i in ep_mode:
            cid, which = ep_mode[i]
            if terminals == "parallel":
                a = asm.add(REV2, (0, 1), name=nd.name)
                (rev2_t if which == "tail" else rev2_h)[cid] = a
                orig_new[i] = a
            elif terminals == "anti":
                orig_new[i] = None
            else:
                orig_new[i] = asm.add(nd.kind, (0,), name=nd.name)
        else:
            orig_new[i] = asm.add(
                nd.kind, tuple(range(len(nd.slots))), starred=nd.starred, name=nd.name
            )

    # grid of new crossings around each original crossing x:
    #   y = pushoff-of-under x over strand, inserted on the W edge;
    #   z = under strand x pushoff-of-over, inserted on the N (S) edge for
    #       positive (negative) x;
    #   w = pushoff x pushoff, floating in the quadrant between them.
    ecomp = comps.edge_component
    ins: Dict[Tuple[int, int], Tuple[int, str, str]] = {}
    grid: Dict[int, dict] = {}
    for x in d.crossings():
        slots = d.nodes[x].slots
        s = d.crossing_sign(x)
        cu = ecomp[edge_of(slots[0])] in S
        co = ecomp[edge_of(slots[1])] in S
        if not (cu or co):
            continue
        g = {"s": s}
        if cu:
            y = _add_cross(asm, v_north=forward, h_east=s > 0, v_under=under_arc)
            g["y"] = y
            ins[(x, 3)] = (y, "W", "E") if s > 0 else (y, "E", "W")
        if co:
            z = _add_cross(
                asm, v_north=True, h_east=(s > 0) == forward, v_under=not under_arc
            )
            g["z"] = z
            ins[(x, 2 if s > 0 else 0)] = (z, "S", "N")
        if cu and co:
            g["w"] = _add_cross(
                asm,
                v_north=forward,
                h_east=(s > 0) == forward,
                v_under=style == "shadow",
            )
        grid[x] = g

    # arc node sequences, as (node, entry key, exit key) in flow order
    arcs: Dict[int, List[Tuple[int, str, str]]] = {}
    for cid in S:
        seq: List[Tuple[int, str, str]] = []
        for (x, n, j, z) in comps.walks[cid]:
            if z is None:
                continue
            g = grid[n]
            s = g["s"]
            if j == 0:  # under passage: the arc is the vertical strand
                elems = [(g["y"], "S", "N")]
                if "w" in g:
                    welem = (g["w"], "S", "N")
                    elems = elems + [welem] if s > 0 else [welem] + elems
            else:  # over passage: the arc is the horizontal strand
                i_key, o_key = ("W", "E") if s > 0 else ("E", "W")
                elems = [(g["z"], i_key, o_key)]
                if "w" in g:
                    welem = (g["w"], i_key, o_key)
                    elems = [welem] + elems if s > 0 else elems + [welem]
            seq.extend(elems)
        if not forward:
            seq = [(nid, okey, ikey) for (nid, ikey, okey) in reversed(seq)]
        arcs[cid] = seq

    # in the anti orientation the arc fuses with the component: the last arc
    # exit feeds the first edge, the last edge feeds the first arc entry
    start_override: Dict[int, Tuple[int, str]] = {}
    end_override: Dict[int, Tuple[int, str]] = {}
    first_last: Dict[int, Tuple[int, int]] = {}
    for cid in S:
        walk = comps.walks[cid]
        e_first = edge_of(walk[0][0])
        e_last = edge_of(walk[-1][0])
        first_last[cid] = (e_first, e_last)
        if terminals == "anti":
            seq = arcs[cid]
            if not seq:
                raise ClosureError(
                    "antiparallel closure of a crossingless component leaves a "
                    "bare loop with no node to carry it; close it parallel instead"
                )
            start_override[e_first] = (seq[-1][0], seq[-1][2])
            end_override[e_last] = (seq[0][0], seq[0][1])

    # original edges, subdivided by the arc crossings near their ends
    edge_chains: Dict[int, List[int]] = {}
    for e in range(d.n_edges):
        n1, j1 = d.dart_pos[src(e)]
        n2, j2 = d.dart_pos[tgt(e)]
        elems = []
        if (n1, j1) in ins:
            elems.append(ins[(n1, j1)])
        if (n2, j2) in ins:
            elems.append(ins[(n2, j2)])
        cur = start_override.get(e, (orig_new[n1], j1))
        chain = []
        for (nid, ik, ok) in elems:
            chain.append(asm.connect(cur, (nid, ik)))
            cur = (nid, ok)
        chain.append(asm.connect(cur, end_override.get(e, (orig_new[n2], j2))))
        edge_chains[e] = chain

    # the arcs themselves
    junctions: Dict[int, Tuple[int, int]] = {}
    for cid in sorted(S):
        seq = arcs[cid]
        if terminals == "parallel":
            cur = (rev2_t[cid], 1)
            for (nid, ik, ok) in seq:
                asm.connect(cur, (nid, ik))
                cur = (nid, ok)
            asm.connect(cur, (rev2_h[cid], 1))
        elif terminals == "free":
            t = asm.add(TAIL, (0,))
            h = asm.add(HEAD, (0,))
            arc_t[cid], arc_h[cid] = t, h
            cur = (t, 0)
            for (nid, ik, ok) in seq:
                asm.connect(cur, (nid, ik))
                cur = (nid, ok)
            asm.connect(cur, (h, 0))
        else:
            for k in range(len(seq) - 1):
                asm.connect((seq[k][0], seq[k][2]), (seq[k + 1][0], seq[k + 1][1]))
            e_first, e_last = first_last[cid]
            junctions[cid] = (edge_chains[e_first][0], edge_chains[e_last][-1])

    nodes, n_edges, port_dart = asm.compile()

    # star anchors: each original region keeps its identity as the part of
    # the old region outside the thin pushoff slivers; pick the anchor from a
    # corner of that part
    def corner_anchor(n: int, j: int) -> Tuple[int, int]:
        nd = d.nodes[n]
        if nd.kind == CROSSING:
            g = grid.get(n)
            if g is None:
                return (2, partner(port_dart[(orig_new[n], j)]))
            s = g["s"]
            cut_u = "y" in g and j in (2, 3)
            cut_o = "z" in g and (j in (1, 2) if s > 0 else j in (0, 3))
            if cut_u and cut_o:
                t, key = g["w"], _CCW[j]
            elif cut_u:
                t, key = g["y"], _CCW[j]
            elif cut_o:
                t, key = g["z"], _CCW[j]
            else:
                t, key = orig_new[n], j
            return (2, partner(port_dart[(t, key)]))
        if n in ep_mode:
            cid, which = ep_mode[n]
            if terminals == "parallel":
                node_, port_ = (rev2_t[cid], 1) if which == "tail" else (rev2_h[cid], 0)
                return (3, partner(port_dart[(node_, port_)]))
            if terminals == "anti":
                jt, jh = junctions[cid]
                return (3, src(jt if which == "tail" else jh))
            return (3, partner(port_dart[(orig_new[n], 0)]))
        return (1, partner(port_dart[(orig_new[n], j)]))

    for i in d.stars():
        star = d.nodes[i]
        f = d.face_of_dart(star.anchor)
        cands = sorted(corner_anchor(n, j) for (n, j) in f.corners)
        nodes.append(Node(STAR, (), anchor=cands[0][1], name=star.name))

    out = Diagram(d.surface, nodes, n_edges)
    errs = out.validate()
    if errs:
        raise ClosureError(
            "internal error: closure produced an invalid diagram: " + "; ".join(errs)
        )
    if d.is_connected() and out.is_connected() and out.genus() != d.genus():
        raise ClosureError("internal error: closure changed the surface genus")
    info = {
        "node_map": {k: v for k, v in orig_new.items() if v is not None},
        "edge_chains": edge_chains,
        "arc_terminals": {cid: (arc_t[cid], arc_h[cid]) for cid in arc_t},
        "junctions": junctions,
        "endpoint_rev2": {cid: (rev2_t[cid], rev2_h[cid]) for cid in rev2_t},
    }
    return out, info


def close(d: Diagram, spec: ClosureSpec) -> Diagram:
    """Close the components named in spec with left pushoff arcs."""
    terminals = "parallel" if spec.orientation == "parallel" else "anti"
    out, _ = _close_impl(d, spec.components, spec.position, spec.style, terminals)
    return out


# ---------------------------------------------------------------------------
# theta closure
# ---------------------------------------------------------------------------


def _theta_one(d: Diagram, cid: int):
    """Theta-close one component: attach both the parallel-under and
    parallel-over arcs at its endpoints, which become trivalent nodes."""
    comps = d.components()
    walk = comps.walks[cid]
    t_node = d.dart_pos[walk[0][0]][0]
    h_node = walk[-1][1]
    marker = edge_of(walk[0][0])

    d1, info1 = _close_impl(d, {cid}, "under", "shadow", "free")
    u_t1, u_h1 = info1["arc_terminals"][cid]
    emap1 = {e: ch[0] for e, ch in info1["edge_chains"].items()}
    t1 = info1["node_map"][t_node]
    h1 = info1["node_map"][h_node]

    cid1 = d1.components().edge_component[emap1[marker]]
    d2, info2 = _close_impl(d1, {cid1}, "over", "shadow", "free")
    emap = {e: info2["edge_chains"][e1][0] for e, e1 in emap1.items()}
    o_t, o_h = info2["arc_terminals"][cid1]
    t2 = info2["node_map"][t1]
    h2 = info2["node_map"][h1]
    u_t = info2["node_map"][u_t1]
    u_h = info2["node_map"][u_h1]

    c_t = d2.nodes[t2].slots[0]
    c_h = d2.nodes[h2].slots[0]
    ut_dart = d2.nodes[u_t].slots[0]
    uh_dart = d2.nodes[u_h].slots[0]
    ot_dart = d2.nodes[o_t].slots[0]
    oh_dart = d2.nodes[o_h].slots[0]

    want_genus = d.genus() if d.is_connected() else None
    # junction rotations: the over arc hugs the component inside the under
    # arc, so counterclockwise from the component the tail reads (c, o, u)
    # and the head (c, u, o); the alternatives are kept as fallbacks and
    # rejected by the genus check when they change the surface
    best = None
    for t_order in ((c_t, ot_dart, ut_dart), (c_t, ut_dart, ot_dart)):
        for h_order in ((c_h, uh_dart, oh_dart), (c_h, oh_dart, uh_dart)):
            b = Builder(d2)
            for nid in (t2, u_t, o_t, h2, u_h, o_h):
                b.delete_node(nid)
            b.add_node(V3, t_order)
            b.add_node(V3, h_order)
            try:
                cand, _, _ = b.build()
            except DiagramError:
                continue
            if want_genus is not None and (
                not cand.is_connected() or cand.genus() != want_genus
            ):
                continue
            best = cand
            break
        if best is not None:
            break
    if best is None:
        raise ClosureError(
            "internal error: no surface-preserving junction rotation for the "
            "theta closure"
        )
    return best, emap


def theta_closure(d: Diagram, components: Iterable[int]) -> Diagram:
    """Attach both parallel arcs to every listed component, one at a time."""
    comps = d.components()
    todo = sorted(set(components))
    if not todo:
        raise ClosureError("theta closure needs at least one component")
    for cid in todo:
        if not (0 <= cid < len(comps.kinds)):
            raise ClosureError(f"unknown component {cid}")
        if comps.kinds[cid] != "knotoidal":
            raise ClosureError(f"component {cid} is not knotoidal")
    markers = {cid: edge_of(comps.walks[cid][0][0]) for cid in todo}
    cur = d
    for cid in todo:
        target = cur.components().edge_component[markers[cid]]
        cur, emap = _theta_one(cur, target)
        markers = {c: emap[e] for c, e in markers.items()}
    return cur


# ---------------------------------------------------------------------------
# handle connections and the virtual closure
# ---------------------------------------------------------------------------


def _wrap_face(d: Diagram, n: int) -> Face:
    return d.face_of_dart(d.nodes[n].slots[0])


def _separate_endpoints(d: Diagram, e1: int, e2: int) -> Diagram:
    """Ensure the two endpoints sit in distinct regions, inserting one
    deterministic finger (R2) move when they share one."""
    f = _wrap_face(d, e1)
    if f.id != _wrap_face(d, e2).id:
        return d
    for a in sorted(f.darts):
        for bd in sorted(f.darts):
            if edge_of(a) == edge_of(bd):
                continue
            for over in (0, 1):
                try:
                    cand = apply_move(d, MoveSite("R2+", (a, bd, over)))
                except MoveError:
                    continue
                # insertion moves only append nodes, so ids are stable
                if _wrap_face(cand, e1).id != _wrap_face(cand, e2).id:
                    return cand
    # a face bounded by a single edge (the crossingless strand) offers no
    # R2 site; a kink first gives the finger something to cross
    for e in sorted({edge_of(x) for x in f.darts}):
        for variant in (0, 1):
            try:
                kinked = apply_move(d, MoveSite("R1+", (e, variant)))
            except MoveError:
                continue
            try:
                return _separate_endpoints(kinked, e1, e2)
            except ClosureError:
                continue
    raise ClosureError("endpoints share a region that no finger move separates")


def handle_connection(d: Diagram, e1: int, e2: int) -> Diagram:
    """Join endpoints e1 -> e2 by an arc through a fresh handle.

    The result lives on a surface of one higher genus (the surface label is
    kept; genus() reports the true value).  Reversal nodes appear whenever
    the endpoint roles clash with the arc's orientation.
    """
    if e1 == e2:
        raise ClosureError("handle connection needs two distinct endpoints")
    for n in (e1, e2):
        if n >= len(d.nodes) or d.nodes[n].kind not in (TAIL, HEAD):
            raise ClosureError(f"node {n} is not an endpoint")
    d = _separate_endpoints(d, e1, e2)
    k1, k2 = d.nodes[e1].kind, d.nodes[e2].kind
    a_dart = d.nodes[e1].slots[0]
    b_dart = d.nodes[e2].slots[0]
    old_genus = d.genus() if d.is_connected() else None
    b = Builder(d)
    if (k1, k2) == (HEAD, TAIL):
        ea, eb = edge_of(a_dart), edge_of(b_dart)
        if ea == eb:
            raise ClosureError("cannot connect the two ends of a single-edge component")
        b.delete_node(e1)
        b.delete_node(e2)
        n, _ = b.find_dart(tgt(eb))
        b.replace_dart(n, tgt(eb), tgt(ea))
        b.delete_edge(eb)
        for nd in b.nodes:
            if nd is not None and nd.kind == STAR and edge_of(nd.anchor) == eb:
                nd.anchor = src(ea) if is_source(nd.anchor) else tgt(ea)
    elif k1 == k2:
        b.delete_node(e1)
        b.delete_node(e2)
        b.add_node(REV2, (a_dart, b_dart))
    else:  # tail to head: a fresh edge with a reversal at each end
        en = b.new_edge()
        b.delete_node(e1)
        b.delete_node(e2)
        b.add_node(REV2, (a_dart, src(en)))
        b.add_node(REV2, (b_dart, tgt(en)))
    out, _, _ = b.build()
    if old_genus is not None and out.genus() != old_genus + 1:
        raise ClosureError("internal error: handle connection did not raise the genus")
    return out


def virtual_closure(d: Diagram) -> Diagram:
    """Connect a knotoid's head to its tail through a handle, giving a knot
    diagram of genus one."""
    comps = d.components()
    if comps.kappa != 1:
        raise ClosureError("virtual closure needs exactly one knotoidal component")
    if d.stars():
        raise ClosureError("virtual closure applies to unstarred diagrams")
    cid = comps.kinds.index("knotoidal")
    walk = comps.walks[cid]
    t_node = d.dart_pos[walk[0][0]][0]
    h_node = walk[-1][1]
    return handle_connection(d, h_node, t_node)


# ---------------------------------------------------------------------------
# starring
# ---------------------------------------------------------------------------


def star_region(d: Diagram, face) -> Diagram:
    """Mark a region with a star; face may be a Face or a face id."""
    if isinstance(face, int):
        faces = d.faces()
        if not (0 <= face < len(faces)):
            raise ClosureError(f"no face {face}")
        face = faces[face]
    b = Builder(d)
    b.add_node(STAR, anchor=face.darts[0])
    out, _, _ = b.build()
    return out


def star_crossing(d: Diagram, c: int) -> Diagram:
    nd = d.nodes[c] if c < len(d.nodes) else None
    if nd is None or nd.kind != CROSSING:
        raise ClosureError(f"node {c} is not a crossing")
    if nd.starred:
        raise ClosureError(f"crossing {c} is already starred")
    b = Builder(d)
    b.nodes[c] = Node(CROSSING, nd.slots, starred=True, name=nd.name)
    out, _, _ = b.build()
    return out


def _endpoint_face(d: Diagram, kind: str, component: Optional[int]) -> Face:
    comps = d.components()
    knotoidal = [i for i, k in enumerate(comps.kinds) if k == "knotoidal"]
    if component is None:
        if len(knotoidal) != 1:
            raise ClosureError(
                "diagram has several knotoidal components; name one explicitly"
            )
        component = knotoidal[0]
    if component not in knotoidal:
        raise ClosureError(f"component {component} is not knotoidal")
    walk = comps.walks[component]
    n = d.dart_pos[walk[0][0]][0] if kind == TAIL else walk[-1][1]
    return _wrap_face(d, n)


def tail_starring(d: Diagram, component: Optional[int] = None) -> Diagram:
    """Star the region holding the tail of the given knotoidal component."""
    return star_region(d, _endpoint_face(d, TAIL, component))


def head_starring(d: Diagram, component: Optional[int] = None) -> Diagram:
    """Star the region holding the head of the given knotoidal component."""
    return star_region(d, _endpoint_face(d, HEAD, component))
