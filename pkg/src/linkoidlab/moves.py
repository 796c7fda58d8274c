"""Reidemeister rewriting, reversal, crossing surgery, and skein triples.

Every rewrite is pure: it takes a validated diagram and returns a new one.
Insertion moves are constructed candidate-first and checked against the Euler
characteristic, so a chirality mistake can never silently change the surface.
Moves never slide an arc across an endpoint, star, reversal node, or
trivalent node: the local patterns require pure-crossing corners, and
region stars are re-anchored within their region when boundary edges vanish.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from .diagram import (
    CROSSING,
    HEAD,
    STAR,
    TAIL,
    Builder,
    Diagram,
    DiagramError,
    Node,
    edge_of,
    is_source,
    partner,
    src,
    tgt,
)


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class MoveSite:
    kind: str          # R1- | R2- | R3 | R1+ | R2+
    data: tuple

    def __str__(self):
        return f"{self.kind}{self.data}"


def make_crossing(sign: int, under_in: int, over_in: int, under_out: int, over_out: int):
    """Counterclockwise rotation of a crossing with the given strand darts."""
    if sign > 0:
        return (under_in, over_out, under_out, over_in)
    return (under_in, over_in, under_out, over_out)


# R1 kink rotations in terms of (T = incoming dart, F = outgoing dart,
# S = loop source dart, U = loop target dart); two signs x two curl sides.
_KINK_ROTATIONS = (
    lambda T, F, S, U: (T, F, S, U),  # positive, under passage first
    lambda T, F, S, U: (U, S, F, T),  # positive, over passage first
    lambda T, F, S, U: (T, U, S, F),  # negative, under passage first
    lambda T, F, S, U: (U, T, F, S),  # negative, over passage first
)


def _role(slot: int) -> str:
    return "under" if slot in (0, 2) else "over"


def _corner_nodes(d: Diagram, face) -> List[int]:
    return [n for (n, _) in face.corners]


def _is_plain_crossing(d: Diagram, n: int) -> bool:
    nd = d.nodes[n]
    return nd.kind == CROSSING and not nd.starred


def _fix_doomed_anchors(d: Diagram, b: Builder, doomed: Set[int]):
    """Re-anchor region stars whose anchor dart sits on a to-be-deleted edge."""
    for i, nd in enumerate(b.nodes):
        if nd is None or nd.kind != STAR or nd.anchor is None:
            continue
        if edge_of(nd.anchor) not in doomed:
            continue
        for cand in d.face_of_dart(nd.anchor).darts:
            if edge_of(cand) not in doomed:
                nd.anchor = cand
                break
        else:
            raise MoveError(f"cannot relocate star {i}: its region boundary vanishes")


def _star_relocatable(d: Diagram, doomed: Set[int]) -> bool:
    for i in d.stars():
        a = d.nodes[i].anchor
        if edge_of(a) in doomed:
            if all(edge_of(c) in doomed for c in d.face_of_dart(a).darts):
                return False
    return True


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def enumerate_moves(d: Diagram, kinds: Optional[Sequence[str]] = None) -> List[MoveSite]:
    wanted = set(kinds) if kinds else {"R1-", "R2-", "R3", "R1+", "R2+"}
    sites: List[MoveSite] = []
    faces = d.faces()
    if "R1-" in wanted:
        for f in faces:
            if len(f.darts) == 1 and not f.occupants:
                (c, _), = f.corners
                if _is_plain_crossing(d, c) and _star_relocatable(d, {edge_of(f.darts[0])}):
                    sites.append(MoveSite("R1-", (f.darts[0],)))
    if "R2-" in wanted:
        for f in faces:
            if len(f.darts) == 2 and not f.occupants and _r2_minus_pattern(d, f):
                doomed = {edge_of(x) for x in f.darts}
                if _star_relocatable(d, doomed):
                    sites.append(MoveSite("R2-", tuple(sorted(f.darts))))
    if "R3" in wanted:
        for f in faces:
            if len(f.darts) == 3 and not f.occupants and _r3_pattern(d, f):
                darts = tuple(sorted(f.darts))
                if _star_relocatable(d, {edge_of(x) for x in darts}):
                    sites.append(MoveSite("R3", darts))
    if "R1+" in wanted:
        for e in range(d.n_edges):
            for v in range(4):
                sites.append(MoveSite("R1+", (e, v)))
    if "R2+" in wanted:
        for f in faces:
            for a in f.darts:
                for b in f.darts:
                    if edge_of(a) != edge_of(b):
                        for over in (0, 1):
                            sites.append(MoveSite("R2+", (a, b, over)))
    return sites


def _r2_minus_pattern(d: Diagram, f) -> bool:
    d1, d2 = f.darts
    e1, e2 = edge_of(d1), edge_of(d2)
    if e1 == e2:
        return False
    nodes = {d.dart_pos[src(e1)][0], d.dart_pos[tgt(e1)][0]}
    nodes2 = {d.dart_pos[src(e2)][0], d.dart_pos[tgt(e2)][0]}
    if nodes != nodes2 or len(nodes) != 2:
        return False
    if not all(_is_plain_crossing(d, n) for n in nodes):
        return False
    roles = []
    for e in (e1, e2):
        r = {_role(d.dart_pos[src(e)][1]), _role(d.dart_pos[tgt(e)][1])}
        if len(r) != 1:
            return False
        roles.append(r.pop())
    return set(roles) == {"under", "over"}


def _r3_pattern(d: Diagram, f) -> bool:
    corners = list(f.corners)
    nodes = {n for (n, _) in corners}
    if len(nodes) != 3 or not all(_is_plain_crossing(d, n) for n in nodes):
        return False
    edges = [edge_of(x) for x in f.darts]
    if len(set(edges)) != 3:
        return False
    patterns = []
    for e in edges:
        pa = _role(d.dart_pos[src(e)][1])
        pb = _role(d.dart_pos[tgt(e)][1])
        patterns.append(frozenset((pa, pb)))
    return sorted(map(len, patterns)) == [1, 1, 2] and (
        frozenset(("under",)) in patterns and frozenset(("over",)) in patterns
    )


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------


def apply_move(d: Diagram, m: MoveSite) -> Diagram:
    if m.kind == "R1-":
        return _apply_r1_minus(d, m.data[0])
    if m.kind == "R2-":
        return _apply_r2_minus(d, *m.data)
    if m.kind == "R3":
        return _apply_r3(d, m.data)
    if m.kind == "R1+":
        return _apply_r1_plus(d, *m.data)
    if m.kind == "R2+":
        return _apply_r2_plus(d, *m.data)
    raise MoveError(f"unknown move kind {m.kind}")


def _apply_r1_minus(d: Diagram, mono_dart: int) -> Diagram:
    try:
        f = d.face_of_dart(mono_dart)
    except DiagramError:
        raise MoveError("stale site: dart gone")
    if len(f.darts) != 1 or f.occupants:
        raise MoveError("stale site: not an empty monogon")
    loop_e = edge_of(mono_dart)
    c = d.dart_pos[mono_dart][0]
    if not _is_plain_crossing(d, c):
        raise MoveError("stale site: not a plain crossing")
    ext = tuple(x for x in d.nodes[c].slots if edge_of(x) != loop_e)
    b = Builder(d)
    _fix_doomed_anchors(d, b, {loop_e})
    b.delete_edge(loop_e)
    b.nodes[c] = Node("through", ext)
    b.splice_through(c)
    out, _, _ = b.build()
    return out


def _apply_r2_minus(d: Diagram, d1: int, d2: int) -> Diagram:
    try:
        f = d.face_of_dart(d1)
    except DiagramError:
        raise MoveError("stale site: dart gone")
    if set(f.darts) != {d1, d2} or f.occupants or not _r2_minus_pattern(d, f):
        raise MoveError("stale site: not a removable bigon")
    e1, e2 = edge_of(d1), edge_of(d2)
    b = Builder(d)
    _fix_doomed_anchors(d, b, {e1, e2})
    joins = []
    for e_mid in (e1, e2):
        cf, j = d.dart_pos[src(e_mid)]
        ext_in = d.nodes[cf].slots[(j + 2) % 4]
        cs, k = d.dart_pos[tgt(e_mid)]
        ext_out = d.nodes[cs].slots[(k + 2) % 4]
        joins.append((ext_in, ext_out))
    crossings = {d.dart_pos[src(e1)][0], d.dart_pos[tgt(e1)][0]}
    for c in crossings:
        b.delete_node(c)
    b.delete_edge(e1)
    b.delete_edge(e2)
    throughs = [b.add_node("through", (x, y)) for x, y in joins]
    for t in throughs:
        b.splice_through(t)
    out, _, _ = b.build()
    return out


def _apply_r1_plus(d: Diagram, e: int, variant: int) -> Diagram:
    if not (0 <= e < d.n_edges):
        raise MoveError("stale site: edge gone")
    old_genus = d.genus() if d.is_connected() else None
    b = Builder(d)
    f = _split(b, e)
    loop = b.new_edge()
    slots = _KINK_ROTATIONS[variant](tgt(e), src(f), src(loop), tgt(loop))
    b.add_node(CROSSING, slots)
    out, _, _ = b.build()
    if old_genus is not None and out.genus() != old_genus:
        raise MoveError("kink insertion changed the surface (internal error)")
    return out


def _split(b: Builder, e: int) -> int:
    """Split edge e in flow order into e -> (gap) -> f; returns f.

    Darts tgt(e) and src(f) are left unattached for the caller.
    """
    f = b.new_edge()
    n, _ = b.find_dart(tgt(e))
    b.replace_dart(n, tgt(e), tgt(f))
    return f


def _apply_r2_plus(
    d: Diagram,
    a: int,
    b_dart: int,
    over: int,
    allow_cross_component: bool = False,
    target_genus: Optional[int] = None,
) -> Diagram:
    ea, eb = edge_of(a), edge_of(b_dart)
    if ea == eb:
        raise MoveError("R2 insertion needs two distinct edges")
    if not allow_cross_component:
        try:
            f = d.face_of_dart(a)
        except DiagramError:
            raise MoveError("stale site: dart gone")
        if b_dart not in f.darts:
            raise MoveError("stale site: darts no longer share a region")
    if target_genus is None and d.is_connected():
        target_genus = d.genus()

    best = None
    for layout in (0, 1):
        for sign_first in (1, -1):
            try:
                cand = _build_r2_plus(d, ea, eb, over, layout, sign_first)
            except (DiagramError, MoveError):
                continue
            if target_genus is not None:
                # raw Euler-characteristic genus; meaningful (and possibly
                # negative) even while the universe is still disconnected
                chi = cand.vertex_count() - cand.n_edges + len(cand.faces())
                if (2 - chi) // 2 != target_genus:
                    continue
            if not _has_fresh_bigon(cand, d):
                continue
            best = cand
            break
        if best is not None:
            break
    if best is None:
        raise MoveError("no planar R2 insertion found for this site")
    return best


def _build_r2_plus(d: Diagram, ea: int, eb: int, over: int, layout: int, sign_first: int) -> Diagram:
    b = Builder(d)
    mid = b.new_edge()          # finger segment between the two new crossings
    fa = _split(b, ea)          # strand A: ea -> c_first -> mid -> c_second -> fa
    bm = b.new_edge()           # strand B segment between the crossings
    fb = _split(b, eb)          # strand B: eb -> first -> bm -> second -> fb
    a_in1, a_out1 = tgt(ea), src(mid)
    a_in2, a_out2 = tgt(mid), src(fa)
    if layout == 0:             # B meets the same crossing first as A
        b_at = [(tgt(eb), src(bm)), (tgt(bm), src(fb))]
    else:                       # B meets A's second crossing first
        b_at = [(tgt(bm), src(fb)), (tgt(eb), src(bm))]
    for k, (a_io, b_io, sign) in enumerate(
        [((a_in1, a_out1), b_at[0], sign_first), ((a_in2, a_out2), b_at[1], -sign_first)]
    ):
        if over:
            slots = make_crossing(sign, b_io[0], a_io[0], b_io[1], a_io[1])
        else:
            slots = make_crossing(sign, a_io[0], b_io[0], a_io[1], b_io[1])
        b.add_node(CROSSING, slots)
    out, _, _ = b.build()
    return out


def _has_fresh_bigon(cand: Diagram, old: Diagram) -> bool:
    """The inserted crossing pair must enclose a bigon of new edges."""
    for f in cand.faces():
        if len(f.darts) == 2 and not f.occupants:
            if all(edge_of(x) >= old.n_edges for x in f.darts):
                return True
    return False


def _apply_r3(d: Diagram, tri: Tuple[int, int, int]) -> Diagram:
    try:
        f = d.face_of_dart(tri[0])
    except DiagramError:
        raise MoveError("stale site: dart gone")
    if set(f.darts) != set(tri) or f.occupants or not _r3_pattern(d, f):
        raise MoveError("stale site: not an R3 triangle")
    old_genus = d.genus()
    edges = sorted({edge_of(x) for x in f.darts})
    b = Builder(d)
    _fix_doomed_anchors(d, b, set(edges))
    strands = []
    for e in edges:
        p, jp = d.dart_pos[src(e)]
        q, jq = d.dart_pos[tgt(e)]
        strands.append(
            {
                "p": p,
                "q": q,
                "role_p": _role(jp),
                "role_q": _role(jq),
                "in": d.nodes[p].slots[(jp + 2) % 4],
                "out": d.nodes[q].slots[(jq + 2) % 4],
                "mid": b.new_edge(),
            }
        )
        b.delete_edge(e)
    crossings = {s["p"] for s in strands} | {s["q"] for s in strands}
    for c in crossings:
        here = {}
        for s in strands:
            if s["q"] == c:       # strand now meets c first
                here[s["role_q"]] = (s["in"], src(s["mid"]))
            elif s["p"] == c:     # strand now meets c second
                here[s["role_p"]] = (tgt(s["mid"]), s["out"])
        u, o = here["under"], here["over"]
        slots = make_crossing(d.crossing_sign(c), u[0], o[0], u[1], o[1])
        b.nodes[c] = Node(CROSSING, slots)
    out, _, _ = b.build()
    if out.genus() != old_genus:
        raise MoveError("R3 surgery changed the surface (internal error)")
    return out


# ---------------------------------------------------------------------------
# reversal, switches, smoothings
# ---------------------------------------------------------------------------


def reverse(d: Diagram) -> Diagram:
    """Reverse the orientation of every component."""
    def flip(x: int) -> int:
        return partner(x)

    nodes = []
    for nd in d.nodes:
        s = nd.slots
        if nd.kind == CROSSING:
            slots = (flip(s[2]), flip(s[3]), flip(s[0]), flip(s[1]))
            nodes.append(Node(CROSSING, slots, nd.starred, name=nd.name))
        elif nd.kind == TAIL:
            nodes.append(Node(HEAD, (flip(s[0]),), name=nd.name))
        elif nd.kind == HEAD:
            nodes.append(Node(TAIL, (flip(s[0]),), name=nd.name))
        elif nd.kind == STAR:
            nodes.append(Node(STAR, (), anchor=flip(nd.anchor), name=nd.name))
        else:
            nodes.append(Node(nd.kind, tuple(flip(x) for x in s), name=nd.name))
    return Diagram(d.surface, nodes, d.n_edges).check()


def switch_crossing(d: Diagram, c: int) -> Diagram:
    nd = d.nodes[c]
    if nd.kind != CROSSING:
        raise MoveError(f"node {c} is not a crossing")
    s = nd.slots
    if d.crossing_sign(c) > 0:
        slots = (s[3], s[0], s[1], s[2])
    else:
        slots = (s[1], s[2], s[3], s[0])
    b = Builder(d)
    b.nodes[c] = Node(CROSSING, slots, nd.starred, name=nd.name)
    out, _, _ = b.build()
    return out


def smooth_crossing(d: Diagram, c: int) -> Diagram:
    """The oriented smoothing: reconnect strands without crossing."""
    nd = d.nodes[c]
    if nd.kind != CROSSING or nd.starred:
        raise MoveError(f"node {c} is not a plain crossing")
    s = nd.slots
    pairs = ((s[0], s[1]), (s[3], s[2])) if d.crossing_sign(c) > 0 else ((s[0], s[3]), (s[1], s[2]))
    b = Builder(d)
    b.delete_node(c)
    throughs = [b.add_node("through", (x, y)) for x, y in pairs]
    for t in throughs:
        b.splice_through(t)
    out, _, _ = b.build()
    return out


def is_separating(d: Diagram, c: int) -> bool:
    """True iff an unoriented smoothing at c splits the universe."""
    nd = d.nodes[c]
    if nd.kind != CROSSING:
        raise MoveError(f"node {c} is not a crossing")
    s = nd.slots
    for joins in (((0, 1), (2, 3)), ((1, 2), (3, 0))):
        parent = list(range(d.n_edges))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for i, nd2 in enumerate(d.nodes):
            if i == c or not nd2.slots:
                continue
            e0 = edge_of(nd2.slots[0])
            for x in nd2.slots[1:]:
                union(e0, edge_of(x))
        for i, j in joins:
            union(edge_of(s[i]), edge_of(s[j]))
        if len({find(e) for e in range(d.n_edges)}) > 1:
            return True
    return False


def skein_triple(d: Diagram, c: int):
    """(L+, L-, L0) at crossing c; d itself plays the role matching its sign."""
    nd = d.nodes[c]
    if nd.kind != CROSSING or nd.starred:
        raise MoveError(f"node {c} is not a plain crossing")
    other = switch_crossing(d, c)
    l0 = smooth_crossing(d, c)
    if d.crossing_sign(c) > 0:
        return d, other, l0
    return other, d, l0


# ---------------------------------------------------------------------------
# connectification and bounded reduction search
# ---------------------------------------------------------------------------


def _universe_components(d: Diagram) -> List[int]:
    parent = list(range(d.n_edges))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for nd in d.nodes:
        if nd.slots:
            e0 = edge_of(nd.slots[0])
            for x in nd.slots[1:]:
                parent[find(edge_of(x))] = find(e0)
    return [find(e) for e in range(d.n_edges)]


def connectify(d: Diagram, seed: int = 0) -> Diagram:
    """Join split components with R2 insertions until the universe is connected."""
    rng = random.Random(seed)
    while not d.is_connected():
        comp = _universe_components(d)
        groups = sorted({c for c in comp})
        first, second = groups[0], groups[1]
        darts_a = [x for x in range(2 * d.n_edges) if comp[edge_of(x)] == first]
        darts_b = [x for x in range(2 * d.n_edges) if comp[edge_of(x)] == second]
        # not every dart pair sits in a common region; resample until one does
        pairs = [(a, b) for a in darts_a for b in darts_b]
        rng.shuffle(pairs)
        over = rng.randrange(2)
        # merging two pieces raises the raw Euler-characteristic genus by one;
        # it lands at the true surface genus once everything is connected
        chi = d.vertex_count() - d.n_edges + len(d.faces())
        target = (2 - chi) // 2 + 1
        for a, b in pairs:
            try:
                d = _apply_r2_plus(
                    d, a, b, over, allow_cross_component=True, target_genus=target
                )
                break
            except MoveError:
                continue
        else:
            raise MoveError("no planar R2 insertion joins the split components")
    return d


def search_crossing_reduction(d: Diagram, budget: int = 300) -> Optional[List[MoveSite]]:
    """Bounded BFS for a move sequence that strictly lowers the crossing count.

    Returns the sequence, or None if none was found within the budget; a None
    is inconclusive, never a counterexample.
    """
    start = len(d.crossings())
    seen = {d.canonical_signature()}
    queue = [(d, [])]
    expanded = 0
    while queue and expanded < budget:
        cur, path = queue.pop(0)
        expanded += 1
        for m in enumerate_moves(cur, kinds=("R1-", "R2-", "R3", "R2+")):
            if m.kind == "R2+" and len(cur.crossings()) + 2 > start + 2:
                continue
            try:
                nxt = apply_move(cur, m)
            except MoveError:
                continue
            if len(nxt.crossings()) < start:
                return path + [m]
            sig = nxt.canonical_signature()
            if sig not in seen:
                seen.add(sig)
                queue.append((nxt, path + [m]))
    return None
