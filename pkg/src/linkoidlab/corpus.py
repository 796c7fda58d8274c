"""Diagram generators: the skein-module family G_n and seeded random linkoids.

G_n is the uni-linkoid whose closed component spirals around the tail of a
trivial knotoidal strand n times (n crossings, spiral under the strand) and
returns to its start through an arc passing over the first n-1 turns.

random_linkoid grows a diagram of prescribed component counts by seeded
mutations, including a deliberate "strand pass" that drags an endpoint
across a neighbouring strand.  That move changes the diagram's type, which
is exactly what a diverse corpus needs, so it must never appear in
invariance fuzzing.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Optional, Tuple

from .closures import _Asm, _add_cross
from .codec import parse_lkd
from .diagram import (
    CROSSING,
    HEAD,
    SPHERE,
    TAIL,
    Builder,
    Diagram,
    Node,
    edge_of,
    src,
    tgt,
    trivial_knotoid,
)
from .moves import (
    MoveError,
    _split,
    apply_move,
    connectify,
    enumerate_moves,
    make_crossing,
    switch_crossing,
)


def gen_Gn(n: int) -> Diagram:
    """The n-th generator of the uni-linkoid skein module."""
    if n < 0:
        raise ValueError("gen_Gn needs n >= 0")
    if n == 0:
        return trivial_knotoid()
    asm = _Asm(SPHERE)
    t = asm.add(TAIL, (0,))
    h = asm.add(HEAD, (0,))
    # spiral crossings: strand northward over the spiral flowing east to west
    cs = [_add_cross(asm, v_north=True, h_east=False, v_under=False) for _ in range(n)]
    # return crossings: return arc northward over the spiral flowing west to east
    rs = [_add_cross(asm, v_north=True, h_east=True, v_under=False) for _ in range(n - 1)]
    cur = (t, 0)
    for c in cs:
        asm.connect(cur, (c, "S"))
        cur = (c, "N")
    asm.connect(cur, (h, 0))
    # the loop: wind through c_1, r_1, c_2, ..., c_n, then return over
    # r_{n-1}, ..., r_1 back to the start of the spiral
    seq = []
    for i in range(n - 1):
        seq += [(cs[i], "E", "W"), (rs[i], "W", "E")]
    seq.append((cs[n - 1], "E", "W"))
    for j in range(n - 2, -1, -1):
        seq.append((rs[j], "S", "N"))
    for k, (nid, _, okey) in enumerate(seq):
        nxt, ikey, _ = seq[(k + 1) % len(seq)]
        asm.connect((nid, okey), (nxt, ikey))
    nodes, n_edges, _ = asm.compile()
    return Diagram(SPHERE, nodes, n_edges).check()


def _strand_pass(d: Diagram, ep: int, bdart: int, ep_under: bool, sign: int) -> Optional[Diagram]:
    """Drag endpoint ep across the strand holding bdart, adding one crossing."""
    e = edge_of(d.nodes[ep].slots[0])
    eb = edge_of(bdart)
    b = Builder(d)
    fb = _split(b, eb)
    fe = _split(b, e)
    if ep_under:
        rot = make_crossing(sign, tgt(e), tgt(eb), src(fe), src(fb))
    else:
        rot = make_crossing(sign, tgt(eb), tgt(e), src(fb), src(fe))
    b.add_node(CROSSING, rot)
    try:
        out, _, _ = b.build()
    except Exception:
        return None
    if out.validate() or not out.is_connected() or out.genus() != d.genus():
        return None
    c0, c1 = d.components(), out.components()
    if (c0.kappa, c0.ell) != (c1.kappa, c1.ell):
        return None
    return out


def _apply_strand_pass(d: Diagram, rng: random.Random) -> Optional[Diagram]:
    eps = [i for i, nd in enumerate(d.nodes) if nd.kind in (TAIL, HEAD)]
    rng.shuffle(eps)
    for ep in eps:
        d0 = d.nodes[ep].slots[0]
        face = d.face_of_dart(d0)
        cands = [x for x in face.darts if edge_of(x) != edge_of(d0)]
        rng.shuffle(cands)
        for bdart in cands:
            for ep_under in (True, False):
                for sign in (1, -1):
                    out = _strand_pass(d, ep, bdart, ep_under, sign)
                    if out is not None:
                        return out
    return None


_MUTATIONS = ("R1+", "R2+", "R3", "switch", "pass")


def random_linkoid(kappa: int, ell: int, mutations: int = 0, seed: int = 0) -> Diagram:
    """A seeded random connected linkoid with the given component counts."""
    if kappa + ell < 1:
        raise ValueError("random_linkoid needs at least one component")
    nodes = []
    for i in range(kappa):
        nodes.append(Node(TAIL, (src(i),)))
        nodes.append(Node(HEAD, (tgt(i),)))
    for j in range(ell):
        # a loop needs a node to hang on: a single-kink figure eight
        a, b = kappa + 2 * j, kappa + 2 * j + 1
        nodes.append(Node(CROSSING, (tgt(a), tgt(b), src(b), src(a))))
    d = Diagram(SPHERE, nodes, kappa + 2 * ell).check()
    rng = random.Random(seed)
    d = connectify(d, seed=rng.randrange(2**31))
    for _ in range(mutations):
        op = rng.choice(_MUTATIONS)
        if op == "switch":
            crossings = d.crossings()
            if crossings:
                d = switch_crossing(d, rng.choice(crossings))
        elif op == "pass":
            out = _apply_strand_pass(d, rng)
            if out is not None:
                d = out
        else:
            sites = enumerate_moves(d, kinds=(op,))
            if not sites:
                continue
            try:
                d = apply_move(d, rng.choice(sites))
            except MoveError:
                continue
    d.check()
    return d


@dataclass(frozen=True)
class Fixture:
    """A shipped diagram with its pinned expected values.

    Every entry of `expected` carries a provenance note saying where the
    value was pinned and how it was obtained.
    """

    name: str
    document: str
    description: str
    expected: Mapping[str, Mapping[str, object]]

    @property
    def diagram(self) -> Diagram:
        return parse_lkd(self.document).check()


def paper_fixtures() -> Tuple[Fixture, ...]:
    """All transcribed fixtures shipped with the package."""
    root = resources.files("linkoidlab") / "fixtures"
    manifest = json.loads((root / "manifest.json").read_text())
    return tuple(
        Fixture(
            name=entry["name"],
            document=(root / entry["file"]).read_text(),
            description=entry["description"],
            expected=entry["expected"],
        )
        for entry in manifest
    )
