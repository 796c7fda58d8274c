"""Text format for diagrams (`.lkd`) and JSON export of computed results.

The format is line oriented::

    linkoid v1
    surface sphere            # or: plane
    edge e0                   # darts are written e0.s (source) and e0.t (target)
    node t0 tail e0.s
    node c0 crossing e0.t e2.s e1.s e3.t   # counterclockwise, slot 0 = incoming under
    node c1 crossing* ...                  # '*' marks a starred crossing
    node r0 rev2 e4.t e5.t
    node v0 v3 e6.s e7.t e8.s
    node s0 star in e1.t                   # region star anchored by one of its darts
    node h0 head e9.t

Blank lines and `#` comments are ignored.  Serialization is deterministic, so
equal diagrams always produce byte-identical documents.
"""

from __future__ import annotations

import hashlib
import json
from typing import Dict, List

from .diagram import (
    CROSSING,
    HEAD,
    PLANE,
    REV2,
    SPHERE,
    STAR,
    TAIL,
    V3,
    Diagram,
    DiagramError,
    Node,
    src,
    tgt,
)

_KIND_ARITY = {TAIL: 1, HEAD: 1, REV2: 2, V3: 3}
_KIND_PREFIX = {CROSSING: "c", TAIL: "t", HEAD: "h", REV2: "r", V3: "v", STAR: "s"}


class LkdError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _parse_dart(token: str, edges: Dict[str, int], lineno: int) -> int:
    name, _, end = token.partition(".")
    if name not in edges:
        raise LkdError(f"unknown edge {name!r}", lineno)
    if end == "s":
        return src(edges[name])
    if end == "t":
        return tgt(edges[name])
    raise LkdError(f"dart must end in .s or .t, got {token!r}", lineno)


def parse_lkd(text: str) -> Diagram:
    surface = None
    edges: Dict[str, int] = {}
    nodes: List[Node] = []
    names = set()
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if not saw_header:
            if words != ["linkoid", "v1"]:
                raise LkdError("expected header 'linkoid v1'", lineno)
            saw_header = True
            continue
        if words[0] == "surface":
            if surface is not None:
                raise LkdError("duplicate surface directive", lineno)
            if len(words) != 2 or words[1] not in (SPHERE, PLANE):
                raise LkdError("surface must be 'sphere' or 'plane'", lineno)
            surface = words[1]
        elif words[0] == "edge":
            if len(words) != 2:
                raise LkdError("edge directive takes one name", lineno)
            name = words[1]
            if not (name.startswith("e") and name[1:].isdigit()):
                raise LkdError(f"edge name must look like e<k>, got {name!r}", lineno)
            if name in edges:
                raise LkdError(f"duplicate edge {name!r}", lineno)
            edges[name] = len(edges)
        elif words[0] == "node":
            if len(words) < 3:
                raise LkdError("node directive needs an id and a kind", lineno)
            name, kind = words[1], words[2]
            if name in names:
                raise LkdError(f"duplicate node id {name!r}", lineno)
            names.add(name)
            rest = words[3:]
            if kind in ("crossing", "crossing*"):
                if len(rest) != 4:
                    raise LkdError("crossing needs 4 darts", lineno)
                slots = tuple(_parse_dart(t, edges, lineno) for t in rest)
                nodes.append(Node(CROSSING, slots, starred=kind.endswith("*"), name=name))
            elif kind in _KIND_ARITY:
                if len(rest) != _KIND_ARITY[kind]:
                    raise LkdError(f"{kind} needs {_KIND_ARITY[kind]} dart(s)", lineno)
                slots = tuple(_parse_dart(t, edges, lineno) for t in rest)
                nodes.append(Node(kind, slots, name=name))
            elif kind == "star":
                if len(rest) != 2 or rest[0] != "in":
                    raise LkdError("star syntax: node <id> star in <dart>", lineno)
                anchor = _parse_dart(rest[1], edges, lineno)
                nodes.append(Node(STAR, (), anchor=anchor, name=name))
            else:
                raise LkdError(f"unknown node kind {kind!r}", lineno)
        else:
            raise LkdError(f"unknown directive {words[0]!r}", lineno)
    if not saw_header:
        raise LkdError("empty document", 1)
    if surface is None:
        raise LkdError("missing surface directive", 1)
    d = Diagram(surface, nodes, len(edges))
    errs = d.validate()
    if errs:
        raise DiagramError("; ".join(errs))
    return d


def _dart_name(dart: int) -> str:
    return f"e{dart // 2}.{'s' if dart % 2 == 0 else 't'}"


def serialize_lkd(d: Diagram) -> str:
    lines = ["linkoid v1", f"surface {d.surface}"]
    for e in range(d.n_edges):
        lines.append(f"edge e{e}")
    counters: Dict[str, int] = {}
    used = {nd.name for nd in d.nodes if nd.name}
    for nd in d.nodes:
        name = nd.name
        if not name:
            prefix = _KIND_PREFIX[nd.kind]
            while True:
                k = counters.get(prefix, 0)
                counters[prefix] = k + 1
                name = f"{prefix}{k}"
                if name not in used:
                    break
        if nd.kind == STAR:
            lines.append(f"node {name} star in {_dart_name(nd.anchor)}")
        else:
            kind = "crossing*" if nd.kind == CROSSING and nd.starred else nd.kind
            darts = " ".join(_dart_name(x) for x in nd.slots)
            lines.append(f"node {name} {kind} {darts}")
    return "\n".join(lines) + "\n"


def digest(d: Diagram) -> str:
    return hashlib.sha256(serialize_lkd(d).encode()).hexdigest()[:16]


def export_json(d: Diagram) -> str:
    """JSON summary of the computed invariants of a diagram."""
    from .statesum import enumerate_states, mock_alexander, potential

    comps = d.components()
    pot = potential(d)
    record = {
        "input-digest": digest(d),
        "kappa": comps.kappa,
        "ell": comps.ell,
        "omega_g": d.obstruction_generalized(),
        "genus": d.genus(),
        "potential": str(pot),
        "mock_alexander": str(pot.collapse()),
        "state_count": sum(1 for _ in enumerate_states(d)),
    }
    return json.dumps(record, indent=2)
