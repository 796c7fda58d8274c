"""State sums, potential matrices, permanents, and the mock Alexander polynomial.

A state assigns to every unstarred crossing one of its four adjacent quadrants
so that the induced crossing -> region map is a bijection onto the unstarred
disk regions.  The potential is the sum over states of the products of the
local quadrant weights; collapsing B = W^-1 gives the mock Alexander
polynomial.
"""

from __future__ import annotations

from typing import Dict, Iterator, List, Sequence

from .diagram import CROSSING, Diagram, DiagramError
from .poly import LaurentPoly1, LaurentPoly2

_ONE = LaurentPoly2.one()
_W = LaurentPoly2.monomial(1, 0)
_B = LaurentPoly2.monomial(0, 1)

# Local weights by quadrant index; quadrant k sits between slots k and k+1
# (counterclockwise from the quadrant following the incoming under-strand).
# Pinned by the R1 monogons (always +1), the reversal symmetry W -> -B, and
# every fixture polynomial in the test suite.
WEIGHTS = {
    1: (_ONE, _W, _ONE, -_B),
    -1: (-_W, _ONE, _B, _ONE),
}


class StateSumError(ValueError):
    pass


State = Dict[int, int]  # unstarred crossing node id -> chosen quadrant index


def _active(d: Diagram):
    """Unstarred crossings and unstarred disk faces, in deterministic order."""
    crossings = d.crossings(starred=False)
    faces = [f for f in d.faces() if not f.occupants]
    return crossings, faces


def is_admissible(d: Diagram) -> bool:
    if not d.is_connected():
        return False
    crossings, faces = _active(d)
    return len(crossings) == len(faces)


def _require_admissible(d: Diagram):
    if not d.is_connected():
        raise StateSumError("state sum undefined for split diagrams")
    crossings, faces = _active(d)
    if len(crossings) != len(faces):
        raise StateSumError(
            f"diagram not admissible: obstruction = {len(crossings) - len(faces)}"
        )


def enumerate_states(d: Diagram) -> Iterator[State]:
    """All states in deterministic order (crossings ascending, quadrants ascending)."""
    _require_admissible(d)
    crossings, faces = _active(d)
    face_ok = {f.id for f in faces}
    # adjacency at quadrant granularity: two quadrants of one crossing in the
    # same region give two distinct states
    options: List[List[tuple]] = []
    for c in crossings:
        opts = []
        for q in range(4):
            fid = d.quadrant_face(c, q).id
            if fid in face_ok:
                opts.append((q, fid))
        options.append(opts)

    n = len(crossings)
    used = set()
    choice = [0] * n

    def rec(i: int):
        if i == n:
            yield {crossings[k]: choice[k] for k in range(n)}
            return
        for q, fid in options[i]:
            if fid not in used:
                used.add(fid)
                choice[i] = q
                yield from rec(i + 1)
                used.discard(fid)

    yield from rec(0)


def state_weight(d: Diagram, s: State) -> LaurentPoly2:
    w = LaurentPoly2.one()
    for c, q in s.items():
        w = w * WEIGHTS[d.crossing_sign(c)][q]
    return w


def potential(d: Diagram) -> LaurentPoly2:
    """Sum of state weights; evaluated through Ryser's method on larger diagrams."""
    _require_admissible(d)
    crossings, _ = _active(d)
    if len(crossings) >= 7:
        return permanent_ryser(potential_matrix(d))
    total = LaurentPoly2.zero()
    for s in enumerate_states(d):
        total = total + state_weight(d, s)
    return total


def potential_matrix(d: Diagram) -> List[List[LaurentPoly2]]:
    """Rows: unstarred crossings (id order); columns: unstarred disk faces (id order)."""
    if not d.is_connected():
        raise StateSumError("potential matrix undefined for split diagrams")
    crossings, faces = _active(d)
    col = {f.id: j for j, f in enumerate(faces)}
    m = [[LaurentPoly2.zero() for _ in faces] for _ in crossings]
    for i, c in enumerate(crossings):
        wrow = WEIGHTS[d.crossing_sign(c)]
        for q in range(4):
            fid = d.quadrant_face(c, q).id
            if fid in col:
                j = col[fid]
                m[i][j] = m[i][j] + wrow[q]
    return m


def permanent_ryser(m: Sequence[Sequence[LaurentPoly2]]) -> LaurentPoly2:
    """Permanent by Ryser inclusion-exclusion with Gray-code column updates."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise StateSumError("permanent requires a square matrix")
    if n == 0:
        return LaurentPoly2.one()
    zero = LaurentPoly2.zero()
    sums = [zero] * n
    total = zero
    mask = 0
    for g in range(1, 1 << n):
        gray = g ^ (g >> 1)
        j = (gray ^ mask).bit_length() - 1
        if gray & (1 << j):
            sums = [sums[i] + m[i][j] for i in range(n)]
        else:
            sums = [sums[i] - m[i][j] for i in range(n)]
        mask = gray
        prod = LaurentPoly2.one()
        for s in sums:
            prod = prod * s
        k = bin(gray).count("1")
        if (n - k) % 2:
            total = total - prod
        else:
            total = total + prod
    return total


def permanent_expand(m: Sequence[Sequence[LaurentPoly2]]) -> LaurentPoly2:
    """Oracle permanent: first-row expansion without signs."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise StateSumError("permanent requires a square matrix")
    cols = tuple(range(n))
    cache: dict = {}

    def rec(r: int, cols: tuple) -> LaurentPoly2:
        if not cols:
            return LaurentPoly2.one()
        key = cols  # row index is determined by how many columns remain
        if key in cache:
            return cache[key]
        acc = LaurentPoly2.zero()
        for idx, j in enumerate(cols):
            entry = m[r][j]
            if entry:
                acc = acc + entry * rec(r + 1, cols[:idx] + cols[idx + 1:])
        cache[key] = acc
        return acc

    return rec(0, cols)


def mock_alexander(d: Diagram) -> LaurentPoly1:
    return potential(d).collapse()
