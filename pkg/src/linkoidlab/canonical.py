"""Choice-free linkoid polynomials and the substitution-conjecture scanner.

The closures of a linkoid depend on which components are closed; averaging
the mock Alexander polynomial over every choice removes the dependence and
yields canonical invariants: the under-, over-, and theta-closure
polynomials.  The module also provides the tail/head symmetry defect of a
uni-linkoid (identically zero) and a scanner hunting for counterexamples to
the (W, B)-level substitution conjecture.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Tuple

from .closures import (
    ClosureSpec,
    close,
    head_starring,
    star_region,
    tail_starring,
    theta_closure,
)
from .codec import digest, serialize_lkd
from .diagram import PLANE, SPHERE, Diagram, tgt, src
from .poly import LaurentPoly1, LaurentPoly2
from .statesum import mock_alexander, potential


class CanonicalError(ValueError):
    pass


VARIANTS = ("under", "over", "theta")


def _knotoidal(d: Diagram) -> List[int]:
    comps = d.components()
    return [i for i, k in enumerate(comps.kinds) if k == "knotoidal"]


def _check_unstarred(d: Diagram) -> bool:
    """Reject extra decorations; returns whether the diagram is planar."""
    planar = d.surface == PLANE
    extra = [i for i in d.stars() if not (planar and d.nodes[i].name == "infinity")]
    if extra:
        raise CanonicalError("canonical polynomials are defined for unstarred diagrams")
    if any(d.nodes[c].starred for c in d.crossings()):
        raise CanonicalError("canonical polynomials are defined for unstarred diagrams")
    return planar


def _star_link(d: Diagram, planar: bool) -> Diagram:
    """Starring for the no-endpoint case: two adjacent regions, taking the
    point at infinity as one of them on the plane."""
    inf_id = None
    if planar:
        star = d.nodes[d.stars()[0]]
        inf_id = d.face_of_dart(star.anchor).id
    for e in range(d.n_edges):
        left = d.face_of_dart(tgt(e))
        right = d.face_of_dart(src(e))
        if left.id == right.id:
            continue
        if inf_id is None:
            return star_region(star_region(d, left), right)
        if inf_id == left.id:
            return star_region(d, right)
        if inf_id == right.id:
            return star_region(d, left)
    raise CanonicalError("no pair of adjacent regions to star")


def nabla_canonical(d: Diagram, variant: str = "under") -> LaurentPoly1:
    """The canonical mock Alexander polynomial of a linkoid diagram."""
    if variant not in VARIANTS:
        raise CanonicalError(f"unknown variant {variant!r}")
    planar = _check_unstarred(d)
    ks = _knotoidal(d)
    kappa = len(ks)

    if variant == "theta":
        if kappa % 2 != (1 if planar else 0) or (not planar and kappa == 0):
            raise CanonicalError(
                "theta polynomial needs an even number of knotoidal components "
                "on the sphere and an odd number on the plane; compose with a "
                "single closure or a handle connection first"
            )
        size = (kappa - 1) // 2 if planar else (kappa - 2) // 2
        subsets = list(combinations(ks, size))
        total = LaurentPoly1.zero()
        for S in subsets:
            total = total + mock_alexander(theta_closure(d, S) if S else d)
        return total.scale(Fraction(1, len(subsets)))

    if kappa == 0:
        return mock_alexander(_star_link(d, planar))
    if planar:
        # one closure fewer than on the sphere: the point at infinity is the star
        total = LaurentPoly1.zero()
        for c in ks:
            others = tuple(x for x in ks if x != c)
            dd = close(d, ClosureSpec(others, "shadow", variant, "parallel")) if others else d
            total = total + mock_alexander(dd)
        return total.scale(Fraction(1, kappa))
    if kappa == 1:
        return mock_alexander(tail_starring(d))
    if kappa == 2:
        return mock_alexander(d)
    total = LaurentPoly1.zero()
    for c in ks:
        others = tuple(x for x in ks if x != c)
        dd = close(d, ClosureSpec(others, "shadow", variant, "parallel"))
        # the one remaining open component gets the tail star
        total = total + mock_alexander(tail_starring(dd))
    return total.scale(Fraction(1, kappa))


def symmetry_defect(d: Diagram) -> LaurentPoly1:
    """Difference between the tail starring and the reversed head starring of
    a spherical uni-linkoid; identically zero."""
    if d.surface != SPHERE:
        raise CanonicalError("symmetry defect is defined for spherical diagrams")
    _check_unstarred(d)
    if len(_knotoidal(d)) != 1:
        raise CanonicalError("symmetry defect needs exactly one knotoidal component")
    lhs = mock_alexander(tail_starring(d))
    rhs = mock_alexander(head_starring(d)).neg_inv()
    return lhs - rhs


@dataclass(frozen=True)
class ScanEntry:
    digest: str
    kappa: int
    ell: int
    crossings: int
    defect: LaurentPoly2
    document: Optional[str] = None

    def line(self) -> str:
        verdict = "ok" if not self.defect else "COUNTEREXAMPLE-CANDIDATE"
        out = f"{self.digest}  kappa={self.kappa} ell={self.ell} crossings={self.crossings}  {verdict}"
        if self.defect:
            out += f"  defect: {self.defect}"
        return out


@dataclass(frozen=True)
class ScanReport:
    entries: Tuple[ScanEntry, ...]

    @property
    def scanned(self) -> int:
        return len(self.entries)

    @property
    def hits(self) -> Tuple[ScanEntry, ...]:
        return tuple(e for e in self.entries if e.defect)

    def __str__(self) -> str:
        lines = [e.line() for e in self.entries]
        lines.append(f"scanned {self.scanned} diagrams, {len(self.hits)} counterexample candidates")
        for e in self.hits:
            lines.append(f"candidate {e.digest}:")
            lines.append(e.document.rstrip("\n"))
        return "\n".join(lines)


def conjecture_scan(corpus: Iterable[Diagram]) -> ScanReport:
    """Test the substitution identity potential_t(W, B) = potential_h(-B, -W)
    on every knotoid in the corpus; hits are reported, never raised."""
    entries = []
    for d in corpus:
        planar = _check_unstarred(d)
        comps = d.components()
        if planar or comps.kappa != 1:
            raise CanonicalError("conjecture scan expects spherical knotoids")
        delta = potential(tail_starring(d)) - potential(head_starring(d)).swap_neg()
        entries.append(
            ScanEntry(
                digest=digest(d),
                kappa=comps.kappa,
                ell=comps.ell,
                crossings=len(d.crossings()),
                defect=delta,
                document=serialize_lkd(d) if delta else None,
            )
        )
    return ScanReport(tuple(entries))
