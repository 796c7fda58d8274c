"""Mock Alexander polynomials for knotoids, linkoids, and their closures."""

from .canonical import (
    CanonicalError,
    ScanEntry,
    ScanReport,
    conjecture_scan,
    nabla_canonical,
    symmetry_defect,
)
from .closures import (
    ClosureError,
    ClosureSpec,
    close,
    handle_connection,
    head_starring,
    star_crossing,
    star_region,
    tail_starring,
    theta_closure,
    virtual_closure,
)
from .codec import LkdError, digest, export_json, parse_lkd, serialize_lkd
from .corpus import Fixture, gen_Gn, paper_fixtures, random_linkoid
from .diagram import Builder, Diagram, DiagramError, Node, trivial_knotoid
from .moves import (
    MoveError,
    MoveSite,
    apply_move,
    connectify,
    enumerate_moves,
    reverse,
    skein_triple,
    smooth_crossing,
    switch_crossing,
)
from .poly import LaurentPoly1, LaurentPoly2, PolyParseError, parse_w, parse_wb
from .statesum import (
    StateSumError,
    enumerate_states,
    is_admissible,
    mock_alexander,
    permanent_expand,
    permanent_ryser,
    potential,
    potential_matrix,
    state_weight,
)

__version__ = "1.0.0"

__all__ = [
    "Builder",
    "CanonicalError",
    "ClosureError",
    "ClosureSpec",
    "Diagram",
    "DiagramError",
    "Fixture",
    "LaurentPoly1",
    "LaurentPoly2",
    "LkdError",
    "MoveError",
    "MoveSite",
    "Node",
    "PolyParseError",
    "ScanEntry",
    "ScanReport",
    "StateSumError",
    "apply_move",
    "close",
    "conjecture_scan",
    "connectify",
    "digest",
    "enumerate_moves",
    "enumerate_states",
    "export_json",
    "gen_Gn",
    "handle_connection",
    "head_starring",
    "is_admissible",
    "mock_alexander",
    "nabla_canonical",
    "paper_fixtures",
    "parse_lkd",
    "parse_w",
    "parse_wb",
    "permanent_expand",
    "permanent_ryser",
    "potential",
    "potential_matrix",
    "random_linkoid",
    "reverse",
    "serialize_lkd",
    "skein_triple",
    "smooth_crossing",
    "star_crossing",
    "star_region",
    "state_weight",
    "switch_crossing",
    "symmetry_defect",
    "tail_starring",
    "theta_closure",
    "trivial_knotoid",
    "virtual_closure",
]
