"""HTTP service exposing the diagram computations over `.lkd` documents.

Every endpoint takes and returns JSON; diagrams travel as `.lkd` text in the
`document` field.  Computation errors map to HTTP 400 with a detail message.
"""

from __future__ import annotations

import random
from typing import List, Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .canonical import CanonicalError, conjecture_scan, nabla_canonical
from .closures import ClosureError, ClosureSpec, close, theta_closure
from .codec import LkdError, digest, parse_lkd, serialize_lkd
from .corpus import gen_Gn, random_linkoid
from .diagram import Diagram, DiagramError
from .moves import MoveError, skein_triple
from .poly import LaurentPoly1
from .statesum import StateSumError, enumerate_states, mock_alexander, potential, potential_matrix

_ERRORS = (CanonicalError, ClosureError, DiagramError, LkdError, MoveError, StateSumError, ValueError)

app = FastAPI(title="linkoidlab", version="1.0")


def _load(document: str) -> Diagram:
    return parse_lkd(document).check()


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc))


class DiagramDocument(BaseModel):
    document: str = Field(description="diagram in .lkd text form")


class DiagramResponse(BaseModel):
    document: str
    digest: str


class InfoResponse(BaseModel):
    digest: str
    kappa: int
    ell: int
    omega: int
    omega_g: int
    genus: int
    faces: int


class PotentialResponse(BaseModel):
    potential: str
    mock_alexander: str
    state_count: int
    matrix: List[List[str]]


class PolynomialResponse(BaseModel):
    polynomial: str


class CloseRequest(DiagramDocument):
    components: List[int]
    style: Literal["shadow", "mirror"] = "shadow"
    position: Literal["under", "over"] = "under"
    orientation: Literal["parallel", "antiparallel"] = "parallel"


class ThetaRequest(DiagramDocument):
    components: List[int]


class CanonicalRequest(DiagramDocument):
    variant: Literal["under", "over", "theta"] = "under"


class SkeinRequest(DiagramDocument):
    crossing: str


class SkeinResponse(BaseModel):
    positive: str
    negative: str
    smoothed: str
    residual: str


class RandomRequest(BaseModel):
    knotoidal: int = 1
    loops: int = 0
    mutations: int = 10
    seed: int = 0


class ScanRequest(BaseModel):
    crossings: int = 8
    count: int = 100
    seed: int = 0


class ScanResponse(BaseModel):
    scanned: int
    candidates: int
    report: str


def _diagram_response(d: Diagram) -> DiagramResponse:
    return DiagramResponse(document=serialize_lkd(d), digest=digest(d))


@app.post("/info", response_model=InfoResponse)
def info(req: DiagramDocument):
    d = _guard(_load, req.document)
    c = d.components()
    return InfoResponse(
        digest=digest(d),
        kappa=c.kappa,
        ell=c.ell,
        omega=d.obstruction_starred(),
        omega_g=d.obstruction_generalized(),
        genus=_guard(d.genus),
        faces=len(d.faces()),
    )


@app.post("/potential", response_model=PotentialResponse)
def potential_endpoint(req: DiagramDocument):
    d = _guard(_load, req.document)
    pot = _guard(potential, d)
    matrix = _guard(potential_matrix, d)
    return PotentialResponse(
        potential=str(pot),
        mock_alexander=str(pot.collapse()),
        state_count=sum(1 for _ in enumerate_states(d)),
        matrix=[[str(x) for x in row] for row in matrix],
    )


@app.post("/map", response_model=PolynomialResponse)
def map_endpoint(req: DiagramDocument):
    d = _guard(_load, req.document)
    return PolynomialResponse(polynomial=str(_guard(mock_alexander, d)))


@app.post("/close", response_model=DiagramResponse)
def close_endpoint(req: CloseRequest):
    d = _guard(_load, req.document)
    spec = _guard(ClosureSpec, tuple(req.components), req.style, req.position, req.orientation)
    return _diagram_response(_guard(close, d, spec))


@app.post("/theta", response_model=DiagramResponse)
def theta_endpoint(req: ThetaRequest):
    d = _guard(_load, req.document)
    return _diagram_response(_guard(theta_closure, d, req.components))


@app.post("/canonical", response_model=PolynomialResponse)
def canonical_endpoint(req: CanonicalRequest):
    d = _guard(_load, req.document)
    return PolynomialResponse(polynomial=str(_guard(nabla_canonical, d, req.variant)))


@app.post("/skein", response_model=SkeinResponse)
def skein_endpoint(req: SkeinRequest):
    d = _guard(_load, req.document)
    ident = req.crossing
    c = None
    for i in d.crossings():
        if d.nodes[i].name == ident:
            c = i
    if c is None and ident.isdigit() and int(ident) in d.crossings():
        c = int(ident)
    if c is None:
        raise HTTPException(status_code=400, detail=f"no crossing named {ident!r}")
    lp, lm, l0 = _guard(skein_triple, d, c)
    np_, nm, n0 = (_guard(mock_alexander, x) for x in (lp, lm, l0))
    z = LaurentPoly1.monomial(1) - LaurentPoly1.monomial(-1)
    return SkeinResponse(
        positive=str(np_), negative=str(nm), smoothed=str(n0), residual=str(np_ - nm - z * n0)
    )


@app.post("/gen/gn/{n}", response_model=DiagramResponse)
def gen_gn_endpoint(n: int):
    return _diagram_response(_guard(gen_Gn, n))


@app.post("/gen/random", response_model=DiagramResponse)
def gen_random_endpoint(req: RandomRequest):
    return _diagram_response(
        _guard(random_linkoid, req.knotoidal, req.loops, req.mutations, req.seed)
    )


@app.post("/scan", response_model=ScanResponse)
def scan_endpoint(req: ScanRequest):
    rng = random.Random(req.seed)
    corpus = []
    while len(corpus) < req.count:
        d = random_linkoid(1, 0, mutations=rng.randrange(1, 7), seed=rng.randrange(2**31))
        if len(d.crossings()) <= req.crossings:
            corpus.append(d)
    report = _guard(conjecture_scan, corpus)
    return ScanResponse(scanned=report.scanned, candidates=len(report.hits), report=str(report))
