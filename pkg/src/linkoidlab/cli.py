"""Command-line front end over `.lkd` diagram files.

Exit codes: 0 on success, 1 on computation errors (parse, validation,
inadmissibility, bad arguments to an operation), 2 on usage errors.
"""

from __future__ import annotations

import functools
import random
import sys

import click

from .canonical import CanonicalError, conjecture_scan, nabla_canonical
from .closures import ClosureError, ClosureSpec, close, theta_closure
from .codec import LkdError, export_json, parse_lkd, serialize_lkd
from .corpus import gen_Gn, random_linkoid
from .diagram import Diagram, DiagramError
from .moves import MoveError, enumerate_moves, apply_move, skein_triple
from .poly import LaurentPoly1, PolyParseError
from .statesum import StateSumError, mock_alexander, potential, potential_matrix

_ERRORS = (
    CanonicalError,
    ClosureError,
    DiagramError,
    LkdError,
    MoveError,
    PolyParseError,
    StateSumError,
    ValueError,
)


def _computation(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _load(path: str) -> Diagram:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    return parse_lkd(text).check()


def _emit(d: Diagram, out: str | None):
    doc = serialize_lkd(d)
    if out:
        with open(out, "w") as fh:
            fh.write(doc)
    else:
        click.echo(doc, nl=False)


def _components_list(text: str):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise ClosureError(f"bad component list {text!r}")


@click.group()
def main():
    """Mock Alexander polynomials for linkoids."""


@main.command()
@click.argument("file", type=click.Path())
@_computation
def info(file):
    """Component, obstruction, and surface counts of a diagram."""
    d = _load(file)
    c = d.components()
    click.echo(
        f"kappa={c.kappa} ell={c.ell} omega={d.obstruction_starred()} "
        f"omega_g={d.obstruction_generalized()} genus={d.genus()} faces={len(d.faces())}"
    )


@main.command("potential")
@click.argument("file", type=click.Path())
@click.option("--matrix", is_flag=True, help="print the potential matrix instead")
@click.option("--json", "as_json", is_flag=True, help="JSON record of all invariants")
@_computation
def potential_cmd(file, matrix, as_json):
    """Potential polynomial of an admissible diagram."""
    d = _load(file)
    if as_json:
        click.echo(export_json(d))
        return
    if matrix:
        for row in potential_matrix(d):
            click.echo("[" + ", ".join(str(x) for x in row) + "]")
        return
    click.echo(str(potential(d)))


@main.command("map")
@click.argument("file", type=click.Path())
@_computation
def map_cmd(file):
    """Mock Alexander polynomial (the potential at B = W^-1)."""
    click.echo(str(mock_alexander(_load(file))))


@main.command("close")
@click.argument("file", type=click.Path())
@click.option("--components", required=True, help="comma-separated component ids")
@click.option("--style", type=click.Choice(["shadow", "mirror"]), default="shadow")
@click.option("--pos", type=click.Choice(["under", "over"]), default="under")
@click.option("--orient", type=click.Choice(["par", "anti"]), default="par")
@click.option("-o", "out", type=click.Path(), default=None, help="write result here")
@_computation
def close_cmd(file, components, style, pos, orient, out):
    """Close components with parallel or antiparallel pushoff arcs."""
    d = _load(file)
    orientation = "parallel" if orient == "par" else "antiparallel"
    spec = ClosureSpec(_components_list(components), style, pos, orientation)
    _emit(close(d, spec), out)


@main.command("theta")
@click.argument("file", type=click.Path())
@click.option("--components", required=True, help="comma-separated component ids")
@click.option("-o", "out", type=click.Path(), default=None, help="write result here")
@_computation
def theta_cmd(file, components, out):
    """Theta-close components (both arcs, trivalent junctions)."""
    d = _load(file)
    _emit(theta_closure(d, _components_list(components)), out)


@main.command("canonical")
@click.argument("file", type=click.Path())
@click.option("--variant", type=click.Choice(["under", "over", "theta"]), default="under")
@_computation
def canonical_cmd(file, variant):
    """Choice-free closure polynomial of a linkoid."""
    click.echo(str(nabla_canonical(_load(file), variant)))


def _find_crossing(d: Diagram, ident: str) -> int:
    for i in d.crossings():
        if d.nodes[i].name == ident:
            return i
    if ident.isdigit() and int(ident) in d.crossings():
        return int(ident)
    raise MoveError(f"no crossing named {ident!r}")


@main.command("skein")
@click.argument("file", type=click.Path())
@click.option("--crossing", required=True, help="crossing name (e.g. c2) or node id")
@_computation
def skein_cmd(file, crossing):
    """Evaluate the skein relation at one crossing and print the residual."""
    d = _load(file)
    c = _find_crossing(d, crossing)
    lp, lm, l0 = skein_triple(d, c)
    np_, nm, n0 = mock_alexander(lp), mock_alexander(lm), mock_alexander(l0)
    z = LaurentPoly1.monomial(1) - LaurentPoly1.monomial(-1)
    residual = np_ - nm - z * n0
    click.echo(f"L+: {np_}")
    click.echo(f"L-: {nm}")
    click.echo(f"L0: {n0}")
    click.echo(f"residual: {residual}")
    if residual:
        sys.exit(1)


@main.command("fuzz")
@click.argument("file", type=click.Path())
@click.option("--moves", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@_computation
def fuzz_cmd(file, moves, seed):
    """Random Reidemeister walk; fails if the invariant changes."""
    d = _load(file)
    base = mock_alexander(d)
    rng = random.Random(seed)
    cap = len(d.crossings()) + 8
    cur = d
    applied = 0
    for _ in range(moves):
        kinds = ["R1-", "R2-", "R3"]
        if len(cur.crossings()) < cap:
            kinds += ["R1+", "R2+"]
        sites = enumerate_moves(cur, kinds=kinds)
        if not sites:
            break
        m = rng.choice(sites)
        try:
            nxt = apply_move(cur, m)
        except MoveError:
            continue
        if not nxt.is_connected():
            continue
        cur = nxt
        applied += 1
    final = mock_alexander(cur)
    if final != base:
        click.echo(
            f"INVARIANCE VIOLATION after {applied} moves: {base} != {final}", err=True
        )
        sys.exit(1)
    click.echo(f"ok: {applied} moves applied, invariant {base}")


@main.command("scan-conjecture")
@click.option("--crossings", default=8, show_default=True, help="max crossing count")
@click.option("--count", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@_computation
def scan_cmd(crossings, count, seed):
    """Scan random knotoids for substitution-conjecture counterexamples."""
    rng = random.Random(seed)
    corpus = []
    while len(corpus) < count:
        d = random_linkoid(1, 0, mutations=rng.randrange(1, 7), seed=rng.randrange(2**31))
        if len(d.crossings()) <= crossings:
            corpus.append(d)
    click.echo(str(conjecture_scan(corpus)))


@main.group("gen")
def gen_group():
    """Generate diagrams."""


@gen_group.command("gn")
@click.argument("n", type=int)
@click.option("-o", "out", type=click.Path(), default=None)
@_computation
def gen_gn_cmd(n, out):
    """The n-th uni-linkoid skein module generator."""
    _emit(gen_Gn(n), out)


@gen_group.command("random")
@click.option("--knotoidal", default=1, show_default=True)
@click.option("--loops", default=0, show_default=True)
@click.option("--mutations", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("-o", "out", type=click.Path(), default=None)
@_computation
def gen_random_cmd(knotoidal, loops, mutations, seed, out):
    """A seeded random connected linkoid."""
    _emit(random_linkoid(knotoidal, loops, mutations, seed), out)


if __name__ == "__main__":
    main()
