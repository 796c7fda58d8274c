import random

import pytest

from linkoidlab.canonical import (
    CanonicalError,
    ScanEntry,
    conjecture_scan,
    nabla_canonical,
    symmetry_defect,
)
from linkoidlab.closures import tail_starring
from linkoidlab.corpus import random_linkoid
from linkoidlab.diagram import CROSSING, HEAD, PLANE, SPHERE, STAR, TAIL, Diagram, Node
from linkoidlab.moves import MoveError, apply_move, enumerate_moves
from linkoidlab.poly import parse_wb
from linkoidlab.statesum import mock_alexander

from test_diagram import kink_knotoid, one_crossing_linkoid


def chain_linkoid():
    """Three strands in a row: strand 1 crosses strands 0 and 2 once each."""
    nodes = [
        Node(TAIL, (0,)), Node(HEAD, (3,)),
        Node(TAIL, (4,)), Node(HEAD, (9,)),
        Node(TAIL, (10,)), Node(HEAD, (13,)),
        Node(CROSSING, (1, 6, 2, 5)),
        Node(CROSSING, (7, 12, 8, 11)),
    ]
    return Diagram(SPHERE, nodes, 7).check()


def planarize(d, face_index=0):
    """Mark one region of a spherical diagram as the point at infinity."""
    anchor = d.faces()[face_index].darts[0]
    nodes = list(d.nodes) + [Node(STAR, (), anchor=anchor, name="infinity")]
    return Diagram(PLANE, nodes, d.n_edges).check()


def shuffled_nodes(d, seed=0):
    order = list(range(len(d.nodes)))
    random.Random(seed).shuffle(order)
    return Diagram(d.surface, [d.nodes[i] for i in order], d.n_edges).check()


def move_walk(d, steps, seed=0, cap=6):
    rng = random.Random(seed)
    for _ in range(steps):
        kinds = ["R1-", "R2-", "R3"]
        if len(d.crossings()) < cap:
            kinds += ["R1+", "R2+"]
        sites = enumerate_moves(d, kinds=kinds)
        if not sites:
            break
        try:
            nxt = apply_move(d, rng.choice(sites))
        except MoveError:
            continue
        if nxt.is_connected():
            d = nxt
    return d


class TestNablaCanonical:
    def test_unknown_variant(self):
        with pytest.raises(CanonicalError):
            nabla_canonical(kink_knotoid(), "sideways")

    def test_starred_input_rejected(self):
        with pytest.raises(CanonicalError):
            nabla_canonical(tail_starring(kink_knotoid()))

    def test_kappa_one_is_tail_starring(self):
        d = kink_knotoid()
        assert nabla_canonical(d) == mock_alexander(tail_starring(d))

    def test_kappa_two_is_direct(self):
        d = one_crossing_linkoid()
        assert nabla_canonical(d, "under") == mock_alexander(d)
        # on the sphere with two open components the theta average has a
        # single empty term, so it agrees with the direct evaluation
        assert nabla_canonical(d, "theta") == mock_alexander(d)

    def test_planar_kappa_one(self):
        d = planarize(kink_knotoid())
        assert nabla_canonical(d) == mock_alexander(d)

    @pytest.mark.parametrize("variant", ["under", "over", "theta"])
    def test_relabeling_invariance(self, variant):
        d = random_linkoid(2, 0, mutations=2, seed=11) if variant == "theta" else chain_linkoid()
        assert nabla_canonical(shuffled_nodes(d, seed=7), variant) == nabla_canonical(d, variant)

    @pytest.mark.parametrize("variant", ["under", "over"])
    def test_move_invariance(self, variant):
        d = chain_linkoid()
        base = nabla_canonical(d, variant)
        for seed in range(3):
            assert nabla_canonical(move_walk(d, 6, seed=seed, cap=4), variant) == base

    def test_theta_move_invariance(self):
        d = random_linkoid(2, 0, mutations=2, seed=9)
        base = nabla_canonical(d, "theta")
        for seed in range(3):
            assert nabla_canonical(move_walk(d, 6, seed=seed, cap=5), "theta") == base

    def test_loop_only_diagram(self):
        d = random_linkoid(0, 1, mutations=3, seed=2)
        assert nabla_canonical(shuffled_nodes(d, seed=3)) == nabla_canonical(d)

    def test_theta_parity_errors(self):
        with pytest.raises(CanonicalError, match="theta"):
            nabla_canonical(kink_knotoid(), "theta")
        with pytest.raises(CanonicalError, match="theta"):
            nabla_canonical(planarize(one_crossing_linkoid()), "theta")
        with pytest.raises(CanonicalError, match="theta"):
            nabla_canonical(random_linkoid(0, 1, mutations=2, seed=1), "theta")


class TestSymmetryDefect:
    def test_zero_on_knotoids(self):
        assert not symmetry_defect(kink_knotoid())
        for seed in range(4):
            d = random_linkoid(1, 0, mutations=5, seed=seed)
            assert not symmetry_defect(d)

    def test_zero_on_uni_linkoids(self):
        for seed in range(2):
            d = random_linkoid(1, 1, mutations=3, seed=seed)
            assert not symmetry_defect(d)

    def test_rejects_planar(self):
        with pytest.raises(CanonicalError):
            symmetry_defect(planarize(kink_knotoid()))

    def test_rejects_wrong_kappa(self):
        with pytest.raises(CanonicalError):
            symmetry_defect(one_crossing_linkoid())

    def test_rejects_starred(self):
        with pytest.raises(CanonicalError):
            symmetry_defect(tail_starring(kink_knotoid()))


class TestConjectureScan:
    def test_clean_corpus(self):
        corpus = [kink_knotoid()] + [
            random_linkoid(1, 0, mutations=4, seed=s) for s in range(3)
        ]
        report = conjecture_scan(corpus)
        assert report.scanned == 4
        assert report.hits == ()
        text = str(report)
        assert "scanned 4 diagrams, 0 counterexample candidates" in text
        assert text.count("ok") == 4

    def test_rejects_linkoids(self):
        with pytest.raises(CanonicalError):
            conjecture_scan([one_crossing_linkoid()])

    def test_rejects_planar(self):
        with pytest.raises(CanonicalError):
            conjecture_scan([planarize(kink_knotoid())])

    def test_hit_report_shows_document(self):
        entry = ScanEntry(
            digest="deadbeefdeadbeef",
            kappa=1,
            ell=0,
            crossings=2,
            defect=parse_wb("W - B"),
            document="linkoid v1\n",
        )
        assert "COUNTEREXAMPLE-CANDIDATE" in entry.line()
        assert "defect: W - B" in entry.line()
