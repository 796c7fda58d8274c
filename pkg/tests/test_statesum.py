import pytest

from linkoidlab.diagram import (
    CROSSING,
    HEAD,
    SPHERE,
    STAR,
    TAIL,
    Builder,
    Diagram,
    Node,
    trivial_knotoid,
)
from linkoidlab.poly import LaurentPoly2, parse_wb
from linkoidlab.statesum import (
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

from test_diagram import kink_knotoid, one_crossing_linkoid


def kink_variant(slots):
    """tail -e0-> crossing, loop e1, -e2-> head with the given crossing rotation."""
    nodes = [Node(TAIL, (0,)), Node(HEAD, (5,)), Node(CROSSING, slots)]
    return Diagram(SPHERE, nodes, 3).check()


# all four R1 kinks: (rotation, sign)
KINKS = [
    ((1, 4, 2, 3), 1),   # positive, under passage first
    ((3, 2, 4, 1), 1),   # positive, over passage first
    ((1, 3, 2, 4), -1),  # negative, under passage first
    ((3, 1, 4, 2), -1),  # negative, over passage first
]


def star_face(d, face):
    b = Builder(d)
    b.add_node(STAR, anchor=face.darts[0])
    out, _, _ = b.build()
    return out


class TestAdmissibility:
    def test_two_component_linkoid_admissible(self):
        assert is_admissible(one_crossing_linkoid())

    def test_starred_knotoid_admissible(self):
        d = trivial_knotoid()
        assert not is_admissible(d)
        assert is_admissible(star_face(d, d.faces()[0]))

    def test_error_names_obstruction(self):
        with pytest.raises(StateSumError, match="obstruction = -1"):
            potential(trivial_knotoid())


class TestKinkWeights:
    @pytest.mark.parametrize("slots,sign", KINKS)
    def test_kink_is_trivial(self, slots, sign):
        d = kink_variant(slots)
        assert d.genus() == 0
        assert d.crossing_sign(2) == sign
        big = max(d.faces(), key=lambda f: len(f.darts))
        starred = star_face(d, big)
        assert potential(starred) == LaurentPoly2.one()
        assert mock_alexander(starred) == LaurentPoly2.one().collapse()

    def test_star_inside_kink(self):
        # starring the monogon leaves the three outside quadrants available
        d = kink_knotoid()
        mono = min(d.faces(), key=lambda f: len(f.darts))
        starred = star_face(d, mono)
        assert potential(starred) == parse_wb("W - B + 1")


class TestStates:
    def test_empty_state(self):
        d = trivial_knotoid()
        starred = star_face(d, d.faces()[0])
        states = list(enumerate_states(starred))
        assert states == [{}]
        assert state_weight(starred, {}) == LaurentPoly2.one()

    def test_one_crossing_linkoid_states(self):
        d = one_crossing_linkoid()
        states = list(enumerate_states(d))
        assert len(states) == 4  # one face, all four quadrants of the crossing
        sign = d.crossing_sign(4)
        expected = parse_wb("W - B + 2") if sign > 0 else parse_wb("-W + B + 2")
        assert potential(d) == expected


class TestPermanents:
    def test_empty_matrix(self):
        assert permanent_ryser([]) == LaurentPoly2.one()
        assert permanent_expand([]) == LaurentPoly2.one()

    def test_small_matrix(self):
        W, B = parse_wb("W"), parse_wb("B")
        one, two = parse_wb("1"), parse_wb("2")
        m = [[W, B], [one, two]]
        assert permanent_ryser(m) == parse_wb("2*W + B")
        assert permanent_expand(m) == parse_wb("2*W + B")

    def test_permutation_invariance(self):
        W, B = parse_wb("W"), parse_wb("B")
        one, two = parse_wb("1"), parse_wb("2")
        m = [[W, B], [one, two]]
        m_swapped = [[B, W], [two, one]]
        assert permanent_ryser(m) == permanent_ryser(m_swapped)

    def test_three_way_equality_on_hand_fixtures(self):
        diagrams = [one_crossing_linkoid()]
        d = kink_knotoid()
        diagrams.append(star_face(d, max(d.faces(), key=lambda f: len(f.darts))))
        diagrams.append(star_face(d, min(d.faces(), key=lambda f: len(f.darts))))
        for dd in diagrams:
            by_states = LaurentPoly2.zero()
            for s in enumerate_states(dd):
                by_states = by_states + state_weight(dd, s)
            m = potential_matrix(dd)
            assert by_states == permanent_ryser(m) == permanent_expand(m)
            assert potential(dd) == by_states
