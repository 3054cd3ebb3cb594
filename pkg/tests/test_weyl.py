from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from levelzero.lattice import QmodZVector, mat_mul
from levelzero.rootdatum import SIGNED_PERMUTATION_FAMILIES, build, rank_le_3_data
from levelzero.weyl import WeylGroup, signed_permutation_elements


@pytest.fixture(scope="module")
def sp4():
    return WeylGroup(build("Sp", 2))


def q(*xs):
    return QmodZVector(tuple(Fraction(x) for x in xs))


@pytest.mark.parametrize("family,n,order", [("SL", 2, 2), ("Sp", 2, 8), ("Sp", 3, 48), ("SL", 3, 6), ("SOeven_split", 3, 24)])
def test_orders(family, n, order):
    assert len(WeylGroup(build(family, n))) == order


def test_identity_first_and_length_order(sp4):
    assert sp4.elements[0] == ((1, 0), (0, 1))
    lengths = [sp4.length(a) for a in range(len(sp4))]
    assert lengths == sorted(lengths)
    assert sp4.length(sp4.longest) == 4
    assert sp4.elements[sp4.longest] == ((-1, 0), (0, -1))


@pytest.mark.parametrize("rd", rank_le_3_data(), ids=lambda rd: rd.name)
def test_group_axioms(rd):
    W = WeylGroup(rd)
    n = len(W)
    for a in range(n):
        assert W.mul(a, W.inv(a)) == 0
        assert mat_mul(W.elements[a], W.elements[W.inv(a)]) == W.elements[0]
        for b in range(0, n, max(1, n // 7)):
            assert W.elements[W.mul(a, b)] == mat_mul(W.elements[a], W.elements[b])
        for r in rd.roots:
            assert W.act(a, r) in rd.root_index


@pytest.mark.parametrize("family", SIGNED_PERMUTATION_FAMILIES)
@pytest.mark.parametrize("n", [2, 3])
def test_signed_permutation_model(family, n):
    W = WeylGroup(build(family, n))
    assert set(W.elements) == signed_permutation_elements(family, n)


def test_stabilizers_sp4(sp4):
    S = sp4.global_scope
    half = q("1/2", "1/2")
    assert len(S.stab(half)) == 8
    assert len(S.conn(half)) == 4
    assert len(S.pi0(half)) == 2
    assert len(S.stab(q(0, 0))) == len(S.conn(q(0, 0))) == 8
    assert S.stab(q("1/5", "2/5")) == S.conn(q("1/5", "2/5")) == (0,)


def test_orbit_min_is_lexicographic_minimum(sp4):
    S = sp4.global_scope
    for s in [q("1/3", "2/3"), q("3/4", "1/4"), q("1/2", 0), q("2/5", "4/5")]:
        orbit = {sp4.act_s(a, s) for a in range(len(sp4))}
        m, g = S.orbit_min(s)
        assert m == min(orbit)
        assert sp4.act_s(g, s) == m


def test_twisted_class_counts():
    assert len(WeylGroup(build("SL", 2)).twisted_classes()) == 2
    assert len(WeylGroup(build("Sp", 2)).twisted_classes()) == 5
    assert len(WeylGroup(build("SOeven_quasisplit", 2)).twisted_classes()) == 2
    assert len(WeylGroup(build("SOeven_quasisplit", 2)).twisted_classes(twisted=False)) == 4


def _classes_brute(W, twist):
    seen, out = set(), []
    for w in range(len(W)):
        if w in seen:
            continue
        cls = {W.mul(W.mul(v, w), W.inv(twist(v))) for v in range(len(W))}
        seen |= cls
        out.append(cls)
    return out


@pytest.mark.parametrize("family,n", [("SL", 3), ("SOeven_quasisplit", 3), ("Sp", 2)])
def test_twisted_classes_brute_force_and_inner_twist(family, n):
    W = WeylGroup(build(family, n))
    ours = sorted(sorted(c) for c in W.twisted_classes())
    assert ours == sorted(sorted(c) for c in _classes_brute(W, W.frob))
    # F' = Ad(w0) o F: w -> w w0 carries F'-classes onto F-classes
    w0 = W.longest
    inner = _classes_brute(W, lambda v: W.mul(W.mul(w0, W.frob(v)), W.inv(w0)))
    moved = sorted(sorted(W.mul(w, w0) for w in c) for c in inner)
    assert moved == ours


def test_cosets(sp4):
    everything = tuple(range(len(sp4)))
    assert sp4.cosets(everything) == [0]
    assert sp4.cosets((0,)) == list(range(8))
    assert len(sp4.cosets(sp4.global_scope.conn(q("1/2", "1/2")))) == 2


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 47), st.integers(0, 47), st.lists(st.fractions(max_denominator=9), min_size=3, max_size=3))
def test_action_is_a_group_action(a, b, coords):
    W = _SP6
    s = QmodZVector(tuple(coords))
    assert W.act_s(W.mul(a, b), s) == W.act_s(a, W.act_s(b, s))
    m, g = W.global_scope.orbit_min(s)
    assert W.global_scope.orbit_min(W.act_s(a, s))[0] == m


_SP6 = WeylGroup(build("Sp", 3))
