from fractions import Fraction

import pytest

from levelzero.alcove import Building
from levelzero.classes import ClassContext, ClassLabel
from levelzero.errors import BadVertex, NotAFace
from levelzero.lattice import QmodZVector
from levelzero.rootdatum import build

HALF = QmodZVector((Fraction(1, 2), Fraction(1, 2)))


@pytest.fixture(scope="module")
def sp4():
    return Building(ClassContext(build("Sp", 2), 3))


def _by_dim(b):
    out = {}
    for f in b.facets:
        out[f.dim] = out.get(f.dim, 0) + 1
    return out


def test_facet_counts():
    assert _by_dim(Building(ClassContext(build("SL", 2), 3))) == {0: 2, 1: 1}
    assert _by_dim(Building(ClassContext(build("Sp", 2), 3))) == {0: 3, 1: 3, 2: 1}
    assert len(Building(ClassContext(build("Sp", 3), 3, N=2)).vertices) == 4


def test_sp4_vertices(sp4):
    hyp = [v for v in sp4.vertices if v.hyperspecial]
    assert len(hyp) == 2
    y = next(v for v in sp4.vertices if not v.hyperspecial)
    assert len(sp4.W.reflection_subgroup(y.local_roots)) == 4
    chamber = next(f for f in sp4.facets if f.dim == 2)
    assert sorted(sp4.vertex_ids(chamber.id)) == [v.id for v in sp4.vertices]
    assert all(sp4.is_face(v.id, chamber.id) for v in sp4.vertices)


def test_hyperspecial_local_classes_are_global(sp4):
    x = sp4.base_vertex()
    assert sp4.local_classes(x.id) == sp4.ctx.rational_classes()


def test_base_vertex_choice(sp4):
    y = next(v for v in sp4.vertices if not v.hyperspecial)
    with pytest.raises(BadVertex):
        sp4.base_vertex(y.id)
    with pytest.raises(BadVertex):
        sp4.base_vertex(99)


def test_omega():
    assert len(Building(ClassContext(build("Sp", 2), 3)).omega) == 1
    pgl = Building(ClassContext(build("PGL", 2), 3))
    perms = [om.perm for om in pgl.omega]
    assert len(perms) == 2
    v0, v1 = (v.id for v in pgl.vertices)
    assert any(p[v0] == v1 and p[v1] == v0 for p in perms)


def test_restriction(sp4):
    x = sp4.base_vertex().id
    for c in sp4.local_classes(x):
        assert sp4.restrict_class(x, x, c) == c
    chamber = next(f.id for f in sp4.facets if f.dim == 2)
    with pytest.raises(NotAFace):
        sp4.restrict_class(x, chamber, sp4.local_classes(x)[0])
    for f in sp4.facets:
        for face in sp4.faces(f.id):
            for c in sp4.local_classes(f.id):
                r = sp4.restrict_class(f.id, face, c)
                assert sp4.ctx.geometric_class(r) == sp4.ctx.geometric_class(c)


def test_edge_restriction_lands_in_endpoint_classes(sp4):
    merged = 0
    for e in (f for f in sp4.facets if f.dim == 1):
        for v in sp4.faces(e.id):
            targets = set(sp4.local_classes(v))
            images = [sp4.restrict_class(e.id, v, c) for c in sp4.local_classes(e.id)]
            assert set(images) <= targets
            merged += len(images) - len(set(images))
    # classes conjugate only in the larger local Weyl group merge
    assert merged > 0


def test_trivial_systems_coherent(sp4):
    assert sp4.coherence_check({})[0]
    full = {f.id: sp4.local_classes(f.id) for f in sp4.facets}
    assert sp4.coherence_check(full)[0]
    assert sp4.coherent_closure({}) == {}


def test_golden_closures(sp4):
    W = sp4.W
    x1 = sp4.base_vertex().id
    x2 = [v.id for v in sp4.vertices if v.hyperspecial][1]
    y = next(v.id for v in sp4.vertices if not v.hyperspecial)
    s0 = ClassLabel(HALF, 0)
    seed = {x1: [s0]}
    ok, viol = sp4.coherence_check(seed)
    assert not ok and any(v["condition"] == "face" for v in viol)
    cl = sp4.coherent_closure(seed)
    assert s0 in cl[x1] and s0 in cl[x2]
    s_prime = ClassLabel(HALF, 0)
    t = sp4.restrict_class(y, y, ClassLabel(HALF, W.longest))
    assert s_prime in cl[y] and t not in cl[y]
    assert sp4.coherent_closure({y: [t]}) == {y: frozenset({t})}


def test_minimal_systems_trivial_bound():
    b = Building(ClassContext(build("Sp", 2), 3, N=1))
    systems = b.minimal_systems()
    assert len(systems) == 1
    assert set(systems[0]) == {f.id for f in b.facets}


def test_golden_split(sp4):
    x1 = sp4.base_vertex().id
    hit = [s for s in sp4.minimal_systems() if any(sp4.global_label(c) == ClassLabel(HALF, 0) for cs in s.values() for c in cs)]
    assert len(hit) == 2


def test_twisted_building_rejected():
    from levelzero.errors import TwistedUnsupported

    with pytest.raises(TwistedUnsupported):
        Building(ClassContext(build("SOeven_quasisplit", 2), 3))
