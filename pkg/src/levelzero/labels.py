"""Inertial labels: component groups, the Kottwitz group and the map ``h``.

A rational class label ``(s, w)`` is used directly as the inertial parameter.
Lattice computations take place in ``Y``, the lattice containing the roots of
the dual group.  The ``h`` domain is the torsion of ``Y / <Phi_s>`` modulo
``1 - w theta``, taken up to the action of the Frobenius-fixed part of the
component group ``W_s / W°_s``; the map to the Kottwitz group is induced by
the projection ``Y / <Phi_s> -> Y / <Phi>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import kernels
from .classes import ClassContext, ClassLabel
from .errors import IncompatiblePair
from .lattice import (
    FiniteAbelianGroup,
    QmodZVector,
    from_columns,
    identity,
    mat_mul,
    mat_sub,
    mat_vec,
    rational_nullspace,
    torsion_quotient,
)
from .rootdatum import LeviDatum, RootDatum, pair
from .weyl import Scope, WeylGroup


def kottwitz_group(datum: RootDatum) -> FiniteAbelianGroup:
    """Torsion of ``Y / <coroots>`` modulo ``1 - theta``."""
    n = datum.rank
    if n == 0:
        return FiniteAbelianGroup((), (), (), 0)
    return torsion_quotient(n, from_columns(datum.coroots, n), datum.theta_on_y)


@dataclass(frozen=True)
class Pi0:
    reps: tuple[int, ...]
    fixed: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.reps)

    @property
    def fixed_order(self) -> int:
        return len(self.fixed)


def pi0(ctx: ClassContext, label: ClassLabel, scope: Scope | None = None) -> Pi0:
    """``W_s / W°_s`` and the part fixed by ``u -> w F(u) w^{-1}``."""
    scope = scope or ctx.scope
    W = ctx.W
    reps = scope.pi0(label.s)
    conn = set(scope.conn(label.s))
    winv = W.inv(label.w)
    fixed = []
    for u in reps:
        img = W.mul(W.mul(label.w, scope.frob(u)), winv)
        if W.mul(W.inv(u), img) in conn:
            fixed.append(u)
    return Pi0(tuple(reps), tuple(fixed))


@dataclass
class HMap:
    label: ClassLabel
    domain: FiniteAbelianGroup
    target: FiniteAbelianGroup
    pi0: Pi0
    orbit_of: dict = field(repr=False)
    image: dict = field(repr=False)

    @cached_property
    def orbits(self) -> list[tuple]:
        return sorted(set(self.orbit_of.values()))

    @property
    def domain_order(self) -> int:
        return self.domain.order

    @cached_property
    def fibers(self) -> dict[tuple, list[tuple]]:
        out: dict[tuple, list[tuple]] = {t: [] for t in self.target.elements()}
        for o in self.orbits:
            out[self.image[o]].append(o)
        return out

    @property
    def kernel(self) -> list[tuple]:
        return self.fibers[self.target.zero()]

    @property
    def kernel_size(self) -> int:
        return len(self.kernel)

    def fiber_sizes(self) -> dict[tuple, int]:
        return {t: len(v) for t, v in self.fibers.items()}

    def is_relevant(self, omega: tuple) -> bool:
        return bool(self.fibers.get(tuple(omega)))


def _y_twist(W: WeylGroup, scope: Scope, w: int):
    th = W.datum.theta_on_y if scope.twisted else identity(W.rank)
    return mat_mul(W.y_matrix(w), th)


def h_map(ctx: ClassContext, label: ClassLabel, scope: Scope | None = None) -> HMap:
    scope = scope or ctx.scope
    W, rd, n = ctx.W, ctx.datum, ctx.W.rank
    target = kottwitz_group(rd)
    p0 = pi0(ctx, label, scope)
    if n == 0:
        triv = FiniteAbelianGroup((), (), (), 0)
        return HMap(label, triv, target, p0, {(): ()}, {(): ()})
    co = [rd.coroots[i] for i in scope.integral_roots(label.s)]
    g = _y_twist(W, scope, label.w)
    dom = torsion_quotient(n, from_columns(co, n), g)
    elems = list(dom.elements())
    pos = {e: i for i, e in enumerate(elems)}
    us, vs = [], []
    for u in p0.fixed:
        gu = W.y_matrix(u)
        for e in elems:
            us.append(pos[e])
            vs.append(pos[dom.coords(mat_vec(gu, dom.lift(e)))])
    comp = kernels.uf_components(len(elems), us, vs)
    orbit_of = {e: elems[comp[i]] for i, e in enumerate(elems)}
    image = {}
    for o in set(orbit_of.values()):
        image[o] = target.coords(dom.lift(o))
    for e in elems:
        if target.coords(dom.lift(e)) != image[orbit_of[e]]:
            raise AssertionError("component group action moves the Kottwitz image")
    return HMap(label, dom, target, p0, orbit_of, image)


def is_relevant(ctx: ClassContext, label: ClassLabel, omega: tuple) -> bool:
    return h_map(ctx, label).is_relevant(omega)


# ---------------------------------------------------------------------------
# Levi subgroups


def levi_scope(W: WeylGroup, levi: LeviDatum) -> Scope:
    elems = W.reflection_subgroup(levi.root_embedding)
    return Scope(W, elems, levi.root_embedding, twisted=not levi.datum.is_split, name=levi.datum.name)


def levi_of_parameter(ctx: ClassContext, label: ClassLabel) -> LeviDatum:
    """Levi whose roots have coroots vanishing on the ``w theta``-fixed part of ``Z(C°(s))``."""
    W, rd, n = ctx.W, ctx.datum, ctx.W.rank
    if n == 0:
        return rd.sub_datum([])
    co = [rd.coroots[i] for i in ctx.scope.integral_roots(label.s)]
    g = mat_sub(mat_mul(W.elements[label.w], rd.theta), identity(n))
    rows = [tuple(c) for c in co] + [tuple(r) for r in g]
    A = rational_nullspace(rows)
    keep = [i for i in range(rd.nroots) if all(pair(rd.coroots[i], a) == 0 for a in A)]
    return rd.sub_datum(keep, name=f"M({rd.name})")


def levi_embed_label(ctx: ClassContext, m_label: ClassLabel) -> ClassLabel:
    """The ``G``-label of a Levi label: same ``s``, recanonicalized under ``W``."""
    return ctx.canonical_label(m_label.s, m_label.w)


def canonical_inertial_form(ctx: ClassContext, s: QmodZVector, w: int, scope: Scope | None = None) -> ClassLabel:
    scope = scope or ctx.scope
    if not scope.is_fixed(s, w, ctx.q):
        raise IncompatiblePair("s is not fixed by w F")
    return ctx.canonical_label(s, w, scope)


# ---------------------------------------------------------------------------
# the alpha index of a facet class


def alpha_index(building, sigma: int, label: ClassLabel, base_vertex: int | None = None, cache: dict | None = None):
    """``(global label, orbit in the h domain)`` attached to a local class at ``sigma``.

    The lattice element is ``(1 - w)(x_sigma - b)`` in ``Y``, with ``x_sigma``
    the barycenter and ``b`` the base hyperspecial vertex, transported to the
    canonical global label.
    """
    ctx = building.ctx
    W = ctx.W
    b = building.base_vertex(base_vertex).barycenter
    x = building.facets[sigma].barycenter
    d = [xi - bi for xi, bi in zip(x, b)]
    gw = W.y_matrix(label.w)
    lam = [di - ei for di, ei in zip(d, mat_vec(gw, d))]
    if any(v.denominator != 1 for v in lam):
        raise AssertionError("translation part is not integral")
    sc, wc, g = ctx.scope.canonical(label.s, label.w)
    glabel = ClassLabel(sc, wc)
    lam_g = mat_vec(W.y_matrix(g), [int(v) for v in lam])
    if cache is not None and glabel in cache:
        hm = cache[glabel]
    else:
        hm = h_map(ctx, glabel)
        if cache is not None:
            cache[glabel] = hm
    if W.rank == 0:
        return glabel, (), hm
    return glabel, hm.orbit_of[hm.domain.coords(lam_g)], hm
