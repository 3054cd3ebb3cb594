"""Facets of the closed fundamental alcove, local class sets and coherent systems.

Only split data are supported.  Each irreducible component of the Dynkin
diagram contributes a simplex with affine nodes ``0..r``; node ``0`` is the
vertex at the origin and node ``k`` the vertex where ``alpha_k = 1/m_k``,
``m_k`` being the coefficient of ``alpha_k`` in the highest root.  A facet is
a choice of a nonempty node set per component.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Mapping

from . import kernels
from .classes import ClassContext, ClassLabel
from .errors import BadVertex, NotAFace, TwistedUnsupported
from .lattice import mat_vec, rational_inverse, smith_decompose
from .rootdatum import pair
from .weyl import Scope

FacetClassSystem = dict  # facet id -> frozenset[ClassLabel]


@dataclass(frozen=True)
class AlcoveFacet:
    id: int
    nodes: tuple[tuple[int, ...], ...]
    vanishing: tuple[tuple[int, int], ...]
    alpha_values: tuple[Fraction, ...]
    barycenter: tuple[Fraction, ...]
    dim: int
    local_roots: tuple[int, ...]
    hyperspecial: bool

    @property
    def is_vertex(self) -> bool:
        return self.dim == 0

    def describe(self) -> str:
        return "|".join(",".join(str(k) for k in t) for t in self.nodes)


@dataclass(frozen=True)
class OmegaElement:
    """An alcove-preserving element ``y -> w y + lam``; ``perm`` acts on facet ids."""

    w: int
    lam: tuple[int, ...]
    perm: tuple[int, ...]


class Building:
    def __init__(self, ctx: ClassContext):
        if not ctx.datum.is_split:
            raise TwistedUnsupported("alcove combinatorics are implemented for split data only")
        self.ctx = ctx
        self.W = ctx.W
        self.datum = ctx.datum
        self._restrict: dict = {}

    # -- facets -------------------------------------------------------------

    @cached_property
    def _components(self):
        rd = self.datum
        out = []
        for comp in rd.components():
            best, height = None, -1
            for i in range(rd.npos):
                c = rd.simple_coordinates[i]
                if all(c[j] == 0 for j in range(len(c)) if j not in comp):
                    h = sum(c)
                    if h > height:
                        best, height = i, h
            marks = tuple(int(rd.simple_coordinates[best][j]) for j in comp)
            out.append((comp, marks))
        return out

    @cached_property
    def facets(self) -> list[AlcoveFacet]:
        rd = self.datum
        k = len(rd.simple_indices)
        comps = self._components
        choices = []
        for comp, _ in comps:
            nodes = range(len(comp) + 1)
            subsets = [t for r in range(1, len(comp) + 2) for t in combinations(nodes, r)]
            choices.append(subsets)
        raw = []
        for pick in product(*choices) if comps else [()]:
            dim = sum(len(t) - 1 for t in pick)
            raw.append((dim, pick))
        raw.sort()
        inv = rational_inverse(rd.cartan) if k else ()
        out = []
        for fid, (dim, pick) in enumerate(raw):
            a = [Fraction(0)] * k
            for (comp, marks), t in zip(comps, pick):
                for node in t:
                    if node:
                        j = comp[node - 1]
                        a[j] += Fraction(1, marks[node - 1]) / len(t)
            coeff = [sum(inv[i][j] * a[j] for j in range(k)) for i in range(k)]
            y = [Fraction(0)] * rd.rank
            for c, cor in zip(coeff, rd.simple_coroots):
                for i, x in enumerate(cor):
                    y[i] += c * x
            loc = tuple(i for i in range(rd.nroots) if pair(rd.roots[i], y).denominator == 1)
            vanishing = tuple(
                (ci, node) for ci, ((comp, _), t) in enumerate(zip(comps, pick))
                for node in range(len(comp) + 1) if node not in t
            )
            out.append(AlcoveFacet(fid, pick, vanishing, tuple(a), tuple(y), dim, loc, len(loc) == rd.nroots))
        return out

    @cached_property
    def vertices(self) -> list[AlcoveFacet]:
        return [f for f in self.facets if f.is_vertex]

    @cached_property
    def _by_nodes(self) -> dict:
        return {f.nodes: f.id for f in self.facets}

    def is_face(self, x: int, sigma: int) -> bool:
        a, b = self.facets[x].nodes, self.facets[sigma].nodes
        return all(set(s) <= set(t) for s, t in zip(a, b))

    def faces(self, sigma: int, proper: bool = True) -> list[int]:
        return [x for x in range(len(self.facets)) if self.is_face(x, sigma) and (x != sigma or not proper)]

    def vertex_ids(self, sigma: int) -> list[int]:
        return [v.id for v in self.vertices if self.is_face(v.id, sigma)]

    @cached_property
    def scopes(self) -> list[Scope]:
        out = []
        for f in self.facets:
            elems = self.W.reflection_subgroup(f.local_roots)
            out.append(Scope(self.W, elems, f.local_roots, twisted=False, name=f"F{f.id}"))
        return out

    def base_vertex(self, choice: int | None = None) -> AlcoveFacet:
        hyp = [v for v in self.vertices if v.hyperspecial]
        if choice is None:
            return hyp[0]
        if choice < 0 or choice >= len(self.facets) or not self.facets[choice].hyperspecial or not self.facets[choice].is_vertex:
            raise BadVertex(f"facet {choice} is not a hyperspecial vertex; choose one of {[v.id for v in hyp]}")
        return self.facets[choice]

    # -- Omega ----------------------------------------------------------------

    def _integral_point(self, a):
        """Some ``lam`` in ``Y`` with ``<alpha_j, lam> = a_j`` for every simple root, or ``None``."""
        rd = self.datum
        if any(Fraction(x).denominator != 1 for x in a):
            return None
        S = tuple(tuple(r) for r in rd.simple_roots)
        if not S:
            return (0,) * rd.rank
        U, D, V = smith_decompose(S)
        ua = mat_vec(U, [int(x) for x in a])
        z = [0] * rd.rank
        for i in range(len(S)):
            d = D[i][i] if i < rd.rank else 0
            if d == 0:
                if ua[i]:
                    return None
            elif ua[i] % d:
                return None
            else:
                z[i] = ua[i] // d
        return tuple(mat_vec(V, z))

    @cached_property
    def omega(self) -> list[OmegaElement]:
        rd, W = self.datum, self.W
        verts = self.vertices
        key = {v.alpha_values: v.id for v in verts}
        found: dict[tuple, OmegaElement] = {}
        for v in verts:
            lam = self._integral_point(v.alpha_values)
            if lam is None:
                continue
            for w in range(len(W)):
                g = W.y_matrix(w)
                vperm = {}
                ok = True
                for u in verts:
                    p = tuple(a + b for a, b in zip(mat_vec(g, u.barycenter), lam))
                    av = tuple(pair(s, p) for s in rd.simple_roots)
                    if av not in key:
                        ok = False
                        break
                    vperm[u.id] = key[av]
                if not ok or len(set(vperm.values())) != len(verts):
                    continue
                perm = []
                for f in self.facets:
                    img = sorted(vperm[x] for x in self.vertex_ids(f.id))
                    perm.append(self._facet_with_vertices(tuple(img)))
                perm = tuple(perm)
                if perm not in found:
                    found[perm] = OmegaElement(w, lam, perm)
        return [found[k] for k in sorted(found)]

    def _facet_with_vertices(self, vids: tuple[int, ...]) -> int:
        table = self.__dict__.setdefault("_vertex_table", {})
        if not table:
            for f in self.facets:
                table[tuple(self.vertex_ids(f.id))] = f.id
        return table[vids]

    # -- local classes and maps --------------------------------------------------

    def local_classes(self, sigma: int) -> list[ClassLabel]:
        return self.ctx.rational_classes(self.scopes[sigma])

    def restrict_class(self, sigma: int, x: int, label: ClassLabel) -> ClassLabel:
        if not self.is_face(x, sigma):
            raise NotAFace(f"facet {x} is not a face of facet {sigma}")
        key = (x, label.s.coords, label.w)
        r = self._restrict.get(key)
        if r is None:
            sc, wc, _ = self.scopes[x].canonical(label.s, label.w)
            r = ClassLabel(sc, wc)
            self._restrict[key] = r
        return r

    def omega_transport(self, om: OmegaElement, sigma: int, label: ClassLabel) -> tuple[int, ClassLabel]:
        W = self.W
        tau = om.perm[sigma]
        s2 = W.act_s(om.w, label.s)
        w2 = W.mul(W.mul(om.w, label.w), W.inv(om.w))
        sc, wc, _ = self.scopes[tau].canonical(s2, w2)
        return tau, ClassLabel(sc, wc)

    def global_label(self, label: ClassLabel) -> ClassLabel:
        sc, wc, _ = self.ctx.scope.canonical(label.s, label.w)
        return ClassLabel(sc, wc)

    # -- universe and relations ----------------------------------------------------

    @cached_property
    def universe(self) -> list[tuple[int, ClassLabel]]:
        return [(f.id, c) for f in self.facets for c in self.local_classes(f.id)]

    @cached_property
    def _node_index(self) -> dict:
        return {p: i for i, p in enumerate(self.universe)}

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        idx = self._node_index
        out = []
        for f in self.facets:
            faces = self.faces(f.id)
            for c in self.local_classes(f.id):
                a = idx[(f.id, c)]
                for x in faces:
                    out.append((a, idx[(x, self.restrict_class(f.id, x, c))]))
                for om in self.omega:
                    out.append((a, idx[self.omega_transport(om, f.id, c)]))
        return out

    def minimal_systems(self) -> list[FacetClassSystem]:
        n = len(self.universe)
        es = self.edges
        labels = kernels.uf_components(n, [a for a, _ in es], [b for _, b in es])
        groups: dict[int, list[int]] = {}
        for i, r in enumerate(labels):
            groups.setdefault(r, []).append(i)
        out = []
        for r in sorted(groups):
            sysm: dict[int, set] = {}
            for i in groups[r]:
                f, c = self.universe[i]
                sysm.setdefault(f, set()).add(c)
            out.append({f: frozenset(v) for f, v in sorted(sysm.items())})
        return out

    def coherent_closure(self, seed: Mapping[int, Iterable[ClassLabel]]) -> FacetClassSystem:
        """Smallest coherent system containing ``seed``, by saturating both conditions."""
        S: dict[int, set] = {f.id: set() for f in self.facets}
        for f, labs in seed.items():
            S[f].update(labs)
        changed = True
        while changed:
            changed = False
            for f in self.facets:
                loc = self.local_classes(f.id)
                for x in self.faces(f.id):
                    for c in loc:
                        r = self.restrict_class(f.id, x, c)
                        inside, rin = c in S[f.id], r in S[x]
                        if inside and not rin:
                            S[x].add(r)
                            changed = True
                        elif rin and not inside:
                            S[f.id].add(c)
                            changed = True
            for om in self.omega:
                for f in self.facets:
                    for c in list(S[f.id]):
                        tau, d = self.omega_transport(om, f.id, c)
                        if d not in S[tau]:
                            S[tau].add(d)
                            changed = True
        return {f: frozenset(v) for f, v in S.items() if v}

    def coherence_check(self, system: Mapping[int, Iterable[ClassLabel]]) -> tuple[bool, list[dict]]:
        S = {f.id: frozenset(system.get(f.id, ())) for f in self.facets}
        violations = []
        for f in self.facets:
            loc = self.local_classes(f.id)
            for x in self.faces(f.id):
                pre = frozenset(c for c in loc if self.restrict_class(f.id, x, c) in S[x])
                if pre != S[f.id]:
                    violations.append({
                        "condition": "face",
                        "facet": f.id,
                        "face": x,
                        "missing": sorted(c.key() for c in pre - S[f.id]),
                        "extra": sorted(c.key() for c in S[f.id] - pre),
                    })
            for k, om in enumerate(self.omega):
                img = frozenset(self.omega_transport(om, f.id, c)[1] for c in S[f.id])
                tau = om.perm[f.id]
                if img != S[tau]:
                    violations.append({"condition": "transport", "omega": k, "facet": f.id, "image": tau})
        return not violations, violations
