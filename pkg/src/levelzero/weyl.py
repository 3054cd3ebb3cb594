"""Finite Weyl groups as integer matrices on ``X``.

Elements are indexed in a canonical order: by length, then by the
lexicographically first reduced word in the simple reflections.  Index 0 is
the identity.  A :class:`Scope` bundles a subgroup ``H`` of ``W`` with a set
of roots ``R_H`` whose reflections lie in ``H``; the global group, the local
groups of alcove facets and standard Levi subgroups are all scopes.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Sequence

from . import kernels
from .errors import TooLarge
from .lattice import Matrix, QmodZVector, identity, mat_mul, mat_vec, transpose
from .rootdatum import SIGNED_PERMUTATION_FAMILIES, RootDatum, pair

DEFAULT_BOUND = 10**6


class WeylGroup:
    def __init__(self, datum: RootDatum, bound: int = DEFAULT_BOUND):
        self.datum = datum
        self.rank = datum.rank
        gens = [datum.reflection_matrix(i) for i in datum.simple_indices]
        self.generators = gens
        one = identity(self.rank)
        words: dict[Matrix, tuple[int, ...]] = {one: ()}
        layer = [one]
        ordered = [one]
        while layer:
            cand: dict[Matrix, tuple[int, ...]] = {}
            for g in layer:
                wg = words[g]
                for i, s in enumerate(gens):
                    h = mat_mul(s, g)
                    if h in words:
                        continue
                    w = (i,) + wg
                    if h not in cand or w < cand[h]:
                        cand[h] = w
            layer = sorted(cand, key=cand.__getitem__)
            for h in layer:
                words[h] = cand[h]
            ordered.extend(layer)
            if len(ordered) > bound:
                raise TooLarge(f"Weyl group exceeds the bound {bound}")
        self.elements: list[Matrix] = ordered
        self.words: list[tuple[int, ...]] = [words[g] for g in ordered]
        self.index: dict[Matrix, int] = {g: i for i, g in enumerate(ordered)}
        self._mul: dict[tuple[int, int], int] = {}
        self.simple_reflections = [self.index[s] for s in gens]

    def __len__(self):
        return len(self.elements)

    def length(self, a: int) -> int:
        return len(self.words[a])

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        r = self._mul.get(key)
        if r is None:
            r = self.index[mat_mul(self.elements[a], self.elements[b])]
            self._mul[key] = r
        return r

    @cached_property
    def inverses(self) -> list[int]:
        return [self._inverse(i) for i in range(len(self))]

    def _inverse(self, a: int) -> int:
        w = self.words[a]
        out = 0
        for i in w:
            out = self.mul(self.simple_reflections[i], out)
        return out

    def inv(self, a: int) -> int:
        return self.inverses[a]

    @cached_property
    def theta_conjugates(self) -> list[int]:
        """Index of ``theta w theta^{-1}`` for each ``w``."""
        th = self.datum.theta
        if self.datum.is_split:
            return list(range(len(self)))
        thinv = _int_inverse(th)
        return [self.index[mat_mul(mat_mul(th, g), thinv)] for g in self.elements]

    def frob(self, a: int) -> int:
        return self.theta_conjugates[a]

    def y_matrix(self, a: int) -> Matrix:
        """Contragredient action on ``Y``."""
        return transpose(self.elements[self.inv(a)]) if self.rank else ()

    def act(self, a: int, x: Sequence) -> tuple:
        return mat_vec(self.elements[a], x)

    def act_y(self, a: int, y: Sequence) -> tuple:
        return mat_vec(self.y_matrix(a), y)

    def act_s(self, a: int, s: QmodZVector) -> QmodZVector:
        return QmodZVector(mat_vec(self.elements[a], s.coords), s.excluded_primes)

    @cached_property
    def reflection_of_root(self) -> list[int]:
        return [self.index[self.datum.reflection_matrix(i)] for i in range(self.datum.nroots)]

    def generated(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Subgroup generated by the given elements, sorted by index."""
        gens = sorted(set(gens))
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.mul(g, a)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return tuple(sorted(seen))

    def reflection_subgroup(self, root_ids: Iterable[int]) -> tuple[int, ...]:
        return self.generated(self.reflection_of_root[i] for i in root_ids)

    def twisted_classes(self, twisted: bool = True) -> list[tuple[int, ...]]:
        """Partition of ``W`` into classes ``w ~ v w F(v)^{-1}``."""
        n = len(self)
        us, vs = [], []
        for w in range(n):
            for s in self.simple_reflections:
                fs = self.frob(s) if twisted else s
                us.append(w)
                vs.append(self.mul(self.mul(s, w), self.inv(fs)))
        labels = kernels.uf_components(n, us, vs)
        groups: dict[int, list[int]] = {}
        for i, r in enumerate(labels):
            groups.setdefault(r, []).append(i)
        return [tuple(g) for g in sorted(groups.values())]

    def cosets(self, subgroup: Sequence[int]) -> list[int]:
        """Canonical representatives of the right cosets ``H w``."""
        seen, reps = set(), []
        for w in range(len(self)):
            if w in seen:
                continue
            reps.append(w)
            for h in subgroup:
                seen.add(self.mul(h, w))
        return reps

    def coset_min(self, subgroup: Sequence[int], w: int) -> int:
        return min(self.mul(h, w) for h in subgroup)

    def signed_permutation(self, a: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """``(signs, perm)`` with row ``i`` of the matrix equal to ``signs[i] e_{perm[i]}``."""
        g = self.elements[a]
        signs, perm = [], []
        for row in g:
            nz = [(j, x) for j, x in enumerate(row) if x]
            if len(nz) != 1 or abs(nz[0][1]) != 1:
                raise ValueError("element is not a signed permutation")
            perm.append(nz[0][0])
            signs.append(nz[0][1])
        return tuple(signs), tuple(perm)

    def serialize(self, a: int) -> dict:
        out = {"word": list(self.words[a]), "matrix": [[str(x) for x in r] for r in self.elements[a]]}
        try:
            signs, perm = self.signed_permutation(a)
            out["signed_permutation"] = {"signs": list(signs), "perm": list(perm)}
        except ValueError:
            pass
        return out

    @cached_property
    def flat(self) -> list[int]:
        return [x for g in self.elements for r in g for x in r]

    def scope(self) -> "Scope":
        return self.global_scope

    @cached_property
    def global_scope(self) -> "Scope":
        return Scope(self, tuple(range(len(self))), tuple(range(self.datum.nroots)), twisted=True, name="G")

    @cached_property
    def longest(self) -> int:
        return len(self) - 1


def _int_inverse(m: Matrix) -> Matrix:
    from .lattice import rational_inverse

    inv = rational_inverse(m)
    return tuple(tuple(int(x) for x in r) for r in inv)


def signed_permutation_elements(family: str, n: int) -> set[Matrix]:
    """Direct enumeration of ``(Z/2)^n x| S_n`` (even sign changes for type D)."""
    if family not in SIGNED_PERMUTATION_FAMILIES:
        raise ValueError(f"{family} is not of type B, C or D")
    out = set()
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            if family.startswith("SOeven") and signs.count(-1) % 2:
                continue
            out.add(tuple(tuple(signs[i] if j == perm[i] else 0 for j in range(n)) for i in range(n)))
    return out


class Scope:
    """A subgroup ``H`` of ``W`` with roots ``R_H`` acting on ``X (x) Q/Z``."""

    def __init__(self, W: WeylGroup, elems: Sequence[int], root_ids: Sequence[int], twisted: bool, name: str = ""):
        self.W = W
        self.elems = tuple(elems)
        self.elem_set = frozenset(self.elems)
        self.root_ids = tuple(root_ids)
        self.twisted = twisted and not W.datum.is_split
        self.name = name
        n = W.rank
        self._flat = [x for a in self.elems for r in W.elements[a] for x in r]
        self._n = n
        self._stab: dict = {}
        self._conn: dict = {}

    def __len__(self):
        return len(self.elems)

    def frob(self, a: int) -> int:
        return self.W.frob(a) if self.twisted else a

    # -- actions on s ---------------------------------------------------------

    def orbit_min(self, s: QmodZVector) -> tuple[QmodZVector, int]:
        if self._n == 0:
            return s, 0
        N = s.order
        nums = s.numerators(N)
        i, best = kernels.orbit_min(self._flat, len(self.elems), self._n, list(nums), N)
        return QmodZVector.from_numerators(best, N, s.excluded_primes), self.elems[i]

    def stab(self, s: QmodZVector) -> tuple[int, ...]:
        key = s.coords
        r = self._stab.get(key)
        if r is None:
            if self._n == 0:
                r = (0,)
            else:
                N = s.order
                idx = kernels.stabilizer(self._flat, len(self.elems), self._n, list(s.numerators(N)), N)
                r = tuple(self.elems[i] for i in idx)
            self._stab[key] = r
        return r

    def integral_roots(self, s: QmodZVector) -> tuple[int, ...]:
        """Roots of ``R_H`` whose coroot pairs integrally with ``s``."""
        co = self.W.datum.coroots
        return tuple(i for i in self.root_ids if pair(co[i], s.coords).denominator == 1)

    def conn(self, s: QmodZVector) -> tuple[int, ...]:
        key = s.coords
        r = self._conn.get(key)
        if r is None:
            r = self.W.reflection_subgroup(self.integral_roots(s))
            self._conn[key] = r
        return r

    def is_fixed(self, s: QmodZVector, w: int, q: int) -> bool:
        th = self.W.datum.theta
        fs = mat_vec(th, [q * c for c in s.coords]) if self._n else ()
        img = mat_vec(self.W.elements[w], fs)
        return QmodZVector(img) == QmodZVector(s.coords)

    def twist(self, u: int, w: int) -> int:
        """``u w F(u)^{-1}``."""
        W = self.W
        return W.mul(W.mul(u, w), W.inv(self.frob(u)))

    def canonical(self, s: QmodZVector, w: int) -> tuple[QmodZVector, int, int]:
        """Canonical ``(s_c, w_c, g)`` with ``g.(s, w) = (s_c, h w_c)``, ``h`` in ``H°_{s_c}``."""
        W = self.W
        sc, h = self.orbit_min(s)
        w1 = self.twist(h, w)
        conn = self.conn(sc)
        best = None
        for u in self.stab(sc):
            c = W.coset_min(conn, self.twist(u, w1))
            if best is None or c < best[0]:
                best = (c, u)
        wc, u = best
        return sc, wc, W.mul(u, h)

    def pi0(self, s: QmodZVector) -> list[int]:
        """Coset representatives of ``H_s / H°_s``."""
        W = self.W
        conn = self.conn(s)
        seen, reps = set(), []
        for u in self.stab(s):
            if u in seen:
                continue
            reps.append(u)
            for h in conn:
                seen.add(W.mul(u, h))
        return reps
