"""Based root data of the supported classical families, their duals and Levi sub-data.

Coordinates: ``X`` and ``Y`` are both ``Z^rank`` and the pairing is the dot
product.  Roots are stored positive ones first, negatives after in the same
order, so ``roots[i + npos] == -roots[i]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import InvalidDatum, NotThetaStable, UnsupportedSpec
from .lattice import Matrix, Vector, as_matrix, identity, mat_mul, mat_vec, rational_inverse, transpose

FAMILIES = (
    "GL",
    "SL",
    "PGL",
    "Sp",
    "SOodd",
    "SOeven_split",
    "SOeven_quasisplit",
    "U_quasisplit",
    "custom",
)

SIGNED_PERMUTATION_FAMILIES = ("Sp", "SOodd", "SOeven_split", "SOeven_quasisplit")


def pair(x: Sequence[int], y: Sequence[int]):
    return sum(a * b for a, b in zip(x, y))


def _neg(v):
    return tuple(-a for a in v)


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int
    custom: "RootDatum | None" = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedSpec(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.family == "custom":
            if self.custom is None:
                raise UnsupportedSpec("custom family needs an explicit root datum")
        elif self.n < 1:
            raise UnsupportedSpec("n must be at least 1")

    def label(self) -> str:
        return self.family if self.family == "custom" else f"{self.family}{self.n}"


@dataclass(frozen=True, eq=False)
class RootDatum:
    """A based root datum with a pinned automorphism ``theta`` of ``X``."""

    rank: int
    roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    simple_indices: tuple[int, ...]
    theta: Matrix
    name: str = "custom"
    spec: GroupSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(int(a) for a in r) for r in self.roots))
        object.__setattr__(self, "coroots", tuple(tuple(int(a) for a in r) for r in self.coroots))
        object.__setattr__(self, "simple_indices", tuple(self.simple_indices))
        object.__setattr__(self, "theta", as_matrix(self.theta) if self.rank else ())

    # -- identity and hashing ------------------------------------------------

    def key(self):
        return (self.rank, frozenset(zip(self.roots, self.coroots)),
                tuple(self.roots[i] for i in self.simple_indices), self.theta)

    def __eq__(self, other):
        return isinstance(other, RootDatum) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    # -- derived data ---------------------------------------------------------

    @property
    def nroots(self) -> int:
        return len(self.roots)

    @property
    def npos(self) -> int:
        return len(self.roots) // 2

    @cached_property
    def root_index(self) -> dict[Vector, int]:
        return {r: i for i, r in enumerate(self.roots)}

    @cached_property
    def coroot_index(self) -> dict[Vector, int]:
        return {r: i for i, r in enumerate(self.coroots)}

    @property
    def simple_roots(self) -> list[Vector]:
        return [self.roots[i] for i in self.simple_indices]

    @property
    def simple_coroots(self) -> list[Vector]:
        return [self.coroots[i] for i in self.simple_indices]

    @cached_property
    def cartan(self) -> Matrix:
        """``A[i][j] = <alpha_i, alpha_j^vee>``."""
        return tuple(tuple(pair(a, b) for b in self.simple_coroots) for a in self.simple_roots)

    @cached_property
    def simple_coordinates(self) -> tuple[tuple[Fraction, ...], ...]:
        """Coordinates of each root in the basis of simple roots."""
        if not self.simple_indices:
            return tuple(() for _ in self.roots)
        inv = rational_inverse(self.cartan)
        out = []
        for r in self.roots:
            p = [pair(r, c) for c in self.simple_coroots]
            out.append(tuple(sum(p[j] * inv[j][i] for j in range(len(p))) for i in range(len(p))))
        return tuple(out)

    def is_positive(self, i: int) -> bool:
        return any(c > 0 for c in self.simple_coordinates[i])

    @property
    def is_split(self) -> bool:
        return self.theta == identity(self.rank)

    @cached_property
    def theta_order(self) -> int:
        m, k = self.theta, 1
        while m != identity(self.rank):
            m = mat_mul(m, self.theta)
            k += 1
            if k > 24:
                raise InvalidDatum("theta does not have finite order")
        return k

    @cached_property
    def theta_on_y(self) -> Matrix:
        """The dual automorphism on ``Y``; the transpose, valid for involutions."""
        return transpose(self.theta) if self.rank else ()

    def reflect(self, i: int, x: Sequence[int]) -> Vector:
        a, c = self.roots[i], self.coroots[i]
        k = pair(x, c)
        return tuple(xi - k * ai for xi, ai in zip(x, a))

    def reflection_matrix(self, i: int) -> Matrix:
        """Matrix of ``s_alpha`` on ``X`` (columns are images of basis vectors)."""
        cols = [self.reflect(i, e) for e in identity(self.rank)]
        return tuple(tuple(c[r] for c in cols) for r in range(self.rank))

    @cached_property
    def theta_root_permutation(self) -> tuple[int, ...]:
        out = []
        for r in self.roots:
            img = mat_vec(self.theta, r)
            if img not in self.root_index:
                raise InvalidDatum("theta does not permute the roots")
            out.append(self.root_index[img])
        return tuple(out)

    def components(self) -> list[tuple[int, ...]]:
        """Connected components of the Dynkin diagram, as positions in ``simple_indices``."""
        k = len(self.simple_indices)
        seen, comps = set(), []
        for s in range(k):
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                a = stack.pop()
                comp.append(a)
                for b in range(k):
                    if b not in seen and self.cartan[a][b] != 0:
                        seen.add(b)
                        stack.append(b)
            comps.append(tuple(sorted(comp)))
        return comps

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        n = self.rank
        if len(self.roots) != len(self.coroots):
            raise InvalidDatum("roots and coroots differ in number")
        if len(set(self.roots)) != len(self.roots):
            raise InvalidDatum("repeated root")
        for r, c in zip(self.roots, self.coroots):
            if len(r) != n or len(c) != n:
                raise InvalidDatum("root of wrong length")
            if pair(r, c) != 2:
                raise InvalidDatum(f"<{r}, {c}> != 2")
            if _neg(r) not in self.root_index:
                raise InvalidDatum("root set not closed under negation")
            if self.coroots[self.root_index[_neg(r)]] != _neg(c):
                raise InvalidDatum("coroot of -alpha is not -coroot")
        for i in range(self.nroots):
            a, c = self.roots[i], self.coroots[i]
            for j in range(self.nroots):
                img = self.reflect(j, a)
                if img not in self.root_index:
                    raise InvalidDatum("reflections do not permute the roots")
                k = pair(self.roots[j], c)
                cimg = tuple(y - k * z for y, z in zip(c, self.coroots[j]))
                if self.coroots[self.root_index[img]] != cimg:
                    raise InvalidDatum("reflections do not permute the coroots compatibly")
        for i, coords in enumerate(self.simple_coordinates):
            if any(x.denominator != 1 for x in coords):
                raise InvalidDatum("root outside the integral span of the base")
            if coords and not (all(x >= 0 for x in coords) or all(x <= 0 for x in coords)):
                raise InvalidDatum("simple indices do not form a base")
        npos = self.npos
        for i in range(npos):
            if not self.is_positive(i) or self.roots[i + npos] != _neg(self.roots[i]):
                raise InvalidDatum("roots not stored positives first")
        if self.rank:
            if self.theta_order > 2:
                raise InvalidDatum("only pinned automorphisms of order at most 2 are supported")
            perm = self.theta_root_permutation
            thy = self.theta_on_y
            for i, j in enumerate(perm):
                if mat_vec(thy, self.coroots[i]) != self.coroots[j]:
                    raise InvalidDatum("theta does not match the coroot permutation")
            if {perm[i] for i in self.simple_indices} != set(self.simple_indices):
                raise InvalidDatum("theta does not fix the base")

    # -- constructions --------------------------------------------------------

    def dual(self) -> "RootDatum":
        return RootDatum(
            self.rank,
            self.coroots,
            self.roots,
            self.simple_indices,
            transpose(self.theta) if self.rank else (),
            name=f"dual({self.name})" if not self.name.startswith("dual(") else self.name[5:-1],
        )

    def levi(self, subset: Sequence[int], twisted: bool = True) -> "LeviDatum":
        """Standard Levi sub-datum for ``subset`` (positions in ``simple_indices``).

        With ``twisted`` the subset must be theta-stable and theta is kept;
        otherwise the Levi is returned split.
        """
        subset = tuple(sorted(set(subset)))
        k = len(self.simple_indices)
        if any(i < 0 or i >= k for i in subset):
            raise InvalidDatum("subset position out of range")
        perm = self.theta_root_permutation if self.rank else ()
        stable = {perm[self.simple_indices[i]] for i in subset} == {self.simple_indices[i] for i in subset}
        if twisted and not self.is_split and not stable:
            raise NotThetaStable(f"subset {subset} is not theta-stable")
        keep = [
            i for i, c in enumerate(self.simple_coordinates)
            if all(c[j] == 0 for j in range(k) if j not in subset)
        ]
        theta = self.theta if (twisted and stable) else identity(self.rank)
        return self.sub_datum(keep, theta=theta, name=f"{self.name}|L{list(subset)}")

    def sub_datum(self, root_indices: Sequence[int], theta: Matrix | None = None, name: str | None = None) -> "LeviDatum":
        """Closed subsystem spanned by the given roots, with the base induced by positivity."""
        idx = sorted(set(root_indices))
        pos = [i for i in idx if self.is_positive(i)]
        neg = [self.root_index[_neg(self.roots[i])] for i in pos]
        order = pos + neg
        pos_set = {self.roots[i] for i in pos}
        simple = []
        for a, i in enumerate(pos):
            r = self.roots[i]
            decomposable = any(
                tuple(x - y for x, y in zip(r, self.roots[j])) in pos_set for j in pos if j != i
            )
            if not decomposable:
                simple.append(a)
        sub = RootDatum(
            self.rank,
            tuple(self.roots[i] for i in order),
            tuple(self.coroots[i] for i in order),
            tuple(simple),
            self.theta if theta is None else theta,
            name=name or f"{self.name}|sub",
        )
        return LeviDatum(sub, self, tuple(order))

    # -- serialization ----------------------------------------------------------

    def to_json_obj(self) -> dict:
        s = lambda v: [str(a) for a in v]  # noqa: E731
        return {
            "name": self.name,
            "rank": str(self.rank),
            "roots": [s(r) for r in self.roots],
            "coroots": [s(c) for c in self.coroots],
            "simple_indices": [str(i) for i in self.simple_indices],
            "theta": [s(r) for r in self.theta],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RootDatum":
        try:
            rank = int(obj["rank"])
            iv = lambda v: tuple(int(a) for a in v)  # noqa: E731
            rd = cls(
                rank,
                tuple(iv(r) for r in obj["roots"]),
                tuple(iv(r) for r in obj["coroots"]),
                iv(obj["simple_indices"]),
                tuple(iv(r) for r in obj.get("theta") or identity(rank)),
                name=obj.get("name", "custom"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDatum(f"malformed datum: {exc}") from exc
        rd.validate()
        return rd

    @classmethod
    def from_json(cls, text: str) -> "RootDatum":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class LeviDatum:
    """A sub-datum together with the positions of its roots in the parent."""

    datum: RootDatum
    parent: RootDatum
    root_embedding: tuple[int, ...]


# ---------------------------------------------------------------------------
# classical families


def _e(n, i):
    return tuple(int(j == i) for j in range(n))


def _add(*vs):
    return tuple(sum(c) for c in zip(*vs))


def _scale(k, v):
    return tuple(k * a for a in v)


def _assemble(rank, pos_pairs, simple_pos, theta, name, spec):
    roots = [r for r, _ in pos_pairs] + [_neg(r) for r, _ in pos_pairs]
    coroots = [c for _, c in pos_pairs] + [_neg(c) for _, c in pos_pairs]
    rd = RootDatum(rank, tuple(roots), tuple(coroots), tuple(simple_pos), theta, name=name, spec=spec)
    rd.validate()
    return rd


def _type_a_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _type_a_simple(n):
    pairs = _type_a_pairs(n)
    return [pairs.index((i, i + 1)) for i in range(n - 1)]


def build_classical(spec: GroupSpec) -> RootDatum:
    fam, n = spec.family, spec.n
    if fam == "custom":
        rd = spec.custom
        rd.validate()
        return rd
    name = spec.label()
    if fam in ("GL", "U_quasisplit"):
        pairs = [(_add(_e(n, i), _scale(-1, _e(n, j))),) * 2 for i, j in _type_a_pairs(n)]
        if fam == "GL":
            theta = identity(n)
        else:
            theta = tuple(tuple(-int(j == n - 1 - i) for j in range(n)) for i in range(n))
        return _assemble(n, pairs, _type_a_simple(n), theta, name, spec)
    if fam == "SL":
        r = n - 1

        def eps(i):
            return _e(r, i) if i < r else tuple(-1 for _ in range(r))

        def yv(i):
            return _e(r, i) if i < r else (0,) * r

        pairs = [(_add(eps(i), _neg(eps(j))), _add(yv(i), _neg(yv(j)))) for i, j in _type_a_pairs(n)]
        return _assemble(r, pairs, _type_a_simple(n), identity(r), name, spec)
    if fam == "PGL":
        r = n - 1

        def xv(i):
            return _e(r, i) if i < r else (0,) * r

        def fv(i):
            return _e(r, i) if i < r else tuple(-1 for _ in range(r))

        pairs = [(_add(xv(i), _neg(xv(j))), _add(fv(i), _neg(fv(j)))) for i, j in _type_a_pairs(n)]
        return _assemble(r, pairs, _type_a_simple(n), identity(r), name, spec)
    if fam in SIGNED_PERMUTATION_FAMILIES:
        pairs, simple = [], []
        for i, j in _type_a_pairs(n):
            d = _add(_e(n, i), _neg(_e(n, j)))
            pairs.append((d, d))
            if j == i + 1:
                simple.append(len(pairs) - 1)
        for i, j in _type_a_pairs(n):
            s = _add(_e(n, i), _e(n, j))
            pairs.append((s, s))
            if fam.startswith("SOeven") and (i, j) == (n - 2, n - 1):
                simple.append(len(pairs) - 1)
        if fam == "Sp":
            for i in range(n):
                pairs.append((_scale(2, _e(n, i)), _e(n, i)))
            simple.append(len(pairs) - 1)
        elif fam == "SOodd":
            for i in range(n):
                pairs.append((_e(n, i), _scale(2, _e(n, i))))
            simple.append(len(pairs) - 1)
        theta = identity(n)
        if fam == "SOeven_quasisplit":
            theta = tuple(tuple(int(i == j) * (-1 if i == n - 1 else 1) for j in range(n)) for i in range(n))
        return _assemble(n, pairs, simple, theta, name, spec)
    raise UnsupportedSpec(f"unsupported family {fam!r}")


def build(family: str, n: int) -> RootDatum:
    return build_classical(GroupSpec(family, n))


def dual(rd: RootDatum) -> RootDatum:
    return rd.dual()


def levi(rd: RootDatum, subset: Sequence[int], twisted: bool = True) -> LeviDatum:
    return rd.levi(subset, twisted)


def rank_le_3_data() -> list[RootDatum]:
    """Every built classical datum of rank at most 3 (rank 0 excluded)."""
    out = []
    for fam in FAMILIES[:-1]:
        for n in range(1, 5):
            rd = build(fam, n)
            if 1 <= rd.rank <= 3:
                out.append(rd)
    return out
