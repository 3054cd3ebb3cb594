"""Parity of signed permutations on the ``-1`` eigenspace and related tables.

A coordinate of ``s`` equal to ``1/2`` corresponds to the eigenvalue ``-1``.
The parity ``f(s, w)`` adds the sign bits of ``w`` over those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .classes import ClassContext, ClassLabel
from .errors import BadVertex, UnsupportedSpec
from .lattice import Matrix, QmodZVector, mat_mul
from .labels import pi0
from .rootdatum import SIGNED_PERMUTATION_FAMILIES

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SignedPermutation:
    """Row ``i`` of the matrix is ``(-1)^eps[i] e_{perm[i]}``."""

    eps: tuple[int, ...]
    perm: tuple[int, ...]

    @classmethod
    def from_matrix(cls, g: Matrix) -> "SignedPermutation":
        eps, perm = [], []
        for row in g:
            nz = [(j, x) for j, x in enumerate(row) if x]
            if len(nz) != 1 or abs(nz[0][1]) != 1:
                raise ValueError("not a signed permutation matrix")
            perm.append(nz[0][0])
            eps.append(0 if nz[0][1] > 0 else 1)
        return cls(tuple(eps), tuple(perm))

    def to_matrix(self) -> Matrix:
        n = len(self.perm)
        return tuple(
            tuple((-1) ** self.eps[i] if j == self.perm[i] else 0 for j in range(n)) for i in range(n)
        )

    @property
    def is_even(self) -> bool:
        return sum(self.eps) % 2 == 0


def sign_pattern(s: QmodZVector | Sequence) -> tuple:
    """``+1`` for coordinate ``0``, ``-1`` for ``1/2``, ``None`` otherwise."""
    coords = s.coords if isinstance(s, QmodZVector) else tuple(Fraction(c) % 1 for c in s)
    return tuple(1 if c == 0 else (-1 if c == HALF else None) for c in coords)


def minus_one_set(pattern: Sequence) -> frozenset:
    return frozenset(i for i, x in enumerate(pattern) if x == -1)


def parity_f(pattern: Sequence, w: SignedPermutation | Matrix) -> int:
    if not isinstance(w, SignedPermutation):
        w = SignedPermutation.from_matrix(w)
    return sum(w.eps[i] for i in minus_one_set(pattern)) % 2


def preserves(w: SignedPermutation | Matrix, idx: frozenset) -> bool:
    if not isinstance(w, SignedPermutation):
        w = SignedPermutation.from_matrix(w)
    return {w.perm[i] for i in idx} == set(idx)


def family_twist(ctx: ClassContext) -> Matrix:
    """The element ``v``: ``theta`` for the quasi-split even orthogonal family, else the identity."""
    return ctx.datum.theta


def rational_tag(ctx: ClassContext, label: ClassLabel) -> int:
    spec = ctx.datum.spec
    if spec is None or spec.family not in SIGNED_PERMUTATION_FAMILIES:
        raise UnsupportedSpec("rational tags are defined for types B, C and D")
    if pi0(ctx, label).order == 1:
        return 0
    g = mat_mul(ctx.W.elements[label.w], family_twist(ctx))
    return parity_f(sign_pattern(label.s), g)


def compose_tags(i: int, j: int) -> int:
    return (i + j) % 2


def parahoric_factors(family: str, n: int, vertex: int) -> tuple[tuple[str, int], tuple[str, int]]:
    """Reductive quotient at the vertex with coordinates ``(1/2^vertex, 0^(n - vertex))``."""
    if n < 0 or vertex < 0 or vertex > n:
        raise BadVertex(f"vertex {vertex} outside 0..{n}")
    if family == "Sp":
        return ("Sp", n - vertex), ("Sp", vertex)
    if family == "SOeven_split":
        return ("SOeven_split", n - vertex), ("SOeven_split", vertex)
    if family == "SOeven_quasisplit":
        return ("SOeven_split", n - vertex), ("SOeven_quasisplit", vertex)
    raise UnsupportedSpec(f"no parahoric table for {family}")


def unip_cuspidal_exists(N: int, form: str) -> bool:
    """Whether ``N = 2 m^2`` with ``m`` even (split) or odd (nonsplit)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if form not in ("split", "nonsplit"):
        raise ValueError("form must be 'split' or 'nonsplit'")
    if N % 2:
        return False
    m = isqrt(N // 2)
    if 2 * m * m != N:
        return False
    return m % 2 == (0 if form == "split" else 1)


def factor_tags(pattern: Sequence, w: SignedPermutation | Matrix, blocks: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Parity of ``w`` restricted to each block of coordinates."""
    if not isinstance(w, SignedPermutation):
        w = SignedPermutation.from_matrix(w)
    minus = minus_one_set(pattern)
    return tuple(sum(w.eps[i] for i in b if i in minus) % 2 for b in blocks)
