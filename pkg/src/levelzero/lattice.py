"""Exact integer lattice algebra.

Smith normal form with deterministic pivoting, cokernels of nonsingular
matrices, torsion parts of quotient lattices, and solving congruences over
Q/Z.  Every quantity is a Python int or a ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

from .errors import DenominatorError, LatticeError, NotStable, SingularMatrix

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# small matrix helpers


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    out = tuple(tuple(int(x) for x in r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise LatticeError("ragged matrix")
    return out


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zero_matrix(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def transpose(m: Matrix, ncols: int | None = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c: int, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def mat_pow(a: Matrix, k: int) -> Matrix:
    out = identity(len(a))
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def hstack(*blocks: Matrix) -> Matrix:
    rows = len(blocks[0])
    return tuple(sum((tuple(b[i]) for b in blocks), ()) for i in range(rows))


def columns(m: Matrix) -> list[Vector]:
    return [tuple(c) for c in transpose(m)] if m and m[0] else []


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(tuple(int(c[i]) for c in cols) for i in range(nrows))


def det(m: Matrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(m: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse over Q by Gauss-Jordan elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def rank(m: Matrix) -> int:
    """Rank over Q (the number of nonzero invariant factors)."""
    if not m or not m[0]:
        return 0
    _, d, _ = smith_decompose(m)
    return sum(1 for i in range(min(shape(d))) if d[i][i] != 0)


# ---------------------------------------------------------------------------
# Smith normal form


def smith_decompose(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return unimodular ``U``, ``V`` and diagonal ``D`` with ``U M V = D``.

    Pivots are chosen as the entry of smallest absolute value in the active
    block, ties broken by row-major position, so the output is a pure
    function of the input.  Diagonal entries are nonnegative and form a
    divisibility chain.
    """
    u, d, v, _ = _smith(m)
    return u, d, v


def _smith(m: Matrix):
    rows, cols = shape(m)
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    uinv = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]
            for r in uinv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i != j:
            for r in a:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if c:
            a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]
            for r in uinv:
                r[src] -= c * r[dst]

    def add_col(dst, src, c):
        if c:
            for r in a:
                r[dst] += c * r[src]
            for r in v:
                r[dst] += c * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in uinv:
            r[i] = -r[i]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            # smallest leftover in the pivot row/column becomes the new pivot
            cand = None
            for i in range(t + 1, rows):
                if a[i][t] and (cand is None or abs(a[i][t]) < cand[0]):
                    cand = (abs(a[i][t]), "r", i)
            for j in range(t + 1, cols):
                if a[t][j] and (cand is None or abs(a[t][j]) < cand[0]):
                    cand = (abs(a[t][j]), "c", j)
            if cand is not None:
                if cand[1] == "r":
                    swap_rows(t, cand[2])
                else:
                    swap_cols(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return as_matrix(u), as_matrix(a), as_matrix(v), as_matrix(uinv)


def invariant_factors(m: Matrix) -> tuple[int, ...]:
    _, d, _ = smith_decompose(m)
    return tuple(d[i][i] for i in range(min(shape(d))))


# ---------------------------------------------------------------------------
# finite abelian groups


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """A finite abelian group ``Z/d1 x ... x Z/dt`` presented inside ``Z^n``.

    ``basis_lift`` holds the generator lifts as columns of an ``n x t``
    matrix; ``coordinate_rows`` are ``t`` linear functionals on ``Z^n`` that
    read off the coordinates (mod ``d_i``) of any lattice vector whose class
    lies in this group.
    """

    invariant_factors: tuple[int, ...]
    basis_lift: Matrix
    coordinate_rows: Matrix = field(default=(), compare=False)
    ambient_rank: int = 0

    def __post_init__(self):
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise LatticeError("invariant factors must form a divisibility chain")
        if any(d < 2 for d in self.invariant_factors):
            raise LatticeError("invariant factors must be at least 2")

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        return tuple(
            sum(c * x for c, x in zip(row, vec)) % d
            for row, d in zip(self.coordinate_rows, self.invariant_factors)
        )

    def lift(self, coords: Sequence[int]) -> Vector:
        gens = columns(self.basis_lift)
        out = [0] * self.ambient_rank
        for c, g in zip(coords, gens):
            for i, x in enumerate(g):
                out[i] += c * x
        return tuple(out)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(d) for d in self.invariant_factors))

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.invariant_factors)

    def describe(self) -> str:
        if self.is_trivial:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def _cokernel_torsion(a: Matrix, nrows: int) -> FiniteAbelianGroup:
    """Torsion subgroup of ``Z^nrows / (column span of a)``."""
    if not a or not a[0]:
        return FiniteAbelianGroup((), from_columns([], nrows), (), nrows)
    u, d, _, uinv = _smith(a)
    diag = [d[i][i] for i in range(min(shape(d)))]
    idx = [i for i, x in enumerate(diag) if x > 1]
    factors = tuple(diag[i] for i in idx)
    lifts = from_columns([tuple(r[i] for r in uinv) for i in idx], nrows)
    coord_rows = tuple(u[i] for i in idx)
    return FiniteAbelianGroup(factors, lifts, coord_rows, nrows)


def cokernel_group(m: Matrix) -> FiniteAbelianGroup:
    """``Z^n / M Z^n`` for a square nonsingular ``M``; order ``|det M|``."""
    rows, cols = shape(m)
    if rows != cols:
        raise LatticeError("cokernel_group expects a square matrix")
    if rows == 0:
        return FiniteAbelianGroup((), (), (), 0)
    if det(m) == 0:
        raise SingularMatrix("det(M) = 0: the cokernel is infinite")
    return _cokernel_torsion(m, rows)


def lattice_contains(basis: Matrix, vec: Sequence[int], nrows: int) -> bool:
    """Whether ``vec`` lies in the integer column span of ``basis``."""
    if not basis or not basis[0]:
        return all(x == 0 for x in vec)
    u, d, _ = smith_decompose(basis)
    y = mat_vec(u, vec)
    r, c = shape(d)
    for i in range(r):
        di = d[i][i] if i < c else 0
        if di == 0:
            if y[i] != 0:
                return False
        elif y[i] % di:
            return False
    return True


def torsion_quotient(ambient_rank: int, sublattice: Matrix, endo: Matrix) -> FiniteAbelianGroup:
    """Torsion of ``(X/L) / (1 - endo)(X/L)`` with ``X = Z^ambient_rank``.

    ``sublattice`` holds generators of ``L`` as columns.  The quotient equals
    the cokernel of the block matrix ``[L | 1 - endo]``.
    """
    n = ambient_rank
    if sublattice and sublattice[0]:
        for col in columns(sublattice):
            if not lattice_contains(sublattice, mat_vec(endo, col), n):
                raise NotStable("endomorphism does not preserve the sublattice")
    one_minus = mat_sub(identity(n), endo)
    block = hstack(sublattice, one_minus) if sublattice and sublattice[0] else one_minus
    return _cokernel_torsion(block, n)


def induced_map(src: FiniteAbelianGroup, dst: FiniteAbelianGroup, linear: Matrix | None = None):
    """Coordinates-level homomorphism induced by a lattice map (default identity)."""

    def apply(c):
        v = src.lift(c)
        if linear is not None:
            v = mat_vec(linear, v)
        return dst.coords(v)

    return apply


# ---------------------------------------------------------------------------
# Q/Z vectors


def _prime_factors(n: int) -> set[int]:
    out, p = set(), 2
    n = abs(n)
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


@dataclass(frozen=True, order=True)
class QmodZVector:
    """A vector of ``Q/Z``, stored as reduced fractions in ``[0, 1)``."""

    coords: tuple[Fraction, ...]
    excluded_primes: frozenset = field(default=frozenset(), compare=False)

    def __post_init__(self):
        reduced = tuple(Fraction(c) % 1 for c in self.coords)
        object.__setattr__(self, "coords", reduced)
        object.__setattr__(self, "excluded_primes", frozenset(self.excluded_primes))
        for c in reduced:
            for p in self.excluded_primes:
                if c.denominator % p == 0:
                    raise DenominatorError(f"denominator of {c} divisible by excluded prime {p}")

    @classmethod
    def from_numerators(cls, nums: Sequence[int], modulus: int, excluded=frozenset()):
        return cls(tuple(Fraction(a, modulus) for a in nums), frozenset(excluded))

    @property
    def order(self) -> int:
        out = 1
        for c in self.coords:
            out = lcm(out, c.denominator)
        return out

    def numerators(self, modulus: int) -> tuple[int, ...]:
        out = []
        for c in self.coords:
            if modulus % c.denominator:
                raise LatticeError(f"modulus {modulus} is not a multiple of the denominator of {c}")
            out.append(c.numerator * (modulus // c.denominator))
        return tuple(out)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def solve_in_q_lattice(m: Matrix, target: Sequence) -> QmodZVector:
    """Return ``y = M^{-1} x`` reduced mod ``Z^n``.

    ``target`` is a representative ``x`` (integers or fractions, or a
    ``QmodZVector``).  Then ``M y - x`` lies in ``M Z^n``, and for integral
    ``x`` every denominator of ``y`` divides ``det M``.
    """
    excluded = target.excluded_primes if isinstance(target, QmodZVector) else frozenset()
    x = tuple(Fraction(c) for c in target)
    inv = rational_inverse(m)
    y = tuple(sum(a * b for a, b in zip(row, x)) for row in inv)
    return QmodZVector(y, excluded)


def crt_idempotent(order: int, ell: int) -> int:
    """``r`` with ``r = 1`` mod the prime-to-``ell`` part and ``r = 0`` mod the ``ell`` part."""
    ell_part = 1
    m = order
    while m % ell == 0:
        m //= ell
        ell_part *= ell
    if ell_part == 1:
        return 1
    if m == 1:
        return 0
    # r = ell_part * k with ell_part * k = 1 mod m
    k = pow(ell_part, -1, m)
    return (ell_part * k) % order


def prime_factors(n: int) -> set[int]:
    return _prime_factors(n)


def is_prime_power(q: int) -> int | None:
    """Return the prime ``p`` if ``q = p^k`` with ``k >= 1``, else ``None``."""
    if q < 2:
        return None
    ps = _prime_factors(q)
    return next(iter(ps)) if len(ps) == 1 else None


__all__ = [
    "Matrix",
    "Vector",
    "LatticeError",
    "SingularMatrix",
    "NotStable",
    "DenominatorError",
    "FiniteAbelianGroup",
    "QmodZVector",
    "smith_decompose",
    "invariant_factors",
    "cokernel_group",
    "torsion_quotient",
    "solve_in_q_lattice",
    "lattice_contains",
    "induced_map",
    "det",
    "rank",
    "gcd",
]


def rational_nullspace(rows: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : R x = 0}`` over Q, in reduced-echelon order."""
    if not rows:
        return []
    ncols = len(rows[0])
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fcol]
        out.append(tuple(v))
    return out
