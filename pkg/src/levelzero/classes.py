"""Semisimple elements of the dual torus, geometric and rational classes.

An element ``s`` lives in ``X (x) Q/Z`` where ``X`` is the character lattice
of the group-side torus.  Frobenius acts as ``F = q theta`` and a rational
class is a canonical pair ``(s, w)`` with ``s = w F(s)`` modulo the twisted
action ``v.(s, w) = (v s, v w F(v)^{-1})``, ``w`` taken up to left
multiplication by the connected stabilizer ``W°_s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import kernels
from .errors import SingularMatrix, BoundTooLarge, ConfigError, IncompatiblePair, InvalidEll, InvalidOrderBound, InvalidPrimePower
from .lattice import (
    FiniteAbelianGroup,
    Matrix,
    QmodZVector,
    cokernel_group,
    crt_idempotent,
    det,
    hstack,
    identity,
    is_prime_power,
    mat_mul,
    mat_pow,
    mat_scale,
    mat_sub,
    mat_vec,
    prime_factors,
    rank,
    rational_inverse,
    solve_in_q_lattice,
)
from .rootdatum import RootDatum
from .weyl import Scope, WeylGroup

REGIMES = ("ql", "zl")
MAX_ORDER_BOUND = 10**6


@dataclass(frozen=True, order=True)
class ClassLabel:
    """Canonical ``(s, w)``; ``w`` is an element index in the ambient Weyl group."""

    s: QmodZVector
    w: int

    def key(self):
        return (self.s.coords, self.w)

    def s_strings(self) -> list[str]:
        return [str(c) for c in self.s.coords]


@dataclass(frozen=True)
class TorusPair:
    """``(w, theta_w)`` with ``theta_w`` in coordinates of ``X / (wF - 1) X``."""

    w: int
    theta_char: tuple[int, ...]


def frobenius_matrix(datum: RootDatum, q: int) -> Matrix:
    return mat_scale(q, datum.theta) if datum.rank else ()


def wf_minus_one(W: WeylGroup, w: int, q: int) -> Matrix:
    """``w theta q - 1`` on ``X``."""
    n = W.rank
    return mat_sub(mat_mul(W.elements[w], frobenius_matrix(W.datum, q)), identity(n))


@lru_cache(maxsize=4096)
def _fixed_numerators(M: Matrix) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """``(d, points)`` with ``M^{-1} Z^n / Z^n = {v / d}``, ``d = |det M|``."""
    d = det(M)
    if d == 0:
        raise SingularMatrix("w F - 1 is singular")
    adj = [[int(x * d) for x in row] for row in rational_inverse(M)]
    D = abs(d)
    G = cokernel_group(M)
    pts = set()
    for c in G.elements():
        lam = G.lift(c)
        pts.add(tuple(sum(a * b for a, b in zip(row, lam)) % D for row in adj))
    return D, tuple(sorted(pts))


def torus_fixed_points(W: WeylGroup, w: int, q: int, excluded: Iterable[int] = ()) -> list[QmodZVector]:
    """All ``s`` with ``w F(s) = s``, i.e. ``(w theta q - 1)^{-1} Z^n / Z^n``, Λ-filtered."""
    excluded = frozenset(excluded)
    if W.rank == 0:
        return [QmodZVector((), excluded)]
    D, pts = _fixed_numerators(wf_minus_one(W, w, q))
    out = set()
    for v in pts:
        s = QmodZVector(tuple(Fraction(x, D) for x in v))
        if all(s.order % p for p in excluded):
            out.add(QmodZVector(s.coords, excluded))
    return sorted(out)


def default_order_bound(q: int) -> int:
    return q * q - 1


class ClassContext:
    """Everything fixed for one enumeration: datum, ``q``, regime and order bound."""

    def __init__(
        self,
        datum: RootDatum,
        q: int,
        N: int | None = None,
        regime: str = "ql",
        ell: int | None = None,
        W: WeylGroup | None = None,
    ):
        p = is_prime_power(q)
        if p is None:
            raise InvalidPrimePower(f"q = {q} is not a prime power")
        if regime not in REGIMES:
            raise ConfigError(f"regime must be one of {REGIMES}")
        excluded = {p}
        if ell is not None:
            if is_prime_power(ell) != ell:
                raise InvalidEll(f"ell = {ell} is not prime")
            if ell == p:
                raise InvalidEll("ell must differ from p")
        if regime == "zl":
            if ell is None:
                raise InvalidEll("the zl regime needs ell")
            excluded.add(ell)
        if N is None:
            N = default_order_bound(q)
            for e in excluded:
                while N % e == 0:
                    N //= e
        if N < 1:
            raise InvalidOrderBound("order bound must be positive")
        if N > MAX_ORDER_BOUND:
            raise BoundTooLarge(f"order bound {N} exceeds {MAX_ORDER_BOUND}")
        bad = [e for e in excluded if N % e == 0]
        if bad:
            raise InvalidOrderBound(f"order bound {N} is divisible by excluded prime(s) {sorted(bad)}")
        self.datum = datum
        self.q = q
        self.p = p
        self.N = N
        self.regime = regime
        self.ell = ell
        self.excluded = frozenset(excluded)
        self.W = W if W is not None else WeylGroup(datum)
        self._fixed: dict[int, tuple[QmodZVector, ...]] = {}
        self._fixed_sets: dict[int, frozenset] = {}
        self._classes: dict[tuple, dict] = {}

    @property
    def scope(self) -> Scope:
        return self.W.global_scope

    def qmodz(self, coords: Sequence) -> QmodZVector:
        return QmodZVector(tuple(Fraction(c) for c in coords), self.excluded)

    def admissible(self, s: QmodZVector) -> bool:
        return self.N % s.order == 0 and all(s.order % p for p in self.excluded)

    def fixed_points(self, w: int) -> tuple[QmodZVector, ...]:
        r = self._fixed.get(w)
        if r is None:
            r = tuple(s for s in torus_fixed_points(self.W, w, self.q, self.excluded) if self.N % s.order == 0)
            self._fixed[w] = r
            self._fixed_sets[w] = frozenset(x.coords for x in r)
        return r

    def is_fixed(self, s: QmodZVector, w: int) -> bool:
        self.fixed_points(w)
        return s.coords in self._fixed_sets[w]

    # -- classes ----------------------------------------------------------------

    def classes(self, scope: Scope | None = None) -> dict[QmodZVector, list[ClassLabel]]:
        """Map each geometric representative to its sorted canonical labels."""
        scope = scope or self.scope
        key = (scope.elems, scope.root_ids, scope.twisted)
        cached = self._classes.get(key)
        if cached is not None:
            return cached
        reps = set()
        for w in scope.elems:
            for s in self.fixed_points(w):
                reps.add(scope.orbit_min(s)[0])
        out: dict[QmodZVector, list[ClassLabel]] = {}
        for s0 in sorted(reps):
            labels = set()
            for w in scope.elems:
                if self.is_fixed(s0, w):
                    sc, wc, _ = scope.canonical(s0, w)
                    labels.add(ClassLabel(sc, wc))
            out[s0] = sorted(labels)
        self._classes[key] = out
        return out

    def rational_classes(self, scope: Scope | None = None) -> list[ClassLabel]:
        return [lab for labs in self.classes(scope).values() for lab in labs]

    def geometric_classes(self, scope: Scope | None = None) -> list[QmodZVector]:
        return list(self.classes(scope))

    def geometric_class(self, label: ClassLabel, scope: Scope | None = None) -> QmodZVector:
        return (scope or self.scope).orbit_min(label.s)[0]

    def canonical_label(self, s: QmodZVector, w: int, scope: Scope | None = None) -> ClassLabel:
        scope = scope or self.scope
        if not scope.is_fixed(s, w, self.q):
            raise IncompatiblePair(f"s = {s} is not fixed by w F for w = {list(self.W.words[w])}")
        sc, wc, _ = scope.canonical(s, w)
        return ClassLabel(sc, wc)

    def check_label(self, label: ClassLabel, scope: Scope | None = None) -> None:
        scope = scope or self.scope
        if not scope.is_fixed(label.s, label.w, self.q):
            raise IncompatiblePair("stored label violates s = w F(s)")

    # -- maps on labels ---------------------------------------------------------

    def ell_regular(self, label: ClassLabel, ell: int) -> ClassLabel:
        if ell == self.p:
            raise InvalidEll("ell must differ from p")
        r = crt_idempotent(label.s.order, ell)
        s2 = QmodZVector(tuple(r * c for c in label.s.coords), label.s.excluded_primes)
        return self.canonical_label(s2, label.w)

    def is_elliptic(self, label: ClassLabel, scope: Scope | None = None) -> bool:
        return is_elliptic(self.W, label, scope or self.scope)

    def to_json(self, label: ClassLabel) -> dict:
        return {
            "s": label.s_strings(),
            "w": list(self.W.words[label.w]),
            "q": self.q,
            "theta": [[str(x) for x in r] for r in self.datum.theta],
            "regime": self.regime,
        }

    # -- brute-force oracle -------------------------------------------------------

    def brute_force_counts(self) -> dict[QmodZVector, int]:
        """Rational classes per geometric class by union-find over all pairs ``(s, w)``.

        Every ``s`` in ``(1/N) Z^n / Z^n`` is tried against every ``w``; the
        generators are left multiplication by the reflections of ``W°_s`` and
        twisted conjugation by simple reflections.
        """
        W, n, N = self.W, self.W.rank, self.N
        if N ** max(n, 1) * len(W) > 5 * 10**7:
            raise BoundTooLarge("brute-force grid too large")
        nodes: dict[tuple, int] = {}
        pairs: list[tuple] = []
        for w in range(len(W)):
            M = wf_minus_one(W, w, self.q) if n else ()
            flat = [x for r in M for x in r]
            pts = kernels.fixed_grid(flat, n, N) if n else [()]
            for v in pts:
                s = QmodZVector.from_numerators(v, N) if n else QmodZVector(())
                if any(s.order % p == 0 for p in self.excluded):
                    continue
                nodes[(v, w)] = len(pairs)
                pairs.append((v, w))
        co = self.datum.coroots
        us, vs = [], []
        refl = W.reflection_of_root
        for (v, w), idx in nodes.items():
            for i, c in enumerate(co):
                if sum(a * b for a, b in zip(c, v)) % N == 0:
                    us.append(idx)
                    vs.append(nodes[(v, W.mul(refl[i], w))])
            for r in W.simple_reflections:
                g = W.elements[r]
                v2 = tuple(sum(g[i][j] * v[j] for j in range(n)) % N for i in range(n))
                w2 = W.mul(W.mul(r, w), W.inv(W.frob(r)))
                us.append(idx)
                vs.append(nodes[(v2, w2)])
        labels = kernels.uf_components(len(pairs), us, vs)
        comp_min: dict[int, tuple] = {}
        for i, r in enumerate(labels):
            v = pairs[i][0]
            if r not in comp_min or v < comp_min[r]:
                comp_min[r] = v
        counts: dict[QmodZVector, int] = {}
        for v in comp_min.values():
            s = QmodZVector.from_numerators(v, N, self.excluded) if n else QmodZVector((), self.excluded)
            counts[s] = counts.get(s, 0) + 1
        return dict(sorted(counts.items()))

    def canonical_counts(self) -> dict[QmodZVector, int]:
        return {s: len(v) for s, v in self.classes().items()}


# ---------------------------------------------------------------------------
# torus duality and the trace map


def theta_to_s(W: WeylGroup, pair_: TorusPair, q: int) -> QmodZVector:
    M = wf_minus_one(W, pair_.w, q)
    G = cokernel_group(M)
    return solve_in_q_lattice(M, G.lift(pair_.theta_char))


def s_to_theta(W: WeylGroup, w: int, s: QmodZVector, q: int) -> TorusPair:
    M = wf_minus_one(W, w, q)
    lam = mat_vec(M, s.coords)
    if any(Fraction(x).denominator != 1 for x in lam):
        raise IncompatiblePair("s is not fixed by w F")
    G = cokernel_group(M)
    return TorusPair(w, G.coords(tuple(int(x) for x in lam)))


def trace_map(F: Matrix, lam: Sequence[int], m: int) -> tuple[tuple[int, ...], FiniteAbelianGroup]:
    """``lam + F lam + ... + F^{m-1} lam`` in coordinates of ``X / (F^m - 1) X``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    n = len(F)
    acc = [0] * n
    cur = tuple(lam)
    for _ in range(m):
        acc = [a + b for a, b in zip(acc, cur)]
        cur = mat_vec(F, cur)
    G = cokernel_group(mat_sub(mat_pow(F, m), identity(n)))
    return G.coords(tuple(acc)), G


# ---------------------------------------------------------------------------
# ellipticity


def _fixed_dim_mod(g: Matrix, basis: list, n: int) -> int:
    gm1 = mat_sub(g, identity(n))
    if basis:
        block = hstack(gm1, tuple(tuple(b[i] for b in basis) for i in range(n)))
    else:
        block = gm1
    return n - rank(block)


def is_elliptic(W: WeylGroup, label: ClassLabel, scope: Scope) -> bool:
    """Compare fixed dimensions of ``w theta`` modulo ``Phi_s`` and of ``theta`` modulo all roots, on ``Y (x) Q``."""
    n = W.rank
    if n == 0:
        return True
    co = W.datum.coroots
    th_y = W.datum.theta_on_y if scope.twisted else identity(n)
    g = mat_mul(W.y_matrix(label.w), th_y)
    local = [co[i] for i in scope.integral_roots(label.s)]
    full = [co[i] for i in scope.root_ids]
    return _fixed_dim_mod(g, local, n) == _fixed_dim_mod(th_y, full, n)
