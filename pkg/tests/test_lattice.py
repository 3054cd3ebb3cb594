import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from levelzero.errors import DenominatorError, SingularMatrix
from levelzero.lattice import (
    QmodZVector,
    cokernel_group,
    crt_idempotent,
    det,
    from_columns,
    identity,
    is_prime_power,
    lattice_contains,
    mat_mul,
    mat_vec,
    rational_nullspace,
    smith_decompose,
    solve_in_q_lattice,
    torsion_quotient,
)

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n).map(
        lambda rows: tuple(tuple(r) for r in rows)
    )


def diag_entries(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def test_smith_identity():
    U, D, V = smith_decompose(identity(2))
    assert D == identity(2)
    assert mat_mul(mat_mul(U, identity(2)), V) == D


def test_smith_diag_2_3():
    M = ((2, 0), (0, 3))
    U, D, V = smith_decompose(M)
    assert D == ((1, 0), (0, 6))
    assert mat_mul(mat_mul(U, M), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1


def test_smith_scalar():
    assert smith_decompose(((3,),))[1] == ((3,),)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_smith_properties(M):
    U, D, V = smith_decompose(M)
    assert mat_mul(mat_mul(U, M), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    d = [abs(x) for x in diag_entries(D)]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D)) if i != j)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert d[: len(nz)] == nz
    assert smith_decompose(M) == (U, D, V)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(square))
def test_cokernel_order_is_det(M):
    if det(M) == 0:
        with pytest.raises(SingularMatrix):
            cokernel_group(M)
        return
    G = cokernel_group(M)
    assert G.order == abs(det(M))
    assert all(b % a == 0 for a, b in zip(G.invariant_factors, G.invariant_factors[1:]))
    assert all(d >= 2 for d in G.invariant_factors)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 2).flatmap(square))
def test_cokernel_brute_force(M):
    d = abs(det(M))
    if d == 0 or d > 60:
        return
    G = cokernel_group(M)
    n = len(M)
    classes = {G.coords(v) for v in itertools.product(range(d), repeat=n)}
    assert len(classes) == G.order
    for v in itertools.product(range(-2, 3), repeat=n):
        assert G.coords(mat_vec(M, v)) == G.zero()


def test_cokernel_examples():
    assert cokernel_group(((4,),)).invariant_factors == (4,)
    assert cokernel_group(((-4,),)).invariant_factors == (4,)
    G = cokernel_group(((2, 0), (0, 2)))
    assert G.order == 4 and G.invariant_factors == (2, 2)


def test_torsion_quotient_examples():
    sub = from_columns([(1, -1), (1, 1)], 2)
    assert torsion_quotient(2, sub, identity(2)).invariant_factors == (2,)
    assert torsion_quotient(2, identity(2), ((0, 1), (1, 0))).is_trivial
    assert torsion_quotient(1, ((2,),), identity(1)).invariant_factors == (2,)


def test_torsion_quotient_free_part_dropped():
    # Z^2 / <(1,0)> with endo 0 is Z, no torsion
    assert torsion_quotient(2, from_columns([(1, 0)], 2), ((0, 0), (0, 0))).order == 1
    # Z / (1 - (-1)) = Z/2
    assert torsion_quotient(1, ((0,),), ((-1,),)).invariant_factors == (2,)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3),
       st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_lattice_contains_brute_force(cols, v):
    basis = from_columns(cols, 2)
    found = any(
        tuple(sum(c * col[i] for c, col in zip(coeffs, cols)) for i in range(2)) == v
        for coeffs in itertools.product(range(-12, 13), repeat=len(cols))
    )
    if found:
        assert lattice_contains(basis, v, 2)


def test_solve_examples():
    assert solve_in_q_lattice(((4,),), (1,)).coords == (Fraction(1, 4),)
    assert solve_in_q_lattice(identity(2), (Fraction(1, 3), 0)).coords == (Fraction(1, 3), 0)
    assert solve_in_q_lattice(((2, 0), (0, 3)), (1, 1)).coords == (Fraction(1, 2), Fraction(1, 3))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(square), st.data())
def test_solve_round_trip(M, data):
    if det(M) == 0:
        return
    n = len(M)
    x = data.draw(st.lists(st.fractions(max_denominator=12), min_size=n, max_size=n))
    y = solve_in_q_lattice(M, x)
    img = mat_vec(M, y.coords)
    assert all((a - b).denominator == 1 for a, b in zip(img, x))


def test_qmodz_reduction_and_order():
    v = QmodZVector((Fraction(5, 4), Fraction(-1, 6)))
    assert v.coords == (Fraction(1, 4), Fraction(5, 6))
    assert v.order == 12
    assert QmodZVector.from_numerators((3, 4), 12) == QmodZVector((Fraction(1, 4), Fraction(1, 3)))
    with pytest.raises(DenominatorError):
        QmodZVector((Fraction(1, 3),), frozenset({3}))


def test_crt_idempotent():
    # order 6, ell = 3: the ell-regular part of s is e*s with order 2
    e = crt_idempotent(6, 3)
    assert (e * 1) % 6 in (3,)
    assert crt_idempotent(5, 3) % 5 == 1


def test_is_prime_power():
    assert is_prime_power(9) == 3
    assert is_prime_power(8) == 2
    assert is_prime_power(7) == 7
    assert is_prime_power(6) is None
    assert is_prime_power(1) is None


def test_rational_nullspace():
    ns = rational_nullspace([(1, 1, 0)])
    assert len(ns) == 2
    for v in ns:
        assert v[0] + v[1] == 0
    assert rational_nullspace([(1, 0), (0, 1)]) == []
