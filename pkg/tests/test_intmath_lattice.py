import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.functions.combinatorial.numbers import kronecker_symbol

from charpolycount import lattice
from charpolycount.intmath import (
    factorint,
    is_fundamental_discriminant,
    is_prime,
    kronecker,
    prime_sieve,
    sqrt_mod,
    valuation,
)


def test_prime_sieve():
    assert list(prime_sieve(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(prime_sieve(10**6)) == 78498
    assert len(prime_sieve(1)) == 0


@given(st.integers(-10**6, 10**12))
@settings(max_examples=200, deadline=None)
def test_is_prime_and_factorint(n):
    assert is_prime(n) == sympy.isprime(n)
    if n >= 1:
        assert factorint(n) == {int(p): e for p, e in sympy.factorint(n).items()}


def test_factorint_large():
    n = (2**61 - 1) * (10**12 + 39) * 3**4
    assert factorint(n) == {3: 4, 2**61 - 1: 1, 10**12 + 39: 1}
    assert valuation(n, 3) == 4 and valuation(n, 5) == 0


@given(st.integers(-500, 500), st.integers(1, 500))
@settings(max_examples=200, deadline=None)
def test_kronecker(a, n):
    assert kronecker(a, n) == kronecker_symbol(a, n)


@given(st.sampled_from([3, 5, 13, 17, 41, 97, 113, 65537, 10**9 + 7]), st.integers(0, 10**9))
@settings(max_examples=100, deadline=None)
def test_sqrt_mod(p, a):
    r = sqrt_mod(a, p)
    if r is None:
        assert pow(a % p, (p - 1) // 2, p) == p - 1
    else:
        assert r * r % p == a % p


def test_fundamental_discriminants():
    fund = [d for d in range(2, 60) if is_fundamental_discriminant(d)]
    assert fund == [5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44, 53, 56, 57]


matrices = st.lists(st.lists(st.integers(-30, 30), min_size=3, max_size=3), min_size=1, max_size=5)


def _in_span(h, v):
    v = list(v)
    for row in h:
        c = next(i for i, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_hnf_properties(rows):
    h = lattice.hnf(rows)
    assert len(h) == sympy.Matrix(rows).rank()
    pivots = []
    for r in h:
        c = next(i for i, x in enumerate(r) if x)
        assert r[c] > 0
        pivots.append(c)
    assert pivots == sorted(set(pivots))
    for i, r in enumerate(h):
        for j in range(i):
            assert 0 <= h[j][pivots[i]] < r[pivots[i]]
    # same lattice: every input row is in the span, and h rows are combinations of input
    assert all(_in_span(h, r) for r in rows)
    assert lattice.hnf(h) == h
    assert lattice.hnf(rows + h) == h


def test_det_inverse():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert lattice.det(m) == sympy.Matrix(m).det()
    inv = lattice.inverse(m)
    assert lattice.matmul(m, inv) == [[int(i == j) for j in range(3)] for i in range(3)]


def test_solve_lattice_preimage():
    w = [[1, 2], [3, 4], [5, 6]]
    basis = lattice.solve_lattice_preimage(w, 7)
    assert len(basis) == 3
    assert abs(lattice.det(basis)) == 49
    for b in basis:
        assert all(x % 7 == 0 for x in lattice.vecmat(b, w))


def test_left_kernel_mod_p():
    m = [[1, 2], [2, 4], [0, 1]]
    ker = lattice.left_kernel_mod_p(m, 5)
    assert len(ker) == 1
    assert all(x % 5 == 0 for x in lattice.vecmat(ker[0], m))
    assert lattice.rank_mod_p(m, 5) == 2
    with pytest.raises(ZeroDivisionError):
        lattice.inverse([[1, 2], [2, 4]])
