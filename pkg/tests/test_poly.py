import json

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy import GF, Poly

from charpolycount.errors import InvalidInputError, NotCoprimeError, NotSquarefreeError
from charpolycount.poly import (
    IntPolynomial,
    count_real_roots,
    discriminant,
    factor_degrees_mod_p,
    factor_mod_p,
    from_roots,
    hensel_lift,
    is_irreducible_over_Q,
    is_totally_real,
    multifactor_lift,
    pmod,
    pmul,
    resultant,
)
from oracles import X, sym_discriminant, sym_poly

monic = st.lists(st.integers(-20, 20), min_size=2, max_size=6).map(lambda c: IntPolynomial(tuple(c) + (1,)))
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13, 101])


def test_examples():
    assert discriminant(IntPolynomial((1, -3, 1))) == 5
    assert discriminant(IntPolynomial((1, -11, 1))) == 117
    assert discriminant(IntPolynomial((1, -2, -1, 1))) == 49
    assert discriminant(IntPolynomial((1, 0, 0, 0, 1))) == 256
    assert discriminant(IntPolynomial((5, 1))) == 1
    with pytest.raises(InvalidInputError):
        discriminant(IntPolynomial((1,)))


def test_validation():
    with pytest.raises(InvalidInputError):
        IntPolynomial((1, 2))  # not monic
    with pytest.raises(InvalidInputError):
        IntPolynomial(tuple([0] * 9) + (1,))  # degree 9
    with pytest.raises(InvalidInputError):
        IntPolynomial.from_json('["1", "x", "1"]')
    with pytest.raises(InvalidInputError):
        IntPolynomial.from_json("[]")


def test_json_round_trip():
    f = IntPolynomial((1, -3, 1))
    assert f.to_json() == ["1", "-3", "1"]
    assert IntPolynomial.from_json(json.dumps(f.to_json())) == f
    assert str(f) == "x^2-3x+1"
    big = IntPolynomial((10**30, 0, 1))
    assert IntPolynomial.from_json(big.to_json()) == big


@given(monic)
@settings(max_examples=60, deadline=None)
def test_discriminant_matches_sympy(f):
    assert discriminant(f) == sym_discriminant(f.coeffs)


@given(monic, monic)
@settings(max_examples=40, deadline=None)
def test_resultant_matches_sympy(f, g):
    want = int(sympy.resultant(sym_poly(f.coeffs).as_expr(), sym_poly(g.coeffs).as_expr(), X))
    assert resultant(f.coeffs, g.coeffs) == want


@given(monic)
@settings(max_examples=60, deadline=None)
def test_real_roots_match_sympy(f):
    if discriminant(f) == 0:
        with pytest.raises(NotSquarefreeError) as exc:
            count_real_roots(f)
        assert exc.value.gcd
        return
    assert count_real_roots(f) == len(sympy.real_roots(sym_poly(f.coeffs)))


def test_real_root_examples():
    assert count_real_roots(IntPolynomial((1, -3, 1))) == 2
    assert count_real_roots(IntPolynomial((1, 0, 1))) == 0
    assert count_real_roots(IntPolynomial((1, -2, -1, 1))) == 3
    assert is_totally_real(IntPolynomial((1, -2, -1, 1)))
    assert not is_totally_real(IntPolynomial((54, 0, 0, 1)))


@given(monic, small_primes)
@settings(max_examples=80, deadline=None)
def test_factor_mod_p_matches_sympy(f, p):
    fac = factor_mod_p(f, p)
    assert fac.expand() == pmod(list(f.coeffs), p)
    sym = Poly(list(reversed(f.coeffs)), X, domain=GF(p)).factor_list()[1]
    want = sorted((g.degree(), m) for g, m in sym)
    assert sorted(fac.degrees) == want


def test_factor_examples():
    assert factor_mod_p(IntPolynomial((1, -3, 1)), 2).factors == (((1, 1, 1), 1),)
    assert factor_mod_p(IntPolynomial((1, -3, 1)), 5).factors == (((1, 1), 2),)
    assert factor_mod_p(IntPolynomial((1, -11, 1)), 13).factors == (((1, 1), 2),)
    with pytest.raises(InvalidInputError):
        factor_mod_p(IntPolynomial((1, -3, 1)), 4)


def test_factor_is_seed_independent():
    f = IntPolynomial((1, 0, 0, 0, 0, 0, 0, 0, 1))
    results = {factor_mod_p(f, 17, seed=s).factors for s in range(5)}
    assert len(results) == 1


@given(monic, st.sampled_from([3, 5, 7, 11, 13]))
@settings(max_examples=40, deadline=None)
def test_factor_degrees_fast_path(f, p):
    if factor_mod_p(f, p).has_repeated_factor():
        return
    assert factor_degrees_mod_p(f, p) == sorted(d for d, _ in factor_mod_p(f, p).degrees)


@given(monic)
@settings(max_examples=60, deadline=None)
def test_irreducibility_matches_sympy(f):
    assert is_irreducible_over_Q(f) == sym_poly(f.coeffs).is_irreducible


def test_irreducibility_hard_cases():
    # x^4 + 1 is reducible modulo every prime
    assert is_irreducible_over_Q(IntPolynomial((1, 0, 0, 0, 1)))
    assert not is_irreducible_over_Q(from_roots([1, 2, 3]))
    prod = pmul([1, 0, 1], [2, 0, 0, 1], 10**9)  # (x^2+1)(x^3+2)
    assert not is_irreducible_over_Q(IntPolynomial(tuple(prod)))
    assert not is_irreducible_over_Q(IntPolynomial((4, 0, 0, 0, 1)))  # Sophie Germain
    assert is_irreducible_over_Q(IntPolynomial((8, 0, 0, 0, 0, 0, 0, 0, 1)))


def test_hensel_lift():
    f = IntPolynomial((-2, 0, 1))  # x^2 - 2 = (x - 3)(x + 3) mod 7
    G, H = hensel_lift(f, [4, 1], [3, 1], 7, 6)
    m = 7**6
    assert pmul(G, H, m) == pmod(list(f.coeffs), m)
    assert pmod(G, 7) == [4, 1] and pmod(H, 7) == [3, 1]
    with pytest.raises(NotCoprimeError):
        hensel_lift(IntPolynomial((1, 2, 1)), [1, 1], [1, 1], 7, 3)
    with pytest.raises(InvalidInputError):
        hensel_lift(f, [1, 1], [3, 1], 7, 3)


def test_multifactor_lift():
    f = IntPolynomial((-6, 11, -6, 1))  # (x-1)(x-2)(x-3)
    facs = multifactor_lift(f, [[-1 % 5, 1], [-2 % 5, 1], [-3 % 5, 1]], 5, 4)
    m = 5**4
    prod = [1]
    for g in facs:
        prod = pmul(prod, g, m)
    assert prod == pmod(list(f.coeffs), m)


def test_shift_and_eval():
    f = IntPolynomial((1, -3, 1))
    g = f.shift(2)
    assert all(g(x) == f(x + 2) for x in range(-5, 5))
    assert f.derivative() == [-3, 2]
