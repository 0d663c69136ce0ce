"""Exact integer polynomials.

Discriminants by subresultant remainder sequences, Sturm counting of real
roots, factorization over ``GF(p)`` and Hensel lifting, and an irreducibility
test over the rationals.  Coefficient sequences are lowest degree first
everywhere, for ``IntPolynomial`` as well as for the plain lists used over
``Z/m``.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInputError, NotCoprimeError, NotSquarefreeError
from .intmath import is_prime

MAX_DEGREE = 8
DEFAULT_SEED = 0

Coeffs = list  # list[int], lowest degree first, no trailing zeros


@dataclass(frozen=True)
class IntPolynomial:
    """Monic polynomial with integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c or c[-1] != 1:
            raise InvalidInputError(f"polynomial must be monic, got coefficients {c}")
        if len(c) - 1 > MAX_DEGREE:
            raise InvalidInputError(f"degree {len(c) - 1} exceeds the supported cap {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> list[int]:
        return [i * c for i, c in enumerate(self.coeffs)][1:]

    def shift(self, c: int) -> "IntPolynomial":
        """The polynomial ``f(x + c)``."""
        out = [0]
        for a in reversed(self.coeffs):
            # out <- out * (x + c) + a
            nxt = [0] * (len(out) + 1)
            for i, b in enumerate(out):
                nxt[i] += b * c
                nxt[i + 1] += b
            nxt[0] += a
            out = nxt
        return IntPolynomial(tuple(out))

    @classmethod
    def from_json(cls, text: str | Sequence) -> "IntPolynomial":
        try:
            data = json.loads(text) if isinstance(text, str) else text
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"polynomial is not valid JSON: {exc}") from None
        if not isinstance(data, list) or not data:
            raise InvalidInputError("polynomial JSON must be a non-empty array")
        try:
            return cls(tuple(int(str(x)) for x in data))
        except ValueError as exc:
            raise InvalidInputError(f"bad coefficient in {data!r}") from exc

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
            else:
                coef = f"{c:+d}"
            terms.append(f"{coef}{mono}" if mono else coef)
        s = "".join(terms) or "0"
        return s[1:] if s.startswith("+") else s


def from_roots(roots: Iterable[int]) -> IntPolynomial:
    c = [1]
    for r in roots:
        c = _zmul(c, [-r, 1])
    return IntPolynomial(tuple(c))


# --- arithmetic over Z -------------------------------------------------------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _content(a) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
    return g


def _prem(a, b):
    """Pseudo-remainder of ``lc(b)^(deg a - deg b + 1) * a`` by ``b``."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    delta = len(a) - 1 - db
    if delta < 0:
        return a
    for _ in range(delta + 1):
        if len(a) - 1 < db:
            a = [lb * x for x in a]
            continue
        lead, shift = a[-1], len(a) - 1 - db
        a = [lb * x for x in a]
        for j, y in enumerate(b):
            a[shift + j] -= lead * y
        _trim(a)
    return a


def resultant(a: Sequence[int], b: Sequence[int]) -> int:
    """Res(a, b) by the subresultant algorithm over Z."""
    a, b = _trim(list(a)), _trim(list(b))
    if not a or not b:
        return 0
    ca, cb = _content(a), _content(b)
    if a[-1] < 0:
        ca = -ca
    if b[-1] < 0:
        cb = -cb
    da, db = len(a) - 1, len(b) - 1
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    t = ca**db * cb**da
    s = 1
    if da < db:
        a, b = b, a
        if da % 2 and db % 2:
            s = -1
    g = h = Fraction(1)
    while True:
        dA, dB = len(a) - 1, len(b) - 1
        if dB == 0:
            break
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        r = _prem(a, b)
        if not r:
            return 0
        a = b
        denom = g * h**delta
        b = [Fraction(x) / denom for x in r]
        assert all(x.denominator == 1 for x in b)
        b = [int(x) for x in b]
        g = Fraction(a[-1])
        h = h ** (1 - delta) * g**delta
        assert h.denominator == 1
    dA = len(a) - 1
    h = h ** (1 - dA) * Fraction(b[-1]) ** dA
    assert h.denominator == 1
    return s * t * int(h)


def discriminant(f: IntPolynomial) -> int:
    """Discriminant of a monic polynomial, ``(-1)^(n(n-1)/2) Res(f, f')``."""
    n = f.degree
    if n < 1:
        raise InvalidInputError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f.coeffs, f.derivative())


# --- exact rational helpers for Sturm sequences ------------------------------


def _qrem(a, b):
    a = [Fraction(x) for x in a]
    db = len(b) - 1
    inv = Fraction(1) / b[-1]
    while a and len(a) - 1 >= db:
        q = a[-1] * inv
        shift = len(a) - 1 - db
        for j, y in enumerate(b):
            a[shift + j] -= q * y
        _trim(a)
    return a


def _qgcd(a, b):
    a, b = [Fraction(x) for x in a], [Fraction(x) for x in b]
    while b:
        a, b = b, _qrem(a, b)
    return _primitive(a)


def _primitive(a):
    """Scale a rational polynomial to a primitive integer one with positive lead."""
    den = 1
    for x in a:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    z = [int(Fraction(x) * den) for x in a]
    c = _content(z)
    if z[-1] < 0:
        c = -c
    return [x // c for x in z]


def _positive_rescale(a):
    """Clear denominators and content by a positive factor (signs preserved)."""
    den = 1
    for x in a:
        d = Fraction(x).denominator
        den = den * d // math.gcd(den, d)
    z = [int(Fraction(x) * den) for x in a]
    c = abs(_content(z))
    return [x // c for x in z]


def squarefree_gcd(f: IntPolynomial) -> list[int]:
    """Primitive gcd(f, f') over Q; ``[1]`` for squarefree ``f``."""
    return _qgcd(list(f.coeffs), f.derivative())


def _sign_changes(signs) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(nz, nz[1:]) if u != v)


def count_real_roots(f: IntPolynomial) -> int:
    """Number of distinct real roots of a squarefree polynomial (Sturm)."""
    if f.degree < 1:
        return 0
    g = squarefree_gcd(f)
    if len(g) > 1:
        raise NotSquarefreeError(f"{f} is not squarefree; gcd(f, f') = {g}", g)
    seq = [list(f.coeffs), f.derivative()]
    while len(seq[-1]) > 1:
        r = _qrem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_positive_rescale([-x for x in r]))
    at_pos = [1 if p[-1] > 0 else -1 for p in seq]
    at_neg = [s * (-1) ** (len(p) - 1) for s, p in zip(at_pos, seq)]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def is_totally_real(f: IntPolynomial) -> bool:
    return count_real_roots(f) == f.degree


# --- polynomials over Z/m ----------------------------------------------------


def pmod(a, m):
    return _trim([x % m for x in a])


def padd(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def psub(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def pmul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return pmod(out, m)


def pdivmod(a, b, m):
    """Division with remainder mod ``m``; ``lc(b)`` must be a unit mod ``m``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = pmod(a, m)
    db = len(b) - 1
    inv = pow(b[-1], -1, m)
    q = [0] * max(len(a) - db, 0)
    while a and len(a) - 1 >= db:
        c = a[-1] * inv % m
        shift = len(a) - 1 - db
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = (a[shift + j] - c * y) % m
        _trim(a)
    return _trim(q), a


def pmonic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def pgcd(a, b, p):
    a, b = pmod(a, p), pmod(b, p)
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    return pmonic(a, p)


def pxgcd(a, b, p):
    """Monic g with s*a + t*b = g mod p."""
    r0, r1 = pmod(a, p), pmod(b, p)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, p), p)
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [x * inv % p for x in r0], pmod([x * inv for x in s0], p), pmod([x * inv for x in t0], p)


def ppowmod(base, e, mod, p):
    result, base = [1], pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = pdivmod(pmul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = pdivmod(pmul(base, base, p), mod, p)[1]
    return result


def _pderiv(a, p):
    return pmod([i * c for i, c in enumerate(a)][1:], p)


def _pth_root(a, p):
    return [a[i] for i in range(0, len(a), p)]


def _squarefree_parts(f, p):
    """Musser's square-free decomposition over GF(p): list of (part, multiplicity)."""
    out = []
    d = _pderiv(f, p)
    if not d:
        for g, m in _squarefree_parts(_pth_root(f, p), p):
            out.append((g, m * p))
        return out
    c = pgcd(f, d, p)
    w = pdivmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = pgcd(w, c, p)
        fac = pdivmod(w, y, p)[0]
        if len(fac) > 1:
            out.append((pmonic(fac, p), i))
        w, c = y, pdivmod(c, y, p)[0]
        i += 1
    if len(c) > 1:
        for g, m in _squarefree_parts(_pth_root(c, p), p):
            out.append((g, m * p))
    return out


def _distinct_degree(f, p):
    out, i = [], 1
    h = [0, 1]
    fstar = f
    while len(fstar) - 1 >= 2 * i:
        h = ppowmod(h, p, fstar, p)
        g = pgcd(fstar, psub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, i))
            fstar = pdivmod(fstar, g, p)[0]
            h = pdivmod(h, fstar, p)[1]
        i += 1
    if len(fstar) > 1:
        out.append((pmonic(fstar, p), len(fstar) - 1))
    return out


def _equal_degree(g, d, p, rng):
    if len(g) - 1 == d:
        return [g]
    n = len(g) - 1
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1)) splits when p = 2
            b, t = pdivmod(a, g, p)[1], pdivmod(a, g, p)[1]
            for _ in range(d - 1):
                t = pdivmod(pmul(t, t, p), g, p)[1]
                b = padd(b, t, p)
        else:
            b = psub(ppowmod(a, (p**d - 1) // 2, g, p), [1], p)
        u = pgcd(g, b, p)
        if 0 < len(u) - 1 < n:
            return _equal_degree(u, d, p, rng) + _equal_degree(pdivmod(g, u, p)[0], d, p, rng)


@dataclass(frozen=True)
class ModPFactorization:
    """Irreducible factorization over GF(p); factors sorted lexicographically."""

    p: int
    factors: tuple[tuple[tuple[int, ...], int], ...]
    seed: int = DEFAULT_SEED

    @property
    def degrees(self) -> list[tuple[int, int]]:
        return [(len(g) - 1, m) for g, m in self.factors]

    def is_irreducible(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1

    def has_repeated_factor(self) -> bool:
        return any(m > 1 for _, m in self.factors)

    def expand(self) -> list[int]:
        out = [1]
        for g, m in self.factors:
            for _ in range(m):
                out = pmul(out, list(g), self.p)
        return out


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidInputError(f"{p!r} is not a prime")


def factor_mod_p(f: IntPolynomial | Sequence[int], p: int, seed: int = DEFAULT_SEED) -> ModPFactorization:
    """Factor a monic polynomial over GF(p).

    Square-free parts are split by distinct degree, then by equal degree with a
    seeded random splitter.  Multiplicities are recomputed by repeated division
    of the input by each distinct irreducible factor.
    """
    _check_prime(p)
    coeffs = list(f.coeffs) if isinstance(f, IntPolynomial) else list(f)
    fp = pmod(coeffs, p)
    if len(fp) <= 1:
        return ModPFactorization(p, (), seed)
    fp = pmonic(fp, p)
    rng = random.Random(seed)
    irreducibles = []
    for part, _ in _squarefree_parts(fp, p):
        for g, d in _distinct_degree(part, p):
            irreducibles.extend(_equal_degree(g, d, p, rng))
    irreducibles = sorted({tuple(g) for g in irreducibles}, key=lambda g: (len(g), g[::-1]))
    factors = []
    rest = fp
    for g in irreducibles:
        m = 0
        while True:
            q, r = pdivmod(rest, list(g), p)
            if r:
                break
            rest, m = q, m + 1
        factors.append((g, m))
    assert rest == [1], "factorization does not reproduce the input"
    return ModPFactorization(p, tuple(factors), seed)


def factor_degrees_mod_p(f: IntPolynomial, p: int) -> list[int]:
    """Residue degrees of a polynomial squarefree mod p, without full splitting."""
    fp = pmonic(pmod(list(f.coeffs), p), p)
    out = []
    for g, d in _distinct_degree(fp, p):
        out.extend([d] * ((len(g) - 1) // d))
    return sorted(out)


# --- Hensel lifting ---------------------------------------------------------


def hensel_lift(f: IntPolynomial | Sequence[int], g, h, p: int, k: int):
    """Lift ``f = g*h mod p`` to ``f = G*H mod p^k`` (quadratic steps).

    ``g`` and ``h`` are monic lists mod ``p``; returns ``(G, H)`` monic mod
    ``p^k`` with ``G = g``, ``H = h`` mod ``p``.
    """
    _check_prime(p)
    coeffs = list(f.coeffs) if isinstance(f, IntPolynomial) else list(f)
    g, h = pmonic(pmod(g, p), p), pmonic(pmod(h, p), p)
    if psub(pmod(coeffs, p), pmul(g, h, p), p):
        raise InvalidInputError("f is not congruent to g*h mod p")
    one, s, t = pxgcd(g, h, p)
    if one != [1]:
        raise NotCoprimeError(f"factors not coprime mod {p}: gcd = {one}")
    target = p**k
    m = p
    while m < target:
        m2 = min(m * m, target)
        e = psub(coeffs, pmul(g, h, m2), m2)
        q, r = pdivmod(pmul(s, e, m2), h, m2)
        g2 = padd(padd(g, pmul(t, e, m2), m2), pmul(q, g, m2), m2)
        h2 = padd(h, r, m2)
        b = psub(padd(pmul(s, g2, m2), pmul(t, h2, m2), m2), [1], m2)
        c, d = pdivmod(pmul(s, b, m2), h2, m2)
        s = psub(s, d, m2)
        t = psub(psub(t, pmul(t, b, m2), m2), pmul(c, g2, m2), m2)
        g, h, m = g2, h2, m2
    return g, h


def multifactor_lift(f: IntPolynomial, factors: list, p: int, k: int) -> list:
    """Lift pairwise coprime monic factors of ``f mod p`` to ``p^k``."""
    coeffs = list(f.coeffs)
    out = []
    mod = p**k
    for i in range(len(factors) - 1):
        rest = [1]
        for g in factors[i + 1 :]:
            rest = pmul(rest, list(g), p)
        G, H = hensel_lift(coeffs, list(factors[i]), rest, p, k)
        out.append(G)
        coeffs = H
    out.append(pmod(coeffs, mod))
    return out


# --- irreducibility over Q --------------------------------------------------


def _symmetric(a, m):
    half = m // 2
    return [x - m if x > half else x for x in a]


def _exact_zdiv(a, b):
    """Quotient of a by monic b over Z, or None if b does not divide a."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return None
    q = [0] * (len(a) - db)
    while a and len(a) - 1 >= db:
        c = a[-1]
        shift = len(a) - 1 - db
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] -= c * y
        _trim(a)
    return None if a else q


def mignotte_bound(f: IntPolynomial) -> int:
    """Bound on coefficients of any monic integer factor of ``f``."""
    norm = math.isqrt(sum(c * c for c in f.coeffs)) + 1
    n = f.degree
    return math.comb(n, n // 2) * norm


def is_irreducible_over_Q(f: IntPolynomial, *, max_primes: int = 25) -> bool:
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    disc = discriminant(f)
    if disc == 0:
        return False
    best = None
    possible = set(range(n + 1))
    tried = 0
    p = 1
    while tried < max_primes:
        p += 1
        if not is_prime(p) or disc % p == 0:
            continue
        tried += 1
        fac = factor_mod_p(f, p)
        if fac.is_irreducible():
            return True
        sums = {0}
        for d, _ in fac.degrees:
            sums |= {s + d for s in sums}
        possible &= sums
        if possible == {0, n}:
            return True
        if best is None or len(fac.factors) < len(best.factors):
            best = fac
    p = best.p
    bound = 2 * mignotte_bound(f) + 1
    k = 1
    while p**k <= bound:
        k += 1
    lifted = multifactor_lift(f, [g for g, _ in best.factors], p, k)
    mod = p**k
    r = len(lifted)
    for size in range(1, r // 2 + 1):
        for subset in itertools.combinations(lifted, size):
            g = [1]
            for h in subset:
                g = pmul(g, h, mod)
            g = _symmetric(g, mod)
            if 0 < len(g) - 1 < n and _exact_zdiv(list(f.coeffs), g) is not None:
                return False
    return True
