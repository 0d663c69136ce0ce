"""The number field ``K = Q[x]/(chi)``: maximal order, splitting, invariants.

The maximal order is reached from ``Z[gamma]`` by Round-2 p-maximalization
(p-radical via the Frobenius-power kernel, then its ring of multipliers) at
each prime whose square divides ``disc(chi)``.  Class number and regulator
are exact only for real quadratic fields; otherwise the combination
``h R / sqrt|disc K|`` comes from a truncated Euler product of
``zeta_K / zeta`` at ``s = 1`` or from user configuration.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import lattice
from ._euler import residue_degree_counts
from .errors import InvalidInputError, ReducibleError
from .intmath import factorint, is_fundamental_discriminant, kronecker, prime_sieve
from .poly import (
    DEFAULT_SEED,
    IntPolynomial,
    count_real_roots,
    discriminant,
    factor_mod_p,
    is_irreducible_over_Q,
    pmul,
)


class ResidueSource(str, enum.Enum):
    EXACT_QUADRATIC = "exact-quadratic"
    EULER_ESTIMATE = "euler-estimate"
    USER_SUPPLIED = "user-supplied"


@dataclass(frozen=True)
class OrderBasis:
    """Integral basis ``rows / denominator`` in the power basis of ``gamma``."""

    degree: int
    numerators: tuple[tuple[int, ...], ...]
    denominator: int

    @property
    def basis(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.denominator) for x in r] for r in self.numerators]


@dataclass(frozen=True)
class SplittingType:
    p: int
    primes_above: tuple[tuple[int, int], ...]  # (e, f) pairs, sorted

    @property
    def degree(self) -> int:
        return sum(e * f for e, f in self.primes_above)

    @property
    def kind(self) -> str:
        """``split``, ``inert``, ``ramified`` or ``mixed``."""
        pa = self.primes_above
        if any(e > 1 for e, _ in pa):
            return "ramified"
        if len(pa) == 1:
            return "inert"
        if all(f == 1 for _, f in pa):
            return "split"
        return "mixed"


@dataclass(frozen=True)
class FieldInvariants:
    disc_K: int
    index: int
    signature: tuple[int, int]
    residue_combination: float | None = None
    residue_source: ResidueSource | None = None
    h_K: int | None = None
    R_K: float | None = None
    residue_spread: float | None = None

    def to_json(self) -> dict:
        return {
            "disc_K": str(self.disc_K),
            "index": str(self.index),
            "signature": list(self.signature),
            "residue_combination": self.residue_combination,
            "residue_source": self.residue_source.value if self.residue_source else None,
            "residue_spread": self.residue_spread,
            "h_K": None if self.h_K is None else str(self.h_K),
            "R_K": self.R_K,
        }


# --- order arithmetic -------------------------------------------------------


def _power_mul(u, v, f: IntPolynomial):
    """Product of two power-basis coordinate vectors modulo the monic ``f``."""
    n = f.degree
    prod = [0] * (2 * n - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                prod[i + j] += a * b
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n):
                prod[k - n + j] -= c * f.coeffs[j]
            prod[k] = 0
    return prod[:n]


class Order:
    """A full-rank order with structure constants in its own basis."""

    def __init__(self, f: IntPolynomial, numerators, denominator: int, *, normalize: bool = True):
        self.f = f
        self.n = f.degree
        num = lattice.hnf([list(r) for r in numerators]) if normalize else [list(r) for r in numerators]
        g = denominator
        for r in num:
            for x in r:
                g = math.gcd(g, x)
        self.numerators = [[x // g for x in r] for r in num]
        self.denominator = denominator // g
        self._inv = lattice.inverse(self.numerators)
        self.table = self._structure_constants()

    @classmethod
    def equation_order(cls, f: IntPolynomial) -> "Order":
        n = f.degree
        return cls(f, [[int(i == j) for j in range(n)] for i in range(n)], 1)

    def as_basis(self) -> OrderBasis:
        return OrderBasis(self.n, tuple(tuple(r) for r in self.numerators), self.denominator)

    def to_coords(self, power_vec) -> list[Fraction]:
        """Coordinates in this order's basis of a power-basis vector."""
        d = self.denominator
        return lattice.vecmat([Fraction(x) * d for x in power_vec], self._inv)

    def to_power(self, coords) -> list[Fraction]:
        d = self.denominator
        return [x / d for x in lattice.vecmat([Fraction(c) for c in coords], self.numerators)]

    def _structure_constants(self):
        n, d = self.n, self.denominator
        table = []
        for i in range(n):
            row = []
            for j in range(n):
                prod = _power_mul(self.numerators[i], self.numerators[j], self.f)
                c = self.to_coords([Fraction(x, d * d) for x in prod])
                if any(x.denominator != 1 for x in c):
                    raise ArithmeticError("basis does not span a ring")
                row.append([int(x) for x in c])
            table.append(row)
        return table

    def mul(self, a, b, m: int | None = None):
        """Product of two elements given in order coordinates (optionally mod m)."""
        n = self.n
        out = [0] * n
        for i in range(n):
            if a[i]:
                for j in range(n):
                    if b[j]:
                        c = a[i] * b[j]
                        t = self.table[i][j]
                        for k in range(n):
                            out[k] += c * t[k]
        if m is not None:
            out = [x % m for x in out]
        return out

    def pow(self, a, e: int, m: int):
        result = self.to_coords_one(m)
        base = [x % m for x in a]
        while e:
            if e & 1:
                result = self.mul(result, base, m)
            e >>= 1
            if e:
                base = self.mul(base, base, m)
        return result

    def to_coords_one(self, m: int | None = None):
        one = self.to_coords([1] + [0] * (self.n - 1))
        out = [int(x) for x in one]
        return [x % m for x in out] if m else out

    def mult_matrix(self, a, m: int | None = None):
        """Row j is the coordinate vector of ``a * omega_j``."""
        n = self.n
        unit = [[int(i == j) for j in range(n)] for i in range(n)]
        return [self.mul(a, unit[j], m) for j in range(n)]

    def index(self) -> int:
        """``[O : Z[gamma]]``."""
        det = lattice.det(self.numerators)
        val = Fraction(self.denominator**self.n) / det
        assert val.denominator == 1 and val > 0
        return int(val)

    def is_closed_under_multiplication(self) -> bool:
        try:
            self._structure_constants()
        except ArithmeticError:
            return False
        return True


def _frobenius_power(order: Order, p: int) -> int:
    q = p
    while q < order.n:
        q *= p
    return q


def p_radical(order: Order, p: int) -> list[list[int]]:
    """HNF basis (order coordinates) of the p-radical of ``order``."""
    n = order.n
    q = _frobenius_power(order, p)
    frob = []
    for i in range(n):
        e = [int(i == j) for j in range(n)]
        frob.append(order.pow(e, q, p))
    ker = lattice.left_kernel_mod_p(frob, p)
    gens = [[p * int(i == j) for j in range(n)] for i in range(n)] + ker
    return lattice.hnf(gens)


def p_maximalize(order: Order, p: int) -> Order:
    """Round-2 enlargement until ``order`` is p-maximal."""
    n = order.n
    while True:
        rad = p_radical(order, p)
        rad_inv = lattice.inverse(rad)
        rows = []
        for i in range(n):
            row = []
            for iota in rad:
                prod = order.mul([int(i == j) for j in range(n)], iota)
                c = lattice.vecmat([Fraction(x) for x in prod], rad_inv)
                assert all(x.denominator == 1 for x in c)
                row.extend(int(x) % p for x in c)
            rows.append(row)
        ker = lattice.left_kernel_mod_p(rows, p)
        if not ker:
            return order
        gens = [[p * int(i == j) for j in range(n)] for i in range(n)] + ker
        u = lattice.hnf(gens)
        numer = lattice.matmul(u, order.numerators)
        order = Order(order.f, numer, order.denominator * p)


# --- the field --------------------------------------------------------------


class NumberField:
    """Maximal order and local data of ``Q[x]/(chi)`` for an irreducible ``chi``."""

    def __init__(self, f: IntPolynomial, *, seed: int = DEFAULT_SEED, check_irreducible: bool = True):
        if f.degree < 1:
            raise InvalidInputError("need degree >= 1")
        if check_irreducible and not is_irreducible_over_Q(f):
            raise ReducibleError(f"{f} is reducible over Q")
        self.f = f
        self.n = f.degree
        self.seed = seed
        self.disc_poly = discriminant(f)
        self.disc_factors = factorint(self.disc_poly)
        order = Order.equation_order(f)
        for p, e in self.disc_factors.items():
            if e >= 2:
                order = p_maximalize(order, p)
        self.order = order
        self.index = order.index()
        disc_k, rem = divmod(self.disc_poly, self.index**2)
        assert rem == 0
        self.disc_K = disc_k
        r1 = count_real_roots(f)
        self.signature = (r1, (self.n - r1) // 2)
        self._split_cache: dict[int, SplittingType] = {}

    @property
    def is_totally_real(self) -> bool:
        return self.signature[0] == self.n

    def invariants(self) -> FieldInvariants:
        return FieldInvariants(self.disc_K, self.index, self.signature)

    def splitting_type(self, p: int) -> SplittingType:
        if p not in self._split_cache:
            self._split_cache[p] = splitting_type(self.f, self.order, p, seed=self.seed)
        return self._split_cache[p]


def maximal_order(f: IntPolynomial) -> tuple[OrderBasis, FieldInvariants]:
    nf = NumberField(f)
    return nf.order.as_basis(), nf.invariants()


# --- splitting of primes ----------------------------------------------------


def _rref_mod_p(rows, p):
    a = [[x % p for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _matpow_poly(g, mat, p):
    """Evaluate the polynomial ``g`` (low first) at a square matrix mod p."""
    k = len(mat)
    result = [[0] * k for _ in range(k)]
    for c in reversed(g):
        result = [[x % p for x in r] for r in lattice.matmul(result, mat)]
        for i in range(k):
            result[i][i] = (result[i][i] + c) % p
    return result


def _min_poly_mod_p(mat, p):
    k = len(mat)
    powers = [[[int(i == j) for j in range(k)] for i in range(k)]]
    while True:
        nxt = [[x % p for x in r] for r in lattice.matmul(powers[-1], mat)]
        powers.append(nxt)
        flat = [sum(m, []) for m in powers]
        ker = lattice.left_kernel_mod_p(flat, p)
        if ker:
            v = ker[0]
            inv = pow(v[-1], -1, p)
            return [x * inv % p for x in v]


def _local_components(order: Order, p: int, rng: random.Random) -> list[tuple[int, int]]:
    n = order.n
    rad = p_radical(order, p)
    j_rows, _ = _rref_mod_p(rad, p)
    unit = [[int(i == j) for j in range(n)] for i in range(n)]

    def split(space):
        basis, pivots = _rref_mod_p(space, p)
        dim = len(basis)
        inter = dim + len(j_rows) - len(_rref_mod_p(basis + j_rows, p)[0])
        residue_dim = dim - inter
        for _ in range(200):
            alpha = [0] * n
            for b in basis:
                c = rng.randrange(p)
                alpha = [(x + c * y) % p for x, y in zip(alpha, b)]
            mat = []
            for b in basis:
                img = order.mul(alpha, b, p)
                mat.append([img[c] for c in pivots])
            mu = _min_poly_mod_p(mat, p)
            fac = factor_mod_p(mu, p, seed=rng.randrange(1 << 30))
            if len(fac.factors) > 1:
                out = []
                for g, mult in fac.factors:
                    gk = [1]
                    for _ in range(mult):
                        gk = pmul(gk, list(g), p)
                    nmat = _matpow_poly(gk, mat, p)
                    ker = lattice.left_kernel_mod_p(nmat, p)
                    sub = [[sum(c * b[t] for c, b in zip(v, basis)) % p for t in range(n)] for v in ker]
                    out.extend(split(sub))
                return out
            g, _ = fac.factors[0]
            fdeg = len(g) - 1
            if fdeg == residue_dim:
                return [(dim // fdeg, fdeg)]
        raise RuntimeError(f"failed to split O/{p}O into local components")

    return split(unit)


def splitting_type(f: IntPolynomial, order: Order, p: int, *, seed: int = DEFAULT_SEED) -> SplittingType:
    """Ramification indices and residue degrees of the primes above ``p``."""
    if order.index() % p:
        fac = factor_mod_p(f, p, seed=seed)
        pairs = [(m, len(g) - 1) for g, m in fac.factors]
    else:
        pairs = _local_components(order, p, random.Random(seed * 1_000_003 + p))
    return SplittingType(p, tuple(sorted(pairs)))


# --- real quadratic fields --------------------------------------------------


@dataclass(frozen=True)
class QuadraticUnit:
    """Fundamental unit ``(x + y sqrt(D)) / 2`` of the maximal order."""

    D: int
    x: int
    y: int

    @property
    def norm(self) -> int:
        num = self.x * self.x - self.D * self.y * self.y
        assert num % 4 == 0
        return num // 4

    @property
    def log(self) -> float:
        # log((x + y sqrt D)/2) without overflowing floats
        ratio = float(Fraction(self.y, self.x)) * math.sqrt(self.D)
        return math.log(self.x) + math.log1p(ratio) - math.log(2)


def fundamental_unit(D: int) -> QuadraticUnit:
    """Fundamental unit via the continued fraction of ``(b + sqrt D)/2``, ``b = D mod 2``.

    Complete quotients are kept as ``(P + sqrt D)/Q`` with integer state; the
    product of the complete quotients over one period is the unit.
    """
    if D <= 0 or not is_fundamental_discriminant(D):
        raise InvalidInputError(f"{D} is not a positive fundamental discriminant")
    s = math.isqrt(D)
    P, Q = D % 2, 2
    # first complete quotient after the integer part is reduced and purely periodic
    a = (P + s) // Q
    P, Q = a * Q - P, (D - (a * Q - P) ** 2) // Q
    P0, Q0 = P, Q
    # unit accumulates as (u + v sqrt D)/2
    u, v = Fraction(2), Fraction(0)
    while True:
        u, v = (u * P + v * D) / Q, (u + v * P) / Q
        a = (P + s) // Q
        P = a * Q - P
        Q = (D - P * P) // Q
        if (P, Q) == (P0, Q0):
            break
    if u.denominator != 1 or v.denominator != 1:
        raise ArithmeticError(f"period product for D={D} is not integral")
    return QuadraticUnit(D, int(u), int(v))


def _reduced_forms(D: int) -> list[tuple[int, int, int]]:
    s = math.isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (b * b - D) % 4 or b * b >= D:
            continue
        ac = (b * b - D) // 4
        for a_abs in range(1, (s + b) // 2 + 1):
            if ac % a_abs:
                continue
            for a in (a_abs, -a_abs):
                if _is_reduced(a, b, D):
                    out.append((a, b, ac // a))
    return sorted(out)


def _is_reduced(a: int, b: int, D: int) -> bool:
    # 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b, exact via squares
    if b <= 0 or b * b >= D:
        return False
    lo = 2 * abs(a) + b  # sqrt D < 2|a| + b
    hi = 2 * abs(a) - b  # 2|a| - b < sqrt D
    return lo * lo > D and (hi < 0 or hi * hi < D)


def _rho(form, D):
    a, b, c = form
    s = math.isqrt(D)
    two_c = 2 * abs(c)
    # b' = -b mod 2c with sqrt D - 2|c| < b' < sqrt D
    b2 = -b % two_c
    # shift into the window: largest representative below sqrt D
    while b2 + two_c <= s:
        b2 += two_c
    while b2 > s:
        b2 -= two_c
    a2 = c
    c2 = (b2 * b2 - D) // (4 * a2)
    return (a2, b2, c2)


def narrow_class_number(D: int) -> int:
    """Number of cycles of reduced indefinite forms of discriminant ``D``."""
    forms = set(_reduced_forms(D))
    cycles = 0
    while forms:
        start = min(forms)
        cur = start
        cycles += 1
        while True:
            forms.discard(cur)
            cur = _rho(cur, D)
            if cur == start:
                break
            if cur not in forms:
                raise AssertionError(f"reduction cycle left the reduced set at {cur}")
    return cycles


def quadratic_invariants(D: int) -> tuple[int, float]:
    """``(h_K, R_K)`` of the real quadratic field of fundamental discriminant ``D``."""
    unit = fundamental_unit(D)
    h_plus = narrow_class_number(D)
    h = h_plus if unit.norm == -1 else h_plus // 2
    return h, unit.log


# --- Euler-product residue estimate -----------------------------------------


def _local_log_ratio(f_list, p) -> float:
    """log of [zeta_K local factor]/[zeta local factor] at s = 1."""
    val = math.log1p(-1.0 / p)
    for fdeg in f_list:
        val -= math.log1p(-(float(p) ** -fdeg))
    return val


def _log_partial_products(nf: NumberField, bounds: list[int]) -> list[float]:
    top = max(bounds)
    primes = prime_sieve(top)
    bad = [p for p in nf.disc_factors]
    good = primes[~np.isin(primes, np.array(bad, dtype=np.int64))]
    counts = residue_degree_counts(np.array(nf.f.coeffs, dtype=np.int64), good)
    degs = np.arange(nf.n + 1, dtype=np.float64)
    pf = good.astype(np.float64)
    # sum over factors of log(1 - p^-f), vectorized over primes
    terms = np.log1p(-1.0 / pf)
    for d in range(1, nf.n + 1):
        terms -= counts[:, d] * np.log1p(-(pf ** -degs[d]))
    out = []
    for bound in bounds:
        total = float(terms[good <= bound].sum())
        for p in bad:
            if p <= bound:
                st = nf.splitting_type(p)
                total += _local_log_ratio([fd for _, fd in st.primes_above], p)
        out.append(total)
    return out


def residue_estimate(nf: NumberField, prime_bound: int = 10**6) -> tuple[float, float]:
    """Estimate ``h R / sqrt|disc K|`` for totally real ``K``; returns ``(value, spread)``.

    The Euler product for ``zeta_K/zeta`` at ``s = 1`` converges only
    conditionally, so this is a heuristic: partial products at ``P`` and
    ``P/2`` are combined by a geometric mean and their relative gap is
    returned as the spread.  Exact or user-supplied values are preferable.
    """
    if nf.n == 1:
        return 1.0, 0.0
    if not nf.is_totally_real:
        raise InvalidInputError("residue conversion implemented for totally real fields only")
    lp, lh = _log_partial_products(nf, [prime_bound, prime_bound // 2])
    est = math.exp(0.5 * (lp + lh))
    spread = abs(math.expm1(lp - lh))
    return est / 2 ** (nf.n - 1), spread


def analytic_quadratic_hr(D: int) -> float:
    """``h R`` from the finite sum ``-1/2 sum chi_D(a) log sin(pi a / D)``."""
    total = 0.0
    for a in range(1, D):
        chi = kronecker(D, a)
        if chi:
            total += chi * math.log(math.sin(math.pi * a / D))
    return -0.5 * total


def field_invariants(
    nf: NumberField,
    *,
    prime_bound: int = 10**6,
    override: dict | None = None,
) -> FieldInvariants:
    """Full invariants, preferring user values, then exact quadratic, then the estimate."""
    inv = nf.invariants()
    override = override or {}
    if "disc_K" in override and int(override["disc_K"]) != nf.disc_K:
        raise InvalidInputError(f"config disc_K={override['disc_K']} disagrees with computed {nf.disc_K}")
    if "index" in override and int(override["index"]) != nf.index:
        raise InvalidInputError(f"config index={override['index']} disagrees with computed {nf.index}")
    if "h_K" in override and "R_K" in override:
        h, R = int(override["h_K"]), float(override["R_K"])
        return replace(
            inv,
            h_K=h,
            R_K=R,
            residue_combination=h * R / math.sqrt(abs(nf.disc_K)),
            residue_source=ResidueSource.USER_SUPPLIED,
        )
    if "residue_combination" in override:
        return replace(
            inv,
            residue_combination=float(override["residue_combination"]),
            residue_source=ResidueSource.USER_SUPPLIED,
        )
    if nf.n == 2 and nf.disc_K > 0:
        h, R = quadratic_invariants(nf.disc_K)
        return replace(
            inv,
            h_K=h,
            R_K=R,
            residue_combination=h * R / math.sqrt(nf.disc_K),
            residue_source=ResidueSource.EXACT_QUADRATIC,
        )
    value, spread = residue_estimate(nf, prime_bound)
    return replace(
        inv,
        residue_combination=value,
        residue_source=ResidueSource.EULER_ESTIMATE,
        residue_spread=spread,
    )
