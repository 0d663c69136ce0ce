"""Local data at a prime p: Serre invariant and the GL_n orbital integral.

With ``vol(GL_n(Z_p)) = 1`` and unit volume on the maximal compact subgroup
of the centralizer torus, the orbital integral of ``1_{GL_n(Z_p)}`` at
``gamma`` is a sum over homothety classes of ``Z_p[gamma]``-stable lattices
``L`` of ``[O_K^x : End(L)^x]``.  Normalizing each class by ``O_K L = O_K``
turns that weighted sum into a plain count: the normalized representatives
of one class form a single ``O_K^x``-orbit of exactly that size.  Every such
``L`` contains the conductor ``f`` of ``Z_p[gamma]``, so the count is a finite
enumeration of gamma-stable subgroups of ``M = O_K / f``.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import lattice
from .errors import InfeasibleError, InvalidInputError, OracleInconsistencyError
from .intmath import factorint, kronecker, valuation
from .numberfield import FieldInvariants, NumberField, Order, SplittingType
from .poly import IntPolynomial

ORACLE_GUARD = 10**6  # bound on |M| * p^n, the BFS work scale


class OrbitalSource(str, enum.Enum):
    TRIVIAL = "trivial-serre-zero"
    LATTICE_ORACLE = "lattice-oracle"
    USER_SUPPLIED = "user-supplied"


@dataclass(frozen=True)
class LocalGammaData:
    p: int
    serre: int
    splitting: SplittingType
    orbital: int
    orbital_source: OrbitalSource

    def __post_init__(self):
        if self.orbital < 1:
            raise InvalidInputError(f"orbital integral must be >= 1, got {self.orbital}")
        if self.serre == 0 and self.orbital != 1:
            raise InvalidInputError("Serre invariant 0 forces orbital integral 1")

    @property
    def euler_factor(self) -> Fraction:
        return Fraction(self.orbital, self.p**self.serre)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "serre": self.serre,
            "splitting": [list(ef) for ef in self.splitting.primes_above],
            "orbital": self.orbital,
            "source": self.orbital_source.value,
        }


def serre_invariant(invariants: FieldInvariants, p: int) -> int:
    """``S_p = v_p([O_K : Z[gamma]])``."""
    return valuation(invariants.index, p)


@dataclass(frozen=True)
class FiniteQuotientModule:
    """``M = Z^n / F`` in order coordinates, with the actions needed by the oracle."""

    p: int
    conductor: tuple[tuple[int, ...], ...]  # HNF rows of F
    gamma_action: tuple[tuple[int, ...], ...]  # v -> v @ G is multiplication by gamma
    order_actions: tuple[tuple[tuple[int, ...], ...], ...]  # one matrix per basis element

    @property
    def order(self) -> int:
        size = 1
        for i, row in enumerate(self.conductor):
            size *= row[i]
        return size

    @property
    def exponents(self) -> list[int]:
        return [valuation(row[i], self.p) for i, row in enumerate(self.conductor)]


def _p_conductor(order: Order, p: int, s: int) -> list[list[int]]:
    """p-part of the conductor of ``Z[gamma]`` in ``order``, as a lattice in order coordinates."""
    n = order.n
    mod = p**s
    eq_rows = []
    for i in range(n):
        c = order.to_coords([int(i == j) for j in range(n)])
        assert all(x.denominator == 1 for x in c)
        eq_rows.append([int(x) for x in c])
    a_lat = lattice.hnf(eq_rows + [[mod * int(i == j) for j in range(n)] for i in range(n)])
    a_inv = lattice.inverse(a_lat)
    blocks = []
    for j in range(n):
        mj = [order.table[i][j] for i in range(n)]
        blocks.append(lattice.matmul(mj, a_inv))
    den = 1
    for b in blocks:
        for r in b:
            for x in r:
                den = lcm(den, Fraction(x).denominator)
    w = [[int(Fraction(x) * den) for b in blocks for x in b[i]] for i in range(n)]
    return lattice.solve_lattice_preimage(w, den)


def quotient_module(nf: NumberField, p: int, order: Order | None = None) -> FiniteQuotientModule:
    order = order or nf.order
    s = valuation(order.index(), p)
    n = order.n
    cond = _p_conductor(order, p, s) if s else [[int(i == j) for j in range(n)] for i in range(n)]
    gamma = [int(x) for x in order.to_coords([0, 1] + [0] * (n - 2))]
    g_mat = order.mult_matrix(gamma)
    unit = [[int(i == j) for j in range(n)] for i in range(n)]
    actions = tuple(tuple(tuple(r) for r in order.mult_matrix(e)) for e in unit)
    mod = FiniteQuotientModule(p, tuple(tuple(r) for r in cond), tuple(tuple(r) for r in g_mat), actions)
    if mod.order != p ** (2 * s):
        raise ArithmeticError(f"|O/f| = {mod.order}, expected {p}^{2 * s}")
    return mod


def _p_torsion_reps(rows: list[list[int]], p: int) -> Iterable[list[int]]:
    """Representatives of the p-torsion ``{v : p v in L} / L`` of ``Z^n / L``."""
    inv = lattice.inverse(rows)
    den = 1
    for r in inv:
        for x in r:
            den = lcm(den, (p * x).denominator)
    w = [[int(p * x * den) for x in r] for r in inv]
    basis = lattice.solve_lattice_preimage(w, den)
    n = len(rows)
    for coeffs in itertools.product(range(p), repeat=n):
        if any(coeffs):
            yield [sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(n)]


def _gamma_closure(v, g_mat, n):
    out = [list(v)]
    for _ in range(n - 1):
        out.append(lattice.vecmat(out[-1], g_mat))
    return out


def stable_sublattices(mod: FiniteQuotientModule) -> list[tuple[tuple[int, ...], ...]]:
    """All gamma-stable lattices ``F <= L <= Z^n``, as HNF row tuples, in BFS order.

    A stable ``L' > L`` contains ``L + Z[gamma] v`` for some ``v`` of order p
    in ``L'/L``, so adding p-torsion elements reaches every stable lattice.
    """
    n = len(mod.conductor)
    g_mat = [list(r) for r in mod.gamma_action]
    start = tuple(tuple(r) for r in lattice.hnf([list(r) for r in mod.conductor]))
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        rows = [list(r) for r in cur]
        for v in _p_torsion_reps(rows, mod.p):
            nxt = tuple(tuple(r) for r in lattice.hnf(rows + _gamma_closure(v, g_mat, n)))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return order


def _is_normalized(rows, mod: FiniteQuotientModule) -> bool:
    gens = []
    for act in mod.order_actions:
        a = [list(r) for r in act]
        gens.extend(lattice.vecmat(list(r), a) for r in rows)
    h = lattice.hnf(gens)
    d = 1
    for i, r in enumerate(h):
        d *= r[i]
    return len(h) == len(rows) and d == 1


def lattice_oracle(nf: NumberField, p: int, order: Order | None = None) -> int:
    """Count gamma-stable ``L`` with ``f <= L <= O_K`` and ``O_K L = O_K``.

    ``order`` may be any basis of the maximal order (used to check basis
    independence); it defaults to the HNF basis held by ``nf``.
    """
    order = order or nf.order
    s = valuation(order.index(), p)
    if s == 0:
        return 1
    size = p ** (2 * s)
    if size * p**order.n > ORACLE_GUARD:
        raise InfeasibleError(
            f"quotient of order {p}^{2 * s} is too large to enumerate; supply the orbital integral in config"
        )
    mod = quotient_module(nf, p, order)
    return sum(1 for L in stable_sublattices(mod) if _is_normalized(L, mod))


def orbital_integral(nf: NumberField, p: int, overrides: dict | None = None) -> LocalGammaData:
    """Dispatch: Serre invariant 0 gives 1, then config override, then the lattice oracle."""
    s = valuation(nf.index, p)
    split = nf.splitting_type(p)
    if s == 0:
        return LocalGammaData(p, 0, split, 1, OrbitalSource.TRIVIAL)
    overrides = overrides or {}
    if str(p) in overrides or p in overrides:
        val = int(overrides.get(str(p), overrides.get(p)))
        return LocalGammaData(p, s, split, val, OrbitalSource.USER_SUPPLIED)
    return LocalGammaData(p, s, split, lattice_oracle(nf, p), OrbitalSource.LATTICE_ORACLE)


def local_data(nf: NumberField, overrides: dict | None = None) -> list[LocalGammaData]:
    """Local data at every prime dividing the index; all other primes contribute 1."""
    out = []
    for p in sorted(nf.disc_factors):
        if nf.index % p == 0:
            out.append(orbital_integral(nf, p, overrides))
    return out


def euler_product(locals_: Iterable[LocalGammaData]) -> Fraction:
    out = Fraction(1)
    for loc in locals_:
        out *= loc.euler_factor
    return out


# --- q-polynomial fitting ---------------------------------------------------


def _lagrange(points: list[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (low first) of the interpolating polynomial."""
    coeffs = [Fraction(0)] * len(points)
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, b in enumerate(basis):
            coeffs[k] += yi * b / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def fit_q_polynomial(samples: Sequence[tuple[int, int]], serre: int) -> list[int]:
    """Fit orbital values across primes with fixed combinatorial data.

    Requires at least ``serre + 2`` distinct primes so the degree is checked,
    not assumed.  Raises :class:`OracleInconsistencyError` unless the
    interpolant has integer coefficients, degree ``serre`` and leading
    coefficient 1.
    """
    pts = sorted({(int(p), int(v)) for p, v in samples})
    if len({p for p, _ in pts}) != len(pts):
        raise InvalidInputError("conflicting values for the same prime")
    if len(pts) < serre + 2:
        raise InvalidInputError(f"need at least {serre + 2} distinct primes, got {len(pts)}")
    coeffs = _lagrange(pts)
    if any(c.denominator != 1 for c in coeffs):
        raise OracleInconsistencyError(f"non-integral fit {coeffs}")
    if len(coeffs) - 1 != serre:
        raise OracleInconsistencyError(f"fit has degree {len(coeffs) - 1}, expected {serre}")
    if coeffs[-1] != 1:
        raise OracleInconsistencyError(f"fit has leading coefficient {coeffs[-1]}, expected 1")
    return [int(c) for c in coeffs]


def constructed_quadratic(p: int, kind: str, serre: int = 1) -> IntPolynomial:
    """A quadratic with Serre invariant ``serre`` at ``p`` and prescribed splitting of ``p``.

    Takes ``gamma = p^S w`` where ``Z[w]`` is the maximal order of ``Q(sqrt m)``:
    ``w = (1 + sqrt m)/2`` for squarefree ``m = 1 mod 4``, or ``w = sqrt m``
    for ``m = 2, 3 mod 4`` (needed when ``p = 2`` ramifies).  Then
    ``[Z[w] : Z[gamma]] = p^S``.
    """
    want = {"split": 1, "inert": -1, "ramified": 0}[kind]
    q = p**serre
    m = 2
    while True:
        if m > 1 and all(e == 1 for e in factorint(m).values()) and kronecker(m, p) == want:
            if m % 4 == 1:
                return IntPolynomial((q * q * (1 - m) // 4, -q, 1))
            if p == 2 and want == 0:
                return IntPolynomial((-q * q * m, 0, 1))
        m += 1
