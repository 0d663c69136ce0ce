"""Leading-order prediction for the matrix census over Q.

``N(T) ~ C_T * E`` where ``E`` is the finite Euler product of normalized
local orbital integrals and

    C_T = (h R / sqrt|D_K|) * prod_{i=2..n} zeta(i)^-1
          * 2^(n-1) w_m pi^(n(n+1)/4) / prod_{i=1..n} Gamma(i/2) * T^m,

with ``m = n(n-1)/2`` and ``w_m`` the volume of the unit ball in R^m.  The
unramified-Galois branch replaces ``E`` by ``E + n - 1``; over Q it cannot
occur and is only evaluated on explicit request.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import InvalidInputError
from .numberfield import FieldInvariants
from .orbital import LocalGammaData, euler_product

CASE2_OVER_Q_MESSAGE = (
    "branch case2 is impossible over Q: when k = Q only case (1) occurs, since every "
    "nontrivial extension of Q ramifies; set formula_evaluation_mode to evaluate it anyway"
)


class Branch(str, enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k with B_1 = -1/2 (Akiyama-Tanigawa)."""
    a = [Fraction(0)] * (k + 1)
    for m in range(k + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    b = a[0]
    return -b if k == 1 else b


def zeta(s: int) -> float:
    """Riemann zeta at an integer ``s >= 2``.

    Even arguments use the Bernoulli closed form; odd ones use Euler-Maclaurin
    with 20 explicit terms and 12 correction terms (error far below 1e-15).
    """
    if s < 2:
        raise InvalidInputError("zeta is needed only at integers >= 2")
    if s % 2 == 0:
        b = bernoulli(s)
        return float(abs(b) * Fraction((2**s) , 2 * math.factorial(s))) * math.pi**s
    n = 20
    total = math.fsum(k ** (-s) for k in range(1, n))
    total += n ** (1 - s) / (s - 1) + 0.5 * n ** (-s)
    rising = float(s)
    for j in range(1, 13):
        term = float(bernoulli(2 * j)) / math.factorial(2 * j) * rising * n ** (-s - 2 * j + 1)
        total += term
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return total


def unit_ball_volume(m: int) -> float:
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


@dataclass(frozen=True)
class ArchimedeanConstants:
    n: int
    w_m: float
    gamma_product: float
    zeta_values: tuple[float, ...]  # zeta(2), ..., zeta(n)
    orthogonal_volume: float

    @property
    def m(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def block(self) -> float:
        """``prod zeta(i)^-1 * 2^(n-1) w_m pi^(n(n+1)/4) / prod Gamma(i/2)``."""
        inv_zeta = math.prod(1.0 / z for z in self.zeta_values)
        return (
            inv_zeta
            * 2 ** (self.n - 1)
            * self.w_m
            * math.pi ** (self.n * (self.n + 1) / 4)
            / self.gamma_product
        )


def archimedean_constants(n: int) -> ArchimedeanConstants:
    if n < 2:
        raise InvalidInputError("need n >= 2")
    m = n * (n - 1) // 2
    gp = math.prod(math.gamma(i / 2) for i in range(1, n + 1))
    return ArchimedeanConstants(
        n=n,
        w_m=unit_ball_volume(m),
        gamma_product=gp,
        zeta_values=tuple(zeta(i) for i in range(2, n + 1)),
        orthogonal_volume=2**n * math.pi ** (n * (n + 1) / 4) / gp,
    )


def c_t_coefficient(n: int, invariants: FieldInvariants | float) -> float:
    """Coefficient of ``T^(n(n-1)/2)`` in ``C_T`` for base field Q."""
    combo = invariants if isinstance(invariants, (int, float)) else invariants.residue_combination
    if combo is None:
        raise InvalidInputError("residue combination h_K R_K / sqrt|D_K| is missing")
    if combo <= 0:
        raise InvalidInputError("residue combination must be positive")
    return float(combo) * archimedean_constants(n).block


def completed_zeta(s: float) -> float:
    """``Lambda(s) = pi^-s Gamma(s) zeta(2s)`` at half-integers ``s``."""
    two_s = round(2 * s)
    return math.pi ** (-s) * math.gamma(s) * zeta(two_s)


def ems_constant(n: int, h: float, R: float, disc: float) -> float:
    """The Eskin-Mozes-Shah coefficient ``2^(n-1) h R w_m / (sqrt D prod Lambda(k/2))``."""
    m = n * (n - 1) // 2
    denom = math.sqrt(disc) * math.prod(completed_zeta(k / 2) for k in range(2, n + 1))
    return 2 ** (n - 1) * h * R * unit_ball_volume(m) / denom


@dataclass(frozen=True)
class Prediction:
    n: int
    branch: Branch
    leading: float  # coefficient of T^exponent, Euler product included
    c_t: float  # coefficient of T^exponent in C_T alone
    euler_product: Fraction
    invariants: FieldInvariants
    locals: tuple[LocalGammaData, ...]

    @property
    def exponent(self) -> int:
        return self.n * (self.n - 1) // 2

    def at(self, T: float) -> float:
        return self.leading * float(T) ** self.exponent

    def c_t_at(self, T: float) -> float:
        return self.c_t * float(T) ** self.exponent


def prediction(
    n: int,
    invariants: FieldInvariants,
    locals_: Sequence[LocalGammaData],
    branch: Branch | str = Branch.CASE1,
    *,
    formula_evaluation_mode: bool = False,
) -> Prediction:
    branch = Branch(branch)
    if branch is Branch.CASE2 and not formula_evaluation_mode:
        raise InvalidInputError(CASE2_OVER_Q_MESSAGE)
    e = euler_product(locals_)
    factor = e + (n - 1) if branch is Branch.CASE2 else e
    c_t = c_t_coefficient(n, invariants)
    return Prediction(
        n=n,
        branch=branch,
        leading=c_t * float(factor),
        c_t=c_t,
        euler_product=e,
        invariants=invariants,
        locals=tuple(locals_),
    )


def predict(
    n: int,
    invariants: FieldInvariants,
    locals_: Sequence[LocalGammaData],
    branch: Branch | str,
    T: float,
    *,
    formula_evaluation_mode: bool = False,
) -> float:
    return prediction(n, invariants, locals_, branch, formula_evaluation_mode=formula_evaluation_mode).at(T)
