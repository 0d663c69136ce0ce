"""Exact census of integer matrices with a fixed characteristic polynomial.

``N(T)`` counts n x n integer matrices ``x`` with ``det(tI - x) = chi(t)`` and
Frobenius norm ``sqrt(sum x_ij^2) <= T``.  Norm ties are included; the
comparison is done exactly on ``floor(T^2)``.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from fractions import Fraction

import numpy as np

from .._accel import backend_name
from ..errors import InfeasibleError, InvalidInputError
from ..intmath import prime_sieve
from ..poly import IntPolynomial, discriminant
from . import _kernels

N2_MAX_T = 2 * 10**7
GENERIC_MAX_N = 4
NAIVE_GUARD = 10**10
BLOCK = 1 << 15


class Enumerator(str, enum.Enum):
    AUTO = "auto"
    N2 = "n2-divisor"
    GENERIC = "generic-dfs"
    NAIVE = "naive"

    @classmethod
    def parse(cls, name: str) -> "Enumerator":
        aliases = {"n2": cls.N2, "generic": cls.GENERIC}
        return aliases.get(name) or cls(name)


@dataclass(frozen=True)
class CensusResult:
    count: int
    T: str
    enumerator: str
    wall_time: float
    checksum: str
    backend: str = ""
    symmetric: int | None = None

    def to_json(self) -> dict:
        out = asdict(self)
        if out["symmetric"] is None:
            del out["symmetric"]
        return out


def radius_squared(T) -> int:
    """``floor(T^2)`` computed exactly; ``T`` may be an int, float, str or Fraction."""
    t = Fraction(str(T)) if isinstance(T, str) else Fraction(T)
    if t < 0:
        raise InvalidInputError(f"T must be nonnegative, got {T}")
    sq = t * t
    return sq.numerator // sq.denominator


def query_checksum(chi: IntPolynomial, T, enumerator: str) -> str:
    payload = json.dumps({"poly": chi.to_json(), "T": str(T), "enumerator": enumerator}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _target(chi: IntPolynomial) -> np.ndarray:
    if any(abs(c) >= 2**31 for c in chi.coeffs):
        raise InfeasibleError("coefficients too large for the int64 census kernels")
    return np.array(chi.coeffs, dtype=np.int64)


def _split(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi - lo)) if hi > lo else 1
    step = -(-(hi - lo) // parts) if hi > lo else 0
    return [(lo + i * step, min(hi, lo + (i + 1) * step)) for i in range(parts) if lo + i * step < hi] or [(lo, lo)]


def _run(fn, jobs, threads: int):
    if threads <= 1 or len(jobs) <= 1:
        return [fn(*j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda j: fn(*j), jobs))


def _result(count, T, enum_: Enumerator, chi, t0, **extra) -> CensusResult:
    return CensusResult(
        count=int(count),
        T=str(T),
        enumerator=enum_.value,
        wall_time=time.perf_counter() - t0,
        checksum=query_checksum(chi, T, enum_.value),
        backend=backend_name(),
        **extra,
    )


def count_n2(chi: IntPolynomial, T, threads: int = 1) -> CensusResult:
    """Count 2 x 2 solutions by looping over the top-left entry and splitting ``b c = r``."""
    if chi.degree != 2:
        raise InvalidInputError("count_n2 needs a quadratic polynomial")
    d, mt, _ = chi.coeffs
    t = -mt
    disc = discriminant(chi)
    if disc >= 0 and math.isqrt(disc) ** 2 == disc:
        raise InvalidInputError(f"{chi} is reducible over Q")
    if Fraction(str(T)) > N2_MAX_T:
        raise InfeasibleError(f"T above {N2_MAX_T} overflows the int64 kernel")
    _target(chi)
    t0 = time.perf_counter()
    T2 = radius_squared(T)
    # a^2 + (t - a)^2 <= T2  <=>  (2a - t)^2 <= 2 T2 - t^2
    w = 2 * T2 - t * t
    if w < 0:
        return _result(0, T, Enumerator.N2, chi, t0)
    sw = math.isqrt(w)
    a_lo = -((sw - t) // 2)
    a_hi = (sw + t) // 2 + 1
    vmax = max(abs(a * (t - a) - d) for a in (a_lo, a_hi - 1, t // 2, (t + 1) // 2))
    primes = prime_sieve(math.isqrt(vmax) + 2).astype(np.int64)
    roots = _kernels.quadratic_roots(t, d, primes)
    jobs = [(t, d, T2, lo, hi, primes, roots, BLOCK) for lo, hi in _split(a_lo, a_hi, 4 * threads)]
    count = sum(_run(_kernels.count_n2_range, jobs, threads))
    return _result(count, T, Enumerator.N2, chi, t0)


def _diagonals(n: int, t: int, T2: int) -> np.ndarray:
    """Diagonals with the prescribed trace and squared norm at most ``T2``."""
    s = math.isqrt(T2)
    rows = []

    def rec(prefix, used):
        if len(prefix) == n - 1:
            last = t - sum(prefix)
            if used + last * last <= T2:
                rows.append(prefix + [last])
            return
        for v in range(-s, s + 1):
            if used + v * v <= T2:
                rec(prefix + [v], used + v * v)

    rec([], 0)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def count_generic(chi: IntPolynomial, T, threads: int = 1) -> CensusResult:
    """Pruned depth-first count for ``3 <= n <= 4``."""
    n = chi.degree
    if not 3 <= n <= GENERIC_MAX_N:
        raise InvalidInputError(
            f"count_generic handles 3 <= n <= {GENERIC_MAX_N}; use count_n2 for n = 2, n >= 5 has no census"
        )
    target = _target(chi)
    t0 = time.perf_counter()
    T2 = radius_squared(T)
    if T2 > 10**6:
        raise InfeasibleError("generic census limited to T <= 1000")
    diags = _diagonals(n, -chi.coeffs[n - 1], T2)
    if len(diags) == 0:
        return _result(0, T, Enumerator.GENERIC, chi, t0)
    chunks = np.array_split(diags, max(1, min(len(diags), 8 * threads)))
    jobs = [(target, n, T2, np.ascontiguousarray(c)) for c in chunks]
    count = sum(_run(_kernels.count_generic_diagonals, jobs, threads))
    return _result(count, T, Enumerator.GENERIC, chi, t0)


def ball_points_estimate(dim: int, T2: int) -> float:
    """Rough count of integer points in the dim-ball of radius sqrt(T2), padded by half a diagonal."""
    r = math.sqrt(T2) + math.sqrt(dim) / 2
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1) * r**dim


def naive_solutions(chi: IntPolynomial, T, threads: int = 1) -> tuple[np.ndarray, int]:
    """Sorted squared norms of every solution, plus the number of symmetric ones."""
    n = chi.degree
    if n < 2:
        raise InvalidInputError("need degree >= 2")
    target = _target(chi)
    T2 = radius_squared(T)
    if ball_points_estimate(n * n, T2) > NAIVE_GUARD:
        raise InfeasibleError(f"naive enumeration at T={T} exceeds the {NAIVE_GUARD:.0e} point guard")
    s = math.isqrt(T2)
    jobs = [(target, n, T2, lo, hi) for lo, hi in _split(-s, s + 1, 4 * threads)]
    parts = _run(_kernels.naive_norms, jobs, threads)
    norms = np.sort(np.concatenate([np.asarray(p[0], dtype=np.int64) for p in parts]))
    return norms, int(sum(p[1] for p in parts))


def naive_reference(chi: IntPolynomial, T, threads: int = 1) -> CensusResult:
    """Brute-force count over the whole norm ball; a testing oracle."""
    t0 = time.perf_counter()
    norms, nsym = naive_solutions(chi, T, threads)
    return _result(len(norms), T, Enumerator.NAIVE, chi, t0, symmetric=nsym)


def census(chi: IntPolynomial, T, enumerator: Enumerator | str = Enumerator.AUTO, threads: int = 1) -> CensusResult:
    enum_ = Enumerator.parse(enumerator) if isinstance(enumerator, str) else enumerator
    if enum_ is Enumerator.AUTO:
        enum_ = Enumerator.N2 if chi.degree == 2 else Enumerator.GENERIC
    if enum_ is Enumerator.N2:
        return count_n2(chi, T, threads)
    if enum_ is Enumerator.GENERIC:
        return count_generic(chi, T, threads)
    return naive_reference(chi, T, threads)


__all__ = [
    "CensusResult",
    "Enumerator",
    "ball_points_estimate",
    "census",
    "count_generic",
    "count_n2",
    "naive_reference",
    "naive_solutions",
    "query_checksum",
    "radius_squared",
]
