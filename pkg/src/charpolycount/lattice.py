"""Small exact linear algebra over Z, Q and GF(p).

Matrices are lists of row lists.  Lattices are spanned by rows.
"""

from __future__ import annotations

from fractions import Fraction


def hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form, zero rows dropped.

    Output is upper triangular in echelon form with positive pivots; entries
    above a pivot lie in ``[0, pivot)``.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    out: list[list[int]] = []
    col = 0
    while a and col < ncols:
        nz = [r for r in a if r[col] != 0]
        rest = [r for r in a if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        a = rest
        col += 1
    # reduce entries above pivots
    for i in range(len(out)):
        pc = next(c for c, x in enumerate(out[i]) if x)
        for j in range(i):
            q = out[j][pc] // out[i][pc]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], out[i])]
    return out


def det(m: list[list]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return d


def inverse(m: list[list]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def vecmat(v, m):
    n = len(m[0])
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(n)]


def left_kernel_mod_p(m: list[list[int]], p: int) -> list[list[int]]:
    """Basis of ``{v : v M = 0 mod p}`` in reduced form."""
    rows = len(m)
    if rows == 0:
        return []
    cols = len(m[0])
    # row-reduce [M | I]
    a = [[x % p for x in m[i]] + [int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return [row[cols:] for row in a[r:]]


def rank_mod_p(m: list[list[int]], p: int) -> int:
    if not m:
        return 0
    return len(m) - len(left_kernel_mod_p(m, p))


def solve_lattice_preimage(w: list[list[int]], modulus: int) -> list[list[int]]:
    """HNF basis of ``{x in Z^n : x W = 0 mod modulus}`` for an ``n x k`` matrix W."""
    n = len(w)
    k = len(w[0]) if w else 0
    rows = [list(w[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    rows += [[modulus * int(i == j) for j in range(k)] + [0] * n for i in range(k)]
    h = hnf(rows)
    sol = [r[k:] for r in h if not any(r[:k])]
    return hnf(sol)
