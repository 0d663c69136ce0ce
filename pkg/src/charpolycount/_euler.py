"""Residue-degree profiles of a fixed polynomial over many primes.

Hot loop of the Euler-product scan.  Each prime gets a distinct-degree
factorization of ``f mod p`` on small fixed-size buffers; ``p`` must stay
below 2**31 so every product fits in int64.
"""

from __future__ import annotations

import numpy as np

from ._accel import kernel


@kernel
def _inv(a, p):
    r = 1
    e = p - 2
    b = a % p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@kernel
def _deg(a, hi):
    d = hi
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


@kernel
def _rem_monic(a, da, f, df, p):
    """Reduce ``a`` (degree ``da``) modulo monic ``f`` in place; return new degree."""
    while da >= df:
        c = a[da]
        if c != 0:
            s = da - df
            for j in range(df + 1):
                a[s + j] = (a[s + j] - c * f[j]) % p
        a[da] = 0
        da = _deg(a, da - 1)
    return da


@kernel
def _mulmod(a, da, b, db, f, df, p, tmp, out):
    for i in range(tmp.shape[0]):
        tmp[i] = 0
    if da < 0 or db < 0:
        for i in range(out.shape[0]):
            out[i] = 0
        return -1
    for i in range(da + 1):
        if a[i] != 0:
            for j in range(db + 1):
                tmp[i + j] = (tmp[i + j] + a[i] * b[j]) % p
    d = _rem_monic(tmp, da + db, f, df, p)
    for i in range(out.shape[0]):
        out[i] = tmp[i] if i < tmp.shape[0] else 0
    return d


@kernel
def _monic_gcd(a, da, b, db, p, out):
    """gcd of a and b into ``out`` (monic); inputs are clobbered."""
    while db >= 0:
        inv = _inv(b[db], p)
        for j in range(db + 1):
            b[j] = b[j] * inv % p
        da = _rem_monic(a, da, b, db, p)
        for j in range(a.shape[0]):
            t = a[j]
            a[j] = b[j]
            b[j] = t
        t2 = da
        da = db
        db = t2
    for j in range(out.shape[0]):
        out[j] = 0
    if da < 0:
        return -1
    inv = _inv(a[da], p)
    for j in range(da + 1):
        out[j] = a[j] * inv % p
    return da


@kernel
def _exact_div(a, da, g, dg, p, q):
    """Quotient of ``a`` by monic ``g`` (assumed exact) into ``q``."""
    for j in range(q.shape[0]):
        q[j] = 0
    while da >= dg:
        c = a[da]
        s = da - dg
        q[s] = c
        for j in range(dg + 1):
            a[s + j] = (a[s + j] - c * g[j]) % p
        da = _deg(a, da - 1)
        if da < 0:
            break
    return _deg(q, q.shape[0] - 1)


@kernel
def residue_degree_counts(coeffs, primes):
    """Row ``k`` holds the number of irreducible factors of each degree mod ``primes[k]``.

    ``coeffs`` is monic, lowest degree first.  Primes at which the reduction is
    not squarefree must be filtered out by the caller.
    """
    n = coeffs.shape[0] - 1
    size = 2 * n + 2
    out = np.zeros((primes.shape[0], n + 1), dtype=np.int64)
    fstar = np.zeros(size, dtype=np.int64)
    h = np.zeros(size, dtype=np.int64)
    base = np.zeros(size, dtype=np.int64)
    tmp = np.zeros(size, dtype=np.int64)
    res = np.zeros(size, dtype=np.int64)
    wa = np.zeros(size, dtype=np.int64)
    wb = np.zeros(size, dtype=np.int64)
    g = np.zeros(size, dtype=np.int64)
    q = np.zeros(size, dtype=np.int64)
    for k in range(primes.shape[0]):
        p = primes[k]
        for j in range(size):
            fstar[j] = 0
            h[j] = 0
        for j in range(n + 1):
            fstar[j] = coeffs[j] % p
        df = n
        h[1] = 1
        dh = 1
        if df <= 1:
            dh = _rem_monic(h, dh, fstar, df, p)
        i = 1
        while df >= 2 * i:
            # h <- h^p mod fstar
            for j in range(size):
                base[j] = h[j]
                res[j] = 0
            res[0] = 1
            dres = 0
            dbase = dh
            e = p
            while e > 0:
                if e & 1:
                    dres = _mulmod(res, dres, base, dbase, fstar, df, p, tmp, res)
                e >>= 1
                if e > 0:
                    dbase = _mulmod(base, dbase, base, dbase, fstar, df, p, tmp, base)
            for j in range(size):
                h[j] = res[j]
            dh = dres
            # g = gcd(fstar, h - x)
            for j in range(size):
                wa[j] = fstar[j]
                wb[j] = h[j]
            wb[1] = (wb[1] - 1) % p
            dwb = _deg(wb, size - 1)
            dg = _monic_gcd(wa, df, wb, dwb, p, g)
            if dg > 0:
                out[k, i] += dg // i
                for j in range(size):
                    wa[j] = fstar[j]
                df = _exact_div(wa, df, g, dg, p, q)
                for j in range(size):
                    fstar[j] = q[j]
                dh = _rem_monic(h, dh, fstar, df, p)
            i += 1
        if df > 0:
            out[k, df] += 1
    return out
