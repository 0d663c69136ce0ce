"""Counting kernels.  All arithmetic is int64; callers enforce the size guards."""

from __future__ import annotations

import numpy as np

from .._accel import kernel

MAX_FACTORS = 16
DIVISOR_BUFFER = 1 << 16


@kernel
def isqrt64(x):
    if x <= 0:
        return 0
    r = np.int64(np.sqrt(np.float64(x)))
    while r * r > x:
        r -= 1
    while (r + 1) * (r + 1) <= x:
        r += 1
    return r


@kernel
def _powmod(b, e, m):
    r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


@kernel
def _sqrt_mod(a, p):
    """A square root of ``a`` mod odd prime ``p``, or -1 if none."""
    a %= p
    if a == 0:
        return 0
    if _powmod(a, (p - 1) // 2, p) != 1:
        return -1
    if p % 4 == 3:
        return _powmod(a, (p + 1) // 4, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _powmod(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m = s
    c = _powmod(z, q, p)
    t = _powmod(a, q, p)
    r = _powmod(a, (q + 1) // 2, p)
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = b * b % p
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


@kernel
def quadratic_roots(t, d, primes):
    """Roots of ``x^2 - t x + d`` modulo each prime; -1 marks an absent root."""
    out = np.full((primes.shape[0], 2), -1, dtype=np.int64)
    for k in range(primes.shape[0]):
        p = primes[k]
        if p == 2:
            j = 0
            for a in range(2):
                if (a * a - t * a + d) % 2 == 0:
                    out[k, j] = a
                    j += 1
            continue
        disc = (t * t - 4 * d) % p
        s = _sqrt_mod(disc, p)
        if s < 0:
            continue
        inv2 = (p + 1) // 2
        r1 = (t + s) % p * inv2 % p
        r2 = (t - s) % p * inv2 % p
        out[k, 0] = r1
        if r2 != r1:
            out[k, 1] = r2
    return out


@kernel
def _count_divisor_pairs(primes, exps, nf, r_abs, rem, s, buf):
    """Number of positive divisors ``b`` of ``r_abs`` with ``b^2 + (r_abs/b)^2 <= rem``."""
    buf[0] = 1
    nd = 1
    for k in range(nf):
        p = primes[k]
        base = nd
        for i in range(base):
            v = buf[i]
            for _ in range(exps[k]):
                if v > s // p:
                    break
                v *= p
                buf[nd] = v
                nd += 1
    cnt = 0
    for i in range(nd):
        b = buf[i]
        c = r_abs // b
        if c <= s and b * b + c * c <= rem:
            cnt += 1
    return cnt


@kernel
def count_n2_range(t, d, T2, a_lo, a_hi, primes, roots, block):
    """Solutions with top-left entry ``a`` in ``[a_lo, a_hi)``.

    For each ``a`` the bottom-right entry is ``t - a`` and ``b c = r`` with
    ``r = a (t - a) - d = -chi(a)``.  The values ``|chi(a)|`` are factored
    a block at a time by sieving with the roots of chi modulo each prime.
    """
    vals = np.zeros(block, dtype=np.int64)
    orig = np.zeros(block, dtype=np.int64)
    fp = np.zeros((block, MAX_FACTORS), dtype=np.int64)
    fe = np.zeros((block, MAX_FACTORS), dtype=np.int64)
    nf = np.zeros(block, dtype=np.int64)
    buf = np.zeros(DIVISOR_BUFFER, dtype=np.int64)
    total = 0
    start = a_lo
    while start < a_hi:
        stop = min(start + block, a_hi)
        size = stop - start
        vmax = 0
        for i in range(size):
            a = start + i
            v = a * (t - a) - d
            if v < 0:
                v = -v
            vals[i] = v
            orig[i] = v
            nf[i] = 0
            if v > vmax:
                vmax = v
        lim = isqrt64(vmax)
        for k in range(primes.shape[0]):
            p = primes[k]
            if p > lim:
                break
            for j in range(2):
                r0 = roots[k, j]
                if r0 < 0:
                    continue
                i = (r0 - start) % p
                while i < size:
                    v = vals[i]
                    if v != 0:
                        e = 0
                        while v % p == 0:
                            v //= p
                            e += 1
                        vals[i] = v
                        fp[i, nf[i]] = p
                        fe[i, nf[i]] = e
                        nf[i] += 1
                    i += p
        for i in range(size):
            a = start + i
            dd = t - a
            rem = T2 - a * a - dd * dd
            r_abs = orig[i]
            if rem < 0 or 2 * r_abs > rem:
                continue
            if vals[i] > 1:
                fp[i, nf[i]] = vals[i]
                fe[i, nf[i]] = 1
                nf[i] += 1
            s = isqrt64(rem)
            total += 2 * _count_divisor_pairs(fp[i], fe[i], nf[i], r_abs, rem, s, buf)
        start = stop
    return total


@kernel
def charpoly(a, n, out, m, am):
    """Faddeev-LeVerrier: ``out[k]`` is the coefficient of ``x^k`` of det(xI - A)."""
    for i in range(n):
        for j in range(n):
            m[i, j] = 0
    out[n] = 1
    for k in range(1, n + 1):
        # m <- A m + c I  with c = out[n - k + 1]
        c = out[n - k + 1]
        for i in range(n):
            for j in range(n):
                s = 0
                for l in range(n):
                    s += a[i, l] * m[l, j]
                am[i, j] = s
        for i in range(n):
            for j in range(n):
                m[i, j] = am[i, j] + (c if i == j else 0)
        tr = 0
        for i in range(n):
            for l in range(n):
                tr += a[i, l] * m[l, i]
        out[n - k] = -tr // k


@kernel
def _matches(a, n, target, cp, m, am):
    charpoly(a, n, cp, m, am)
    for k in range(n + 1):
        if cp[k] != target[k]:
            return False
    return True


@kernel
def naive_norms(target, n, T2, first_lo, first_hi):
    """Squared norms of all solutions with entry (0,0) in ``[first_lo, first_hi)``.

    Also returns how many of them are symmetric.  Plain odometer over all n^2
    entries pruned only by the norm ball.
    """
    nn = n * n
    a = np.zeros((n, n), dtype=np.int64)
    cp = np.zeros(n + 1, dtype=np.int64)
    m = np.zeros((n, n), dtype=np.int64)
    am = np.zeros((n, n), dtype=np.int64)
    rems = np.zeros(nn + 1, dtype=np.int64)
    vals = np.zeros(nn, dtype=np.int64)
    hi = np.zeros(nn, dtype=np.int64)
    norms = []
    nsym = 0
    rems[0] = T2
    level = 0
    s0 = isqrt64(T2)
    vals[0] = max(-s0, first_lo) - 1
    hi[0] = min(s0, first_hi - 1)
    while level >= 0:
        vals[level] += 1
        if vals[level] > hi[level]:
            level -= 1
            continue
        v = vals[level]
        r = rems[level] - v * v
        a[level // n, level % n] = v
        if level == nn - 1:
            if _matches(a, n, target, cp, m, am):
                norms.append(T2 - r)
                sym = True
                for i in range(n):
                    for j in range(i):
                        if a[i, j] != a[j, i]:
                            sym = False
                if sym:
                    nsym += 1
            continue
        level += 1
        rems[level] = r
        s = isqrt64(r)
        vals[level] = -s - 1
        hi[level] = s
    out = np.empty(len(norms), dtype=np.int64)
    for i in range(len(norms)):
        out[i] = norms[i]
    return out, nsym


@kernel
def _final_pair(a, n, pi, pj, P, rem, target, cp, m, am):
    """Solutions for the last off-diagonal pair with ``a[pi,pj] * a[pj,pi] = P``."""
    cnt = 0
    s = isqrt64(rem)
    if P == 0:
        for y in range(-s, s + 1):
            a[pi, pj] = 0
            a[pj, pi] = y
            if _matches(a, n, target, cp, m, am):
                cnt += 1
        for x in range(-s, s + 1):
            if x == 0:
                continue
            a[pi, pj] = x
            a[pj, pi] = 0
            if _matches(a, n, target, cp, m, am):
                cnt += 1
        return cnt
    q = P if P > 0 else -P
    b = 1
    while b <= s and b * b <= q:
        if q % b == 0:
            c = q // b
            if b * b + c * c <= rem:
                for sgn in range(2):
                    x = b if sgn == 0 else -b
                    y = P // x
                    a[pi, pj] = x
                    a[pj, pi] = y
                    if _matches(a, n, target, cp, m, am):
                        cnt += 1
                    if c != b:
                        a[pi, pj] = y
                        a[pj, pi] = x
                        if _matches(a, n, target, cp, m, am):
                            cnt += 1
        b += 1
    return cnt


@kernel
def count_generic_diagonals(target, n, T2, diagonals):
    """Solutions whose diagonal is one of the rows of ``diagonals``.

    Off-diagonal entries go in transposed pairs.  The sum of the pair products
    is fixed by the coefficient of ``x^(n-2)``, which prunes every level and
    turns the last pair into a divisor problem.
    """
    npairs = n * (n - 1) // 2
    pi = np.zeros(npairs, dtype=np.int64)
    pj = np.zeros(npairs, dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            pi[k] = i
            pj[k] = j
            k += 1
    a = np.zeros((n, n), dtype=np.int64)
    cp = np.zeros(n + 1, dtype=np.int64)
    m = np.zeros((n, n), dtype=np.int64)
    am = np.zeros((n, n), dtype=np.int64)
    xs = np.zeros(npairs, dtype=np.int64)
    ys = np.zeros(npairs, dtype=np.int64)
    xhi = np.zeros(npairs, dtype=np.int64)
    yhi = np.zeros(npairs, dtype=np.int64)
    rems = np.zeros(npairs + 1, dtype=np.int64)
    qs = np.zeros(npairs + 1, dtype=np.int64)
    e2 = target[n - 2]
    total = 0
    for di in range(diagonals.shape[0]):
        for i in range(n):
            for j in range(n):
                a[i, j] = 0
        r0 = T2
        sdiag = 0
        for i in range(n):
            a[i, i] = diagonals[di, i]
            r0 -= a[i, i] * a[i, i]
            for j in range(i):
                sdiag += a[i, i] * a[j, j]
        if r0 < 0:
            continue
        # sum over pairs of a_ij a_ji must equal Q
        Q = sdiag - e2
        if 2 * (Q if Q > 0 else -Q) > r0:
            continue
        if npairs == 1:
            total += _final_pair(a, n, pi[0], pj[0], Q, r0, target, cp, m, am)
            continue
        last = npairs - 1
        level = 0
        rems[0] = r0
        qs[0] = 0
        s = isqrt64(r0)
        xs[0] = -s
        xhi[0] = s
        ys[0] = -isqrt64(r0 - s * s) - 1
        yhi[0] = isqrt64(r0 - s * s)
        while level >= 0:
            ys[level] += 1
            if ys[level] > yhi[level]:
                xs[level] += 1
                if xs[level] > xhi[level]:
                    a[pi[level], pj[level]] = 0
                    a[pj[level], pi[level]] = 0
                    level -= 1
                    continue
                yh = isqrt64(rems[level] - xs[level] * xs[level])
                ys[level] = -yh
                yhi[level] = yh
            x = xs[level]
            y = ys[level]
            r = rems[level] - x * x - y * y
            q = qs[level] + x * y
            rest = Q - q
            if 2 * (rest if rest > 0 else -rest) > r:
                continue
            a[pi[level], pj[level]] = x
            a[pj[level], pi[level]] = y
            if level == last - 1:
                total += _final_pair(a, n, pi[last], pj[last], rest, r, target, cp, m, am)
                a[pi[last], pj[last]] = 0
                a[pj[last], pi[last]] = 0
                continue
            level += 1
            rems[level] = r
            qs[level] = q
            s = isqrt64(r)
            xs[level] = -s
            xhi[level] = s
            yh = isqrt64(r - s * s)
            ys[level] = -yh - 1
            yhi[level] = yh
    return total
