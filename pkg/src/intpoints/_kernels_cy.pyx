# cython: language_level=3
"""Integer kernels, compiled twin of _kernels_py.

Machine-word fast paths with exact big-integer fallbacks; results are
identical to the pure implementation for all inputs.
"""

from math import gcd as _pygcd

from libc.stdint cimport int64_t

# headroom below 2**63 so the C fast paths never overflow mid-loop
DEF SMALL = 3037000498          # floor(sqrt(2**63 - 1))


cdef int64_t _cgcd(int64_t a, int64_t b) noexcept:
    cdef int64_t r
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        r = a % b
        a = b
        b = r
    return a


def vp(n, p):
    """Exponent of the prime p in the nonzero integer n."""
    cdef int64_t nn, pp
    cdef long k = 0
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    try:
        nn = n
        pp = p
    except OverflowError:
        nn = 0
        pp = 0
    if pp > 1:
        if nn < 0:
            nn = -nn
        while nn % pp == 0:
            nn //= pp
            k += 1
        return k
    # big-integer path
    m = abs(n)
    while m % p == 0:
        m //= p
        k += 1
    return k


def content(values):
    """gcd of the absolute values; 0 when every entry is zero."""
    cdef int64_t g = 0
    cdef int64_t vv
    cdef bint small = True
    for v in values:
        if small:
            try:
                vv = v
            except OverflowError:
                small = False
            else:
                g = _cgcd(g, vv)
                if g == 1:
                    return 1
                continue
        break
    if small:
        return g
    gg = 0
    for v in values:
        gg = _pygcd(gg, v)
        if gg == 1:
            return 1
    return gg


def min_valuation(values, p):
    """Least p-adic valuation over the nonzero entries; None if all vanish."""
    best = None
    for v in values:
        if v == 0:
            continue
        w = vp(v, p)
        if best is None or w < best:
            best = w
            if best == 0:
                break
    return best


def eval_terms(coeffs, exps, coords):
    """Evaluate sum_i coeffs[i] * prod_j coords[j]**exps[i][j] exactly."""
    cdef int64_t acc, m, base
    cdef long k, j
    cdef bint small = True
    cdef int64_t bound = 0
    for x in coords:
        try:
            base = x
        except OverflowError:
            small = False
            break
        if base < 0:
            base = -base
        if base > bound:
            bound = base
    if small:
        for c in coeffs:
            try:
                m = c
            except OverflowError:
                small = False
                break
    if small:
        # fast path only when every intermediate provably fits in 63 bits
        acc = 0
        for c, e in zip(coeffs, exps):
            m = c
            for x, ek in zip(coords, e):
                k = ek
                base = x
                for j in range(k):
                    if (m > SMALL or m < -SMALL) or (base > SMALL or base < -SMALL):
                        small = False
                        break
                    m *= base
                if not small:
                    break
            if not small:
                break
            if acc > 0 and m > 0 and acc + m < 0:
                small = False
                break
            if acc < 0 and m < 0 and acc + m > 0:
                small = False
                break
            acc += m
        if small:
            return acc
    total = 0
    for c, e in zip(coeffs, exps):
        t = c
        for x, ek in zip(coords, e):
            if ek:
                t *= x ** ek
        total += t
    return total


def normalize_tuple(coords):
    """Primitive canonical tuple: divide out the gcd, first nonzero > 0."""
    g = content(coords)
    if g == 0:
        raise ValueError("all coordinates are zero")
    out = [c // g for c in coords]
    for c in out:
        if c:
            if c < 0:
                out = [-x for x in out]
            break
    return tuple(out)


def backend():
    return "cython"
