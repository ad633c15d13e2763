"""Integer kernels, pure-Python reference implementation.

These are the hot primitives of every search and enumeration loop:
p-adic valuations, contents, canonical tuple reduction and homogeneous
form evaluation, all on exact integers.  intpoints.kernels selects the
compiled twin (_kernels_cy) when it is available; both implementations
must agree bit for bit, which tests/test_kernels.py enforces.
"""

from math import gcd


def vp(n, p):
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def content(values):
    """gcd of the absolute values; 0 when every entry is zero."""
    g = 0
    for v in values:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


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
    total = 0
    for c, e in zip(coeffs, exps):
        m = c
        for x, k in zip(coords, e):
            if k:
                m *= x ** k
        total += m
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
    return "python"
