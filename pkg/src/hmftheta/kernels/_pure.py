"""Reference implementations of the hot kernels in plain Python.

These are the ground truth for the compiled versions in ``_ckernels.pyx``;
both must return identical results for identical inputs.
"""
from __future__ import annotations

from itertools import product


def poly_mulmod(a, b, modulus, p):
    """Product of two residues modulo a monic ``modulus`` over F_p.

    ``a`` and ``b`` are coefficient tuples of length k (low to high),
    ``modulus`` has length k + 1 with trailing 1.
    """
    k = len(a)
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    for deg in range(2 * k - 2, k - 1, -1):
        c = prod[deg] % p
        if c:
            base = deg - k
            for t in range(k):
                prod[base + t] -= c * modulus[t]
    return tuple(x % p for x in prod[:k])


def cauchy_product(a_exps, a_coeffs, b_exps, b_coeffs, trace_weights,
                   bound_num, bound_den, modulus, p):
    """Truncated product of two finite formal sums.

    Exponents are integer tuples, coefficients are residue tuples. A pair
    contributes only if ``trace(m + n) * bound_den <= bound_num``. Returns a
    dict mapping exponent tuples to nonzero coefficient tuples.
    """
    k = len(modulus) - 1
    out = {}
    for m, ca in zip(a_exps, a_coeffs):
        tm = sum(w * x for w, x in zip(trace_weights, m))
        for n, cb in zip(b_exps, b_coeffs):
            tn = sum(w * x for w, x in zip(trace_weights, n))
            if (tm + tn) * bound_den > bound_num:
                continue
            key = tuple(x + y for x, y in zip(m, n))
            c = poly_mulmod(ca, cb, modulus, p)
            acc = out.get(key)
            if acc is None:
                out[key] = list(c)
            else:
                for t in range(k):
                    acc[t] += c[t]
    result = {}
    for key, acc in out.items():
        c = tuple(x % p for x in acc)
        if any(c):
            result[key] = c
    return result


def cone_box_search(target, hrows, caps, mult, sigma_inv):
    """All m with 0 <= m_t <= caps[t] such that target - sum m_t hrows[t]
    satisfies mult[t] * w[t] >= w[sigma_inv[t]] for every t."""
    d = len(target)
    found = []
    for m in product(*(range(c + 1) for c in caps)):
        w = list(target)
        for t, mt in enumerate(m):
            if mt:
                row = hrows[t]
                for s in range(d):
                    w[s] -= mt * row[s]
        if all(mult[t] * w[t] >= w[sigma_inv[t]] for t in range(d)):
            found.append(tuple(m))
    return found
