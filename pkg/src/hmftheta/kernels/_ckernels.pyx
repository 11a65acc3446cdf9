# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pure.py`` (same signatures)."""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef inline i64 _mod(i64 x, i64 p) nogil:
    cdef i64 r = x % p
    if r < 0:
        r += p
    return r


cdef void _mulmod(const i64* a, const i64* b, const i64* modulus, i64 k,
                  i64 p, i64* scratch, i64* out) nogil:
    cdef i64 i, j, deg, base, t, c
    for i in range(2 * k - 1):
        scratch[i] = 0
    for i in range(k):
        if a[i] != 0:
            for j in range(k):
                if b[j] != 0:
                    scratch[i + j] = (scratch[i + j] + a[i] * b[j]) % p
    deg = 2 * k - 2
    while deg >= k:
        c = _mod(scratch[deg], p)
        if c != 0:
            base = deg - k
            for t in range(k):
                scratch[base + t] = _mod(scratch[base + t] - c * modulus[t], p)
        deg -= 1
    for i in range(k):
        out[i] = _mod(scratch[i], p)


def poly_mulmod(a, b, modulus, p):
    cdef i64 k = len(a)
    cdef i64 pp = p
    cdef i64* buf = <i64*> malloc(sizeof(i64) * (6 * k + 2))
    if buf == NULL:
        raise MemoryError()
    cdef i64* ca = buf
    cdef i64* cb = buf + k
    cdef i64* cm = buf + 2 * k
    cdef i64* scratch = buf + 3 * k + 1
    cdef i64* out = buf + 5 * k
    cdef i64 i
    try:
        for i in range(k):
            ca[i] = a[i]
            cb[i] = b[i]
            cm[i] = modulus[i]
        cm[k] = modulus[k]
        _mulmod(ca, cb, cm, k, pp, scratch, out)
        return tuple([out[i] for i in range(k)])
    finally:
        free(buf)


def cauchy_product(a_exps, a_coeffs, b_exps, b_coeffs, trace_weights,
                   bound_num, bound_den, modulus, p):
    cdef i64 na = len(a_exps)
    cdef i64 nb = len(b_exps)
    cdef i64 k = len(modulus) - 1
    cdef i64 r = len(trace_weights)
    cdef i64 pp = p
    cdef i64 bnum = bound_num
    cdef i64 bden = bound_den
    if na == 0 or nb == 0:
        return {}
    cdef i64* ae = <i64*> malloc(sizeof(i64) * na * r)
    cdef i64* ac = <i64*> malloc(sizeof(i64) * na * k)
    cdef i64* at = <i64*> malloc(sizeof(i64) * na)
    cdef i64* be = <i64*> malloc(sizeof(i64) * nb * r)
    cdef i64* bc = <i64*> malloc(sizeof(i64) * nb * k)
    cdef i64* bt = <i64*> malloc(sizeof(i64) * nb)
    cdef i64* cm = <i64*> malloc(sizeof(i64) * (k + 1))
    cdef i64* scratch = <i64*> malloc(sizeof(i64) * (2 * k))
    cdef i64* prod = <i64*> malloc(sizeof(i64) * k)
    cdef i64 i, j, t, s
    cdef dict acc = {}
    cdef list slot
    try:
        for t in range(k + 1):
            cm[t] = modulus[t]
        for i in range(na):
            s = 0
            for t in range(r):
                ae[i * r + t] = a_exps[i][t]
                s += trace_weights[t] * ae[i * r + t]
            at[i] = s
            for t in range(k):
                ac[i * k + t] = a_coeffs[i][t]
        for j in range(nb):
            s = 0
            for t in range(r):
                be[j * r + t] = b_exps[j][t]
                s += trace_weights[t] * be[j * r + t]
            bt[j] = s
            for t in range(k):
                bc[j * k + t] = b_coeffs[j][t]
        for i in range(na):
            for j in range(nb):
                if (at[i] + bt[j]) * bden > bnum:
                    continue
                _mulmod(ac + i * k, bc + j * k, cm, k, pp, scratch, prod)
                key = tuple([ae[i * r + t] + be[j * r + t] for t in range(r)])
                slot = acc.get(key)
                if slot is None:
                    acc[key] = [prod[t] for t in range(k)]
                else:
                    for t in range(k):
                        slot[t] = (<i64> slot[t] + prod[t]) % pp
        result = {}
        for key, slot in acc.items():
            c = tuple([(<i64> x) % pp for x in slot])
            if any(c):
                result[key] = c
        return result
    finally:
        free(ae); free(ac); free(at); free(be); free(bc); free(bt)
        free(cm); free(scratch); free(prod)


def cone_box_search(target, hrows, caps, mult, sigma_inv):
    cdef i64 d = len(target)
    if d == 0:
        return [()]
    cdef i64* h = <i64*> malloc(sizeof(i64) * d * d)
    cdef i64* w = <i64*> malloc(sizeof(i64) * d)
    cdef i64* m = <i64*> malloc(sizeof(i64) * d)
    cdef i64* cap = <i64*> malloc(sizeof(i64) * d)
    cdef i64* n = <i64*> malloc(sizeof(i64) * d)
    cdef i64* sinv = <i64*> malloc(sizeof(i64) * d)
    cdef i64 t, s, pos
    cdef bint ok
    found = []
    try:
        for t in range(d):
            w[t] = target[t]
            m[t] = 0
            cap[t] = caps[t]
            n[t] = mult[t]
            sinv[t] = sigma_inv[t]
            row = hrows[t]
            for s in range(d):
                h[t * d + s] = row[s]
        while True:
            # w holds target - sum m_t h_t for the current odometer state
            ok = True
            for t in range(d):
                if n[t] * w[t] < w[sinv[t]]:
                    ok = False
                    break
            if ok:
                found.append(tuple([m[t] for t in range(d)]))
            # advance the odometer, last coordinate fastest
            pos = d - 1
            while pos >= 0:
                if m[pos] < cap[pos]:
                    m[pos] += 1
                    for s in range(d):
                        w[s] -= h[pos * d + s]
                    break
                for s in range(d):
                    w[s] += m[pos] * h[pos * d + s]
                m[pos] = 0
                pos -= 1
            if pos < 0:
                break
        return found
    finally:
        free(h); free(w); free(m); free(cap); free(n); free(sinv)
