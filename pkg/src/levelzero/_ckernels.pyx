# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled versions of the hot loops in ``_pykernels``.

Entries are C ``long long``; callers keep inputs small enough (matrix entries
and moduli well below 2**31) that no product overflows.
"""

from array import array as pyarray


cdef inline long long _mod(long long a, long long N):
    cdef long long r = a % N
    if r < 0:
        r += N
    return r


def orbit_min(mats, Py_ssize_t k, Py_ssize_t n, vec, long long N):
    cdef long long[:] m = pyarray("q", mats)
    cdef long long[:] v = pyarray("q", vec)
    cdef long long[:] best = pyarray("q", [0] * n)
    cdef long long[:] img = pyarray("q", [0] * n)
    cdef Py_ssize_t t, r, c, base, best_i = -1
    cdef long long acc
    cdef int cmp
    for t in range(k):
        base = t * n * n
        for r in range(n):
            acc = 0
            for c in range(n):
                acc += m[base + r * n + c] * v[c]
            img[r] = _mod(acc, N)
        if best_i < 0:
            cmp = -1
        else:
            cmp = 0
            for r in range(n):
                if img[r] != best[r]:
                    cmp = -1 if img[r] < best[r] else 1
                    break
        if cmp < 0:
            best_i = t
            for r in range(n):
                best[r] = img[r]
    return best_i, tuple(best[r] for r in range(n))


def stabilizer(mats, Py_ssize_t k, Py_ssize_t n, vec, long long N):
    cdef long long[:] m = pyarray("q", mats)
    cdef long long[:] v = pyarray("q", vec)
    cdef Py_ssize_t t, r, c, base
    cdef long long acc
    cdef bint ok
    out = []
    for t in range(k):
        base = t * n * n
        ok = True
        for r in range(n):
            acc = 0
            for c in range(n):
                acc += m[base + r * n + c] * v[c]
            if _mod(acc, N) != _mod(v[r], N):
                ok = False
                break
        if ok:
            out.append(t)
    return out


def fixed_grid(mat, Py_ssize_t n, long long N):
    cdef long long[:] m = pyarray("q", mat)
    cdef long long[:] v = pyarray("q", [0] * n)
    cdef Py_ssize_t r, c, i
    cdef long long acc, step, total = 1
    cdef bint ok
    for i in range(n):
        total *= N
    out = []
    for step in range(total):
        ok = True
        for r in range(n):
            acc = 0
            for c in range(n):
                acc += m[r * n + c] * v[c]
            if _mod(acc, N) != 0:
                ok = False
                break
        if ok:
            out.append(tuple(v[r] for r in range(n)))
        i = n - 1
        while i >= 0:
            v[i] += 1
            if v[i] < N:
                break
            v[i] = 0
            i -= 1
    return out


def uf_components(Py_ssize_t n, us, vs):
    cdef long long[:] parent = pyarray("q", range(n))
    cdef long long[:] a = pyarray("q", us)
    cdef long long[:] b = pyarray("q", vs)
    cdef Py_ssize_t e, ne = len(us)
    cdef long long x, y, rx, ry, nxt
    for e in range(ne):
        x = a[e]
        rx = x
        while parent[rx] != rx:
            rx = parent[rx]
        while parent[x] != rx:
            nxt = parent[x]
            parent[x] = rx
            x = nxt
        y = b[e]
        ry = y
        while parent[ry] != ry:
            ry = parent[ry]
        while parent[y] != ry:
            nxt = parent[y]
            parent[y] = ry
            y = nxt
        if rx != ry:
            if rx < ry:
                parent[ry] = rx
            else:
                parent[rx] = ry
    out = []
    for e in range(n):
        x = e
        while parent[x] != x:
            x = parent[x]
        out.append(x)
    return out
