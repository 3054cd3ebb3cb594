"""Pure-Python reference implementations of the hot loops.

Vectors are numerators modulo ``N``; matrices are flattened row-major.
"""

from __future__ import annotations


def orbit_min(mats, k, n, vec, N):
    """Index of the first matrix ``g`` minimizing ``g.vec mod N`` lexicographically."""
    best, best_i = None, -1
    for t in range(k):
        base = t * n * n
        img = tuple(
            sum(mats[base + r * n + c] * vec[c] for c in range(n)) % N for r in range(n)
        )
        if best is None or img < best:
            best, best_i = img, t
    return best_i, best


def stabilizer(mats, k, n, vec, N):
    out = []
    target = tuple(v % N for v in vec)
    for t in range(k):
        base = t * n * n
        ok = True
        for r in range(n):
            if sum(mats[base + r * n + c] * vec[c] for c in range(n)) % N != target[r]:
                ok = False
                break
        if ok:
            out.append(t)
    return out


def fixed_grid(mat, n, N):
    """All ``v`` in ``[0, N)^n`` with ``mat.v = 0 mod N``, in lexicographic order."""
    out = []
    v = [0] * n
    total = N ** n
    for _ in range(total):
        ok = True
        for r in range(n):
            if sum(mat[r * n + c] * v[c] for c in range(n)) % N:
                ok = False
                break
        if ok:
            out.append(tuple(v))
        i = n - 1
        while i >= 0:
            v[i] += 1
            if v[i] < N:
                break
            v[i] = 0
            i -= 1
    return out


def uf_components(n, us, vs):
    """Label each of ``n`` nodes by the smallest node in its component."""
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in zip(us, vs):
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return [find(x) for x in range(n)]
