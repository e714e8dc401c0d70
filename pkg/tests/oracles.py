"""Independent reference implementations used only by the tests.

Nothing here imports from ``conebits``; each oracle recomputes a quantity by
a route different from the library's.
"""

from math import comb

import numpy as np


def sample_edges(n, p, seed):
    """Edge list of the seeded graph, via float comparison on the raw draws."""
    raw = np.random.PCG64(seed).random_raw(n * n)
    u = (raw >> np.uint64(11)).astype(np.float64) / 2.0**53
    return [(i, j) for i in range(n) for j in range(i + 1, n) if u[i * n + j] < p]


def cone_faces(vertices, edges, j):
    """All non-empty faces of the j-fold cone over a graph, as frozensets."""
    faces = {frozenset([v]) for v in vertices} | {frozenset(e) for e in edges}
    for k in range(j):
        apex = ("apex", k)
        faces = faces | {face | {apex} for face in faces} | {frozenset([apex])}
    return faces


def f_from_faces(faces):
    dim = max(len(s) for s in faces)
    f = [0] * dim
    for s in faces:
        f[len(s) - 1] += 1
    return f


def h_by_formula(f):
    """h_k = sum_{i<=k} (-1)^(k-i) C(n-i, k-i) f_{i-1}, with f_{-1} = 1."""
    n = len(f)
    ext = [1] + list(f)
    return [
        sum((-1) ** (k - i) * comb(n - i, k - i) * ext[i] for i in range(k + 1))
        for k in range(n + 1)
    ]


def naive_gf2_rank(rows):
    """Rank over GF(2) of a list of row bitmasks (ints)."""
    rows = list(rows)
    rank = 0
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def lfsr_bits(taps, state, count):
    """Fibonacci LFSR: s_t = xor of s_{t-k} for k in taps (1-based)."""
    seq = list(state)
    L = len(state)
    while len(seq) < count:
        t = len(seq)
        bit = 0
        for k in taps:
            bit ^= seq[t - k]
        seq.append(bit)
    return seq[:count], L


def linear_complexity_bruteforce(bits):
    """Shortest L such that some length-L recurrence generates ``bits``.

    Exhaustive over connection polynomials, so only usable for short inputs.
    """
    n = len(bits)
    if not any(bits):
        return 0
    for L in range(1, n + 1):
        for mask in range(1 << L):
            ok = True
            for t in range(L, n):
                acc = 0
                for k in range(L):
                    if mask >> k & 1:
                        acc ^= bits[t - 1 - k]
                if acc != bits[t]:
                    ok = False
                    break
            if ok:
                return L
    return n
