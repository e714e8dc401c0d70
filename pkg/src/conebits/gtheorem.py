"""Dehn–Sommerville symmetry and McMullen's conditions for simple polytopes.

Two f-vector conventions meet here.  A complex ``K`` counts simplices,
``f_i(K)`` = number of i-simplices; a polytope ``P`` counts faces,
``f_j(P)`` = number of j-faces.  When ``K`` is dual to a d-polytope ``P``,
``f_i(K) = f_{d-1-i}(P)``.  :func:`polytope_profile` is the single place
that performs this reversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .combinatorics import FVector, HVector, binomial

__all__ = [
    "GVector",
    "McMullenReport",
    "polytope_profile",
    "g_vector",
    "check_dehn_sommerville",
    "macaulay_rep",
    "pseudo_power",
    "check_mcmullen",
    "vertex_equation_holds",
    "vertex_count_from_g",
    "cone_failure_threshold",
]


@dataclass(frozen=True)
class GVector:
    components: tuple[int, ...]
    d: int

    def __post_init__(self):
        if len(self.components) != self.d + 1:
            raise ValueError("a g-vector of a d-polytope has d+1 components")

    def __getitem__(self, i):
        return self.components[i]

    def __len__(self):
        return len(self.components)


@dataclass(frozen=True)
class McMullenReport:
    symmetric_ok: bool
    monotone_ok: bool
    growth_ok: bool
    m_index: int
    half_index: int
    first_violation: Optional[tuple[str, int]] = None

    @property
    def passed(self) -> bool:
        return self.symmetric_ok and self.monotone_ok and self.growth_ok


def polytope_profile(f_complex: FVector) -> FVector:
    """Face counts of the polytope dual to a complex, ``f_j(P) = f_{d-1-j}(K)``."""
    return FVector(reversed(f_complex.components))


def _check_dim(f: FVector, d: int):
    if d < 1 or len(f) != d:
        raise ValueError(f"a {d}-polytope f-vector has {d} components, got {len(f)}")


def g_vector(f_polytope: FVector, d: int) -> GVector:
    """``g_i = sum_{j=0}^{d} (-1)^(i+j) C(j, i) f_j`` with ``f_d := 1``."""
    _check_dim(f_polytope, d)
    f = list(f_polytope.components) + [1]
    g = []
    for i in range(d + 1):
        total = 0
        for j in range(i, d + 1):
            term = binomial(j, i) * f[j]
            total += term if (i + j) % 2 == 0 else -term
        g.append(total)
    return GVector(tuple(g), d)


def check_dehn_sommerville(h: HVector) -> bool:
    c = h.components
    return c == c[::-1]


def _largest_index(a: int, i: int) -> int:
    # largest x >= i with C(x, i) <= a; requires a >= 1
    lo, hi = i, max(a, i) + 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if binomial(mid, i) <= a:
            lo = mid
        else:
            hi = mid
    return lo


def macaulay_rep(a: int, i: int) -> list[tuple[int, int]]:
    """The i-binomial (Macaulay) representation of ``a``.

    Returns ``[(a_i, i), (a_{i-1}, i-1), ..., (a_j, j)]`` with
    ``a_i > a_{i-1} > ... > a_j >= j >= 1`` and
    ``a = C(a_i, i) + ... + C(a_j, j)``.
    """
    if a < 1 or i < 1:
        raise ValueError("macaulay_rep needs a >= 1 and i >= 1")
    rep = []
    rest, k = a, i
    while rest > 0:
        top = _largest_index(rest, k)
        rep.append((top, k))
        rest -= binomial(top, k)
        k -= 1
    return rep


def pseudo_power(a: int, i: int) -> int:
    """Macaulay pseudo-power ``a^<i>``, with ``0^<i> = 0``."""
    if a < 0:
        raise ValueError("pseudo_power is defined for a >= 0")
    if a == 0:
        return 0
    return sum(binomial(top + 1, k + 1) for top, k in macaulay_rep(a, i))


def check_mcmullen(f_polytope: FVector, d: int) -> McMullenReport:
    g = g_vector(f_polytope, d)
    m_index, half_index = (d - 1) // 2, d // 2
    first = None

    symmetric_ok = True
    for i in range(m_index + 1):
        if g[i] != g[d - i]:
            symmetric_ok = False
            first = first or ("symmetric", i)
            break

    monotone_ok = True
    for i in range(half_index):
        if g[i] > g[i + 1]:
            monotone_ok = False
            first = first or ("monotone", i)
            break

    growth_ok = True
    for i in range(1, half_index):
        prev_step = g[i] - g[i - 1]
        step = g[i + 1] - g[i]
        # a negative previous step has no pseudo-power; count it as a violation
        if prev_step < 0 or step > pseudo_power(prev_step, i):
            growth_ok = False
            first = first or ("growth", i)
            break

    return McMullenReport(symmetric_ok, monotone_ok, growth_ok, m_index, half_index, first)


def vertex_equation_holds(f_polytope: FVector, d: int) -> bool:
    """``f_0 = (d-1) f_{d-1} - (d+1)(d-2)`` for a d-polytope profile."""
    _check_dim(f_polytope, d)
    return f_polytope[0] == (d - 1) * f_polytope[d - 1] - (d + 1) * (d - 2)


def vertex_count_from_g(f_polytope: FVector, d: int) -> int:
    """``sum_i C(i, 0) g_i``, the other side of the vertex-count identity."""
    return sum(g_vector(f_polytope, d).components)


def cone_failure_threshold(s: int, t: int) -> Optional[Fraction]:
    """The only cone count at which the vertex equation can hold for ``C^j(G)``.

    ``s`` and ``t`` are the vertex and edge counts of ``G``.  Returns
    ``(t - s) / (s - 2)``, or ``None`` when ``s == 2``.
    """
    if t < 1:
        raise ValueError("the graph needs at least one edge")
    if s == 2:
        return None
    return Fraction(t - s, s - 2)
