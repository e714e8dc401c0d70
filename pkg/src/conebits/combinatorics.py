"""Face-count arithmetic for simplicial complexes and their duals.

All vectors hold Python ints, so components of any size are exact.  The
implicit ``f_{-1} = 1`` of a complex is never stored; it only enters the
f/h conversions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "FVector",
    "HVector",
    "GraphSummary",
    "RngConfig",
    "binomial",
    "cone_f",
    "iterate_cone",
    "cone_h",
    "simplex_dual_f",
    "f_to_h",
    "h_to_f",
    "random_graph",
    "f_of_graph",
    "is_symmetrical",
    "palindromic_h",
    "dumps_vector",
    "loads_vector",
    "write_vector",
    "read_vector",
]


def _as_int_tuple(values: Iterable) -> tuple[int, ...]:
    out = []
    for v in values:
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
            raise TypeError(f"vector components must be integers, got {v!r}")
        out.append(int(v))
    return tuple(out)


@dataclass(frozen=True)
class FVector:
    """Face counts ``(f_0, ..., f_{n-1})`` of an (n-1)-dimensional complex."""

    components: tuple[int, ...]

    def __init__(self, components: Iterable[int]):
        comps = _as_int_tuple(components)
        if not comps:
            raise ValueError("an f-vector needs at least one component")
        if any(c < 0 for c in comps):
            raise ValueError("f-vector components must be non-negative")
        if comps[0] < 1:
            raise ValueError("f_0 must be at least 1 for a non-empty complex")
        object.__setattr__(self, "components", comps)

    @property
    def dimension(self) -> int:
        return len(self.components) - 1

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)


@dataclass(frozen=True)
class HVector:
    """Dual profile ``(h_0, ..., h_n)``; entries may be negative."""

    components: tuple[int, ...]

    def __init__(self, components: Iterable[int]):
        comps = _as_int_tuple(components)
        if not comps:
            raise ValueError("an h-vector needs at least one component")
        object.__setattr__(self, "components", comps)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)


@dataclass(frozen=True)
class RngConfig:
    """Seeded edge-sampling generator.

    The only supported algorithm is ``"pcg64"``: numpy's PCG64 bit generator
    seeded with ``seed``.  Each raw 64-bit output ``x`` is mapped to the
    uniform ``r = (x >> 11) / 2**53``.  The raw PCG64 stream is stable across
    numpy releases and platforms, and the comparison ``r < p`` is done in
    exact rational arithmetic, so graphs are reproducible bit for bit.
    """

    seed: int
    algorithm: str = "pcg64"

    def __post_init__(self):
        if self.algorithm != "pcg64":
            raise ValueError(f"unsupported rng algorithm {self.algorithm!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def raw(self, count: int) -> np.ndarray:
        bitgen = np.random.PCG64(self.seed)
        return bitgen.random_raw(count)


@dataclass(frozen=True)
class GraphSummary:
    num_vertices: int
    num_edges: int
    seed: int
    edge_probability: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("a graph needs at least one vertex")
        max_edges = self.num_vertices * (self.num_vertices - 1) // 2
        if not 0 <= self.num_edges <= max_edges:
            raise ValueError(
                f"{self.num_edges} edges impossible on {self.num_vertices} vertices"
            )


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside ``0 <= k <= n``."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def cone_f(f: FVector) -> FVector:
    x = f.components
    y = [x[0] + 1]
    y.extend(x[i - 1] + x[i] for i in range(1, len(x)))
    y.append(x[-1])
    return FVector(y)


def iterate_cone(f: FVector, j: int) -> FVector:
    """f-vector of the j-fold cone ``C^j``."""
    if j < 0:
        raise ValueError("number of cones must be non-negative")
    for _ in range(j):
        f = cone_f(f)
    return f


def cone_h(h: HVector, j: int = 1) -> HVector:
    """h-vector of the j-fold cone: coning appends a zero to the h-vector."""
    if j < 0:
        raise ValueError("number of cones must be non-negative")
    return HVector(h.components + (0,) * j)


def simplex_dual_f(length: int) -> FVector:
    """f-vector of the complex dual to the simplex whose h-vector is ``length`` ones.

    With ``n = length - 1`` the components are ``C(n+1, j+1)`` for
    ``j = 0..n-1``: row ``n+1`` of Pascal's triangle without its end ones.
    """
    if length < 2:
        raise ValueError("h-vector length must be at least 2")
    n = length - 1
    return FVector(math.comb(n + 1, j + 1) for j in range(n))


def _shift_polynomial(coeffs: Sequence[int], sign: int) -> list[int]:
    # coeffs[q] is the coefficient of x**q; returns coefficients of p(x + sign)
    # for sign in {+1, -1}.  Horner in (x + sign) over object arrays, so each
    # step is one vectorised big-int add/sub over the active prefix.
    n = len(coeffs) - 1
    acc = np.zeros(n + 1, dtype=object)
    acc[0] = coeffs[n]
    combine = np.add if sign > 0 else np.subtract
    for deg, q in enumerate(range(n - 1, -1, -1), start=1):
        # acc holds a degree-(deg-1) polynomial; multiply by (x + sign)
        head = acc[:deg].copy()
        acc[deg] = head[-1]
        if deg > 1:
            acc[1:deg] = combine(head[:-1], head[1:])
        acc[0] = head[0] * sign + coeffs[q]
    return [int(v) for v in acc]


def f_to_h(f: FVector) -> HVector:
    """h-vector defined by ``sum h_k t^(n-k) = sum_i f_{i-1} (t-1)^(n-i)``.

    Coefficient-wise this is
    ``h_k = sum_{i<=k} (-1)^(k-i) C(n-i, n-k) f_{i-1}``.
    """
    n = len(f)
    # polynomial in s = t - 1, coefficient of s^(n-i) is f_{i-1}
    in_s = [0] * (n + 1)
    in_s[n] = 1
    for i in range(1, n + 1):
        in_s[n - i] = f[i - 1]
    in_t = _shift_polynomial(in_s, -1)
    return HVector(in_t[n - k] for k in range(n + 1))


def h_to_f(h: HVector) -> FVector:
    """Inverse of :func:`f_to_h`: ``f_{n-1-k} = sum_{q>=k} C(q, k) h_{n-q}``."""
    n = len(h) - 1
    if n < 1:
        raise ValueError("h-vector must have at least two components")
    in_t = [h[n - q] for q in range(n + 1)]
    in_s = _shift_polynomial(in_t, 1)
    if in_s[n] != 1:
        raise ValueError(f"h-vector does not describe a complex (f_-1 = {in_s[n]})")
    return FVector(in_s[n - 1 - j] for j in range(n))


def random_graph(n: int, p, rng: RngConfig) -> GraphSummary:
    """Erdős–Rényi graph: one uniform draw per ordered pair (i, j), row-major.

    Pair {i, j} with i < j becomes an edge when its draw satisfies r < p.
    Draws for i >= j are consumed and discarded, matching the original
    adjacency-matrix formulation.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    raw = rng.raw(n * n).reshape(n, n) >> np.uint64(11)
    # r < p  <=>  k / 2**53 < p  <=>  k < ceil(p * 2**53)
    bound = math.ceil(p * 2**53)
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    if bound >= 2**53:
        hits = upper
    else:
        hits = (raw < np.uint64(bound)) & upper
    return GraphSummary(n, int(hits.sum()), rng.seed, p)


def f_of_graph(g: GraphSummary) -> FVector:
    if g.num_edges > 0:
        return FVector((g.num_vertices, g.num_edges))
    return FVector((g.num_vertices,))


def is_symmetrical(f: FVector) -> bool:
    c = f.components
    return c == c[::-1]


def palindromic_h(length: int, value: int) -> HVector:
    """``(1, c, ..., c, 1)`` with ``length`` components."""
    if length < 2:
        raise ValueError("h-vector length must be at least 2")
    if value < 1:
        raise ValueError("pattern value must be at least 1")
    return HVector([1] + [value] * (length - 2) + [1])


# --- text serialisation ------------------------------------------------------

Vector = Union[FVector, HVector]


def dumps_vector(v: Vector) -> str:
    kind = "fvector" if isinstance(v, FVector) else "hvector"
    lines = [f"{kind} {len(v)}"]
    lines.extend(str(c) for c in v)
    return "\n".join(lines) + "\n"


def loads_vector(text: str) -> Vector:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty vector file")
    header = lines[0].split()
    if len(header) != 2 or header[0] not in ("fvector", "hvector"):
        raise ValueError(f"bad vector header {lines[0]!r}")
    try:
        count = int(header[1])
        comps = [int(ln) for ln in lines[1:]]
    except ValueError as exc:
        raise ValueError(f"non-integer entry in vector file: {exc}") from None
    if count != len(comps):
        raise ValueError(f"header announces {count} components, found {len(comps)}")
    return FVector(comps) if header[0] == "fvector" else HVector(comps)


def write_vector(v: Vector, path) -> Path:
    path = Path(path)
    path.write_text(dumps_vector(v))
    return path


def read_vector(path) -> Vector:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror}") from exc
    try:
        return loads_vector(text)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
