"""Native SP 800-22 test subset.

Nine tests are implemented: frequency (monobit), block frequency, runs,
longest run of ones, binary matrix rank, cumulative sums, approximate
entropy, serial and linear complexity.  Each maps a :class:`BitStream` to a
:class:`TestResult`.

A test whose statistic is undefined for the given length/parameters is
*skipped* and carries no p-value.  A test that runs below the SP 800-22
recommended length is *advisory*: the p-value is real but flagged.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .bitcodec import BitStream
from .special import erfc, igamc, normal_cdf

__all__ = [
    "TestResult",
    "SuiteParams",
    "SuiteReport",
    "frequency_monobit",
    "block_frequency",
    "runs",
    "longest_run_of_ones",
    "binary_matrix_rank",
    "cumulative_sums",
    "approximate_entropy",
    "serial",
    "linear_complexity",
    "berlekamp_massey",
    "gf2_rank",
    "rank_probabilities",
    "run_suite",
    "clustering_fraction",
    "TESTS",
]


@dataclass
class TestResult:
    test_name: str
    p_values: list[float]
    passed: Optional[bool]
    parameters: dict = field(default_factory=dict)
    status: str = "ok"  # ok | advisory | skipped
    notes: list[str] = field(default_factory=list)
    statistics: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    @property
    def skipped(self) -> bool:
        return self.status == "skipped"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SuiteParams:
    """Suite parameters; defaults are the SP 800-22 recommendations."""

    alpha: float = 0.01
    block_frequency_M: int = 128
    approx_entropy_m: int = 10
    serial_m: int = 16
    linear_complexity_M: int = 500
    rank_rows: int = 32
    rank_cols: int = 32

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteReport:
    bit_length: int
    alpha: float
    results: list[TestResult]
    params: dict

    @property
    def applicable(self) -> list[TestResult]:
        return [r for r in self.results if not r.skipped]

    @property
    def pass_proportion(self) -> Optional[float]:
        live = self.applicable
        if not live:
            return None
        return sum(r.passed for r in live) / len(live)

    @property
    def p_values(self) -> list[float]:
        return [p for r in self.applicable for p in r.p_values]

    @property
    def clustering_fraction(self) -> Optional[float]:
        return clustering_fraction(self.p_values)

    def to_dict(self) -> dict:
        return {
            "bit_length": self.bit_length,
            "alpha": self.alpha,
            "params": self.params,
            "pass_proportion": self.pass_proportion,
            "clustering_fraction": self.clustering_fraction,
            "results": [r.to_dict() for r in self.results],
        }


def clustering_fraction(p_values, low: float = 0.01, high: float = 0.99) -> Optional[float]:
    """Share of p-values in ``[0, low) U (high, 1]``."""
    ps = list(p_values)
    if not ps:
        return None
    return sum(1 for p in ps if p < low or p > high) / len(ps)


# --- helpers -----------------------------------------------------------------


def _bits(stream) -> np.ndarray:
    if isinstance(stream, BitStream):
        return stream.bits()
    if isinstance(stream, str):
        return BitStream.from_bits(stream).bits()
    return np.asarray(stream, dtype=np.uint8)


def _clip(p: float) -> float:
    return min(1.0, max(0.0, float(p)))


def _result(name, ps, alpha, params, notes=(), stats=None, advisory=False) -> TestResult:
    ps = [_clip(p) for p in ps]
    return TestResult(
        test_name=name,
        p_values=ps,
        passed=all(p >= alpha for p in ps),
        parameters=dict(params),
        status="advisory" if advisory else "ok",
        notes=list(notes),
        statistics=dict(stats or {}),
    )


def _skip(name, params, reason) -> TestResult:
    return TestResult(name, [], None, dict(params), "skipped", [reason])


def _advise(checks) -> list[str]:
    return [msg for ok, msg in checks if not ok]


def _trunc_div(a: int, b: int) -> int:
    # C integer division (truncates toward zero)
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def _pattern_counts(bits: np.ndarray, m: int) -> np.ndarray:
    """Counts of all overlapping m-bit patterns, wrapping around the end."""
    n = bits.size
    if m == 0:
        return np.array([n])
    ext = np.concatenate([bits, bits[: m - 1]]).astype(np.int64)
    vals = np.zeros(n, dtype=np.int64)
    for k in range(m):
        vals = (vals << 1) | ext[k : k + n]
    return np.bincount(vals, minlength=1 << m)


# --- tests -------------------------------------------------------------------


def frequency_monobit(stream, alpha: float = 0.01) -> TestResult:
    eps = _bits(stream)
    n = eps.size
    name = "frequency"
    if n == 0:
        return _skip(name, {}, "empty stream")
    s_n = 2 * int(eps.sum()) - n
    s_obs = abs(s_n) / math.sqrt(n)
    p = erfc(s_obs / math.sqrt(2.0))
    notes = _advise([(n >= 100, f"n={n} below recommended 100")])
    return _result(name, [p], alpha, {}, notes, {"S_n": s_n}, advisory=bool(notes))


def block_frequency(stream, M: int = 128, alpha: float = 0.01) -> TestResult:
    eps = _bits(stream)
    n = eps.size
    name = "block_frequency"
    params = {"M": M}
    N = n // M if M > 0 else 0
    if N < 1:
        return _skip(name, params, f"n={n} holds no block of M={M} bits")
    pi = eps[: N * M].reshape(N, M).sum(axis=1) / M
    chi2 = 4.0 * M * float(np.sum((pi - 0.5) ** 2))
    p = igamc(N / 2.0, chi2 / 2.0)
    notes = _advise(
        [
            (n >= 100, f"n={n} below recommended 100"),
            (M >= 20, f"M={M} below recommended 20"),
        ]
    )
    return _result(name, [p], alpha, params, notes, {"chi2": chi2, "N": N}, advisory=bool(notes))


def runs(stream, alpha: float = 0.01) -> TestResult:
    eps = _bits(stream)
    n = eps.size
    name = "runs"
    if n < 2:
        return _skip(name, {}, f"n={n} too short for runs")
    pi = float(eps.sum()) / n
    notes = _advise([(n >= 100, f"n={n} below recommended 100")])
    tau = 2.0 / math.sqrt(n)
    if abs(pi - 0.5) >= tau:
        # frequency prerequisite failed: reference behaviour reports p = 0
        notes.append("frequency prerequisite |pi - 1/2| >= tau failed")
        return _result(name, [0.0], alpha, {}, notes, {"pi": pi}, advisory=n < 100)
    v_obs = 1 + int(np.count_nonzero(eps[1:] != eps[:-1]))
    num = abs(v_obs - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    p = erfc(num / den)
    return _result(name, [p], alpha, {}, notes, {"V_obs": v_obs, "pi": pi}, advisory=bool(notes))


_LONGEST_RUN_TABLES = {
    # M: (category lower edge v_0, category upper edge v_K, class probabilities)
    8: (1, 4, [0.21484375, 0.3671875, 0.23046875, 0.1875]),
    128: (4, 9, [0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847]),
    10000: (10, 16, [0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727]),
}


def _longest_runs(blocks: np.ndarray) -> np.ndarray:
    c = np.cumsum(blocks, axis=1, dtype=np.int64)
    at_zero = np.where(blocks == 0, c, 0)
    run = c - np.maximum.accumulate(at_zero, axis=1)
    return run.max(axis=1)


def longest_run_of_ones(stream, alpha: float = 0.01) -> TestResult:
    eps = _bits(stream)
    n = eps.size
    name = "longest_run"
    if n < 128:
        return _skip(name, {}, f"n={n} below the minimum 128")
    M = 8 if n < 6272 else (128 if n < 750000 else 10000)
    lo, hi, probs = _LONGEST_RUN_TABLES[M]
    K = len(probs) - 1
    N = n // M
    longest = _longest_runs(eps[: N * M].reshape(N, M))
    cats = np.clip(longest, lo, hi) - lo
    nu = np.bincount(cats, minlength=K + 1)
    expected = N * np.asarray(probs)
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    p = igamc(K / 2.0, chi2 / 2.0)
    return _result(name, [p], alpha, {"M": M, "K": K}, (), {"chi2": chi2, "nu": nu.tolist()})


def rank_probabilities(rows: int, cols: int) -> list[float]:
    """P(rank = r) for a uniform random rows x cols GF(2) matrix, r = 0..min."""
    out = []
    total = rows * cols
    for r in range(min(rows, cols) + 1):
        prod = Fraction(1)
        for i in range(r):
            num = (1 - Fraction(1, 2 ** (cols - i))) * (1 - Fraction(1, 2 ** (rows - i)))
            prod *= num / (1 - Fraction(1, 2 ** (r - i)))
        out.append(float(Fraction(2) ** (r * (rows + cols - r) - total) * prod))
    return out


def gf2_rank(matrices: np.ndarray) -> np.ndarray:
    """Ranks over GF(2) of a stack of 0/1 matrices, shape (count, rows, cols)."""
    mats = np.asarray(matrices, dtype=np.uint8)
    count, nrows, ncols = mats.shape
    weights = (1 << np.arange(ncols - 1, -1, -1)).astype(np.uint64)
    rows = (mats.astype(np.uint64) * weights).sum(axis=2).astype(np.uint64)
    rank = np.zeros(count, dtype=np.int64)
    idx = np.arange(count)
    row_ids = np.arange(nrows)
    for col in range(ncols):
        bit = np.uint64(1 << (ncols - 1 - col))
        has = (rows & bit) != 0
        eligible = has & (row_ids[None, :] >= rank[:, None])
        found = eligible.any(axis=1)
        if not found.any():
            continue
        sel = idx[found]
        piv = np.argmax(eligible[sel], axis=1)
        tgt = rank[sel]
        piv_rows = rows[sel, piv].copy()
        rows[sel, piv] = rows[sel, tgt]
        rows[sel, tgt] = piv_rows
        clear = ((rows[sel] & bit) != 0)
        clear[np.arange(sel.size), tgt] = False
        rows[sel] ^= np.where(clear, piv_rows[:, None], np.uint64(0))
        rank[sel] += 1
    return rank


def binary_matrix_rank(
    stream,
    rows: int = 32,
    cols: int = 32,
    alpha: float = 0.01,
    strict: bool = True,
    class_probs: Optional[tuple[float, float]] = None,
) -> TestResult:
    """Rank test on consecutive row-major ``rows x cols`` matrices.

    ``class_probs`` overrides the probabilities of full rank and of rank
    one below full; by default they are exact for the given shape.
    """
    eps = _bits(stream)
    n = eps.size
    name = "rank"
    params = {"rows": rows, "cols": cols}
    N = n // (rows * cols)
    notes = _advise([(N >= 38, f"{N} matrices of {rows}x{cols}; at least 38 required")])
    if N < 1 or (notes and strict):
        return _skip(name, params, notes[0] if notes else "no complete matrix")
    mats = eps[: N * rows * cols].reshape(N, rows, cols)
    ranks = gf2_rank(mats)
    full = min(rows, cols)
    if class_probs is None:
        probs = rank_probabilities(rows, cols)
        class_probs = (probs[full], probs[full - 1])
    p_full, p_less = class_probs
    p_rest = 1.0 - p_full - p_less
    f_full = int(np.count_nonzero(ranks == full))
    f_less = int(np.count_nonzero(ranks == full - 1))
    f_rest = N - f_full - f_less
    chi2 = (
        (f_full - p_full * N) ** 2 / (p_full * N)
        + (f_less - p_less * N) ** 2 / (p_less * N)
        + (f_rest - p_rest * N) ** 2 / (p_rest * N)
    )
    p = math.exp(-chi2 / 2.0)
    stats = {"chi2": chi2, "N": N, "F_full": f_full, "F_full_minus_1": f_less}
    return _result(name, [p], alpha, params, notes, stats, advisory=bool(notes))


def _cusum_p(z: int, n: int) -> float:
    sq = math.sqrt(n)
    s1 = 0.0
    for k in range(_trunc_div(_trunc_div(-n, z) + 1, 4), _trunc_div(_trunc_div(n, z) - 1, 4) + 1):
        s1 += normal_cdf((4 * k + 1) * z / sq) - normal_cdf((4 * k - 1) * z / sq)
    s2 = 0.0
    for k in range(_trunc_div(_trunc_div(-n, z) - 3, 4), _trunc_div(_trunc_div(n, z) - 1, 4) + 1):
        s2 += normal_cdf((4 * k + 3) * z / sq) - normal_cdf((4 * k + 1) * z / sq)
    return 1.0 - s1 + s2


def cumulative_sums(stream, alpha: float = 0.01) -> TestResult:
    """Forward and backward cumulative sums; p-values in that order."""
    eps = _bits(stream)
    n = eps.size
    name = "cumulative_sums"
    if n == 0:
        return _skip(name, {}, "empty stream")
    x = 2 * eps.astype(np.int64) - 1
    z_fwd = int(np.abs(np.cumsum(x)).max())
    z_bwd = int(np.abs(np.cumsum(x[::-1])).max())
    ps = [_cusum_p(z_fwd, n), _cusum_p(z_bwd, n)]
    notes = _advise([(n >= 100, f"n={n} below recommended 100")])
    return _result(
        name, ps, alpha, {}, notes, {"z_forward": z_fwd, "z_backward": z_bwd}, advisory=bool(notes)
    )


def _phi(bits: np.ndarray, m: int) -> float:
    n = bits.size
    counts = _pattern_counts(bits, m)
    c = counts[counts > 0] / n
    return float(np.sum(c * np.log(c)))


def approximate_entropy(
    stream, m: int = 10, alpha: float = 0.01, strict: bool = True
) -> TestResult:
    """Approximate entropy with block length ``m``.

    ``strict`` turns the block-length rule ``m < floor(log2 n) - 5`` into a
    skip; otherwise a violation only marks the result advisory.
    """
    eps = _bits(stream)
    n = eps.size
    name = "approximate_entropy"
    params = {"m": m}
    if n == 0 or m < 1:
        return _skip(name, params, "needs a non-empty stream and m >= 1")
    limit = int(math.floor(math.log2(n))) - 5
    rule = f"m={m} must be < floor(log2 n) - 5 = {limit}"
    if strict and m >= limit:
        return _skip(name, params, rule)
    apen = _phi(eps, m) - _phi(eps, m + 1)
    chi2 = 2.0 * n * (math.log(2.0) - apen)
    p = igamc(2 ** (m - 1), chi2 / 2.0)
    notes = _advise([(n >= 100, f"n={n} below recommended 100"), (m < limit, rule)])
    return _result(name, [p], alpha, params, notes, {"ApEn": apen, "chi2": chi2}, advisory=bool(notes))


def _psi2(bits: np.ndarray, m: int) -> float:
    if m <= 0:
        return 0.0
    n = bits.size
    counts = _pattern_counts(bits, m).astype(np.float64)
    return float(np.sum(counts**2)) * (2**m) / n - n


def serial(stream, m: int = 16, alpha: float = 0.01, strict: bool = True) -> TestResult:
    """Serial test; p-values for the first and second differences of psi^2."""
    eps = _bits(stream)
    n = eps.size
    name = "serial"
    params = {"m": m}
    if n == 0 or m < 2:
        return _skip(name, params, "needs a non-empty stream and m >= 2")
    limit = int(math.floor(math.log2(n))) - 2
    rule = f"m={m} must be < floor(log2 n) - 2 = {limit}"
    if strict and m >= limit:
        return _skip(name, params, rule)
    psi = [_psi2(eps, m), _psi2(eps, m - 1), _psi2(eps, m - 2)]
    d1 = psi[0] - psi[1]
    d2 = psi[0] - 2.0 * psi[1] + psi[2]
    ps = [igamc(2 ** (m - 2), d1 / 2.0), igamc(2 ** (m - 3), d2 / 2.0)]
    notes = _advise([(n >= 100, f"n={n} below recommended 100"), (m < limit, rule)])
    return _result(name, ps, alpha, params, notes, {"del1": d1, "del2": d2}, advisory=bool(notes))


def berlekamp_massey(bits) -> int:
    """Linear complexity of a GF(2) sequence."""
    c = b = 1  # connection polynomials, bit i = coefficient of x^i
    length, m = 0, -1
    window = 0  # bit k holds s[N - k]
    for N, s in enumerate(bits):
        window = (window << 1) | int(s)
        if (c & window).bit_count() & 1:
            t = c
            c ^= b << (N - m)
            if 2 * length <= N:
                length, m, b = N + 1 - length, N, t
    return length


_LC_PROBS = [Fraction(1, 96), Fraction(1, 32), Fraction(1, 8), Fraction(1, 2),
             Fraction(1, 4), Fraction(1, 16), Fraction(1, 48)]


def linear_complexity(
    stream, M: int = 500, alpha: float = 0.01, strict: bool = True
) -> TestResult:
    eps = _bits(stream)
    n = eps.size
    name = "linear_complexity"
    params = {"M": M}
    N = n // M if M > 0 else 0
    few_blocks = f"{N} blocks of M={M}; at least 200 required"
    if N < 1 or (strict and N < 200):
        return _skip(name, params, few_blocks)
    blocks = eps[: N * M].reshape(N, M)
    lcs = np.array([berlekamp_massey(row.tolist()) for row in blocks], dtype=np.float64)
    mu = M / 2.0 + (9.0 + (-1) ** (M + 1)) / 36.0 - (M / 3.0 + 2.0 / 9.0) / 2.0**M
    t = (-1) ** M * (lcs - mu) + 2.0 / 9.0
    edges = [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]
    nu = np.bincount(np.searchsorted(edges, t, side="left"), minlength=7)
    expected = N * np.array([float(p) for p in _LC_PROBS])
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    p = igamc(3.0, chi2 / 2.0)
    notes = _advise(
        [
            (n >= 10**6, f"n={n} below recommended 10^6"),
            (500 <= M <= 5000, f"M={M} outside recommended [500, 5000]"),
            (N >= 200, few_blocks),
        ]
    )
    return _result(name, [p], alpha, params, notes, {"chi2": chi2, "nu": nu.tolist()}, advisory=bool(notes))


# --- suite -------------------------------------------------------------------

TESTS: dict[str, Callable[[np.ndarray, SuiteParams], TestResult]] = {
    "approximate_entropy": lambda b, sp: approximate_entropy(b, sp.approx_entropy_m, sp.alpha),
    "block_frequency": lambda b, sp: block_frequency(b, sp.block_frequency_M, sp.alpha),
    "cumulative_sums": lambda b, sp: cumulative_sums(b, sp.alpha),
    "frequency": lambda b, sp: frequency_monobit(b, sp.alpha),
    "linear_complexity": lambda b, sp: linear_complexity(b, sp.linear_complexity_M, sp.alpha),
    "longest_run": lambda b, sp: longest_run_of_ones(b, sp.alpha),
    "rank": lambda b, sp: binary_matrix_rank(b, sp.rank_rows, sp.rank_cols, sp.alpha),
    "runs": lambda b, sp: runs(b, sp.alpha),
    "serial": lambda b, sp: serial(b, sp.serial_m, sp.alpha),
}


def run_suite(stream, params: Optional[SuiteParams] = None) -> SuiteReport:
    """Run every implemented test; results are ordered by test name."""
    params = params or SuiteParams()
    bits = _bits(stream)
    results = [TESTS[name](bits, params) for name in sorted(TESTS)]
    return SuiteReport(int(bits.size), params.alpha, results, params.to_dict())
