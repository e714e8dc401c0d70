import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conebits.bitcodec import BitStream
from conebits.special import erfc, igam, igamc, normal_cdf
from conebits.sts import (
    SuiteParams,
    approximate_entropy,
    berlekamp_massey,
    binary_matrix_rank,
    block_frequency,
    clustering_fraction,
    cumulative_sums,
    frequency_monobit,
    gf2_rank,
    linear_complexity,
    longest_run_of_ones,
    rank_probabilities,
    run_suite,
    runs,
    serial,
)
from oracles import lfsr_bits, linear_complexity_bruteforce, naive_gf2_rank

TOL = 1e-4


def pi_bits(n=100):
    """First n binary digits of pi (the 100-bit sequence of the reference examples)."""
    with mpmath.workdps(60):
        v = int(mpmath.floor(mpmath.pi * mpmath.mpf(2) ** (n - 2)))
    return format(v, "b")


E128 = (
    "11001100000101010110110001001100111000000000001001001101010100010001"
    "001111010110100000001101011111001100111001101101100010110010"
)


# --- reference worked examples --------------------------------------------------------


@pytest.mark.parametrize(
    "fn,bits,kwargs,expected",
    [
        (frequency_monobit, "1011010101", {}, [0.527089]),
        (block_frequency, "0110011010", {"M": 3}, [0.801252]),
        (runs, "1001101011", {}, [0.147232]),
        (approximate_entropy, "0100110101", {"m": 3, "strict": False}, [0.261961]),
        (serial, "0011011101", {"m": 3, "strict": False}, [0.808792, 0.670320]),
        (cumulative_sums, "1011010111", {}, [0.411659, 0.411659]),
        (longest_run_of_ones, E128, {}, [0.180609]),
    ],
)
def test_short_worked_examples(fn, bits, kwargs, expected):
    res = fn(bits, **kwargs)
    assert res.p_values == pytest.approx(expected, abs=TOL)


@pytest.mark.parametrize(
    "fn,kwargs,expected",
    [
        (frequency_monobit, {}, [0.109599]),
        (block_frequency, {"M": 10}, [0.706438]),
        (runs, {}, [0.500798]),
        (cumulative_sums, {}, [0.219194, 0.114866]),
        (approximate_entropy, {"m": 2, "strict": False}, [0.235301]),
    ],
)
def test_pi_worked_examples(fn, kwargs, expected):
    bits = pi_bits()
    assert bits.startswith("1100100100001111110110101010001")
    assert fn(bits, **kwargs).p_values == pytest.approx(expected, abs=TOL)


def test_rank_worked_example():
    # the 3x3 example is scored with the 32x32 class probabilities, as printed
    res = binary_matrix_rank(
        "01011001001010101101", 3, 3, strict=False, class_probs=(0.2888, 0.5776)
    )
    assert res.p_values == pytest.approx([0.741948], abs=TOL)
    assert res.status == "advisory"


def test_rank_short_stream_skips_when_strict():
    res = binary_matrix_rank("0" * 1000)
    assert res.skipped and res.passed is None


def test_berlekamp_massey_example():
    assert berlekamp_massey([int(c) for c in "1101011110001"]) == 4


def test_runs_prerequisite():
    # ones proportion 0.9 is too far from 1/2 for the runs test to apply
    res = runs("1" * 90 + "0" * 10)
    assert res.p_values == [0.0] and not res.passed


# --- properties -----------------------------------------------------------------------


bitstrings = st.text(alphabet="01", min_size=2, max_size=300)


@settings(max_examples=200)
@given(bitstrings)
def test_monobit_complement_symmetry(bits):
    flipped = bits.translate(str.maketrans("01", "10"))
    assert frequency_monobit(bits).p_values == pytest.approx(frequency_monobit(flipped).p_values)


@settings(max_examples=200)
@given(bitstrings)
def test_cusum_reverse_swaps_modes(bits):
    fwd, bwd = cumulative_sums(bits).p_values
    rfwd, rbwd = cumulative_sums(bits[::-1]).p_values
    assert (fwd, bwd) == pytest.approx((rbwd, rfwd))


@settings(max_examples=200)
@given(st.lists(st.integers(0, 1), max_size=60))
def test_bm_matches_bruteforce_short(bits):
    if len(bits) > 14:
        bits = bits[:14]
    assert berlekamp_massey(bits) == linear_complexity_bruteforce(bits)


@pytest.mark.parametrize("seed", range(20))
def test_bm_recovers_lfsr(seed):
    rng = np.random.default_rng(seed)
    L = int(rng.integers(1, 17))
    taps = sorted({int(t) for t in rng.integers(1, L + 1, size=3)} | {L})
    state = [int(b) for b in rng.integers(0, 2, size=L)]
    bits, _ = lfsr_bits(taps, state, 4 * L + 10)
    got = berlekamp_massey(bits)
    assert got <= L
    if L <= 8:
        assert got == linear_complexity_bruteforce(bits)


@pytest.mark.parametrize("L", [1, 5, 16])
def test_bm_primitive_lfsr_full_length(L):
    # a single impulse followed by x^L recurrence: s_t = s_{t-L}
    bits, _ = lfsr_bits([L], [1] + [0] * (L - 1), 3 * L)
    assert berlekamp_massey(bits) == L


def test_gf2_rank_matches_naive():
    rng = np.random.default_rng(3)
    mats = rng.integers(0, 2, size=(1000, 8, 8), dtype=np.uint8)
    # thin out some rows so low ranks appear too
    mats[::3, 4:, :] = 0
    mats[1::5] = mats[1::5] & mats[1::5, :1, :]
    got = gf2_rank(mats)
    for m, r in zip(mats, got):
        rows = [int("".join(map(str, row)), 2) for row in m]
        assert r == naive_gf2_rank(rows)


@pytest.mark.parametrize("shape", [(32, 32), (3, 3), (4, 6)])
def test_rank_probabilities_total(shape):
    p = rank_probabilities(*shape)
    assert sum(p) == pytest.approx(1.0, abs=1e-12)
    if shape == (32, 32):
        assert p[32] == pytest.approx(0.2888, abs=1e-4)
        assert p[31] == pytest.approx(0.5776, abs=1e-4)


def test_rank_probabilities_by_enumeration():
    rows, cols = 3, 3
    counts = np.zeros(4)
    for k in range(2 ** (rows * cols)):
        m = [(k >> (cols * r)) & ((1 << cols) - 1) for r in range(rows)]
        counts[naive_gf2_rank(m)] += 1
    assert rank_probabilities(rows, cols) == pytest.approx(list(counts / counts.sum()), abs=1e-15)


def test_linear_complexity_skip_and_advisory():
    bits = np.random.default_rng(0).integers(0, 2, size=200 * 500)
    assert linear_complexity(bits[:1000]).skipped
    res = linear_complexity(bits)
    assert res.status == "advisory" and len(res.p_values) == 1


def test_serial_and_apen_block_rule():
    bits = "01" * 512
    assert serial(bits, m=16).skipped
    assert approximate_entropy(bits, m=10).skipped
    assert serial(bits, m=16, strict=False).status == "advisory"


# --- special functions ----------------------------------------------------------------


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0, 7.5, 64.0, 512.0, 2.0**15, 2.0**16])
@pytest.mark.parametrize("ratio", [0.01, 0.3, 0.9, 1.0, 1.1, 2.0, 4.0])
def test_igamc_against_mpmath(a, ratio):
    x = a * ratio
    ref = float(mpmath.gammainc(a, x, mpmath.inf, regularized=True))
    assert abs(igamc(a, x) - ref) < 1e-10
    assert abs(igam(a, x) - (1 - ref)) < 1e-10


@pytest.mark.parametrize("x", [-3.0, -0.5, 0.0, 0.1, 1.0, 2.5, 6.0])
def test_erfc_and_normal_cdf(x):
    assert abs(erfc(x) - float(mpmath.erfc(x))) < 1e-10
    assert abs(normal_cdf(x) - float(mpmath.ncdf(x))) < 1e-10


def test_igamc_edges():
    assert igamc(2.0, 0.0) == 1.0
    assert igamc(2.0, 1e5) == 0.0


# --- suite ----------------------------------------------------------------------------


def test_suite_on_pinned_prng():
    bits = np.random.Generator(np.random.PCG64(2024)).integers(0, 2, size=10**6, dtype=np.uint8)
    report = run_suite(BitStream.from_bits(bits))
    assert len(report.results) == 9
    assert all(not r.skipped for r in report.results)
    assert report.pass_proportion >= 0.96
    assert report.clustering_fraction < 0.2


def test_suite_all_zeros_fails():
    report = run_suite("0" * 20000, SuiteParams(serial_m=8, approx_entropy_m=6))
    assert report.pass_proportion < 0.5
    assert not next(r for r in report.results if r.test_name == "frequency").passed


def test_suite_order_and_dict():
    report = run_suite(pi_bits())
    names = [r.test_name for r in report.results]
    assert names == sorted(names)
    d = report.to_dict()
    assert d["bit_length"] == 100
    assert len(d["results"]) == 9


@pytest.mark.parametrize(
    "ps,expected",
    [([], None), ([0.5, 0.001, 0.995, 0.2], 0.5), ([0.01, 0.99], 0.0)],
)
def test_clustering_fraction(ps, expected):
    assert clustering_fraction(ps) == expected


def test_normal_cdf_symmetry():
    assert normal_cdf(1.3) + normal_cdf(-1.3) == pytest.approx(1.0)
    assert math.isclose(normal_cdf(0.0), 0.5)
