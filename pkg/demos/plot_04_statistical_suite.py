"""
The statistical test suite
==========================

Nine SP 800-22 tests run natively.  Short reference sequences reproduce the
published p-values; a million bits from a seeded generator pass every test.
"""

import numpy as np

from conebits import SuiteParams, run_suite
from conebits.sts import approximate_entropy, block_frequency, frequency_monobit, runs

# %%
# Reference sequences
print(frequency_monobit("1011010101").p_values)
print(block_frequency("0110011010", M=3).p_values)
print(runs("1001101011").p_values)
print(approximate_entropy("0100110101", m=3, strict=False).p_values)

# %%
# A million unstructured bits
bits = np.random.Generator(np.random.PCG64(2024)).integers(0, 2, size=10**6, dtype=np.uint8)
report = run_suite(bits, SuiteParams())
for r in report.results:
    print(f"{r.test_name:20s} {r.status:8s} {[round(p, 4) for p in r.p_values]}")
print("pass proportion", report.pass_proportion)
