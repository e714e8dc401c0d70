"""
Cones over a random graph
=========================

A seeded Erdős–Rényi graph is coned repeatedly.  The vertex equation for the
dual profile holds at most at the threshold cone count; the streams are
short, so most statistical tests report themselves as not applicable.
"""

import tempfile
from fractions import Fraction

from conebits import RngConfig, cone_failure_threshold, random_graph
from conebits.experiments import ExperimentConfig, experiment_random_graph

# %%
g = random_graph(50, Fraction(1, 2), RngConfig(20240501))
print(g)
print("threshold cone count:", cone_failure_threshold(g.num_vertices, g.num_edges))

# %%
with tempfile.TemporaryDirectory() as tmp:
    table = experiment_random_graph(ExperimentConfig.preset("random_graph"), tmp)
for vid, agg in table.aggregates.items():
    ran = sum(1 for r in table.rows if r.variant == vid and r.status != "skipped")
    print(f"{vid}: {agg['bit_length']:5d} bits, {ran} p-values, pass proportion {agg['pass_proportion']}")
