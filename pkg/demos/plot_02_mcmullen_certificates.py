"""
McMullen certificates and the coning threshold
==============================================

A d-polytope profile passes McMullen's conditions when its g-vector is
symmetric, rises to the middle, and grows no faster than Macaulay's
pseudo-power allows.  For iterated cones over a graph the vertex-count
equation can hold for at most one cone count.
"""

from conebits import (
    FVector,
    check_mcmullen,
    cone_failure_threshold,
    g_vector,
    iterate_cone,
    macaulay_rep,
    polytope_profile,
    pseudo_power,
    vertex_equation_holds,
)

# %%
# The cube: its g-vector is its h-vector (1, 3, 3, 1)
cube = FVector([8, 12, 6])
print("g(cube) =", g_vector(cube, 3).components)
print("McMullen:", check_mcmullen(cube, 3))

# %%
# Macaulay representation and pseudo-power
print("8 as a 3-binomial sum:", macaulay_rep(8, 3), "-> 8^<3> =", pseudo_power(8, 3))

# %%
# Cones over K4 (s=4 vertices, t=6 edges).  The vertex equation holds only at
# j = (t - s) / (s - 2) = 1.
s, t = 4, 6
print("threshold:", cone_failure_threshold(s, t))
f = FVector([s, t])
for j in range(6):
    fj = iterate_cone(f, j)
    profile = polytope_profile(fj)
    print(f"j={j}  vertex equation {vertex_equation_holds(profile, j + 2)}  "
          f"McMullen passed {check_mcmullen(profile, j + 2).passed}")
