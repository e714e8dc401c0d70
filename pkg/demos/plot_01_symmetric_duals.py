"""
Symmetric duals of a simplex
============================

The complex whose h-vector is all ones has row ``L`` of Pascal's triangle,
minus its end ones, as f-vector.  Every such f-vector reads the same
backwards, and coning breaks that symmetry one step at a time.
"""

from conebits import f_to_h, h_to_f, is_symmetrical, iterate_cone, simplex_dual_f, HVector

# %%
# Dual of the simplex with four ones in its h-vector
f = simplex_dual_f(4)
print("f =", f.components, "symmetrical:", is_symmetrical(f))
print("h =", f_to_h(f).components)

# %%
# The same vector from the inverse transform
print("h_to_f(1,1,1,1) =", h_to_f(HVector([1, 1, 1, 1])).components)

# %%
# Coning appends a zero to h and destroys the palindrome in f
for j in range(4):
    fj = iterate_cone(f, j)
    print(f"j={j}  f={fj.components}  h={f_to_h(fj).components}  symmetrical={is_symmetrical(fj)}")

# %%
# Larger lengths: the components are exact big integers
f = simplex_dual_f(551)
print("L=551:", len(f), "components, largest has", max(f).bit_length(), "bits")
