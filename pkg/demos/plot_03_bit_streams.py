"""
Packing face counts into bits
=============================

Each integer contributes its minimal binary form, most significant bit
first, with no gaps.  The byte-aligned packing pads every integer to a whole
number of bytes instead; the padding zeros make that layout visibly biased.
"""

import tempfile
from pathlib import Path

import numpy as np

from conebits import encode_vector, encode_vector_byte_aligned, read_stream, simplex_dual_f, write_stream

# %%
s = encode_vector([5, 3])
print(s.to01(), s.payload.hex(), s.bit_length)

# %%
# Ones fraction of both layouts for the same source vector
f = simplex_dual_f(300)
for name, enc in [("bitwise", encode_vector), ("byte-aligned", encode_vector_byte_aligned)]:
    st = enc(f.components)
    print(f"{name:12s} {st.bit_length:7d} bits  ones fraction {st.bits().mean():.4f}")

# %%
# Streams on disk carry a JSON sidecar with their exact bit length
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "dual300.bin"
    mpath = write_stream(encode_vector(f.components), path, metadata={"length": 300})
    print(mpath.name, mpath.read_text())
    assert np.array_equal(read_stream(path).bits(), encode_vector(f.components).bits())
