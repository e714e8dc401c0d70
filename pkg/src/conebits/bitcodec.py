"""Integer vectors to exact-length bit streams, and stream files.

Two packings are supported.  The bitwise packing concatenates the minimal
binary form of every integer with no gaps.  The byte-aligned packing starts
every integer on a byte boundary, which leaves leading zero bits in most
bytes; it exists to reproduce that flawed layout, not for real use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional

import numpy as np

__all__ = [
    "BitStream",
    "encode_integer",
    "encode_vector",
    "encode_vector_byte_aligned",
    "manifest_path",
    "write_stream",
    "read_stream",
]


@dataclass(frozen=True)
class BitStream:
    """Bits packed most-significant-bit first; padding bits are zero."""

    bit_length: int
    payload: bytes

    def __post_init__(self):
        if self.bit_length < 0:
            raise ValueError("bit_length must be non-negative")
        if len(self.payload) != (self.bit_length + 7) // 8:
            raise ValueError(
                f"{len(self.payload)} bytes cannot hold exactly {self.bit_length} bits"
            )
        pad = (-self.bit_length) % 8
        if pad and self.payload[-1] & ((1 << pad) - 1):
            raise ValueError("padding bits beyond bit_length must be zero")

    def __len__(self) -> int:
        return self.bit_length

    @classmethod
    def from_bits(cls, bits) -> "BitStream":
        """Build from a '0'/'1' string or an array-like of 0/1 values."""
        if isinstance(bits, str):
            if set(bits) - {"0", "1"}:
                raise ValueError("bit strings may only contain '0' and '1'")
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(bits, dtype=np.uint8)
            if arr.size and arr.max() > 1:
                raise ValueError("bits must be 0 or 1")
        return cls(int(arr.size), np.packbits(arr).tobytes())

    def bits(self) -> np.ndarray:
        """Unpacked bits as a uint8 array of length ``bit_length``."""
        raw = np.frombuffer(self.payload, dtype=np.uint8)
        return np.unpackbits(raw)[: self.bit_length]

    def to01(self) -> str:
        return (self.bits() + ord("0")).tobytes().decode("ascii")

    def __add__(self, other: "BitStream") -> "BitStream":
        return BitStream.from_bits(np.concatenate([self.bits(), other.bits()]))


def encode_integer(v: int) -> str:
    """Minimal binary form, MSB first; 0 encodes as the single bit ``0``."""
    if v < 0:
        raise ValueError(f"cannot encode negative integer {v}")
    return format(v, "b")


def _pack(bitstring: str) -> BitStream:
    n = len(bitstring)
    if n == 0:
        return BitStream(0, b"")
    pad = (-n) % 8
    value = int(bitstring, 2) << pad
    return BitStream(n, value.to_bytes((n + pad) // 8, "big"))


def encode_vector(components: Iterable[int]) -> BitStream:
    return _pack("".join(encode_integer(v) for v in components))


def encode_vector_byte_aligned(components: Iterable[int]) -> BitStream:
    chunks = []
    for v in components:
        b = encode_integer(v)
        chunks.append(b.zfill(len(b) + (-len(b)) % 8))
    return _pack("".join(chunks))


# --- files -------------------------------------------------------------------


def manifest_path(path) -> Path:
    """``stream.bin`` -> ``stream.manifest.json``."""
    path = Path(path)
    return path.with_name(path.stem + ".manifest.json")


def _dump_json(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_stream(
    stream: BitStream,
    path,
    format: str = "raw",
    metadata: Optional[Mapping] = None,
) -> Path:
    """Write a stream and its sidecar manifest; returns the manifest path.

    ``raw`` writes the payload bytes verbatim, ``ascii`` writes one '0'/'1'
    character per bit followed by a newline.  The manifest records
    ``bit_length`` plus whatever ``metadata`` supplies (source vector,
    construction, parameters).
    """
    path = Path(path)
    if format not in ("raw", "ascii"):
        raise ValueError(f"unknown stream format {format!r}")
    manifest = dict(metadata or {})
    manifest["bit_length"] = stream.bit_length
    manifest["format"] = format
    mpath = manifest_path(path)
    try:
        if format == "raw":
            path.write_bytes(stream.payload)
        else:
            path.write_text(stream.to01() + "\n")
        _dump_json(manifest, mpath)
    except OSError as exc:
        raise OSError(f"{exc.filename or path}: {exc.strerror}") from exc
    return mpath


def read_stream(path, format: str = "raw", bit_length: Optional[int] = None) -> BitStream:
    """Inverse of :func:`write_stream`.

    Raw files take their length from ``bit_length`` or, if omitted, from the
    sidecar manifest.
    """
    path = Path(path)
    try:
        if format == "ascii":
            text = path.read_text().rstrip("\n")
            try:
                return BitStream.from_bits(text)
            except ValueError:
                raise ValueError(f"{path}: malformed ascii stream") from None
        if format != "raw":
            raise ValueError(f"unknown stream format {format!r}")
        payload = path.read_bytes()
        if bit_length is None:
            meta = json.loads(manifest_path(path).read_text())
            bit_length = int(meta["bit_length"])
    except OSError as exc:
        raise OSError(f"{exc.filename or path}: {exc.strerror}") from exc
    need = (bit_length + 7) // 8
    if len(payload) < need:
        raise ValueError(
            f"{path}: {len(payload)} bytes is shorter than bit_length {bit_length}"
        )
    if len(payload) > need:
        raise ValueError(f"{path}: {len(payload)} bytes is longer than bit_length {bit_length}")
    try:
        return BitStream(bit_length, payload)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
