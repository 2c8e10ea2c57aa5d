"""Binary field snapshots.

Layout (little-endian): magic ``YMS1``; five uint32 ``version=1, n, nx, ny,
nz``; uint8 degree; then for every cell in flat-index order its ``n*n``
complex entries row-major as (real, imag) float64 pairs.
"""

import struct

import numpy as np

from ..errors import FormatError
from ..lattice import AlgCochain, CubicalComplex3

MAGIC = b"YMS1"
VERSION = 1
_HEADER = struct.Struct("<4s5IB")


def encode_snapshot(c: AlgCochain) -> bytes:
    nx, ny, nz = c.cx.shape
    head = _HEADER.pack(MAGIC, VERSION, c.n, nx, ny, nz, c.degree)
    return head + np.ascontiguousarray(c.values, dtype="<c16").tobytes()


def decode_snapshot(buf: bytes, h=1.0) -> AlgCochain:
    if len(buf) < _HEADER.size:
        raise FormatError(f"truncated header: {len(buf)} of {_HEADER.size} bytes")
    magic, version, n, nx, ny, nz, degree = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported snapshot version {version}")
    if degree > 3:
        raise FormatError(f"bad degree {degree}")
    cx = CubicalComplex3(nx, ny, nz, h)
    count = cx.ncells(degree) * n * n
    need = _HEADER.size + 16 * count
    if len(buf) < need:
        raise FormatError(f"truncated payload at byte offset {len(buf)}, expected {need} bytes")
    if len(buf) > need:
        raise FormatError(f"trailing data at byte offset {need}")
    vals = np.frombuffer(buf, dtype="<c16", count=count, offset=_HEADER.size)
    return AlgCochain(cx, degree, vals.astype(np.complex128).reshape(-1, n, n))


def write_snapshot(path, c: AlgCochain):
    with open(path, "wb") as fh:
        fh.write(encode_snapshot(c))


def read_snapshot(path, h=1.0) -> AlgCochain:
    with open(path, "rb") as fh:
        return decode_snapshot(fh.read(), h)
