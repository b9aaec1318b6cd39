"""Agent files.

Layout (all integers little-endian)::

    magic      8 bytes  b"CUBETDAG"
    version    u32
    header     u32 length + UTF-8 JSON (variant, metric, representation,
               cell order, config, provenance, table sizes)
    tuples     u32 count, then per tuple: u32 length, cells u32[], radices u32[]
    tables     u64 compressed length + zlib(u64 count, ids u64[], w f64[],
               tc_n f64[], tc_a f64[])  -- only entries with any non-zero bits
    crc32      u32 over everything above

Weights round-trip bit-exactly since the raw IEEE-754 bytes are stored.
"""

from __future__ import annotations

import json
import os
import struct
import zlib

import numpy as np

from .board import NTupleDef, Representation
from .cube import CubeVariant, VariantMismatchError
from .network import NetConfig, NTupleSystem

MAGIC = b"CUBETDAG"
VERSION = 1
CELL_ORDER = "first cell most significant"


class AgentFormatError(ValueError):
    pass


class VersionMismatchError(AgentFormatError):
    pass


class ChecksumError(AgentFormatError):
    pass


class TruncatedFileError(AgentFormatError):
    pass


def _nonzero_ids(net: NTupleSystem) -> np.ndarray:
    mask = net.w.view(np.uint64) != 0
    if net.config.tcl:
        mask |= net.tc_n.view(np.uint64) != 0
        mask |= net.tc_a.view(np.uint64) != 0
    return np.flatnonzero(mask).astype("<u8")


def dumps(net: NTupleSystem) -> bytes:
    header = {
        "size": net.variant.size.value,
        "metric": net.variant.metric.value,
        "representation": net.representation.value,
        "cell_order": CELL_ORDER,
        "config": net.config.to_dict(),
        "provenance": net.provenance,
        "weights": int(net.w.size),
    }
    hj = json.dumps(header, sort_keys=True).encode()
    parts = [MAGIC, struct.pack("<II", VERSION, len(hj)), hj, struct.pack("<I", net.k)]
    for t in net.tuples:
        parts.append(struct.pack(f"<I{len(t.cells)}I{len(t.cells)}I", len(t.cells), *t.cells, *t.radices))
    ids = _nonzero_ids(net)
    body = [struct.pack("<Q", ids.size), ids.tobytes(), net.w[ids].astype("<f8").tobytes()]
    if net.config.tcl:
        body += [net.tc_n[ids].astype("<f8").tobytes(), net.tc_a[ids].astype("<f8").tobytes()]
    blob = zlib.compress(b"".join(body), 6)
    parts += [struct.pack("<Q", len(blob)), blob]
    data = b"".join(parts)
    return data + struct.pack("<I", zlib.crc32(data))


def save_agent(net: NTupleSystem, path) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as f:
        f.write(dumps(net))
    os.replace(tmp, path)


class _Reader:
    def __init__(self, data: bytes):
        self.data, self.pos = data, 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedFileError("agent file ends prematurely")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def loads(data: bytes, expect: CubeVariant | None = None) -> NTupleSystem:
    if len(data) < len(MAGIC) or data[:len(MAGIC)] != MAGIC:
        raise AgentFormatError("not an agent file (bad magic)")
    r = _Reader(data)
    r.take(len(MAGIC))
    version, hlen = r.unpack("<II")
    if version != VERSION:
        raise VersionMismatchError(f"agent file version {version}, expected {VERSION}")
    if len(data) < r.pos + 4:
        raise TruncatedFileError("agent file ends prematurely")
    if zlib.crc32(data[:-4]) != struct.unpack("<I", data[-4:])[0]:
        # a short file also fails here; tell the two apart where possible
        try:
            _parse(data[:-4], hlen)
        except TruncatedFileError:
            raise
        except Exception:
            pass
        raise ChecksumError("agent file checksum mismatch")
    net = _parse(data[:-4], hlen)
    if expect is not None and expect != net.variant:
        raise VariantMismatchError(f"agent was trained for {net.variant}, not {expect}")
    return net


def _parse(payload: bytes, hlen: int) -> NTupleSystem:
    r = _Reader(payload)
    r.pos = len(MAGIC) + 8
    header = json.loads(r.take(hlen).decode())
    if header.get("cell_order") != CELL_ORDER:
        raise AgentFormatError(f"unsupported cell order {header.get('cell_order')!r}")
    (count,) = r.unpack("<I")
    tuples = []
    for _ in range(count):
        (m,) = r.unpack("<I")
        vals = r.unpack(f"<{2 * m}I")
        tuples.append(NTupleDef(tuple(vals[:m]), tuple(vals[m:])))
    variant = CubeVariant.from_names(header["size"], header["metric"])
    config = NetConfig.from_dict(header["config"])
    net = NTupleSystem(variant, Representation(header["representation"]), tuples, config,
                       header.get("provenance"))
    if net.w.size != header["weights"]:
        raise AgentFormatError("weight count disagrees with tuple definitions")
    (blen,) = r.unpack("<Q")
    try:
        body = zlib.decompress(r.take(blen))
    except zlib.error as e:
        raise AgentFormatError(f"corrupt weight block: {e}") from None
    (n,) = struct.unpack_from("<Q", body)
    arrays = 4 if config.tcl else 2
    if len(body) != 8 + 8 * n * arrays:
        raise TruncatedFileError("weight block has the wrong length")
    ids = np.frombuffer(body, "<u8", n, 8).astype(np.int64)
    if n and ids.max() >= net.w.size:
        raise AgentFormatError("weight id out of range")
    net.w[ids] = np.frombuffer(body, "<f8", n, 8 + 8 * n)
    if config.tcl:
        net.tc_n[ids] = np.frombuffer(body, "<f8", n, 8 + 16 * n)
        net.tc_a[ids] = np.frombuffer(body, "<f8", n, 8 + 24 * n)
    if r.pos != len(payload):
        raise AgentFormatError("trailing bytes after weight block")
    return net


def load_agent(path, expect: CubeVariant | None = None) -> NTupleSystem:
    with open(path, "rb") as f:
        return loads(f.read(), expect)
