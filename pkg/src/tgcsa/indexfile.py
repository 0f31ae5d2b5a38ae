"""One container format for every index kind.

A fixed little-endian header carries the shape parameters, then a run of
length-prefixed sections, each padded to eight bytes so the payloads
stay alignment-friendly. Which sections appear, and in what order, is
fixed by the codec byte: bitmaps and the Psi sections for the compressed
index, the three streams and their offset tables for the adjacency log.
Serialization is canonical, so serializing what was just deserialized
reproduces the input byte for byte.
"""

from __future__ import annotations

import struct

import numpy as np

from . import psienc
from .baseline import EdgeLogIndex
from .bitseq import BitSequence
from .corpus import AlphabetMap
from .sacsa import TgcsaIndex

MAGIC = b"TGX1"
VERSION = 1
EDGELOG_TAG = 16

_SEMANTICS = {"interval": 0, "incremental": 1, "point": 2}
_SEMANTICS_BACK = {v: k for k, v in _SEMANTICS.items()}

_HEAD = struct.Struct("<4sHBBHBB4x")
_SHAPE = struct.Struct("<QQQQ")
_COUNT = struct.Struct("<II")


def _emit(head: bytes, sections: list[bytes]) -> bytes:
    out = bytearray(head)
    out += _COUNT.pack(len(sections), 0)
    for s in sections:
        out += struct.pack("<Q", len(s))
        out += s
        out += b"\x00" * ((-len(s)) % 8)
    return bytes(out)


def serialize_index(idx) -> bytes:
    """The full byte image of an index."""
    if idx.kind == "tgcsa":
        head = _HEAD.pack(MAGIC, VERSION, idx.arity, idx.psi.tag,
                          idx.psi.t_psi, _SEMANTICS[idx.semantics], 0)
        head += _SHAPE.pack(idx.n, idx.nu, idx.tau, idx.sigma)
        sections = [idx.am.B.serialize(), idx.D.serialize()]
        sections += idx.psi.to_sections()
        return _emit(head, sections)
    if idx.kind == "edgelog":
        head = _HEAD.pack(MAGIC, VERSION, 4, EDGELOG_TAG, 0, 0, 0)
        head += _SHAPE.pack(idx.n, idx.nu, idx.tau, 0)

        def i64(a):
            return np.asarray(a, dtype="<i8").tobytes()

        sections = [idx.adj_stream, i64(idx.adj_off), i64(idx.edge_base),
                    idx.time_stream, i64(idx.time_off),
                    idx.rev_stream, i64(idx.rev_off)]
        return _emit(head, sections)
    raise TypeError(f"cannot serialize an index of kind {idx.kind!r}")


def deserialize_index(buf: bytes):
    """Rebuild an index from its byte image."""
    if len(buf) < _HEAD.size + _SHAPE.size + _COUNT.size:
        raise ValueError("truncated index image")
    magic, version, arity, codec, t_psi, flags, _ = _HEAD.unpack_from(buf, 0)
    if magic != MAGIC:
        raise ValueError("not an index image (bad magic)")
    if version != VERSION:
        raise ValueError(f"unsupported index format version {version}")
    n, nu, tau, sigma = _SHAPE.unpack_from(buf, _HEAD.size)
    count, _ = _COUNT.unpack_from(buf, _HEAD.size + _SHAPE.size)
    pos = _HEAD.size + _SHAPE.size + _COUNT.size
    sections = []
    for _ in range(count):
        if pos + 8 > len(buf):
            raise ValueError("truncated index image")
        (length,) = struct.unpack_from("<Q", buf, pos)
        pos += 8
        if pos + length > len(buf):
            raise ValueError("truncated index image")
        sections.append(buf[pos:pos + length])
        pos += length + ((-length) % 8)
    if pos != len(buf):
        raise ValueError("truncated index image")

    if codec == EDGELOG_TAG:
        def i64(b):
            return np.frombuffer(b, dtype="<i8")
        adj, adj_off, edge_base, times, time_off, rev, rev_off = sections
        return EdgeLogIndex(nu, tau, n, adj, i64(adj_off), i64(edge_base),
                            times, i64(time_off), rev, i64(rev_off))

    if flags not in _SEMANTICS_BACK:
        raise ValueError(f"unknown semantics flag {flags}")
    B = BitSequence.deserialize(sections[0])
    D = BitSequence.deserialize(sections[1])
    am = AlphabetMap(arity, nu, tau, B)
    if am.sigma != sigma:
        raise ValueError("alphabet bitmap disagrees with the header")
    psi = psienc.from_sections(codec, sections[2:], D, t_psi)
    return TgcsaIndex(am, D, psi, n, _SEMANTICS_BACK[flags])


def save_index(idx, path) -> int:
    """Write the index image; returns the byte count."""
    blob = serialize_index(idx)
    with open(path, "wb") as fh:
        fh.write(blob)
    return len(blob)


def load_index(path):
    with open(path, "rb") as fh:
        return deserialize_index(fh.read())
