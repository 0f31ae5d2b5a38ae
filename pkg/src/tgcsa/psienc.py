"""Psi encodings.

Three ways to store the permutation, all exposing the same small surface
(access, range, size_bits, serialization sections):

* plain: every value bit-packed at a fixed width. Fast, no compression.
* vbyte-rle / vbyte-rle-select: per-group gap streams. Within a group the
  first value is a sample; the rest are byte codes for the successive
  differences, with maximal runs of +1 folded into a <1, length> pair.
  A second sample level cuts decode work to at most t_psi steps. The
  select variant drops the stored positions and recovers them from the
  group bitmap instead, which is smaller and a touch slower.
* huff-rle-opt: samples every t_psi positions globally, then Huffman-codes
  run lengths, small literal gaps, and escape classes for everything
  else into a single bitstream.

Byte codes use 7-bit little-endian groups with the high bit set on the
final byte only, so 5 encodes as 0x85 and 135 as 0x07 0x81. Gaps inside
a group are never zero (the permutation has no repeats) but can be
negative when duplicate contacts or the end-section remap invert the
order; those are written as an escaped 0 followed by the magnitude.
"""

from __future__ import annotations

import heapq
import struct
from collections import Counter

import numpy as np

from .bitseq import BitSequence

TAGS = {"plain": 0, "vbyte-rle": 1, "vbyte-rle-select": 2, "huff-rle-opt": 3}
NAMES = {tag: name for name, tag in TAGS.items()}


def vbyte_encode(value: int, out: bytearray | None = None) -> bytearray:
    """Append the byte code of a non-negative integer; returns the buffer."""
    if value < 0:
        raise ValueError("byte codes hold non-negative integers only")
    if out is None:
        out = bytearray()
    while value >= 0x80:
        out.append(value & 0x7F)
        value >>= 7
    out.append(0x80 | value)
    return out


def vbyte_decode(buf, pos: int = 0) -> tuple[int, int]:
    """Decode one byte code at pos; returns (value, position after it)."""
    value = 0
    shift = 0
    while True:
        b = buf[pos]
        pos += 1
        if b & 0x80:
            return value | ((b & 0x7F) << shift), pos
        value |= b << shift
        shift += 7


def _pack_fixed(vals: np.ndarray, width: int) -> bytes:
    """Pack vals (already reduced to fit) into width-bit little-endian slots."""
    if len(vals) == 0:
        return b""
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((vals[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return np.packbits(bits.ravel(), bitorder="little").tobytes()


def _unpack_fixed(payload: bytes, count: int, width: int) -> np.ndarray:
    if count == 0:
        return np.zeros(0, dtype=np.uint64)
    raw = np.unpackbits(np.frombuffer(payload, dtype=np.uint8),
                        count=count * width, bitorder="little")
    shifts = np.arange(width, dtype=np.uint64)
    return (raw.reshape(count, width).astype(np.uint64) << shifts).sum(axis=1)


class PlainPsi:
    """Fixed-width array: value v stored as v-1 in ceil(log2 N) bits."""

    name = "plain"
    tag = 0
    t_psi = 0

    def __init__(self, vals: np.ndarray):
        self._vals = np.ascontiguousarray(vals, dtype=np.int64)
        n = len(self._vals)
        self.width = max(1, (n - 1).bit_length()) if n else 1

    @classmethod
    def build(cls, psi: np.ndarray, D=None, t_psi: int = 0) -> "PlainPsi":
        return cls(psi)

    def __len__(self):
        return len(self._vals)

    def access(self, i: int) -> int:
        return int(self._vals[i - 1])

    def range(self, lo: int, hi: int) -> list[int]:
        if lo > hi:
            return []
        return self._vals[lo - 1:hi].tolist()

    def size_bits(self) -> int:
        return len(self._vals) * self.width

    def to_sections(self) -> list[bytes]:
        head = struct.pack("<QB7x", len(self._vals), self.width)
        packed = _pack_fixed((self._vals - 1).astype(np.uint64), self.width)
        return [head + packed]

    @classmethod
    def from_sections(cls, sections, D=None, t_psi: int = 0) -> "PlainPsi":
        blob = sections[0]
        n, width = struct.unpack_from("<QB", blob, 0)
        vals = _unpack_fixed(blob[16:], n, width).astype(np.int64) + 1
        out = cls(vals)
        if out.width != width:
            raise ValueError("fixed-width payload disagrees with its header")
        return out


class VbyteRlePsi:
    """Gap-coded groups with run folding and two sample levels.

    First level, one entry per group: the opening value (s0) and the byte
    offset of the group's codes (ptr0). Second level, one entry at every
    position l + j*t_psi inside a group: the value there (s1), the byte
    offset just past the code that covers it (ptr1), and, when that code
    is a run pair, how many +1 steps of the run remain (run1). The D1
    bitmap marks those positions. With keep_offsets the group starts and
    sample positions are stored outright (off0/off1); without it they
    come from select on the group bitmap and arithmetic.
    """

    def __init__(self, stream: bytes, s0, ptr0, s1, ptr1, run1,
                 D1: BitSequence, D: BitSequence, t_psi: int,
                 off0=None, off1=None):
        self._stream = bytes(stream)
        self._s0 = np.asarray(s0, dtype=np.uint64)
        self._ptr0 = np.asarray(ptr0, dtype=np.uint64)
        self._s1 = np.asarray(s1, dtype=np.uint64)
        self._ptr1 = np.asarray(ptr1, dtype=np.uint64)
        self._run1 = np.asarray(run1, dtype=np.uint64)
        self._D1 = D1
        self._D = D
        self.t_psi = t_psi
        self._off0 = None if off0 is None else np.asarray(off0, dtype=np.uint64)
        self._off1 = None if off1 is None else np.asarray(off1, dtype=np.uint64)
        self.keep_offsets = self._off0 is not None

    @property
    def name(self):
        return "vbyte-rle" if self.keep_offsets else "vbyte-rle-select"

    @property
    def tag(self):
        return 1 if self.keep_offsets else 2

    def __len__(self):
        return self._D.nbits

    @classmethod
    def build(cls, psi: np.ndarray, D: BitSequence, t_psi: int,
              keep_offsets: bool) -> "VbyteRlePsi":
        if t_psi < 1:
            raise ValueError("t_psi must be at least 1")
        n_total = len(psi)
        starts = D.positions()
        stream = bytearray()
        s0, ptr0 = [], []
        s1, ptr1, run1, spos = [], [], [], []
        for gi in range(len(starts)):
            l = int(starts[gi])
            r = int(starts[gi + 1]) - 1 if gi + 1 < len(starts) else n_total
            vals = psi[l - 1:r]
            s0.append(int(vals[0]))
            ptr0.append(len(stream))
            if r > l:
                _encode_group(vals, t_psi, stream, s1, ptr1, run1, spos, l)
        D1 = BitSequence.from_positions(spos, n_total)
        off0 = starts if keep_offsets else None
        off1 = spos if keep_offsets else None
        return cls(bytes(stream), s0, ptr0, s1, ptr1, run1, D1, D, t_psi,
                   off0=off0, off1=off1)

    def _group_start(self, c: int) -> int:
        if self._off0 is not None:
            return int(self._off0[c - 1])
        return self._D.select1(c)

    def access(self, i: int) -> int:
        c = self._D.rank1(i)
        l = self._group_start(c)
        j = (i - l) // self.t_psi
        if j == 0:
            v = int(self._s0[c - 1])
            pos = int(self._ptr0[c - 1])
            rem = 0
            steps = i - l
        else:
            a = l + j * self.t_psi
            k = self._D1.rank1(a)
            v = int(self._s1[k - 1])
            pos = int(self._ptr1[k - 1])
            rem = int(self._run1[k - 1])
            steps = i - a
        if steps and rem:
            take = min(steps, rem)
            v += take
            steps -= take
        stream = self._stream
        while steps:
            g, pos = vbyte_decode(stream, pos)
            if g == 1:
                length, pos = vbyte_decode(stream, pos)
                take = min(steps, length)
                v += take
                steps -= take
            elif g == 0:
                mag, pos = vbyte_decode(stream, pos)
                v -= mag
                steps -= 1
            else:
                v += g
                steps -= 1
        return v

    def range(self, lo: int, hi: int) -> list[int]:
        """Decode positions lo..hi with one synchronization per group."""
        if lo > hi:
            return []
        out = []
        stream = self._stream
        sigma = len(self._s0)
        n_total = len(self)
        c = self._D.rank1(lo)
        while lo <= hi:
            l = self._group_start(c)
            r = self._group_start(c + 1) - 1 if c < sigma else n_total
            stop = min(hi, r)
            j = (lo - l) // self.t_psi
            if j == 0:
                p, v = l, int(self._s0[c - 1])
                pos = int(self._ptr0[c - 1])
                rem = 0
            else:
                p = l + j * self.t_psi
                k = self._D1.rank1(p)
                v = int(self._s1[k - 1])
                pos = int(self._ptr1[k - 1])
                rem = int(self._run1[k - 1])
            if p >= lo:
                out.append(v)
            while p < stop:
                if rem:
                    take = min(rem, stop - p)
                    first = max(lo, p + 1)
                    if first <= p + take:
                        out.extend(range(v + (first - p), v + take + 1))
                    v += take
                    p += take
                    rem -= take
                    continue
                g, pos = vbyte_decode(stream, pos)
                if g == 1:
                    rem, pos = vbyte_decode(stream, pos)
                    continue
                if g == 0:
                    mag, pos = vbyte_decode(stream, pos)
                    v -= mag
                else:
                    v += g
                p += 1
                if p >= lo:
                    out.append(v)
            lo = stop + 1
            c += 1
        return out

    def size_bits(self) -> int:
        bits = 8 * len(self._stream) + self._D1.nbits
        bits += 64 * (len(self._s0) + len(self._ptr0)
                      + len(self._s1) + len(self._ptr1) + len(self._run1))
        if self.keep_offsets:
            bits += 64 * (len(self._off0) + len(self._off1))
        return bits

    def to_sections(self) -> list[bytes]:
        def u64(a):
            return np.asarray(a, dtype="<u8").tobytes()
        parts = [self._stream, u64(self._s0), u64(self._ptr0)]
        if self.keep_offsets:
            parts.append(u64(self._off0))
        parts += [u64(self._s1), u64(self._ptr1), u64(self._run1)]
        if self.keep_offsets:
            parts.append(u64(self._off1))
        parts.append(self._D1.serialize())
        return parts

    @classmethod
    def from_sections(cls, sections, D: BitSequence,
                      t_psi: int, keep_offsets: bool) -> "VbyteRlePsi":
        def u64(b):
            return np.frombuffer(b, dtype="<u8")
        it = iter(sections)
        stream = next(it)
        s0, ptr0 = u64(next(it)), u64(next(it))
        off0 = u64(next(it)) if keep_offsets else None
        s1, ptr1, run1 = u64(next(it)), u64(next(it)), u64(next(it))
        off1 = u64(next(it)) if keep_offsets else None
        D1 = BitSequence.deserialize(next(it))
        return cls(stream, s0, ptr0, s1, ptr1, run1, D1, D, t_psi,
                   off0=off0, off1=off1)


def _encode_group(vals: np.ndarray, t_psi: int, out: bytearray,
                  s1: list, ptr1: list, run1: list, spos: list, l: int):
    """Emit the gap codes of one group and collect its level-two samples.

    vals holds the group's psi values, l the 1-based position of vals[0].
    Gaps are tokenized into maximal equal stretches first so a +1 run
    becomes a single <1, length> pair; other gap values repeat their code
    once per occurrence. Sample candidates sit at offsets t_psi, 2*t_psi,
    ... from the group start and may fall inside a run, in which case
    run1 records the +1 steps left after the sample.
    """
    length = len(vals)
    gaps = np.diff(vals)
    edges = np.flatnonzero(gaps[1:] != gaps[:-1]) + 1
    starts = np.concatenate(([0], edges))
    ends = np.concatenate((edges, [len(gaps)]))
    cand = t_psi
    for a, e in zip(starts, ends):
        g = int(gaps[a])
        if g == 1:
            vbyte_encode(1, out)
            vbyte_encode(int(e - a), out)
            after = len(out)
            while cand <= e and cand < length:
                s1.append(int(vals[cand]))
                ptr1.append(after)
                run1.append(int(e - cand))
                spos.append(l + cand)
                cand += t_psi
        else:
            for j in range(int(a) + 1, int(e) + 1):
                if g >= 2:
                    vbyte_encode(g, out)
                else:
                    vbyte_encode(0, out)
                    vbyte_encode(-g, out)
                if cand == j:
                    s1.append(int(vals[j]))
                    ptr1.append(len(out))
                    run1.append(0)
                    spos.append(l + j)
                    cand += t_psi


# Huffman-coded variant. Symbol ids: run lengths 1..t map to 0..t-1,
# literal gaps 2..NSV+1 follow, then 64 positive and 64 negative escape
# classes; class k carries k-1 raw bits (none for k = 0).

NSV = 1 << 14
ESC_CLASSES = 64


def _huff_lengths(freqs: Counter) -> dict[int, int]:
    if not freqs:
        return {}
    if len(freqs) == 1:
        return {next(iter(freqs)): 1}
    heap = []
    tick = 0
    for sym, f in sorted(freqs.items()):
        heap.append((f, tick, sym))
        tick += 1
    heapq.heapify(heap)
    while len(heap) > 1:
        f1, _, a = heapq.heappop(heap)
        f2, _, b = heapq.heappop(heap)
        heapq.heappush(heap, (f1 + f2, tick, ("n", a, b)))
        tick += 1
    lengths = {}
    stack = [(heap[0][2], 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, tuple) and node[0] == "n":
            stack.append((node[1], depth + 1))
            stack.append((node[2], depth + 1))
        else:
            lengths[node] = max(depth, 1)
    return lengths


def _canonical_codes(lengths: dict[int, int]):
    """Assign canonical codes; returns (codes, decode tables).

    codes maps symbol -> (code, nbits). The decode side gets, per code
    length, the first canonical code and the slice of the sorted symbol
    list it covers.
    """
    order = sorted(lengths, key=lambda s: (lengths[s], s))
    codes = {}
    code = 0
    prev = 0
    for s in order:
        code <<= lengths[s] - prev
        prev = lengths[s]
        codes[s] = (code, lengths[s])
        code += 1
    maxlen = prev
    first = [0] * (maxlen + 1)
    count = [0] * (maxlen + 1)
    offset = [0] * (maxlen + 1)
    pos = 0
    for ln in range(1, maxlen + 1):
        syms = [s for s in order[pos:] if lengths[s] == ln]
        count[ln] = len(syms)
        offset[ln] = pos
        if syms:
            first[ln] = codes[syms[0]][0]
        pos += len(syms)
    return codes, (order, first, count, offset, maxlen)


class _BitWriter:
    def __init__(self):
        self.buf = bytearray()
        self.acc = 0
        self.fill = 0
        self.nbits = 0

    def write(self, value: int, width: int):
        if width == 0:
            return
        self.acc = (self.acc << width) | value
        self.fill += width
        self.nbits += width
        while self.fill >= 8:
            self.fill -= 8
            self.buf.append((self.acc >> self.fill) & 0xFF)
        self.acc &= (1 << self.fill) - 1

    def getvalue(self) -> bytes:
        if self.fill:
            return bytes(self.buf) + bytes([(self.acc << (8 - self.fill)) & 0xFF])
        return bytes(self.buf)


class HuffRlePsi:
    """Global samples every t_psi positions over one Huffman bitstream."""

    name = "huff-rle-opt"
    tag = 3

    def __init__(self, lengths_u8: bytes, samples, ptrs, stream: bytes,
                 stream_bits: int, t_psi: int, n_total: int):
        self._lengths_u8 = bytes(lengths_u8)
        self._s = np.asarray(samples, dtype=np.uint64)
        self._ptr = np.asarray(ptrs, dtype=np.uint64)
        self._stream = bytes(stream)
        self._stream_bits = stream_bits
        self.t_psi = t_psi
        self._n = n_total
        lengths = {sym: ln for sym, ln in enumerate(self._lengths_u8) if ln}
        _, self._dec = _canonical_codes(lengths) if lengths else ({}, None)

    def __len__(self):
        return self._n

    @classmethod
    def build(cls, psi: np.ndarray, D=None, t_psi: int = 64) -> "HuffRlePsi":
        if t_psi < 1:
            raise ValueError("t_psi must be at least 1")
        n_total = len(psi)
        tokens, span_bounds = cls._tokenize(psi, t_psi)
        freqs = Counter(sym for sym, _, _ in tokens)
        lengths = _huff_lengths(freqs)
        codes, _ = _canonical_codes(lengths) if lengths else ({}, None)
        writer = _BitWriter()
        ptrs = []
        bound = iter(span_bounds)
        nxt = next(bound, None)
        for ti, (sym, raw, rawbits) in enumerate(tokens):
            while nxt is not None and nxt == ti:
                ptrs.append(writer.nbits)
                nxt = next(bound, None)
            code, nb = codes[sym]
            writer.write(code, nb)
            if rawbits:
                writer.write(raw, rawbits)
        while nxt is not None:
            ptrs.append(writer.nbits)
            nxt = next(bound, None)
        samples = psi[0::t_psi] if n_total else np.zeros(0, dtype=np.int64)
        max_sym = max(lengths) if lengths else -1
        lengths_u8 = bytes(lengths.get(s, 0) for s in range(max_sym + 1))
        return cls(lengths_u8, samples, ptrs, writer.getvalue(),
                   writer.nbits, t_psi, n_total)

    @staticmethod
    def _tokenize(psi: np.ndarray, t: int):
        """Token list over all spans plus the token index opening each span."""
        n_total = len(psi)
        tokens = []
        span_bounds = []
        gaps = np.diff(psi)
        p = 1
        while p <= n_total:
            span_bounds.append(len(tokens))
            end = min(p + t, n_total)
            i = p + 1
            while i <= end:
                g = int(gaps[i - 2])
                if g == 1:
                    run = 1
                    while i + run <= end and int(gaps[i + run - 2]) == 1:
                        run += 1
                    tokens.append((run - 1, 0, 0))
                    i += run
                    continue
                if 2 <= g <= NSV + 1:
                    tokens.append((t + g - 2, 0, 0))
                elif g > NSV + 1:
                    e = g - (NSV + 2)
                    k = e.bit_length()
                    raw = e - (1 << (k - 1)) if k else 0
                    tokens.append((t + NSV + k, raw, max(k - 1, 0)))
                else:
                    m = -g - 1
                    k = m.bit_length()
                    raw = m - (1 << (k - 1)) if k else 0
                    tokens.append((t + NSV + ESC_CLASSES + k, raw, max(k - 1, 0)))
                i += 1
            p += t
        return tokens, span_bounds

    def _bit(self, pos: int) -> int:
        return (self._stream[pos >> 3] >> (7 - (pos & 7))) & 1

    def _read_bits(self, pos: int, width: int) -> tuple[int, int]:
        v = 0
        for _ in range(width):
            v = (v << 1) | self._bit(pos)
            pos += 1
        return v, pos

    def _read_symbol(self, pos: int) -> tuple[int, int]:
        order, first, count, offset, maxlen = self._dec
        code = 0
        ln = 0
        while ln < maxlen:
            ln += 1
            code = (code << 1) | self._bit(pos)
            pos += 1
            idx = code - first[ln]
            if count[ln] and 0 <= idx < count[ln]:
                return order[offset[ln] + idx], pos
        raise ValueError("corrupt Huffman stream")

    def _step(self, pos: int) -> tuple[int, int, int]:
        """Next token as (advance_limit, delta_per_kind, new pos).

        Returns (run_length, 0, pos) for a run token and (1, gap, pos)
        for everything else.
        """
        t = self.t_psi
        sym, pos = self._read_symbol(pos)
        if sym < t:
            return sym + 1, 0, pos
        if sym < t + NSV:
            return 1, sym - t + 2, pos
        if sym < t + NSV + ESC_CLASSES:
            k = sym - t - NSV
            raw, pos = (self._read_bits(pos, k - 1) if k else (0, pos))
            e = raw + (1 << (k - 1)) if k else 0
            return 1, NSV + 2 + e, pos
        k = sym - t - NSV - ESC_CLASSES
        raw, pos = (self._read_bits(pos, k - 1) if k else (0, pos))
        m = raw + (1 << (k - 1)) if k else 0
        return 1, -(m + 1), pos

    def access(self, i: int) -> int:
        k = (i - 1) // self.t_psi
        v = int(self._s[k])
        steps = i - (1 + k * self.t_psi)
        pos = int(self._ptr[k])
        while steps:
            run, delta, pos = self._step(pos)
            if delta == 0:
                take = min(steps, run)
                v += take
                steps -= take
            else:
                v += delta
                steps -= 1
        return v

    def range(self, lo: int, hi: int) -> list[int]:
        if lo > hi:
            return []
        k = (lo - 1) // self.t_psi
        p = 1 + k * self.t_psi
        v = int(self._s[k])
        pos = int(self._ptr[k])
        out = []
        if p >= lo:
            out.append(v)
        while p < hi:
            run, delta, pos = self._step(pos)
            if delta == 0:
                take = min(run, hi - p)
                start = max(lo, p + 1)
                if start <= p + take:
                    out.extend(range(v + (start - p), v + take + 1))
                v += take
                p += take
            else:
                v += delta
                p += 1
                if p >= lo:
                    out.append(v)
        return out

    def size_bits(self) -> int:
        return (self._stream_bits + 64 * (len(self._s) + len(self._ptr))
                + 8 * len(self._lengths_u8))

    def to_sections(self) -> list[bytes]:
        stream = struct.pack("<Q", self._stream_bits) + self._stream
        return [self._lengths_u8,
                np.asarray(self._s, dtype="<u8").tobytes(),
                np.asarray(self._ptr, dtype="<u8").tobytes(),
                stream]

    @classmethod
    def from_sections(cls, sections, t_psi: int, n_total: int) -> "HuffRlePsi":
        lengths_u8, s_b, ptr_b, stream_b = sections
        samples = np.frombuffer(s_b, dtype="<u8")
        ptrs = np.frombuffer(ptr_b, dtype="<u8")
        (stream_bits,) = struct.unpack_from("<Q", stream_b, 0)
        return cls(lengths_u8, samples, ptrs, stream_b[8:], stream_bits,
                   t_psi, n_total)


def encode(psi: np.ndarray, D: BitSequence, codec: str = "plain",
           t_psi: int = 64):
    """Build the named encoding of psi. D supplies the group boundaries."""
    psi = np.ascontiguousarray(psi, dtype=np.int64)
    if codec == "plain":
        return PlainPsi.build(psi)
    if codec == "vbyte-rle":
        return VbyteRlePsi.build(psi, D, t_psi, keep_offsets=True)
    if codec == "vbyte-rle-select":
        return VbyteRlePsi.build(psi, D, t_psi, keep_offsets=False)
    if codec == "huff-rle-opt":
        return HuffRlePsi.build(psi, t_psi=t_psi)
    raise ValueError(f"unknown psi codec {codec!r}")


def from_sections(tag: int, sections, D: BitSequence, t_psi: int):
    """Rebuild an encoding from its serialized sections."""
    if tag == 0:
        return PlainPsi.from_sections(sections)
    if tag == 1:
        return VbyteRlePsi.from_sections(sections, D, t_psi, keep_offsets=True)
    if tag == 2:
        return VbyteRlePsi.from_sections(sections, D, t_psi, keep_offsets=False)
    if tag == 3:
        return HuffRlePsi.from_sections(sections, t_psi, D.nbits)
    raise ValueError(f"unknown psi codec tag {tag}")
