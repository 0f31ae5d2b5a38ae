"""Index construction: rotation order, the Psi permutation, and core checks.

The id sequence of the sorted contacts is treated as a cyclic string of
length arity*n. Conceptually every rotation is sorted; because each
section draws from its own id range, the sorted rotation array A falls
apart into one block per section. The first block is pinned to contact
order outright (sorted contacts give exactly that order except for
degenerate repeated tails, and the cyclic fix-up below relies on it);
the remaining blocks are true rotation order with ties broken by
ascending start position.

Psi[i] is the rank of the successor rotation of A[i]. Entries of the
last section are then remapped with ((Psi[i] - 2) mod n) + 1 so that
instead of pointing at the *next* contact's first entry they point at
their own contact's first entry, closing each contact into a cycle of
length arity. Only B, D and the encoded Psi survive into the index; A
is scaffolding.
"""

from __future__ import annotations

import numpy as np

from . import psienc
from .bitseq import BitSequence
from .corpus import AlphabetMap, ContactSet, build_sid


def rotation_ranks(sid: np.ndarray) -> np.ndarray:
    """Rank of every cyclic rotation of sid (0-based start positions).

    Prefix doubling: ranks ordering length-k windows are refined with the
    ranks k positions further (cyclically) until either all ranks are
    distinct or the window covers the whole string. Identical rotations
    keep identical ranks.
    """
    n = len(sid)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    # densify first: the distinct-rank early exit below compares against
    # n-1, which raw symbol values could hit while still holding ties
    rank = np.unique(np.asarray(sid, dtype=np.int64),
                     return_inverse=True)[1].astype(np.int64)
    idx = np.arange(n, dtype=np.int64)
    k = 1
    while k < n:
        if int(rank.max()) == n - 1:
            break
        other = rank[(idx + k) % n]
        order = np.lexsort((other, rank))
        r1, r2 = rank[order], other[order]
        bump = np.empty(n, dtype=np.int64)
        bump[0] = 0
        np.cumsum((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1]), out=bump[1:])
        rank = np.empty(n, dtype=np.int64)
        rank[order] = bump
        k <<= 1
    return rank


def build_rotation_array(sid: np.ndarray, arity: int) -> np.ndarray:
    """The 1-based rotation array A: section 1 in contact order, the rest
    in rotation order with positional tie-breaks."""
    total = len(sid)
    if total % arity:
        raise ValueError("id sequence length is not a multiple of the arity")
    n = total // arity
    ranks = rotation_ranks(sid)
    A = np.empty(total, dtype=np.int64)
    A[:n] = np.arange(n, dtype=np.int64) * arity
    for s in range(1, arity):
        starts = np.arange(n, dtype=np.int64) * arity + s
        order = np.lexsort((starts, ranks[starts]))
        A[s * n:(s + 1) * n] = starts[order]
    return A + 1


def compute_psi(A: np.ndarray) -> np.ndarray:
    """Psi[i] = position of the successor rotation in A, before the fix-up."""
    total = len(A)
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    a0 = A - 1
    inv = np.empty(total, dtype=np.int64)
    inv[a0] = np.arange(total, dtype=np.int64)
    return inv[(a0 + 1) % total] + 1


def cyclic_adjust(psi: np.ndarray, arity: int) -> np.ndarray:
    """Remap the last section so each end entry points at its own contact."""
    total = len(psi)
    n = total // arity
    out = psi.copy()
    if n:
        tail = out[(arity - 1) * n:]
        out[(arity - 1) * n:] = ((tail - 2) % n) + 1
    return out


def build_d(sid: np.ndarray, A: np.ndarray) -> BitSequence:
    """Group marks along A: a one wherever a new first symbol starts."""
    first = sid[A - 1]
    bits = np.empty(len(A), dtype=np.uint8)
    if len(A):
        bits[0] = 1
        np.not_equal(first[1:], first[:-1], out=bits[1:].view(bool))
    return BitSequence.from_bits(bits)


class TgcsaIndex:
    """The built self-index: alphabet map, group marks D, encoded Psi.

    Immutable after construction; queries live in the query module and
    are also exposed as methods for interface parity with the baselines.
    """

    kind = "tgcsa"

    def __init__(self, am: AlphabetMap, D: BitSequence, psi, n: int, semantics: str):
        self.am = am
        self.D = D
        self.psi = psi
        self.n = n
        self.arity = am.arity
        self.semantics = semantics

    @property
    def nu(self) -> int:
        return self.am.nu

    @property
    def tau(self) -> int:
        return self.am.tau

    @property
    def sigma(self) -> int:
        return self.am.sigma

    @property
    def codec(self) -> str:
        return self.psi.name

    def size_bits(self) -> int:
        """Stored payload bits: both bitmaps plus the Psi encoding."""
        return self.am.B.nbits + self.D.nbits + self.psi.size_bits()

    def __repr__(self):
        return (f"TgcsaIndex(n={self.n}, arity={self.arity}, nu={self.nu}, "
                f"tau={self.tau}, codec={self.codec!r})")

    # uniform query surface (shared with EdgeLogIndex / OracleIndex)

    def direct_neighbors(self, u, sem):
        from . import query
        return query.direct_neighbors(self, u, sem)

    def reverse_neighbors(self, v, sem):
        from . import query
        return query.reverse_neighbors(self, v, sem)

    def active_edge(self, u, v, sem):
        from . import query
        return query.active_edge(self, u, v, sem)

    def snapshot(self, sem, contacts=False):
        from . import query
        return query.snapshot(self, sem, contacts=contacts)

    def activated_edges(self, t, t_end=None):
        from . import query
        return query.activated_edges(self, t, t_end)

    def deactivated_edges(self, t, t_end=None):
        from . import query
        return query.deactivated_edges(self, t, t_end)


def build_index(cs: ContactSet, codec: str = "plain", t_psi: int = 64) -> TgcsaIndex:
    """Build the full index for a contact set."""
    am = AlphabetMap.build(cs)
    sid = build_sid(cs, am)
    A = build_rotation_array(sid, cs.arity)
    psi = cyclic_adjust(compute_psi(A), cs.arity)
    D = build_d(sid, A)
    enc = psienc.encode(psi, D, codec=codec, t_psi=t_psi)
    return TgcsaIndex(am, D, enc, len(cs), cs.semantics)


def verify_core(idx: TgcsaIndex, cs: ContactSet | None = None) -> list[str]:
    """Structural checks on a built index; returns human-readable violations.

    Checks that Psi is a permutation that advances one section per step
    and closes into cycles of length arity (so every cycle visits each
    section once), that D opens with a mark and carries exactly sigma
    ones, and, when the source contacts are supplied, that position q of
    the first section reconstructs the q-th sorted contact (the pinned
    first-section order).
    """
    problems = []
    total = idx.arity * idx.n
    if total:
        vals = np.asarray(idx.psi.range(1, total), dtype=np.int64)
        if not np.array_equal(np.sort(vals), np.arange(1, total + 1)):
            problems.append("psi is not a permutation of [1, arity*n]")
            return problems
        sec = np.arange(total, dtype=np.int64) // idx.n
        if not np.array_equal((vals - 1) // idx.n, (sec + 1) % idx.arity):
            problems.append("psi does not advance exactly one section per step")
        cur = np.arange(total, dtype=np.int64)
        for _ in range(idx.arity):
            cur = vals[cur] - 1
        if not np.array_equal(cur, np.arange(total, dtype=np.int64)):
            problems.append("psi cycles do not close after arity steps")
    if idx.D.ones != idx.sigma:
        problems.append(f"D has {idx.D.ones} marks, expected sigma={idx.sigma}")
    if total and idx.D.access(1) != 1:
        problems.append("D does not start with a group mark")
    if cs is not None:
        from .query import reconstruct_contact
        if len(cs) != idx.n:
            problems.append("contact count differs from n")
        else:
            for q in range(1, idx.n + 1):
                got = tuple(t for t in reconstruct_contact(idx, q) if t is not None)
                want = tuple(t for t in cs[q - 1] if t is not None)
                if got != want:
                    problems.append(f"first-section position {q} reconstructs "
                                    f"{got}, expected {want}")
                    break
    return problems
