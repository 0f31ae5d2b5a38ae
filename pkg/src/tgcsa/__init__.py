"""Self-indexed temporal graphs.

A temporal graph is a multiset of contacts (u, v, ts, te), each an edge
u -> v alive over the half-open interval [ts, te). This package stores
such a multiset as a compressed permutation over a four-section symbol
sequence and answers neighbor, edge, snapshot and change queries
directly from the compressed form. An adjacency-log baseline, a
brute-force oracle, synthetic generators and a small CLI round it out.
"""

from .baseline import EdgeLogIndex, OracleIndex, OverlapError
from .bitseq import BitSequence
from .corpus import (AlphabetMap, Contact, ContactSet, build_sid,
                     load_contacts, parse_contacts, write_contacts)
from .indexfile import (deserialize_index, load_index, save_index,
                        serialize_index)
from .query import (TimeSemantics, active_edge, activated_edges,
                    deactivated_edges, direct_neighbors, pattern_range,
                    reconstruct_contact, reverse_neighbors, snapshot,
                    symbol_range, time_bounds)
from .sacsa import TgcsaIndex, build_index, verify_core
from .synth import (GenSpec, XorShift64Star, dataset_stats, generate,
                    preset_icomm, preset_powerlaw)

__version__ = "0.1.0"

__all__ = [
    "AlphabetMap", "BitSequence", "Contact", "ContactSet", "EdgeLogIndex",
    "GenSpec", "OracleIndex", "OverlapError", "TgcsaIndex", "TimeSemantics",
    "XorShift64Star", "active_edge", "activated_edges", "build_index",
    "build_sid", "dataset_stats", "deactivated_edges", "deserialize_index",
    "direct_neighbors", "generate", "load_contacts", "load_index",
    "parse_contacts", "pattern_range", "preset_icomm", "preset_powerlaw",
    "reconstruct_contact", "reverse_neighbors", "save_index",
    "serialize_index", "snapshot", "symbol_range", "time_bounds",
    "verify_core", "write_contacts",
]
