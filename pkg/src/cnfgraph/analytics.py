"""Exact degree and K_{2,2} analytics on clause systems.

Most work happens on mask *classes*: vertices sharing a mask have identical
neighborhoods, so per-class results are computed once and scattered back to
vertices. For a clause subset ``S`` the right vertices compatible with ``S``
are those whose mask avoids ``S``, i.e. whose mask is a subset of
``full ^ S``; the sum-over-subsets table answers that count in O(1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import singledispatch
from typing import Any

import numpy as np

from .errors import CapExceeded, ValidationError
from .graph import (
    ClauseSystem,
    ExplicitBipartiteGraph,
    MaskHistogram,
    Side,
    mask_histogram,
)

DEFAULT_CAP_SOS_BITS = 24
DEFAULT_CAP_QUADRUPLES = 2 * 10**7
# C(N_L,2) * C(N_R,2) must stay below 2**63 for int64 accumulation.
MAX_PAIR_PRODUCT = 2**31
_BLOCK = 512


def _comb2(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    return np.where(x >= 2, x * (x - 1) // 2, 0)


def comb2(x: int) -> int:
    return x * (x - 1) // 2 if x >= 2 else 0


@dataclass(frozen=True)
class ZetaTable:
    """``f[M]`` = number of vertices whose mask is a subset of ``M``."""

    f: np.ndarray
    n: int

    def __getitem__(self, mask: int) -> int:
        return int(self.f[int(mask)])

    def compatible(self, clause_set: int | np.ndarray) -> np.ndarray | int:
        """Vertices whose mask avoids every clause in ``clause_set``."""
        full = (1 << self.n) - 1
        if isinstance(clause_set, np.ndarray):
            comp = np.bitwise_xor(clause_set.astype(np.int64), full)
            return self.f[comp]
        return int(self.f[full ^ int(clause_set)])


@dataclass(frozen=True)
class DegreeTrace:
    """Sizes of the running intersections ``B_{i_1} ∩ ... ∩ B_{i_j}``."""

    vertex: int
    clauses: tuple[int, ...]
    values: tuple[int, ...]

    @property
    def degree(self) -> int:
        return self.values[-1]


@dataclass(eq=False)
class K22Report:
    total: int
    left_participation: np.ndarray
    right_participation: np.ndarray
    algorithm: str
    meta: dict[str, Any] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, K22Report):
            return NotImplemented
        return (self.total == other.total
                and np.array_equal(self.left_participation, other.left_participation)
                and np.array_equal(self.right_participation, other.right_participation))

    def same_counts(self, other: "K22Report") -> bool:
        return self == other

    def to_dict(self, summary: bool = False) -> dict[str, Any]:
        doc: dict[str, Any] = {"total": int(self.total), "algorithm": self.algorithm}
        if not summary:
            doc["left_participation"] = [int(x) for x in self.left_participation]
            doc["right_participation"] = [int(x) for x in self.right_participation]
        return doc


# --- sum over subsets -----------------------------------------------------

def subset_zeta(hist: MaskHistogram, n: int, cap_bits: int = DEFAULT_CAP_SOS_BITS) -> ZetaTable:
    """Sum-over-subsets transform of a mask histogram.

    Runs the usual ``n`` passes; pass ``i`` adds ``f[M without bit i]`` into
    ``f[M]`` for every ``M`` containing bit ``i``.

    Raises:
        CapExceeded: if ``n > cap_bits``.
    """
    if n < 0:
        raise ValidationError("n must be nonnegative")
    if n > cap_bits:
        raise CapExceeded(f"zeta table needs 2**{n} entries, cap is 2**{cap_bits}")
    size = 1 << n
    f = np.zeros(size, dtype=np.int64)
    for mask, count in hist.entries.items():
        if not 0 <= mask < size:
            raise ValidationError(f"mask {mask:#x} does not fit in {n} bits")
        f[mask] += count
    for i in range(n):
        view = f.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    f.setflags(write=False)
    return ZetaTable(f=f, n=n)


def side_zeta(cs: ClauseSystem, side: Side, cap_bits: int = DEFAULT_CAP_SOS_BITS) -> ZetaTable:
    return subset_zeta(mask_histogram(cs, side), cs.n, cap_bits)


def _classes(cs: ClauseSystem, side: Side) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct masks, their counts, and each vertex's class index."""
    masks = cs.masks(side)
    if len(masks) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return masks[:0], empty, empty
    keys, inverse, counts = np.unique(masks, return_inverse=True, return_counts=True)
    return keys, counts.astype(np.int64), inverse.reshape(-1)


def _compat_block(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``out[i, j]`` is True when ``a[i]`` and ``b[j]`` are disjoint masks."""
    return (a[:, None] & b[None, :]) == 0


# --- degrees --------------------------------------------------------------

def _check_vertex(cs: ClauseSystem, v: int) -> None:
    if not 0 <= v < cs.n_left:
        raise IndexError(f"left index {v} out of range [0, {cs.n_left})")


def degree(cs: ClauseSystem, v: int, zeta: ZetaTable | None = None) -> int:
    """Number of right vertices adjacent to left vertex ``v``.

    With a right-side ``zeta`` table the answer is a single lookup;
    otherwise the right masks are scanned.
    """
    _check_vertex(cs, v)
    s = int(cs.left_masks[v])
    if zeta is not None:
        return zeta.compatible(s)
    if cs.fixed_width:
        return int(np.count_nonzero((cs.right_masks & np.uint64(s)) == 0))
    return sum(1 for t in cs.right_masks if not s & int(t))


def degrees(cs: ClauseSystem, side: Side = "left",
            cap_sos_bits: int = DEFAULT_CAP_SOS_BITS) -> np.ndarray:
    """Degree of every vertex on ``side``."""
    other: Side = "right" if side == "left" else "left"
    keys, _, inverse = _classes(cs, side)
    if len(keys) == 0:
        return np.zeros(0, dtype=np.int64)
    if cs.n <= cap_sos_bits:
        zeta = side_zeta(cs, other, cap_sos_bits)
        per_class = zeta.compatible(keys.astype(np.int64))
    else:
        okeys, ocounts, _ = _classes(cs, other)
        per_class = np.zeros(len(keys), dtype=np.int64)
        for start in range(0, len(keys), _BLOCK):
            block = _compat_block(keys[start:start + _BLOCK], okeys)
            per_class[start:start + _BLOCK] = block.astype(np.int64) @ ocounts
    return np.asarray(per_class, dtype=np.int64)[inverse]


def edge_count(cs: ClauseSystem) -> int:
    return int(degrees(cs).sum())


def average_degree(cs: ClauseSystem) -> float:
    """Edges per left vertex."""
    if cs.n_left == 0:
        raise ValidationError("average degree of an empty left side is undefined")
    return edge_count(cs) / cs.n_left


# --- K_{2,2} counting -----------------------------------------------------

def _pair_counts_sos(keys: np.ndarray, zeta: ZetaTable) -> np.ndarray:
    """``out[a, b]`` = C(#other-side vertices compatible with keys[a] | keys[b], 2)."""
    k = len(keys)
    out = np.empty((k, k), dtype=np.int64)
    ik = keys.astype(np.int64)
    for start in range(0, k, _BLOCK):
        union = ik[start:start + _BLOCK, None] | ik[None, :]
        out[start:start + _BLOCK] = _comb2(zeta.compatible(union))
    return out


def _unordered_pairs(keys: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unions and multiplicities over unordered class pairs ``a <= b``."""
    ia, ib = np.triu_indices(len(keys))
    mult = np.where(ia == ib, _comb2(counts[ia]), counts[ia] * counts[ib])
    keep = mult > 0
    return keys[ia][keep] | keys[ib][keep], mult[keep]


def _pair_counts_enum(keys: np.ndarray, other_keys: np.ndarray,
                      other_counts: np.ndarray) -> np.ndarray:
    """Same matrix as :func:`_pair_counts_sos`, by class-pair enumeration."""
    k = len(keys)
    out = np.zeros((k, k), dtype=np.int64)
    if k == 0:
        return out
    o_union, o_mult = _unordered_pairs(other_keys, other_counts)
    ia, ib = np.triu_indices(k)
    unions = keys[ia] | keys[ib]
    vals = np.zeros(len(unions), dtype=np.int64)
    for start in range(0, len(unions), _BLOCK):
        hit = _compat_block(unions[start:start + _BLOCK], o_union)
        vals[start:start + _BLOCK] = hit.astype(np.int64) @ o_mult
    out[ia, ib] = vals
    out[ib, ia] = vals
    return out


def _participation(pair_counts: np.ndarray, counts: np.ndarray) -> tuple[int, np.ndarray]:
    """Total quadruples and per-class participation from a class-pair matrix."""
    if len(counts) == 0:
        return 0, np.zeros(0, dtype=np.int64)
    diag = np.diagonal(pair_counts)
    per_class = pair_counts @ counts - diag
    twice_total = int(counts @ per_class)
    return twice_total // 2, per_class


def count_k22(cs: ClauseSystem, method: str = "auto",
              cap_sos_bits: int = DEFAULT_CAP_SOS_BITS) -> K22Report:
    """Count K_{2,2} subgraphs and per-vertex participation.

    Two left vertices ``v1, v2`` and two right vertices ``w1, w2`` span a
    K_{2,2} iff ``(S_v1 | S_v2) & (T_w1 | T_w2) == 0``. The ``"sos"`` method
    counts, for each pair of left classes, the compatible right vertices via
    a zeta table and adds ``C(count, 2)``. The ``"pairs"`` method enumerates
    class pairs on both sides and needs no table; ``"auto"`` picks ``"sos"``
    whenever ``n <= cap_sos_bits``.

    Raises:
        CapExceeded: if the counts could overflow 64-bit accumulators, or
            ``"sos"`` is forced beyond the table cap.
    """
    if method not in ("auto", "sos", "pairs"):
        raise ValidationError(f"unknown method {method!r}")
    if cs.n_left * cs.n_right > MAX_PAIR_PRODUCT:
        raise CapExceeded("K_{2,2} totals could overflow 64-bit counters at this size")
    if method == "auto":
        method = "sos" if cs.n <= cap_sos_bits else "pairs"

    lkeys, lcounts, linv = _classes(cs, "left")
    rkeys, rcounts, rinv = _classes(cs, "right")
    if method == "sos":
        left_pairs = _pair_counts_sos(lkeys, side_zeta(cs, "right", cap_sos_bits))
        right_pairs = _pair_counts_sos(rkeys, side_zeta(cs, "left", cap_sos_bits))
    else:
        left_pairs = _pair_counts_enum(lkeys, rkeys, rcounts)
        right_pairs = _pair_counts_enum(rkeys, lkeys, lcounts)

    total, lpart = _participation(left_pairs, lcounts)
    total_r, rpart = _participation(right_pairs, rcounts)
    if total != total_r:  # pragma: no cover - both sides count the same set
        raise AssertionError(f"left/right totals disagree: {total} vs {total_r}")
    return K22Report(
        total=total,
        left_participation=lpart[linv] if cs.n_left else np.zeros(0, dtype=np.int64),
        right_participation=rpart[rinv] if cs.n_right else np.zeros(0, dtype=np.int64),
        algorithm=method,
        meta={"left_classes": len(lkeys), "right_classes": len(rkeys)},
    )


def count_k22_explicit(g: ExplicitBipartiteGraph,
                       cap_quadruples: int = DEFAULT_CAP_QUADRUPLES) -> K22Report:
    """Brute-force K_{2,2} count: test all four edges of every quadruple.

    Quadruples sharing the left pair ``(v1, v2)`` are tested together as one
    boolean block over right pairs ``w1 < w2``.

    Raises:
        CapExceeded: if ``C(n_left, 2) * C(n_right, 2) > cap_quadruples``.
    """
    nl, nr = g.n_left, g.n_right
    quads = comb2(nl) * comb2(nr)
    if quads > cap_quadruples:
        raise CapExceeded(f"{quads} quadruples exceeds cap {cap_quadruples}")
    adj = g.adjacency
    left = np.zeros(nl, dtype=np.int64)
    right = np.zeros(nr, dtype=np.int64)
    total = 0
    upper = np.triu(np.ones((nr, nr), dtype=bool), k=1)
    for v1 in range(nl):
        for v2 in range(v1 + 1, nl):
            r1, r2 = adj[v1], adj[v2]
            # edge tests (v1,w1) (v1,w2) (v2,w1) (v2,w2) for every w1 < w2
            quad = (r1[:, None] & r1[None, :]) & (r2[:, None] & r2[None, :]) & upper
            k = int(quad.sum())
            if k:
                total += k
                left[v1] += k
                left[v2] += k
                right += quad.sum(axis=0) + quad.sum(axis=1)
    return K22Report(total, left, right, "explicit")


def count_k22_codegree(g: ExplicitBipartiteGraph) -> K22Report:
    """K_{2,2} count of an explicit graph from its codegree matrices."""
    adj = g.adjacency.astype(np.int64)

    def side(a: np.ndarray) -> tuple[int, np.ndarray]:
        co = _comb2(a @ a.T)
        np.fill_diagonal(co, 0)
        per = co.sum(axis=1)
        return int(per.sum()) // 2, per

    total, left = side(adj)
    _, right = side(adj.T)
    return K22Report(total, left, right, "codegree")


# --- degree traces and neighborhoods -----------------------------------

def degree_trace(cs: ClauseSystem, v: int) -> DegreeTrace:
    """Running intersection sizes over the clauses excluding ``v``, in clause order."""
    _check_vertex(cs, v)
    s = int(cs.left_masks[v])
    clauses = tuple(i for i in range(cs.n) if s >> i & 1)
    values = [cs.n_right]
    seen = 0
    rights = cs.right_masks if cs.fixed_width else [int(t) for t in cs.right_masks]
    for i in clauses:
        seen |= 1 << i
        if cs.fixed_width:
            values.append(int(np.count_nonzero((rights & np.uint64(seen)) == 0)))
        else:
            values.append(sum(1 for t in rights if not t & seen))
    return DegreeTrace(vertex=v, clauses=clauses, values=tuple(values))


@singledispatch
def distinct_neighborhood_count(graph: Any, min_degree: int = 0) -> int:
    """Number of distinct neighborhoods among left vertices of degree ``>= min_degree``."""
    raise TypeError(f"unsupported graph type {type(graph).__name__}")


@distinct_neighborhood_count.register
def _(graph: ClauseSystem, min_degree: int = 0) -> int:
    # Right mask classes partition W into nonempty blocks, so the set of
    # compatible classes identifies the neighborhood.
    lkeys, _, _ = _classes(graph, "left")
    if len(lkeys) == 0:
        return 0
    rkeys, rcounts, _ = _classes(graph, "right")
    seen: set[bytes] = set()
    for start in range(0, len(lkeys), _BLOCK):
        block = _compat_block(lkeys[start:start + _BLOCK], rkeys)
        deg = block.astype(np.int64) @ rcounts
        for row, dv in zip(block, deg):
            if dv >= min_degree:
                seen.add(np.packbits(row).tobytes())
    return len(seen)


@distinct_neighborhood_count.register
def _(graph: ExplicitBipartiteGraph, min_degree: int = 0) -> int:
    adj = graph.adjacency
    deg = adj.sum(axis=1)
    return len({np.packbits(row).tobytes() for row, dv in zip(adj, deg) if dv >= min_degree})

