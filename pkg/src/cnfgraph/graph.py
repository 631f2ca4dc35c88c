"""Clause-system data model and mask-based adjacency.

A clause system over left vertices ``V`` and right vertices ``W`` is stored as
one bit mask per vertex. Bit ``i`` of ``left_masks[v]`` is set when ``v`` is
*not* in the left set of clause ``i``; likewise for the right side. A pair
``(v, w)`` is an edge exactly when the two masks are disjoint.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Iterator, Literal, Mapping

import numpy as np

from .errors import CapExceeded, ValidationError

Side = Literal["left", "right"]

WORD_BITS = 64
DEFAULT_CAP_PAIRS = 10**8


def _as_mask_array(masks: Iterable[int] | np.ndarray, n: int) -> np.ndarray:
    """Fixed-width uint64 for n <= 64, object array of Python ints above."""
    if n <= WORD_BITS:
        if isinstance(masks, np.ndarray) and masks.dtype == np.uint64:
            return masks.reshape(-1).copy()
        return np.array([int(m) for m in masks], dtype=np.uint64).reshape(-1)
    values = [int(m) for m in masks]
    arr = np.empty(len(values), dtype=object)
    arr[:] = values
    return arr


def full_mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True, eq=False)
class ClauseSystem:
    """A graph given as the intersection of ``n`` clause graphs.

    Attributes:
        n: number of clauses.
        left_masks: ``left_masks[v]`` has bit ``i`` set iff ``v`` is outside ``A_i``.
        right_masks: ``right_masks[w]`` has bit ``i`` set iff ``w`` is outside ``B_i``.
    """

    n: int
    left_masks: np.ndarray
    right_masks: np.ndarray

    def __init__(self, n: int, left_masks, right_masks) -> None:
        n = int(n)
        if n < 0:
            raise ValidationError(f"clause count must be nonnegative, got {n}")
        left = _as_mask_array(left_masks, n)
        right = _as_mask_array(right_masks, n)
        limit = full_mask(n)
        for name, arr in (("left", left), ("right", right)):
            if len(arr) and max(int(m) for m in arr) > limit:
                raise ValidationError(f"{name} mask has bits set at positions >= n={n}")
            if len(arr) and min(int(m) for m in arr) < 0:
                raise ValidationError(f"{name} mask is negative")
        left.setflags(write=False)
        right.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "left_masks", left)
        object.__setattr__(self, "right_masks", right)

    @property
    def n_left(self) -> int:
        return len(self.left_masks)

    @property
    def n_right(self) -> int:
        return len(self.right_masks)

    @property
    def fixed_width(self) -> bool:
        return self.n <= WORD_BITS

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def masks(self, side: Side) -> np.ndarray:
        if side == "left":
            return self.left_masks
        if side == "right":
            return self.right_masks
        raise ValidationError(f"side must be 'left' or 'right', got {side!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClauseSystem):
            return NotImplemented
        return (
            self.n == other.n
            and [int(m) for m in self.left_masks] == [int(m) for m in other.left_masks]
            and [int(m) for m in self.right_masks] == [int(m) for m in other.right_masks]
        )

    def __hash__(self) -> int:
        return hash((self.n, tuple(int(m) for m in self.left_masks),
                     tuple(int(m) for m in self.right_masks)))

    def __repr__(self) -> str:
        return f"ClauseSystem(n={self.n}, n_left={self.n_left}, n_right={self.n_right})"

    def restrict_left(self, keep: Iterable[int]) -> "ClauseSystem":
        """Clause system on the left vertices ``keep`` (in the given order).

        The clauses become ``(A_i ∩ V', B_i)``; the clause count is unchanged.
        """
        idx = np.asarray(list(keep), dtype=np.int64)
        return ClauseSystem(self.n, self.left_masks[idx], self.right_masks)

    def restrict_right(self, keep: Iterable[int]) -> "ClauseSystem":
        idx = np.asarray(list(keep), dtype=np.int64)
        return ClauseSystem(self.n, self.left_masks, self.right_masks[idx])

    def swap_sides(self) -> "ClauseSystem":
        return ClauseSystem(self.n, self.right_masks, self.left_masks)


class ExplicitBipartiteGraph:
    """Bipartite graph held as a dense boolean adjacency matrix.

    ``edges`` exposes the pair set view; the matrix form keeps large
    materialized graphs cheap to build and compare.
    """

    __slots__ = ("_adj",)

    def __init__(self, n_left: int, n_right: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n_left < 0 or n_right < 0:
            raise ValidationError("side sizes must be nonnegative")
        adj = np.zeros((n_left, n_right), dtype=bool)
        for v, w in edges:
            if not (0 <= v < n_left and 0 <= w < n_right):
                raise ValidationError(f"edge ({v}, {w}) out of range")
            adj[v, w] = True
        adj.setflags(write=False)
        self._adj = adj

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "ExplicitBipartiteGraph":
        adj = np.array(adj, dtype=bool)
        if adj.ndim != 2:
            raise ValidationError("adjacency must be a 2-d array")
        g = cls.__new__(cls)
        adj.setflags(write=False)
        g._adj = adj
        return g

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def n_left(self) -> int:
        return self._adj.shape[0]

    @property
    def n_right(self) -> int:
        return self._adj.shape[1]

    @property
    def edge_count(self) -> int:
        return int(self._adj.sum())

    @property
    def edges(self) -> set[tuple[int, int]]:
        return set(self.iter_edges())

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        """Edges in ascending lexicographic order."""
        vs, ws = np.nonzero(self._adj)
        for v, w in zip(vs.tolist(), ws.tolist()):
            yield v, w

    def has_edge(self, v: int, w: int) -> bool:
        return bool(self._adj[v, w])

    def neighbors(self, v: int) -> set[int]:
        return set(np.flatnonzero(self._adj[v]).tolist())

    def restrict_left(self, keep: Iterable[int]) -> "ExplicitBipartiteGraph":
        idx = np.asarray(list(keep), dtype=np.int64)
        return ExplicitBipartiteGraph.from_adjacency(self._adj[idx].reshape(len(idx), self.n_right))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExplicitBipartiteGraph):
            return NotImplemented
        return self._adj.shape == other._adj.shape and bool(np.array_equal(self._adj, other._adj))

    def __repr__(self) -> str:
        return (f"ExplicitBipartiteGraph(n_left={self.n_left}, n_right={self.n_right}, "
                f"edges={self.edge_count})")


@dataclass(frozen=True)
class MaskHistogram:
    """Vertex count per distinct mask value on one side."""

    entries: Mapping[int, int]
    side: Side
    n: int = 0

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def classes(self) -> tuple[list[int], np.ndarray]:
        """Masks in ascending order with their counts."""
        keys = sorted(self.entries)
        return keys, np.array([self.entries[k] for k in keys], dtype=np.int64)


def _check_index(i: int, size: int, what: str) -> None:
    if not 0 <= i < size:
        raise IndexError(f"{what} index {i} out of range [0, {size})")


def clause_graph_contains(A: set[int] | frozenset[int], B: set[int] | frozenset[int],
                          v: int, w: int, n_left: int | None = None,
                          n_right: int | None = None) -> bool:
    """Membership of ``(v, w)`` in the clause graph ``(A x W) ∪ (V x B)``."""
    if v < 0 or w < 0:
        raise IndexError("negative vertex index")
    if n_left is not None:
        _check_index(v, n_left, "left")
    if n_right is not None:
        _check_index(w, n_right, "right")
    return v in A or w in B


def adjacent(cs: ClauseSystem, v: int, w: int) -> bool:
    _check_index(v, cs.n_left, "left")
    _check_index(w, cs.n_right, "right")
    return (int(cs.left_masks[v]) & int(cs.right_masks[w])) == 0


def clause_sets(cs: ClauseSystem) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Rebuild the ``(A_i, B_i)`` pairs from the masks. Test helper."""
    out = []
    for i in range(cs.n):
        bit = 1 << i
        A = frozenset(v for v, m in enumerate(cs.left_masks) if not int(m) & bit)
        B = frozenset(w for w, m in enumerate(cs.right_masks) if not int(m) & bit)
        out.append((A, B))
    return out


def adjacency_matrix(cs: ClauseSystem) -> np.ndarray:
    if cs.fixed_width:
        return (cs.left_masks[:, None] & cs.right_masks[None, :]) == 0
    return np.array([[(int(a) & int(b)) == 0 for b in cs.right_masks] for a in cs.left_masks],
                    dtype=bool).reshape(cs.n_left, cs.n_right)


def materialize(cs: ClauseSystem, cap_pairs: int = DEFAULT_CAP_PAIRS) -> ExplicitBipartiteGraph:
    """Explicit graph with edge set ``{(v, w) : adjacent(cs, v, w)}``.

    Raises:
        CapExceeded: if ``n_left * n_right`` exceeds ``cap_pairs``.
    """
    pairs = cs.n_left * cs.n_right
    if pairs > cap_pairs:
        raise CapExceeded(f"materialize needs {pairs} pair tests, cap is {cap_pairs}")
    return ExplicitBipartiteGraph.from_adjacency(adjacency_matrix(cs))


def mask_histogram(cs: ClauseSystem, side: Side) -> MaskHistogram:
    masks = cs.masks(side)
    if cs.fixed_width:
        values, counts = np.unique(masks, return_counts=True)
        entries = {int(m): int(c) for m, c in zip(values, counts)}
    else:
        entries = dict(Counter(int(m) for m in masks))
    return MaskHistogram(entries=entries, side=side, n=cs.n)


def neighborhood(cs: ClauseSystem, v: int) -> set[int]:
    _check_index(v, cs.n_left, "left")
    s = int(cs.left_masks[v])
    if cs.fixed_width:
        hit = (cs.right_masks & np.uint64(s)) == 0
        return set(np.flatnonzero(hit).tolist())
    return {w for w, t in enumerate(cs.right_masks) if not s & int(t)}


# --- serialization -------------------------------------------------------

def _hex(m: int, n: int) -> str:
    return format(int(m), "x").rjust(max(1, (n + 3) // 4), "0")


def to_json_dict(cs: ClauseSystem, params: Any = None, seed: int | None = None) -> dict:
    """Instance document: ``n``, hex ``left_masks``/``right_masks``, optional ``params``/``seed``."""
    doc: dict[str, Any] = {
        "n": cs.n,
        "left_masks": [_hex(m, cs.n) for m in cs.left_masks],
        "right_masks": [_hex(m, cs.n) for m in cs.right_masks],
    }
    if params is not None:
        doc["params"] = params.to_dict() if hasattr(params, "to_dict") else dict(params)
    if seed is not None:
        doc["seed"] = int(seed)
    return doc


def from_json_dict(doc: Mapping[str, Any]) -> ClauseSystem:
    try:
        n = int(doc["n"])
        left = [int(h, 16) for h in doc["left_masks"]]
        right = [int(h, 16) for h in doc["right_masks"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed instance document: {exc}") from exc
    return ClauseSystem(n, left, right)


def dumps_instance(cs: ClauseSystem, params: Any = None, seed: int | None = None) -> str:
    return json.dumps(to_json_dict(cs, params, seed), indent=2, sort_keys=True) + "\n"


def loads_instance(text: str) -> ClauseSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return from_json_dict(doc)


def load_instance(path: str | Path) -> ClauseSystem:
    return loads_instance(Path(path).read_text())


def format_edge_list(g: ExplicitBipartiteGraph) -> str:
    """``p bip <n_left> <n_right> <edge_count>`` header, then sorted ``v w`` lines."""
    lines = [f"p bip {g.n_left} {g.n_right} {g.edge_count}"]
    lines.extend(f"{v} {w}" for v, w in g.iter_edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> ExplicitBipartiteGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("c")]
    if not rows or rows[0][:2] != ["p", "bip"] or len(rows[0]) != 5:
        raise ValidationError("edge list must start with 'p bip <n_left> <n_right> <edge_count>'")
    try:
        n_left, n_right, m = (int(x) for x in rows[0][2:])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise ValidationError(f"malformed edge list: {exc}") from exc
    if len(edges) != m:
        raise ValidationError(f"header declares {m} edges, found {len(edges)}")
    if len(set(edges)) != len(edges):
        raise ValidationError("duplicate edge in edge list")
    return ExplicitBipartiteGraph(n_left, n_right, edges)
