"""Random clause systems and the independent-edge baseline.

Random streams
--------------
Every instance is drawn from ``numpy.random.Generator(Philox(key=seed))``
with a 64-bit ``seed``. Philox is counter-based, so a seed fully determines
the stream with no hidden seeding state. Bits are drawn as uniform doubles
``u`` from ``Generator.random`` and a bit is set iff ``u < p``. Left bits are
drawn first as an ``(n_left, n_clauses)`` block in row-major order, then the
right block ``(n_right, n_clauses)``; bit ``i`` of vertex ``v`` is column ``i``
of row ``v``.

Replicate ``r`` of an ensemble with master seed ``s`` uses
``replicate_seed(s, r) = splitmix64(s + (r + 1) * 0x9E3779B97F4A7C15 mod 2**64)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Mapping

import numpy as np

from .errors import CapExceeded, ValidationError
from .graph import WORD_BITS, ClauseSystem, ExplicitBipartiteGraph

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
DEFAULT_MAX_CLAUSES = 1 << 16

# p = 1/100 and N = d**10 are the headline asymptotic choices; they are far
# outside what can be counted exactly and are kept only as named presets.
PRESETS: dict[str, dict[str, float]] = {
    "headline": {"p": 0.01, "size_exponent": 10.0},
    "desk": {"p": 0.3, "size_exponent": 2.0},
}


def splitmix64(x: int) -> int:
    x = (x + GOLDEN_GAMMA) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def replicate_seed(master_seed: int, replicate: int) -> int:
    """Seed for replicate ``replicate``; a pure function of its arguments."""
    if replicate < 0:
        raise ValidationError("replicate index must be nonnegative")
    return splitmix64((int(master_seed) + (replicate + 1) * GOLDEN_GAMMA) & MASK64)


def make_rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValidationError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed))


def choose_clause_count(p: float, N: int, d: float) -> int:
    """Nearest integer to ``ln(N / d) / p**2``, halves rounded away from zero.

    With this many clauses ``(1 - p**2) ** n`` is close to ``d / N``.
    """
    if not 0 < p < 1:
        raise ValidationError(f"p must lie in (0, 1), got {p}")
    if N <= 0 or d <= 0:
        raise ValidationError("N and d must be positive")
    if d > N:
        raise ValidationError(f"d={d} exceeds N={N}")
    value = math.log(N / d) / (p * p)
    return int(Decimal(repr(value)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ModelParams:
    """Construction parameters for one random clause system.

    ``n_clauses`` overrides the derived clause count; when it is ``None``
    the count comes from :func:`choose_clause_count` with ``N = n_right``
    (the size of the side a left vertex's degree is drawn from).
    ``allow_degenerate`` admits ``p`` in ``{0, 1}`` for oracle tests.
    """

    d: float | None
    p: float
    n_left: int
    n_right: int
    n_clauses: int | None = None
    seed: int = 0
    allow_degenerate: bool = False

    def __post_init__(self) -> None:
        lo_ok = 0 <= self.p <= 1 if self.allow_degenerate else 0 < self.p < 1
        if not lo_ok:
            raise ValidationError(f"p must lie in (0, 1), got {self.p}")
        if self.n_left < 1 or self.n_right < 1:
            raise ValidationError("n_left and n_right must be positive")
        if not 0 <= int(self.seed) <= MASK64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.n_clauses is None:
            if self.d is None or self.d <= 0:
                raise ValidationError("d must be positive when n_clauses is derived")
            if self.d >= min(self.n_left, self.n_right):
                raise ValidationError("d must be below min(n_left, n_right)")
            if not 0 < self.p < 1:
                raise ValidationError("a derived clause count needs 0 < p < 1")
        elif self.n_clauses < 0:
            raise ValidationError("n_clauses must be nonnegative")
        elif self.d is not None and self.d <= 0:
            raise ValidationError("d must be positive")

    @property
    def clause_count(self) -> int:
        if self.n_clauses is not None:
            return int(self.n_clauses)
        return choose_clause_count(self.p, self.n_right, self.d)

    def with_seed(self, seed: int) -> "ModelParams":
        return ModelParams(self.d, self.p, self.n_left, self.n_right, self.n_clauses,
                           seed, self.allow_degenerate)

    def to_dict(self) -> dict[str, Any]:
        doc = asdict(self)
        doc.pop("allow_degenerate")
        if doc["n_clauses"] is None:
            doc.pop("n_clauses")
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any], allow_degenerate: bool = False) -> "ModelParams":
        try:
            return cls(
                d=None if doc.get("d") is None else float(doc["d"]),
                p=float(doc["p"]),
                n_left=int(doc["n_left"]),
                n_right=int(doc["n_right"]),
                n_clauses=None if doc.get("n_clauses") is None else int(doc["n_clauses"]),
                seed=int(doc.get("seed", 0)),
                allow_degenerate=allow_degenerate,
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed params: {exc}") from exc


def pack_bits(bits: np.ndarray) -> np.ndarray | list[int]:
    """Pack a ``(vertices, n)`` boolean block into one mask per row."""
    rows, n = bits.shape
    if n <= WORD_BITS:
        if n == 0:
            return np.zeros(rows, dtype=np.uint64)
        weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
        return (bits.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
    packed = np.packbits(bits, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def sample_cnf(params: ModelParams, rng: np.random.Generator | None = None,
               max_clauses: int = DEFAULT_MAX_CLAUSES) -> ClauseSystem:
    """Draw every mask bit independently with probability ``params.p``.

    Uses ``make_rng(params.seed)`` unless a generator is supplied.

    Raises:
        CapExceeded: if the clause count is above ``max_clauses``.
    """
    n = params.clause_count
    if n > max_clauses:
        raise CapExceeded(f"{n} clauses exceeds the mask-width limit {max_clauses}")
    if rng is None:
        rng = make_rng(params.seed)
    left = rng.random((params.n_left, n)) < params.p
    right = rng.random((params.n_right, n)) < params.p
    return ClauseSystem(n, pack_bits(left), pack_bits(right))


def sample_bernoulli_graph(n_left: int, n_right: int, q: float,
                           rng: np.random.Generator | int) -> ExplicitBipartiteGraph:
    """Each of the ``n_left * n_right`` pairs is an edge independently with probability ``q``."""
    if not 0 <= q <= 1:
        raise ValidationError(f"q must lie in [0, 1], got {q}")
    if n_left < 0 or n_right < 0:
        raise ValidationError("side sizes must be nonnegative")
    if not isinstance(rng, np.random.Generator):
        rng = make_rng(rng)
    return ExplicitBipartiteGraph.from_adjacency(rng.random((n_left, n_right)) < q)
