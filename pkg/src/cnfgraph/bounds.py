"""Closed-form probabilities for the random clause model.

Everything here is a pure function of its arguments. Powers of survival
probabilities are evaluated in log space so that large clause counts
underflow to a clean zero instead of losing precision on the way down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analytics import distinct_neighborhood_count
from .errors import ValidationError
from .graph import ExplicitBipartiteGraph


def _check_p(p: float) -> None:
    if not 0 <= p <= 1:
        raise ValidationError(f"p must lie in [0, 1], got {p}")


def _check_n(n: int) -> None:
    if n < 0:
        raise ValidationError(f"n must be nonnegative, got {n}")


def _pow(base: float, n: int) -> float:
    if n == 0:
        return 1.0
    if base <= 0:
        return 0.0
    return math.exp(n * math.log(base))


def edge_probability(p: float, n: int) -> float:
    """Probability ``(1 - p**2) ** n`` that a fixed pair is an edge."""
    _check_p(p)
    _check_n(n)
    if n == 0:
        return 1.0
    if p == 1:
        return 0.0
    return math.exp(n * math.log1p(-p * p))


def k22_clause_survival(p: float) -> float:
    """Probability that one clause leaves a fixed quadruple intact.

    The clause breaks the quadruple iff one of the two left vertices and one
    of the two right vertices are both excluded, so the survival probability
    is ``1 - (2p - p**2) ** 2 = 1 - 4p**2 + 4p**3 - p**4``.
    """
    _check_p(p)
    hit = 2 * p - p * p
    return 1.0 - hit * hit


def k22_probability(p: float, n: int) -> float:
    """Probability that a fixed quadruple spans a K_{2,2}."""
    _check_n(n)
    return _pow(k22_clause_survival(p), n)


def expected_k22(n_left: int, n_right: int, p: float, n: int) -> float:
    if n_left < 0 or n_right < 0:
        raise ValidationError("side sizes must be nonnegative")
    quads = math.comb(n_left, 2) * math.comb(n_right, 2)
    return quads * k22_probability(p, n)


def expected_k22_bernoulli(n_left: int, n_right: int, q: float) -> float:
    """Expected K_{2,2} count when every pair is an independent edge with probability ``q``."""
    _check_p(q)
    return math.comb(n_left, 2) * math.comb(n_right, 2) * q**4


def expected_degree(n_right: int, p: float, n: int) -> float:
    if n_right < 0:
        raise ValidationError("n_right must be nonnegative")
    return n_right * edge_probability(p, n)


def chernoff_bound(M: int, mu: float) -> float:
    """Hoeffding bound ``min(1, 2 exp(-2 mu**2 M))`` on a two-sided binomial tail."""
    if M < 1:
        raise ValidationError(f"sample count must be at least 1, got {M}")
    if mu < 0:
        raise ValidationError(f"deviation must be nonnegative, got {mu}")
    return min(1.0, 2.0 * math.exp(-2.0 * mu * mu * M))


def implied_delta(p: float, n: int) -> float:
    """Exponent ``delta`` with ``k22_probability = edge_probability ** (4 - delta)``.

    ``nan`` when the edge probability is 0 or 1 and no exponent is defined.
    """
    q = edge_probability(p, n)
    if q in (0.0, 1.0):
        return math.nan
    survival = k22_clause_survival(p)
    log_k22 = n * math.log(survival) if survival > 0 else -math.inf
    return 4.0 - log_k22 / math.log(q)


def cnf_size_lower_bound(g: ExplicitBipartiteGraph) -> int:
    """Fewest clauses any CNF of ``g`` can use: ``ceil(log2 D)``.

    ``D`` is the number of distinct left neighborhoods; each neighborhood is
    an intersection of a subfamily of the right clause sets, so ``n`` clauses
    give at most ``2**n`` of them.
    """
    D = distinct_neighborhood_count(g, 0)
    return (D - 1).bit_length() if D > 1 else 0


@dataclass(frozen=True)
class Expectations:
    edge_probability: float
    k22_probability: float
    expected_degree: float
    expected_k22: float
    chernoff_bound: float | None = None

    def to_dict(self) -> dict[str, float]:
        doc = {
            "edge_probability": self.edge_probability,
            "k22_probability": self.k22_probability,
            "expected_degree": self.expected_degree,
            "expected_k22": self.expected_k22,
        }
        if self.chernoff_bound is not None:
            doc["chernoff_bound"] = self.chernoff_bound
        return doc


def expectations(n_left: int, n_right: int, p: float, n: int,
                 M: int | None = None, mu: float | None = None) -> Expectations:
    chern = chernoff_bound(M, mu) if M is not None and mu is not None else None
    return Expectations(
        edge_probability=edge_probability(p, n),
        k22_probability=k22_probability(p, n),
        expected_degree=expected_degree(n_right, p, n),
        expected_k22=expected_k22(n_left, n_right, p, n),
        chernoff_bound=chern,
    )
