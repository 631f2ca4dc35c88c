"""Monte Carlo replication of the random clause construction.

Each replicate draws its own seed from the master seed, samples a clause
system, counts K_{2,2}s, prunes, and certifies the clause-count lower bound.
Replicates are independent, so they can run on a thread pool; rows are
always assembled in replicate order, which keeps output byte-identical for
any worker count.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .analytics import (
    DEFAULT_CAP_QUADRUPLES,
    DEFAULT_CAP_SOS_BITS,
    comb2,
    count_k22,
    count_k22_codegree,
    count_k22_explicit,
    degrees,
    distinct_neighborhood_count,
)
from .bounds import (
    chernoff_bound,
    cnf_size_lower_bound,
    edge_probability,
    expected_degree,
    expected_k22,
    expected_k22_bernoulli,
    k22_clause_survival,
)
from .errors import CapExceeded
from .graph import DEFAULT_CAP_PAIRS, adjacency_matrix, materialize
from .pruning import DEFAULT_SAFETY, default_threshold, prune
from .random_model import (
    ModelParams,
    make_rng,
    replicate_seed,
    sample_bernoulli_graph,
    sample_cnf,
    splitmix64,
)

log = logging.getLogger(__name__)

# Desk-scale rendering of the degree-concentration lemma: a vertex is "in
# band" when its degree lies within a factor BAND of the expected degree;
# a replicate passes when at least BAND_MIN_FRACTION of left vertices are in
# band; the ensemble passes when at least BAND_PASS_RATE of replicates pass.
# Pilot runs at N=4096, p=0.3, n=17 give in-band fractions near 0.957.
DEFAULT_BAND = 4.0
BAND_MIN_FRACTION = 0.9
BAND_PASS_RATE = 0.9


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams
    replicates: int = 10
    threshold_safety: float = DEFAULT_SAFETY
    epsilon: float = 0.25
    band: float | None = DEFAULT_BAND
    band_min_fraction: float = BAND_MIN_FRACTION
    band_pass_rate: float = BAND_PASS_RATE
    outputs: str = "csv"
    master_seed: int = 0
    cap_pairs: int = DEFAULT_CAP_PAIRS
    cap_sos_bits: int = DEFAULT_CAP_SOS_BITS
    cap_quadruples: int = DEFAULT_CAP_QUADRUPLES
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if not 0 < self.threshold_safety <= 1:
            raise ValueError("threshold_safety must lie in (0, 1]")
        if self.outputs not in ("csv", "json"):
            raise ValueError("outputs must be 'csv' or 'json'")
        if self.band is not None and self.band < 1:
            raise ValueError("band must be at least 1")

    @property
    def expected_degree(self) -> float:
        p = self.params
        return expected_degree(p.n_right, p.p, p.clause_count)

    @property
    def band_factor(self) -> float:
        """Fixed ``band`` if set, else ``(N / expected degree) ** epsilon``."""
        if self.band is not None:
            return self.band
        mu = self.expected_degree
        if mu <= 0:
            return math.inf
        return (self.params.n_right / mu) ** self.epsilon


@dataclass
class ReplicateRow:
    replicate: int
    seed: int
    edge_count: int | None = None
    average_degree: float | None = None
    k22_total: int | None = None
    surviving_count: int | None = None
    surviving_average_degree: float | None = None
    pruned_k22_total: int | None = None
    distinct_neighborhoods: int | None = None
    lower_bound: int | None = None
    n_clauses: int | None = None
    band_fraction: float | None = None
    neighborhoods_preserved: bool | None = None
    pruned_check: str = ""
    status: str = "ok"

    @property
    def completed(self) -> bool:
        return self.status == "ok"


CSV_COLUMNS = [f.name for f in fields(ReplicateRow)]


@dataclass(frozen=True)
class Aggregate:
    name: str
    count: int
    mean: float
    std: float
    expected: float

    @property
    def stderr(self) -> float:
        return self.std / math.sqrt(self.count) if self.count else math.nan

    @property
    def z(self) -> float:
        diff = self.mean - self.expected
        se = self.stderr
        if se == 0:
            return 0.0 if abs(diff) <= 1e-12 * max(1.0, abs(self.expected)) else math.copysign(math.inf, diff)
        return diff / se

    def within(self, n_se: float) -> bool:
        return abs(self.z) <= n_se

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "count": self.count, "mean": self.mean, "std": self.std,
                "stderr": self.stderr, "expected": self.expected, "z": self.z}


def aggregate(name: str, values: Sequence[float], expected: float) -> Aggregate:
    arr = np.asarray(values, dtype=float)
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    mean = float(arr.mean()) if len(arr) else math.nan
    return Aggregate(name, len(arr), mean, std, expected)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[ReplicateRow]
    aggregates: dict[str, Aggregate]
    band: dict[str, float]

    @property
    def completed(self) -> list[ReplicateRow]:
        return [r for r in self.rows if r.completed]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(_csv_cell(getattr(row, c)) for c in CSV_COLUMNS)
        return buf.getvalue()

    def to_dict(self) -> dict[str, Any]:
        return {
            "params": self.config.params.to_dict(),
            "replicates": self.config.replicates,
            "master_seed": self.config.master_seed,
            "completed": len(self.completed),
            "rows": [asdict(r) for r in self.rows],
            "aggregates": {k: a.to_dict() for k, a in self.aggregates.items()},
            "band": self.band,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_json_default) + "\n"


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_default(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def band_fraction(deg: np.ndarray, mu: float, band: float) -> float:
    """Fraction of degrees inside ``[mu / band, mu * band]``."""
    if len(deg) == 0:
        return math.nan
    inside = (deg >= mu / band) & (deg <= mu * band)
    return float(inside.mean())


def run_replicate(config: ExperimentConfig, r: int) -> ReplicateRow:
    """One replicate; cap violations mark the row skipped instead of raising."""
    seed = replicate_seed(config.master_seed, r)
    row = ReplicateRow(replicate=r, seed=seed)
    params = config.params.with_seed(seed)
    try:
        cs = sample_cnf(params)
        row.n_clauses = cs.n
        deg = degrees(cs, cap_sos_bits=config.cap_sos_bits)
        row.edge_count = int(deg.sum())
        row.average_degree = row.edge_count / cs.n_left
        row.band_fraction = band_fraction(deg, config.expected_degree, config.band_factor)

        report = count_k22(cs, cap_sos_bits=config.cap_sos_bits)
        row.k22_total = report.total

        pruned = prune(cs, default_threshold(params, config.threshold_safety), report,
                       cap_sos_bits=config.cap_sos_bits)
        row.surviving_count = pruned.stats.surviving_count
        row.surviving_average_degree = pruned.stats.surviving_average_degree
        restricted = pruned.restricted
        row.pruned_k22_total = count_k22(restricted, cap_sos_bits=config.cap_sos_bits).total
        row.pruned_check = "mask"
        if comb2(restricted.n_left) * comb2(restricted.n_right) <= config.cap_quadruples:
            explicit = count_k22_explicit(materialize(restricted, config.cap_pairs),
                                          config.cap_quadruples).total
            row.pruned_check = "mask+explicit" if explicit == row.pruned_k22_total else "mismatch"
            row.pruned_k22_total = max(row.pruned_k22_total, explicit)
        row.distinct_neighborhoods = distinct_neighborhood_count(cs, 0)
        if cs.n_left * cs.n_right <= config.cap_pairs:
            base_adj = adjacency_matrix(cs)
            row.neighborhoods_preserved = bool(np.array_equal(
                adjacency_matrix(restricted), base_adj[pruned.surviving_left]))
            row.lower_bound = cnf_size_lower_bound(materialize(cs, config.cap_pairs))
        else:
            d = row.distinct_neighborhoods
            row.lower_bound = (d - 1).bit_length() if d > 1 else 0
    except CapExceeded as exc:
        log.warning("replicate %d skipped: %s", r, exc)
        row.status = f"skipped: {exc}"
    return row


def _map_ordered(fn: Callable[[int], Any], items: Iterable[int], jobs: int) -> list[Any]:
    items = list(items)
    if jobs <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    rows = _map_ordered(lambda r: run_replicate(config, r), range(config.replicates), config.jobs)
    done = [r for r in rows if r.completed]
    p = config.params
    n = p.clause_count
    pairs = p.n_left * p.n_right
    aggregates = {
        "edge_density": aggregate("edge_density", [r.edge_count / pairs for r in done],
                                  edge_probability(p.p, n)),
        "k22_total": aggregate("k22_total", [r.k22_total for r in done],
                               expected_k22(p.n_left, p.n_right, p.p, n)),
    }
    fractions = [r.band_fraction for r in done]
    passing = sum(f >= config.band_min_fraction for f in fractions)
    band = {
        "band": config.band_factor,
        "expected_degree": config.expected_degree,
        "min_fraction": config.band_min_fraction,
        "mean_fraction": float(np.mean(fractions)) if fractions else math.nan,
        "pass_rate": passing / len(fractions) if fractions else math.nan,
        "required_pass_rate": config.band_pass_rate,
    }
    return ExperimentReport(config, rows, aggregates, band)


def degree_concentration(config: ExperimentConfig) -> dict[str, Any]:
    """In-band degree fractions per replicate, without the counting stages."""
    mu, band = config.expected_degree, config.band_factor

    def one(r: int) -> float:
        cs = sample_cnf(config.params.with_seed(replicate_seed(config.master_seed, r)))
        return band_fraction(degrees(cs, cap_sos_bits=config.cap_sos_bits), mu, band)

    fractions = _map_ordered(one, range(config.replicates), config.jobs)
    passing = sum(f >= config.band_min_fraction for f in fractions)
    return {
        "band": band,
        "expected_degree": mu,
        "fractions": fractions,
        "pass_rate": passing / len(fractions),
        "passed": passing / len(fractions) >= config.band_pass_rate,
    }


# --- CNF model vs independent-edge baseline ------------------------------

@dataclass
class ModelComparison:
    q: float
    cnf_k22: list[int]
    bernoulli_k22: list[int]
    cnf_edges: list[int]
    bernoulli_edges: list[int]
    bernoulli_surviving: list[int]
    aggregates: dict[str, Aggregate] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "cnf_k22": self.cnf_k22,
            "bernoulli_k22": self.bernoulli_k22,
            "cnf_edges": self.cnf_edges,
            "bernoulli_edges": self.bernoulli_edges,
            "bernoulli_surviving": self.bernoulli_surviving,
            "aggregates": {k: a.to_dict() for k, a in self.aggregates.items()},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["replicate", "cnf_edges", "cnf_k22", "bernoulli_edges",
                         "bernoulli_k22", "bernoulli_surviving"])
        for r, vals in enumerate(zip(self.cnf_edges, self.cnf_k22, self.bernoulli_edges,
                                     self.bernoulli_k22, self.bernoulli_surviving)):
            writer.writerow([r, *vals])
        return buf.getvalue()


def compare_models(config: ExperimentConfig) -> ModelComparison:
    """Run the clause model and the independent-edge model at matched edge probability.

    The baseline graph for replicate ``r`` uses seed
    ``splitmix64(replicate_seed(master_seed, r))``. Its pruning keeps left
    vertices in no K_{2,2}, the same participation rule as the clause model.
    """
    p = config.params
    n = p.clause_count
    q = edge_probability(p.p, n)

    def one(r: int) -> tuple[int, int, int, int, int]:
        seed = replicate_seed(config.master_seed, r)
        cs = sample_cnf(p.with_seed(seed))
        cnf_edges = int(degrees(cs, cap_sos_bits=config.cap_sos_bits).sum())
        cnf_total = count_k22(cs, cap_sos_bits=config.cap_sos_bits).total
        g = sample_bernoulli_graph(p.n_left, p.n_right, q, make_rng(splitmix64(seed)))
        rep = count_k22_codegree(g)
        surviving = int((rep.left_participation == 0).sum())
        return cnf_edges, cnf_total, g.edge_count, rep.total, surviving

    results = _map_ordered(one, range(config.replicates), config.jobs)
    cnf_edges, cnf_k22, b_edges, b_k22, b_surv = (list(col) for col in zip(*results))
    pairs = p.n_left * p.n_right
    out = ModelComparison(q, cnf_k22, b_k22, cnf_edges, b_edges, b_surv)
    out.aggregates = {
        "cnf_k22": aggregate("cnf_k22", cnf_k22, expected_k22(p.n_left, p.n_right, p.p, n)),
        "bernoulli_k22": aggregate("bernoulli_k22", b_k22,
                                   expected_k22_bernoulli(p.n_left, p.n_right, q)),
        "cnf_edge_density": aggregate("cnf_edge_density", [e / pairs for e in cnf_edges], q),
        "bernoulli_edge_density": aggregate("bernoulli_edge_density",
                                            [e / pairs for e in b_edges], q),
    }
    return out


def survival_dominates(grid: Iterable[float], clauses: int = 1) -> list[tuple[float, float, float]]:
    """``(p, clause-model K_{2,2} prob, baseline K_{2,2} prob)`` where the clause model is smaller.

    An empty list means the clause model's per-quadruple probability is at
    least the baseline's at every grid point.
    """
    bad = []
    for p in grid:
        cnf = k22_clause_survival(p) ** clauses
        base = edge_probability(p, clauses) ** 4
        if cnf < base * (1 - 1e-12):
            bad.append((p, cnf, base))
    return bad


# --- Hoeffding bound vs observed binomial tails ---------------------------

@dataclass(frozen=True)
class TailCheck:
    mu: float
    observed: float
    bound: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.observed <= self.tolerance


def chernoff_empirical(M: int = 200, p: float = 0.5, mus: Sequence[float] = (0.05, 0.1, 0.2),
                       samples: int = 1000, seed: int = 0) -> list[TailCheck]:
    """Observed two-sided tail frequencies against the Hoeffding bound.

    The allowance is the bound plus three binomial standard errors of a
    frequency estimated from ``samples`` draws.
    """
    sums = make_rng(seed).binomial(M, p, size=samples)
    dev = np.abs(sums - p * M)
    checks = []
    for mu in mus:
        b = chernoff_bound(M, mu)
        # the small slack makes borderline integer deviations count as tail events
        observed = float(np.mean(dev >= mu * M - 1e-9))
        checks.append(TailCheck(mu, observed, b, b + 3 * math.sqrt(b * (1 - b) / samples)))
    return checks
