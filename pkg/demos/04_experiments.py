"""
Replicated experiments
======================

Ensembles of random clause systems against the closed-form expectations,
the independent-edge baseline at the same edge probability, and the
Hoeffding bound against observed binomial tails.
"""

from cnfgraph import ModelParams, compare_models, run_experiment
from cnfgraph.bounds import implied_delta
from cnfgraph.harness import ExperimentConfig, chernoff_empirical, degree_concentration

params = ModelParams(d=None, p=0.3, n_left=300, n_right=300, n_clauses=10)
report = run_experiment(ExperimentConfig(params, replicates=20, master_seed=1))
for name, agg in report.aggregates.items():
    print(f"{name:13s} mean={agg.mean:.6g} expected={agg.expected:.6g} z={agg.z:+.2f}")
print(report.to_csv().splitlines()[0])

cmp = compare_models(ExperimentConfig(params, replicates=20, master_seed=1))
for name, agg in cmp.aggregates.items():
    print(f"{name:22s} mean={agg.mean:.6g} expected={agg.expected:.6g}")
print("implied delta at p=0.3, n=10:", round(implied_delta(0.3, 10), 4))

wide = ModelParams(d=None, p=0.3, n_left=4096, n_right=4096, n_clauses=17)
conc = degree_concentration(ExperimentConfig(wide, replicates=10, master_seed=2))
print("in-band fractions:", [round(f, 3) for f in conc["fractions"]])

for check in chernoff_empirical():
    print(f"mu={check.mu}: observed {check.observed:.3f}, bound {check.bound:.3f}")
