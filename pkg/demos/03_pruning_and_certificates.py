"""
Pruning to a K_{2,2}-free graph and certifying clause counts
=============================================================

Dropping left vertices that sit in a K_{2,2} (or have low degree) leaves a
K_{2,2}-free graph described by the same clauses. Counting distinct left
neighborhoods gives a lower bound on the number of clauses any CNF of a
graph needs.
"""

from cnfgraph import (
    ModelParams,
    cnf_size_lower_bound,
    count_k22_explicit,
    default_threshold,
    distinct_neighborhood_count,
    materialize,
    prune,
    sample_cnf,
)

params = ModelParams(d=None, p=0.5, n_left=100, n_right=100, n_clauses=12, seed=4)
cs = sample_cnf(params)

threshold = default_threshold(params, safety=0.5)
pruned = prune(cs, threshold)
print("threshold:", threshold)
print("stats:", pruned.stats.to_dict())

restricted = pruned.restricted
print("clauses before/after:", cs.n, restricted.n)
print("K22s left (brute force):", count_k22_explicit(materialize(restricted)).total)

D = distinct_neighborhood_count(cs, 0)
print(f"distinct neighborhoods: {D} <= 2**{cs.n}")
print("clause lower bound:", cnf_size_lower_bound(materialize(cs)), "<=", cs.n)
