"""
Clause graphs and their mask encoding
=====================================

A bipartite graph given in conjunctive normal form is an intersection of
clause graphs ``(A x W) ∪ (V x B)``. Each vertex keeps one bit per clause,
set when the vertex is missing from that clause's set; an edge is a pair of
disjoint masks.
"""

from cnfgraph import ClauseSystem, adjacent, clause_graph_contains, materialize, neighborhood
from cnfgraph.analytics import degree_trace
from cnfgraph.graph import clause_sets, format_edge_list

# Two clauses over 3 left and 4 right vertices.
cs = ClauseSystem(2, left_masks=[0b00, 0b01, 0b11], right_masks=[0b00, 0b01, 0b10, 0b11])

# The masks and the clause sets describe the same graph.
for i, (A, B) in enumerate(clause_sets(cs)):
    print(f"clause {i}: A = {sorted(A)}, B = {sorted(B)}")

for v in range(cs.n_left):
    by_sets = {w for w in range(cs.n_right)
               if all(clause_graph_contains(A, B, v, w) for A, B in clause_sets(cs))}
    by_masks = {w for w in range(cs.n_right) if adjacent(cs, v, w)}
    assert by_sets == by_masks == neighborhood(cs, v)
    print(f"left {v}: neighbors {sorted(by_masks)}")

# A vertex's neighborhood shrinks one clause at a time.
print("degree trace of left 2:", degree_trace(cs, 2).values)

# Explicit edge list, as written by the CLI.
print(format_edge_list(materialize(cs)))
