"""Tour of the graph quantities that drive every bound: edge boundary,
conductance, induced subgraphs, and the Cheeger constant.

Run: python demos/01_graph_quantities.py
"""

import numpy as np

from qpt_bounds import (cheeger_constant, conductance, edge_boundary,
                        hypercube, induced_subgraph, max_degree_in,
                        random_regular)

# A 3-dimensional hypercube: the driver graph of a 3-qubit transverse field.
q3 = hypercube(3)
print(f"3-cube: {q3.n} nodes, {q3.num_edges} edges, {q3.d}-regular")

# A subset of basis states and its surface-to-volume quantities.
face = [0, 1, 2, 3]          # the bit2=0 face, an induced 4-cycle
print(f"face {face}:")
print(f"  |dV|       = {edge_boundary(q3, face)}")
print(f"  phi(V)     = {conductance(q3, face)}  (exact rational)")
print(f"  d_max(V)   = {max_degree_in(q3, face)}")
sub, ids = induced_subgraph(q3, face)
print(f"  induced    = {sub.n} nodes, {sub.num_edges} edges (a 4-cycle)")

# The same numbers on a random regular graph, the toy-model substrate.
g = random_regular(256, 8, seed=7)
blob = [0] + [int(j) for j in g.neighbors(0)]
print(f"\nrandom 8-regular graph on 256 nodes, node 0 plus its neighbors:")
print(f"  |dV| = {edge_boundary(g, blob)}, phi = {conductance(g, blob)}")

# Cheeger constant: the smallest conductance over all small-enough subsets.
# Brute force, so only feasible on tiny graphs.
print(f"\nCheeger constants (exhaustive):")
print(f"  3-cube          : {cheeger_constant(q3)}")
print(f"  K4              : {cheeger_constant(random_regular(4, 3, seed=0))}")
print(f"  random 3-regular: {cheeger_constant(random_regular(12, 3, seed=1))}")
