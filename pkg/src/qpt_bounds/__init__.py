"""Graph-theoretic bounds on first-order quantum phase transitions along
adiabatic annealing paths, validated against exact diagonalization.

Subpackages
-----------
::

 graph        -- graphs over basis states; boundary, conductance, Cheeger
 hamiltonian  -- interpolated H(s) as a matrix-free operator
 spectral     -- lowest eigenpairs, schedule sweeps, gap minima
 bounds       -- localized/delocalized energies, s* bounds, classification
 symmetry     -- equitable partitions, quotient matrices, Gershgorin
 instances    -- toy-landscape generator, 15-qubit WMIS instance
 ndpt         -- second-order non-degenerate PT comparison baseline
 cli          -- command-line front end (JSON/CSV outputs)
"""

from .bounds import (BoundsReport, Classification, LocalMinimum, build_report,
                     classify, e_deloc, e_global, e_local_bounds,
                     local_minimum, no_qpt_condition_conductance,
                     no_qpt_condition_gap, s_prime, s_star_bounds)
from .graph import (Graph, NodeSet, avg_degree_in, bfs_farthest_pair,
                    cheeger_constant, conductance, connected_components,
                    edge_boundary, hypercube, induced_subgraph, max_degree_in,
                    random_regular)
from .hamiltonian import (AnnealInstance, Normalization, TargetSpectrum,
                          apply_h, driver_ground_energy)
from .instances import (LabeledInstance, ToyParams, WmisParams, build_wmis,
                        gen_toy, verify_wmis_counts, wmis_local_min_set)
from .ndpt import NdptPrediction, predict_crossing_ndpt, second_order_energy
from .spectral import (AnnealSweep, SpectrumPoint, fidelity_jump,
                       lanczos_lowest_two, lowest_two, principal_eigenvalue,
                       sweep)
from .symmetry import (Partition, QuotientMatrix, equitable_partition,
                       gershgorin_bound, improved_lambda_upper,
                       quotient_matrix)

__version__ = "0.1.0"
