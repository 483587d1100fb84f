"""Spanning-tree counts and degree bounds through quantum relative entropy."""

from treentropy.bounds import BoundReport, bound_quadratic, bound_suite, lower_detL, ordering_check
from treentropy.channels import averaged_pinch, averaged_pinch_power, pinch, sigma_state
from treentropy.gen import FamilySpec, connected, generate, parse_family
from treentropy.graphcore import (
    Multigraph,
    adjacency_matrix,
    degree_matrix,
    density_matrix,
    from_edge_list,
    laplacian,
    volume,
)
from treentropy.specfun import (
    det_sym,
    log_on_support,
    principal_submatrix,
    relative_entropy,
    spectral_decompose,
    von_neumann_entropy,
    zero_threshold,
)
from treentropy.treecount import (
    CountResult,
    Route,
    round_count,
    tau_deletion_contraction,
    tau_determinant,
    tau_entropy_id,
    tau_entropy_id_avg,
    tau_entropy_pi,
    tau_entropy_pi_avg,
    tau_entropy_reduced,
)

__version__ = "0.1.0"
