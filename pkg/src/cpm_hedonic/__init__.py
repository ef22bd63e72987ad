"""Community detection as a hedonic game under the Constant Potts Model.

Nodes are players, communities are coalitions, and every strictly improving
unilateral move raises one exact rational potential.
"""

from .dynamics import DynamicsConfig, RunStats, apply_move, best_move, is_equilibrium, mirror, one_pass, run_dynamics
from .evalmetrics import ExperimentRecord, ari
from .graph import Graph, Partition, edge_density, load_edge_list, load_partition
from .metagraph import build_metagraph, enumerate_partitions, orient, sinks
from .potential import MoveGain, Resolution, move_gain, partition_potential
from .robustness import (
    GammaInterval,
    MoveClass,
    classify_move,
    equilibrium_gamma_range,
    familiarity,
    is_fully_robust,
    partition_robustness,
    robust_nodes,
)
from .synthgen import NoiseSpec, SappmSpec, generate, perturb

__version__ = "0.1.0"

__all__ = [
    "DynamicsConfig",
    "ExperimentRecord",
    "GammaInterval",
    "Graph",
    "MoveClass",
    "MoveGain",
    "NoiseSpec",
    "Partition",
    "Resolution",
    "RunStats",
    "SappmSpec",
    "apply_move",
    "ari",
    "best_move",
    "build_metagraph",
    "classify_move",
    "edge_density",
    "enumerate_partitions",
    "equilibrium_gamma_range",
    "familiarity",
    "generate",
    "is_equilibrium",
    "is_fully_robust",
    "load_edge_list",
    "load_partition",
    "mirror",
    "move_gain",
    "one_pass",
    "orient",
    "partition_potential",
    "partition_robustness",
    "perturb",
    "robust_nodes",
    "run_dynamics",
    "sinks",
]
