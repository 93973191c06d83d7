"""Accelerated distributed optimization over strongly connected digraphs.

AB and ABN mix with a row-stochastic and a column-stochastic matrix; FROST
and FROZEN need row-stochastic weights only and learn the Perron vector on
the fly. ABN and FROZEN add Nesterov momentum.
"""

from .central import MomentumSchedule, nesterov_step, solve_reference, strongly_convex_beta
from .distributed import (
    AlgoConfig, AlgoState, Algorithm, ab_step, abn_step, frost_step, frozen_step, init_state, run,
)
from .graph import Digraph, generate_nearest_neighbor_digraph, is_strongly_connected, out_degree
from .objective import (
    LogisticData, ObjectiveSet, generate_logistic_data, logistic_objective, quadratic_objective,
    quartic_objective,
)
from .weights import (
    Kind, Side, StochasticMatrix, perron_vector, power_limit_residual, similarity_transform_check,
    uniform_column_stochastic, uniform_row_stochastic, validate,
)

__version__ = "0.1.0"
