"""Learning discrete graphical models by interaction screening, with linear bases or neural nets."""

from .conditional import ConditionalModel, TrainConfig, learned_conditional, neurise_fit, neurise_fit_all
from .energy import EnergyNet, energy_compare, energy_fit, full_energy_loss
from .errors import CapacityError, ContractError, InvalidInputError, ParseError, SolverError
from .grise import Constrained, GriseProblem, Penalized, grise_fit, iso_gradient, iso_value
from .model import (Alphabet, BasisTerm, EnergyModel, SampleSet, build_partial_basis, count_grise_params,
                    gen_er_pairwise, gen_hypergraph_model, gen_one_d_model)
from .neural import Mlp, MlpSpec, mlp_backward, mlp_forward, mlp_param_count
from .sampling import GibbsConfig, exact_distribution, exact_sample, gibbs_sample, true_conditional

__version__ = "0.1.0"
