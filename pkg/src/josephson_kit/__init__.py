"""Two-mode dynamics of non-interacting bosons in a slightly asymmetric double well."""
from ._version import __version__
from .analytic import (GeneralizedSolutionConstants, StandardSolutionConstants,
                       analytic_generalized_asymmetric, analytic_generalized_symmetric,
                       analytic_standard, analytic_standard_linearized, constants_from_init,
                       generalized_from_standard, standard_constants_from_init)
from .density import (EffectiveDensityMatrix01, EffectiveDensityMatrixLR, alphas_from_manybody,
                      basis_transform, eigen_decompose, fragmentation_f, to_left_right, to_zero_one)
from .dynamics import (Trajectory, f_form_rhs, integrate_generalized, integrate_generalized_batch,
                       integrate_liouville, integrate_standard, integrate_standard_batch)
from .oracle import (ManyBodyState, evolve_manybody, oracle_check, product_lift, reduce,
                     thermal_lift, thermal_manybody)
from .potentials import build_family, load_potential
from .thermal import (ThermalEnsemble, canonical_alphas, equilibrium_state, f_equation_of_state,
                      isolines, kicked_state, kicked_Z_closed_form, limits_table, max_imbalance)
from .wellmodes import (ModePair, PotentialSpec, TwoModeParams, left_right_states, mixing_angle,
                        perturbed_modes, side_overlap, solve_lowest_modes, two_mode_params)

__all__ = [name for name in dir() if not name.startswith("_")]
