"""Flocking particle systems and 1D alignment hydrodynamics.

Simulation of velocity-alignment particle models (global and locally
normalized averaging, optional interaction potentials) and of the
associated one-dimensional hydrodynamic limit in Lagrangian coordinates,
together with analytic critical-threshold classifiers, blow-up time
bounds, and closed-form steady states to compare against.
"""
from .kernels import (CommunicationKernel, PotentialSpec, quadratic,
                      newtonian_confined, power_law, log_quadratic,
                      gauss_quadratic, psi_eval, potential_grad,
                      psi_tail_integral, solve_R_tilde)
from .integrators import IntegratorConfig, IntegrationResult, step_rk4
from .hydro import (HydroModel, LagrangianState, InitProfile, build_grid,
                    init_profiles, deta_dx, density_reconstruct,
                    density_tolerant, MonitorThresholds, simulate_hydro,
                    RunSummary, TERM_REACHED_END, TERM_BLOW_UP)
from .particle import (ParticleModel, ParticleState, generate_uniform_ic,
                       generate_two_group_ic, simulate_particles,
                       ParticleRun, flocking_envelope_check, EnvelopeReport)
from .thresholds import (ThresholdVerdict, BlowUpBound, psi_conv,
                         classify_euler_alignment, classify_euler_poisson,
                         classify_constant_psi, classify_damped_newtonian,
                         sigma_minus, sigma_plus,
                         blowup_time_bound_newtonian, blowup_time_bound_log,
                         SUBCRITICAL, SUPERCRITICAL, GAP)
from .steady import (SteadyProfile, indicator_steady, parabola_steady,
                     semicircle_steady, force_residual, cell_widths,
                     l1_distance, linf_velocity)
from .presets import PRESETS, preset_names, preset_config

__version__ = "0.1.0"

__all__ = [
    "CommunicationKernel", "PotentialSpec", "quadratic",
    "newtonian_confined", "power_law", "log_quadratic", "gauss_quadratic",
    "psi_eval", "potential_grad", "psi_tail_integral", "solve_R_tilde",
    "IntegratorConfig", "IntegrationResult", "step_rk4",
    "HydroModel", "LagrangianState", "InitProfile", "build_grid",
    "init_profiles", "deta_dx", "density_reconstruct", "density_tolerant",
    "MonitorThresholds", "simulate_hydro", "RunSummary",
    "TERM_REACHED_END", "TERM_BLOW_UP",
    "ParticleModel", "ParticleState", "generate_uniform_ic",
    "generate_two_group_ic", "simulate_particles", "ParticleRun",
    "flocking_envelope_check", "EnvelopeReport",
    "ThresholdVerdict", "BlowUpBound", "psi_conv",
    "classify_euler_alignment", "classify_euler_poisson",
    "classify_constant_psi", "classify_damped_newtonian",
    "sigma_minus", "sigma_plus",
    "blowup_time_bound_newtonian", "blowup_time_bound_log",
    "SUBCRITICAL", "SUPERCRITICAL", "GAP",
    "SteadyProfile", "indicator_steady", "parabola_steady",
    "semicircle_steady", "force_residual", "cell_widths",
    "l1_distance", "linf_velocity",
    "PRESETS", "preset_names", "preset_config",
    "__version__",
]
