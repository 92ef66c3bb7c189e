"""Coherent perfect absorption in a two-sided cavity holding two dipole-coupled emitters.

Rates and detunings are dimensionless in units of a reference emitter decay
rate, with hbar = 1.
"""

from .cpa import (AbsorptionMinimum, CpaResidual, CpaSolution, cpa_detuning_solutions,
                  cpa_residuals, find_absorption_minima, single_input_scattering)
from .dressed import (LadderManifold, PolaritonLevel, TransformedModel, mixing_angle,
                      numeric_ladder, polariton_eigensystem, rabi_splitting,
                      transform_model, transition_weights)
from .errors import (DegenerateAngleError, DomainError, IntegrationError, InternalError,
                     PreconditionError, SingularSystemError, TavisCPAError, ValidationError)
from .langevin import (MeanFieldState, RelaxationReport, Trace, integrate,
                       mean_field_derivatives, relax_to_steady)
from .model import (DriveConfig, GeometryInput, SystemParams, cooperativity,
                    ddi_from_geometry, separation_from_ddi, validate)
from .steady_state import (Observables, SteadyState, closed_form_intracavity, observables,
                           output_fields, single_qe_output, solve_steady_state,
                           two_qe_output)
from .sweep import SweepSpec, SweepTable, run_sweep, sweep_ddi, sweep_detuning, sweep_phase

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
