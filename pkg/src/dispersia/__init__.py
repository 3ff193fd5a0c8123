"""Casimir-Polder, van der Waals and Lifshitz forces from macroscopic QED.

All computations work in natural units (``hbar = c = eps0 = mu0 = 1`` with a
chosen reference frequency); :class:`UnitSystem` converts to and from SI.
"""
__version__ = "0.1.0"

from .born import (DysonSolution, VoxelBody, body_force_exact, body_force_linear,
                   crossing_force, solve_dyson)
from .errors import (CausalityViolation, DispersiaError, DomainError, ParseError,
                     QuadratureError, SeparationTooSmall, SingularSystem, ValidationError)
from .forces import (ForceResult, cp_force_atom, cp_force_atom_nonretarded_check,
                     cp_force_medium_atom, lifshitz_pressure, micro_object_force,
                     mirror_pressure_limit, retarded_mirror_limit)
from .green import (BulkGreen, FreeSpaceGreen, GreenProvider, PlanarGreen, bulk_green_iw,
                    free_space_green_iw)
from .materials import (PERFECT_MIRROR, VACUUM, IdealReflector, MaterialModel,
                        OscillatorPolarizability, Susceptibility, clausius_mosotti,
                        permittivity_iw, polarizability_from_chi, polarizability_iw)
from .planar import (GreenTensor3, LayerStack, fresnel_iw, generalized_reflection,
                     scattering_green_coincident, scattering_green_gap, scattering_green_trace)
from .quadrature import IntegralResult, QuadratureSpec, integrate_double, integrate_semiinfinite
from .units import UnitSystem
from .vdw import london_c6, retarded_vdw_limit, vdw_force
