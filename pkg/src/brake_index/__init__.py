"""Maslov-type L0-indices of symplectic paths, their iteration theory for
brake-symmetric linear systems, and a Galerkin solver for brake orbits of
superquadratic Hamiltonian systems."""

from .brake import (BrakeSolution, DistinctnessReport, FamilyReport, distinctness,
                    extend_brake, linearized_system, solution_index_pair, solve_brake,
                    subharmonic_pipeline)
from .errors import *  # noqa: F401,F403
from .flow import (CoefficientPath, SymplecticPath, check_brake_symmetry,
                   fundamental_solution, iterate_path)
from .galerkin import (CriticalPoint, FourierVector, Functional, TruncationSpec,
                       assemble_A, assemble_Bhat, evaluate_phi, find_critical_points,
                       fourier_to_trajectory, galerkin_dimension_check, gradient_phi,
                       hessian_phi, truncate_hamiltonian)
from .hamiltonians import (HamiltonianSpec, audit_conditions, builtin_systems, make_builtin,
                           quartic)
from .index import IndexPair, l0_index, l0_nullity, l1_index, l_index
from .iteration import (SystemIndices, VerificationReport, random_brake_system,
                        random_positive_system, run_suite)
from .periodic import l0_omega_index_sqrtminus1, omega_index, omega_nullity, omega_pair
from .symplectic import (LagrangianFrame, brake_N, endpoint_Mminus, endpoint_Mplus,
                         is_symplectic, standard_J, symplectic_defect)

__version__ = "0.1.0"
