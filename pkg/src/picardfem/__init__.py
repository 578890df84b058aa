"""Adaptive P1 finite elements with an inexact fixed-point solver for
strongly monotone quasilinear elliptic problems."""

from .mesh import (DIRICHLET, NEUMANN, MeshError, Triangulation,
                   common_elements, element_size, is_refinement_of, overlay,
                   read_mesh, refine, uniform_refine, unit_square_mesh,
                   write_mesh)
from .space import (AssemblyError, ConfigurationError, FESpace, FEFunction,
                    RieszSolver, assemble_load, assemble_riesz, build_space,
                    element_gradients, h_norm, h_norm_of, interpolate,
                    prolongate, stiffness_matrix, zero_function)
from .nonlinearity import (MonotoneProblem, Nonlinearity, apply_operator,
                           builtin_arctan, builtin_known_solution, energy,
                           nonlinearity_by_name, numeric_primitive,
                           residual_vector)
from .estimator import (IndicatorField, MarkedSet, compute_indicators,
                        dorfler_mark, restricted_estimator)
from .picard import (PicardConfig, PicardNonTermination, PicardTrace,
                     apriori_bound, first_step_bound, iterate_until_stop,
                     newton_reference, picard_step)
from .driver import (BUDGET_REACHED, LUCKY_BREAKDOWN, PICARD_NONTERMINATION,
                     AdaptiveTrace, DriverConfig, FullSequenceTrace,
                     InsufficientDataError, LevelRecord, fit_rate,
                     picard_growth_check, read_trace_csv, run_adaptive,
                     run_full_sequence, write_trace_csv)
from .zshape import (CORNER_EXPONENT, ProblemSpec, build_zshape,
                     exact_solution_known, h1_error_known, manufactured_data,
                     problem_spec)
from .bench import SweepConfig, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
