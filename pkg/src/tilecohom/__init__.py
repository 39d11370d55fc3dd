"""Exact-arithmetic cohomology of substitution tiling spaces.

Čech cohomology of the hull of a primitive substitution is the direct
limit of the cohomologies of its approximant CW complexes under the
substitution-induced self-map.  This package computes those limits over
the integers — no floating point, no finite-field shortcuts — for a
family of one-dimensional substitutions, a two-dimensional decorated
block-substitution family, and the quotient cohomologies of the factor
maps relating them.
"""
from .abelian import (FgAbGroup, GroupHom, IntMatrix, SnfResult, cokernel,
                      induced_hom, kernel_basis, lattice_basis, rank, snf,
                      solve, solve_matrix)
from .catalog import (FactorPath, SpaceId, compute_path, compute_quotient,
                      compute_space, consistency_cross_checks, golden_table,
                      verify_all)
from .complexes import (CellularMap, CochainComplex, QuotientComplex,
                        cohomology, cohomology_tower, hom_on_cohomology,
                        lemma1_shortcut, les_quotient, pullback,
                        quotient_complex)
from .errors import (ExactnessFailure, HypothesisFailed, InvalidPath,
                     NotACochainMap, NotBorderForcing,
                     NotInjectiveOnCochains, NotPrimitive, NotWellDefined,
                     TilingCohomologyError, Unclassified)
from .limits import (GroupExpr, TowerGroup, classify, eventual_restriction,
                     iso_check, limit_les, radical, verify_split)
from .subst1d import (Substitution1D, absolute_cohomology_1d, ap_complex_1d,
                      factor_map_1d, factor_map_phi, factor_map_psi,
                      legal_words, pd_substitution, quotient_cohomology_1d,
                      solenoid_substitution, tm_substitution,
                      verify_times2_ses)
from .subst2d import (Substitution2D, ap_complex_2d, border_forcing_check,
                      compose_path, descend_rule, enumerate_prototiles,
                      factor_map_edge, lattice_edges, legal_adjacencies,
                      path_realizations)

__version__ = "1.0.0"
