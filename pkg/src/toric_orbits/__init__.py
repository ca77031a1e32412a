"""Orbit spaces of compact torus representations: manifold recognition via
weight matroids, face posets, and Leontief substitution systems."""

from .orbit_classifier import (Charge, CircleQuotient, Kind, LeontiefType, OrbitVerdict,
                       RouteDisagreement, circle_classify, classify, classify_pseudomanifold,
                       classify_structural, fixed_point_charge, general_position_relation,
                       independence_complex)
from .complexes import (PseudomanifoldStatus, SimplicialComplex, boundary_of_simplex,
                        full_simplex, join, pseudomanifold_status, reduced_homology)
from .exact_linalg import (IntMatrix, kernel_basis, rational_rank, smith_normal_form,
                           solve_affine)
from .faces import (face_leontief_type, face_poset, poset_cardinality,
                    product_structure_check)
from .leontief_lp import (LeontiefSystem, block_system, check_leontief, enumerate_vertices,
                          nerve_complex, restrict_standard_weights)
from .matroid import LinearMatroid
from .weights import (WeightSystem, WeightSystemError, complexity, effective_reduction,
                      parse_weights, snf_canonical_form)

__version__ = "0.1.0"
