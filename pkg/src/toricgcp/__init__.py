"""Exact toolkit for toric generalized characteristic polynomials.

Sparse polynomials over Q and GF(p), lattice polytope geometry and mixed
volumes, fills, Canny-Emiris toric resultants, the toric GCP with its
trailing coefficient F_A, and root recovery from the linear factors of F_A.
"""
from .field import GF, QQ, FieldError, PrimeField, RationalField, field_from_spec
from .poly import NotDivisibleError, Poly, PolyError
from .linalg import det_cofactor, det_fraction_free, det_numeric
from .univariate import univ_roots
from .geometry import (GeometryError, convex_hull, faces, minkowski_sum, mixed_subdivision,
                       mixed_volume, mixed_volume_oracle, normal_face_reps, volume)
from .fill import (FillCertificate, FillError, FillRefutation, certify, essential_subsets,
                   fills, fills_by_definition, irreducible_fill, is_essential,
                   is_irreducible_fill)
from .resultant import (CEMatrix, MatrixTooLarge, ResultantError, ResultantValue,
                        UnluckySpecialization, ce_matrix, toric_resultant)
from .gcp import (GcpError, GcpProblem, GcpResult, chow_form, gcp, is_compatible,
                  perturb_system, simplex_product_catalog, twisted_chow_support)
from .rootfind import (LinearFactor, RecoveredRoot, SolveReport, Split, SplitError,
                       roots_from_factors, solve, split_linear)

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "FieldError",
    "PrimeField",
    "RationalField",
    "field_from_spec",
    "NotDivisibleError",
    "Poly",
    "PolyError",
    "det_cofactor",
    "det_fraction_free",
    "det_numeric",
    "univ_roots",
    "GeometryError",
    "convex_hull",
    "faces",
    "minkowski_sum",
    "mixed_subdivision",
    "mixed_volume",
    "mixed_volume_oracle",
    "normal_face_reps",
    "volume",
    "FillCertificate",
    "FillError",
    "FillRefutation",
    "certify",
    "essential_subsets",
    "fills",
    "fills_by_definition",
    "irreducible_fill",
    "is_essential",
    "is_irreducible_fill",
    "CEMatrix",
    "MatrixTooLarge",
    "ResultantError",
    "ResultantValue",
    "UnluckySpecialization",
    "ce_matrix",
    "toric_resultant",
    "GcpError",
    "GcpProblem",
    "GcpResult",
    "chow_form",
    "gcp",
    "is_compatible",
    "perturb_system",
    "simplex_product_catalog",
    "twisted_chow_support",
    "LinearFactor",
    "RecoveredRoot",
    "SolveReport",
    "Split",
    "SplitError",
    "roots_from_factors",
    "solve",
    "split_linear",
]
