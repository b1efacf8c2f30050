"""Exact computations of homological dimensions over graded monomial quotient rings."""

from .complexes import (ChainComplex, ComplexMorphism, cone, hom_complex, homology, is_quasiiso,
                        sup_inf, suspend, tensor_complexes, truncate)
from .dimensions import (DeformationSpec, b_dimension, ci_dim_upper, dual_module, gdim,
                         hierarchy_check, pci_dim, totally_reflexive_test)
from .invariants import (complexity_estimate, depth, derived_hom, derived_tensor, koszul_complex,
                         poincare_product_check, poincare_series)
from .modules import GradedMatrix, GradedModule
from .resolution import (minimal_free_resolution, projective_dimension, ses_resolution,
                         strict_resolution, syzygy)
from .ring import (GradedAlgebra, ParseError, PrimeField, RingElement, graded_piece_basis,
                   is_complete_intersection, is_monomial_regular_sequence, normal_form)

__version__ = "0.1.0"
