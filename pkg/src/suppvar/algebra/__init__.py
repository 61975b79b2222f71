from .modules import (AModule, Quotient, cyclic_submodule, direct_sum, hom_space, is_homomorphism,
                      module_from_json, module_to_json, orbit_matrix, quotient_module, regular_module,
                      representation_failures, submodule, tensor_module, unit_isomorphism, unit_module,
                      zero_module)
from .presentation import (AlgebraPresentation, ValidationReport, algebra_from_json, algebra_generators,
                           algebra_to_json, validate)
from .radical import (PrincipalIndecomposable, RadicalData, cartan_matrix, characters,
                      composition_multiplicities, lift_idempotent, matrix_algebra_radical, principal_decomposition,
                      radical, radical_filtration_multiplicities, radical_layers, radical_of_module, simples,
                      top_multiplicities)
from .structure import (DecompositionReport, IsomorphismResult, decompose, indecomposable_iso, is_local,
                        is_projective, module_isomorphic, projective_free_part, split_idempotent,
                        stably_isomorphic)
