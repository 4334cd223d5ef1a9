"""Exact Tate cohomology of finite groups, cup products in every degree, and
explicit cocycles for cyclic groups."""
from .errors import NotCocycleError, SizeGuardError, TatekitError, ValidationError
from .groups import FiniteGroup, build_group, cyclic, direct_product, find_generator, from_table
from .modules import (GModule, augmentation_kernel, build_module, lattice, make_module, norm_map, regular_ZG,
                      tensor_module, trivial_Z, trivial_Z_mod)
from .cochains import (HomCochain, InhCochain, diff_hom, diff_inh, hom_to_inh, inh_to_hom, is_cocycle,
                       random_cochain)
from .cohomology import CohomologyGroup, classes_equal, connecting_hom, cyclic_oracle, reduce_class, tate_group
from .cup import cup_classes, cup_hom, cup_inh, regime
from .cyclic_tate import (CyclicContext, b_cocycle, chi_cocycle, cyclic_context, fundamental_cocycle_model,
                          h_minus1_elements, tate_iso_check, verify_theorem_1_2, z_cocycle)

__version__ = "0.1.0"
