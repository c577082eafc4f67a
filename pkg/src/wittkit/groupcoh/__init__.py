"""Cohomology of finite groups with coefficients in finitely generated modules."""

from .bar import (
    AbelianGroupStructure,
    BudgetExceeded,
    CoboundaryResult,
    CochainClass,
    CohomologyGroup,
    NotCocycle,
    NotStabilized,
    ShapeMismatch,
    add_classes,
    bar_cohomology,
    class_coordinates,
    coboundary,
    differential_matrix,
    inflate_coefficients,
    inflate_group,
    is_coboundary,
    scale_class,
    stabilized_cohomology,
    subgroup_structure,
)
from .cyclic import cyclic_cohomology
from .modules import (
    GModule,
    ModuleMap,
    NotEquivariant,
    cyclic_module,
    doubling_map,
    module_from_spec,
    module_to_spec,
    order_dividing_multipliers,
    roots_of_unity,
    trivial_module,
)

__all__ = [name for name in dir() if not name.startswith("_")]
