"""Toolkit for groups with compatible C-relations: carriers, quasi-orders,
axiom checking, structural decomposition, and canonical trees."""

from .carrier import (
    DomainError,
    GroupCarrier,
    InternalConsistencyError,
    InvalidParameterError,
    QuotientCarrier,
    WindowPolicy,
    conjugate,
    direct_product,
    is_window_closed,
    make_cyclic,
    make_free_abelian,
    make_hahn,
    make_semidirect,
    make_table,
)
from .classify import (
    ElementType,
    ElementaryKind,
    TypeReport,
    check_compatible_qo_axioms,
    check_cqo_axioms,
    cqo_from_compatible_qo,
    element_type,
    elementary_kind,
    extract_order,
    extract_valuation,
    is_order_type_like,
    is_valuational_like,
    order_cqo_from_order,
    type_report,
)
from .crel import (
    INF,
    AxiomCheck,
    AxiomReport,
    CRelation,
    DensityResult,
    Valuation,
    check_c_axioms,
    check_compatibility,
    check_og,
    check_valuation_axioms,
    crel_from_order,
    crel_from_qo,
    crel_from_valuation,
    is_dense,
    qo_from_crel,
    trivial_valuation,
    valuation_from_levels,
)
from .ctree import (
    CanonicalTree,
    Orbit,
    act,
    build_tree,
    classify_pair,
    export_dot,
    orbit_trichotomy,
    orbits,
)
from .examples import (
    EXAMPLE_NAMES,
    example_qo,
    order_type_qo,
    support_min_valuation,
    trivial_valuation_qo,
    vg_valuation,
)
from .qorder import (
    QuasiOrder,
    SubsetClassification,
    TotalOrder,
    coarsen,
    is_coarsening,
    natural_order,
    qo_from_key,
    qo_from_levels,
    trivial_qo,
)
from .structure import (
    Decomposition,
    Fiber,
    SubgroupPair,
    TypeComponent,
    WeldSite,
    component_order,
    component_subgroups,
    components_partition,
    decompose,
    lift,
    quotient_crel,
    quotient_qo,
    reconstruct,
    semidirect_lift,
    type_component,
    type_valuation,
    weld,
)

__version__ = "0.1.0"
