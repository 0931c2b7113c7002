"""Jet-level gauge transformation machinery on grid patches.

Fiber algebra for compact matrix groups, first- and second-order gauge
jets with their group laws, the local action laws on matter fields,
gauge potentials, and curvature, gauge-invariant densities with minimal
coupling and curvature factorization, and a config-driven verification
harness.
"""

from .lie_core import (
    AlgebraElement,
    DimensionError,
    GroupElement,
    GroupFamily,
    GroupSpec,
    InvariantError,
    RepTangent,
    RepVector,
    adjoint,
    algebra_basis,
    algebra_coords,
    algebra_from_coords,
    algebra_inner,
    bracket,
    exp,
    fundamental_vector_field,
    group_spec,
    inverse,
    multiply,
    random_algebra_element,
    random_group_element,
    rep_act,
    tangent_act,
)
from .patch import Field, Patch, Region, RegionError, default_patch, integrate, partial
from .jets import (
    Curvature,
    Jet1Gauge,
    Jet2Gauge,
    JetConnection,
    JetMatter,
    Variation,
    curvature,
    jet1_inv,
    jet1_mul,
    jet1_of,
    jet2_inv,
    jet2_mul,
    jet2_of,
    jet_connection_of,
    jet_matter_of,
    maurer_cartan_defect,
    merge_jet_connection,
    split_jet_connection,
)
from .actions import (
    TransitivityWitness,
    act_connection,
    act_curvature,
    act_jet_connection,
    act_jet_matter,
    act_matter,
    act_variation,
    gauge_to_zero_jet1,
    gauge_to_zero_jet2,
)
from .lagrangians import (
    GaugeKind,
    GaugeLagrangianSpec,
    MatterKind,
    MatterLagrangianSpec,
    action_functional,
    covariant_derivative,
    gauge_density,
    matter_density_vec,
    mechanics_action,
    minimal_coupling,
    total_action,
    utiyama_factor,
)
from .harness import Report, SuiteConfig, convergence_study, run

__version__ = "0.1.0"
