"""Implicit symplectic maps and integrators from constant Liouvillian
one-forms, with numerical certification tools."""

from .errors import (
    DimensionMismatch,
    DomainError,
    Exceptional,
    Incompatible,
    LiouvintError,
    NoConvergence,
    NotExact,
    NotHamiltonian,
    NotSeparable,
    NotSymmetric,
    NotSymplectic,
    OddDimension,
    Singular,
)
from .linalg import (
    cayley,
    complex_structure,
    det,
    inverse,
    is_hamiltonian,
    is_non_exceptional,
    is_symmetric,
    is_symplectic,
    jtilde_matrix,
    omega_matrix,
    solve,
)
from .forms import (
    LiouvillianForm,
    ProductForm,
    abg_family,
    add_symmetric,
    blocks,
    compat_check,
    cotangent_form_matrix,
    decompose,
    dim_liouvillian_space,
    e1_matrix,
    extract_S,
    form_for_symplectic,
    form_from_S,
    make_form,
    make_product_form,
    named_form,
    phi_family,
    tau_reduce,
)
from .induced_map import (
    InducedMap,
    MapClass,
    classify,
    consistency_map,
    evaluate,
    from_S,
    from_form,
    from_hamiltonian_matrix,
    projection_commutes,
)
from .dynamics import (
    HamiltonianSystem,
    Separable,
    builtin,
    harmonic,
    kepler,
    linear_system,
    pendulum,
    vector_field,
)
from .integrators import (
    PRESETS,
    IntegratorSpec,
    Trajectory,
    explicit_staggered,
    integrate,
    resolve_map,
    step,
)
from .verify import (
    VerifyReport,
    convergence_order,
    energy_drift,
    pullback_check,
    reports_to_csv,
    reports_to_json,
    step_jacobian,
    sweep_symplecticity,
    symplectic_residual,
)

__version__ = "0.1.0"
