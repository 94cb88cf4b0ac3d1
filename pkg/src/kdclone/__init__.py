"""Cloning, partial-swap and controlled-swap statistics as Kirkwood-Dirac joint probabilities."""
from .channels import (
    CloneOutput,
    CoherenceOperator,
    ControlAxis,
    CswapOutput,
    apply_clone_channel,
    apply_partial_swap_channel,
    clone_decomposition_weights,
    clone_fidelity,
    coherence_operator,
    controlled_swap_output,
    cswap_joint_probabilities,
    joint_diagonal,
    partial_swap_closed_form,
    partial_swap_unitary,
    swap_operator,
)
from .hilbert import (
    BipartiteOperator,
    DensityMatrix,
    HilbertError,
    Observable,
    OrthonormalBasis,
    PureState,
    computational_basis,
    fourier_basis,
    haar_random_state,
    partial_trace,
    random_density,
    tensor,
    unitary_sqrt,
)
from .kd import (
    OrthogonalPostSelectionError,
    UnsuitableBasisError,
    background_subtract,
    clone_joint_probabilities,
    extract_kd_from_cswap,
    kd_distribution,
    negativity_report,
    reconstruct_density_matrix,
    weak_value,
    weak_value_from_kd,
)
from .tables import ComplexJointTable, ProbTable, sample_setting
from .weakmeas import WeakMeasConfig, simulate_pointer_shift, weak_limit_extrapolate

__version__ = "0.1.0"
