"""Logic gates as differential operators on Segal-Bargmann states."""
from .bargmann import (
    BargmannSpace,
    QuadratureGrid,
    basis_state,
    derivative_at,
    inner_product,
    inner_product_quadrature,
    kernel_eval,
    norm_squared,
    normalize,
    sb_coefficients,
    sb_transform,
)
from .exceptions import (
    AliasingError,
    ComplexInputError,
    DegreeOverflowError,
    DimensionError,
    DivergenceError,
    HoloError,
    PoleError,
    SupportError,
    UplError,
    ZeroStateError,
)
from .gates import (
    DiffOp,
    apply,
    apply_via_cauchy,
    commutator,
    compose,
    expectation,
    gate_from_label,
    jordan_schwinger,
    matrix_element,
    matrix_to_operator,
    operator_to_matrix,
    standard_gate,
)
from .holostate import HoloPoly, format_poly, monomial, tensor_product, variable
from .infotheory import ChannelEnsemble, entropy_change, kl_divergence, shannon_entropy
from .upl import LayerSchedule, UplProgram, classify_state, run_upl

__version__ = "0.1.0"
