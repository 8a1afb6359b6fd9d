"""Physical systems read as computing machines."""
from .memristive import MemristiveTrajectory, simulate_memristive, window_memristor
from .neuron import NeuronParams, PerceptronResult, gate_features, neuron_forward, perceptron_train
from .pendulum import (
    GateRow,
    PendulumParams,
    PendulumState,
    chain_frequency_matrix,
    normal_modes,
    pendulum_gate_table,
    pendulum_state,
)
from .reaction_diffusion import (
    RDConfig,
    fields_to_poly,
    fields_to_state,
    homogeneous_fixed_point,
    load_rd_config,
    simulate_fhn,
)
