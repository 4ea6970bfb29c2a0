"""Shared numeric substrate."""

from .amplitude import DIMENSIONLESS, INV_LENGTH, INV_SQRT_LENGTH, ComplexAmplitude
from .bridge import bridge_blocks, sample_bridges, sample_brownian_bridge
from .gaussian import GaussianKernel, compose_chain, compose_gaussian, compose_power
from .lattice import PathSample, PhasePath, TimeLattice
from .rng import RandomStream, block_streams
from .stochastic import ito_p_dq, stratonovich_p_dq

__all__ = [
    "ComplexAmplitude", "DIMENSIONLESS", "INV_LENGTH", "INV_SQRT_LENGTH",
    "GaussianKernel", "compose_gaussian", "compose_power", "compose_chain",
    "TimeLattice", "PathSample", "PhasePath", "RandomStream", "block_streams",
    "sample_brownian_bridge", "bridge_blocks", "sample_bridges",
    "stratonovich_p_dq", "ito_p_dq",
]
