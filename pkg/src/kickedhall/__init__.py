"""Classical maps, effective Hamiltonians, quasienergy bands and wave-packet
dynamics for periodically kicked charges in crossed magnetic and electric fields."""

__version__ = "0.1.0"

from .core import Potential, ResonanceData, SystemParams, derive_resonance, is_swc  # noqa: F401
