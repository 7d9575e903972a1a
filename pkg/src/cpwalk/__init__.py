"""Thrust-assisted capture-point walking toolkit."""

__version__ = "0.1.0"

from .model import (
    AxisState,
    PlanarState,
    Side,
    VlipParams,
    capture_point,
    desired_capture_point,
    effective_gravity,
    integrate_axis,
    natural_frequency,
    orbital_energy,
    vlip_accel,
)

__all__ = [
    "__version__",
    "AxisState",
    "PlanarState",
    "Side",
    "VlipParams",
    "capture_point",
    "desired_capture_point",
    "effective_gravity",
    "integrate_axis",
    "natural_frequency",
    "orbital_energy",
    "vlip_accel",
]
