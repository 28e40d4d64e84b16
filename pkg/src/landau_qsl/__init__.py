"""Quantum speed limit and radial speed of an electron in a uniform magnetic field."""

from .landau import NATURAL, SI, FieldConfig, LandauState, PacketSpec, PhysicalConstants
from .qsl import Kind, QSLResult, SuperpositionSpec, qsl_time
from .specfun import QuadratureConfig

__all__ = [
    "NATURAL",
    "SI",
    "FieldConfig",
    "Kind",
    "LandauState",
    "PacketSpec",
    "PhysicalConstants",
    "QSLResult",
    "QuadratureConfig",
    "SuperpositionSpec",
    "qsl_time",
]
