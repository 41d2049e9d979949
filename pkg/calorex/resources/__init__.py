"""Resource handlers of the calorex session."""

from .caloric import CaloricResource
from .points import PointResource
from .sweeps import SweepResource
from .validation import ValidationResource

__all__ = [
    "CaloricResource",
    "PointResource",
    "SweepResource",
    "ValidationResource",
]
