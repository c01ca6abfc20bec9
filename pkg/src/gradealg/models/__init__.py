"""Concrete graded operator families."""

from .base import ModelRep
from .bunce_deddens import BunceDeddensModel
from .car import CARModel
from .config import build_element, build_model
from .group_algebra import GroupAlgebraModel
from .kgraph import CKElement, CKFibers, KGraph
from .orbit import OrbitModel
from .uhf import UHFModel
from .weights import OrthantSum, PeriodicSequence, ShiftFibers
from .wiener_hopf import WienerHopfModel

__all__ = ["ModelRep", "BunceDeddensModel", "CARModel", "GroupAlgebraModel", "KGraph", "CKElement",
           "CKFibers", "OrbitModel", "UHFModel", "WienerHopfModel", "OrthantSum", "PeriodicSequence",
           "ShiftFibers", "build_model", "build_element"]
