"""Sequential two-qubit entanglement witnessing under unsharp measurements.

Submodules
----------
qcore        dense 2x2/4x4 complex linear algebra and entanglement oracles
measurement  unsharp spin observables, Lueders updates, measurement robustness
witness      witness operators, sharpness modulation, separability checks
states       the initial state families and their closed-form concurrences
sequential   averaged measurement channels and greedy observer counting
resource     detectability optimization and resource comparison tables
cli          batch command-line interface
"""

from .measurement import PointerTradeoff, UnsharpObservable
from .qcore import DensityMatrix
from .sequential import ChainReport, EpsilonPolicy, ScenarioKind, SharpnessSchedule
from .states import StateFamily
from .witness import WitnessOperator

__all__ = [
    "ChainReport",
    "DensityMatrix",
    "EpsilonPolicy",
    "PointerTradeoff",
    "ScenarioKind",
    "SharpnessSchedule",
    "StateFamily",
    "UnsharpObservable",
    "WitnessOperator",
]

__version__ = "0.1.0"
