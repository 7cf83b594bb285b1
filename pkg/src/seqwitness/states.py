"""Initial two-qubit state families and their closed-form concurrences.

Basis ordering is fixed as |00>, |01>, |10>, |11>.  The maximally entangled
reference states are psi+ = (|01> + |10>)/sqrt(2) and
phi+ = (|00> + |11>)/sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import DensityMatrix

BELL = "bell"
WERNER = "werner"
COLORED = "colored"
PURE = "pure"
KINDS = (BELL, WERNER, COLORED, PURE)


def ket(index: int) -> np.ndarray:
    """Computational basis ket |00>..|11> by index 0..3."""
    v = np.zeros(4, dtype=complex)
    v[index] = 1.0
    return v


def psi_plus_ket() -> np.ndarray:
    return (ket(1) + ket(2)) / math.sqrt(2.0)


def phi_plus_ket() -> np.ndarray:
    return (ket(0) + ket(3)) / math.sqrt(2.0)


@dataclass(frozen=True)
class StateFamily:
    """One of the four initial-state families.

    kind       parameter
    ----       ---------
    bell       none (equals werner with p = 1)
    werner     p in (0, 1]: weight of psi+ mixed with white noise
    colored    p in (0, 1]: weight of phi+ mixed with |01>/|10> noise
    pure       theta in (0, pi/4): cos(theta)|01> + sin(theta)|10>
    """

    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind == BELL:
            if self.param is not None:
                raise ValueError("bell family takes no parameter")
        elif self.kind in (WERNER, COLORED):
            if self.param is None or not 0.0 < self.param <= 1.0:
                raise ValueError(f"{self.kind} parameter must lie in (0, 1]")
        elif self.kind == PURE:
            if self.param is None or not 0.0 < self.param < math.pi / 4.0:
                raise ValueError("pure-state angle must lie in (0, pi/4)")
        else:
            raise ValueError(f"unknown state family {self.kind!r}")

    @classmethod
    def bell(cls) -> "StateFamily":
        return cls(BELL)

    @classmethod
    def werner(cls, p: float) -> "StateFamily":
        return cls(WERNER, p)

    @classmethod
    def colored(cls, p: float) -> "StateFamily":
        return cls(COLORED, p)

    @classmethod
    def pure(cls, theta: float) -> "StateFamily":
        return cls(PURE, theta)


def build(family: StateFamily) -> DensityMatrix:
    """Materialize the 4x4 density matrix of a state family."""
    if family.kind == BELL:
        psi = psi_plus_ket()
        return DensityMatrix(np.outer(psi, psi.conj()))
    if family.kind == WERNER:
        psi = psi_plus_ket()
        p = family.param
        return DensityMatrix(p * np.outer(psi, psi.conj()) + (1.0 - p) * np.eye(4) / 4.0)
    if family.kind == COLORED:
        phi = phi_plus_ket()
        p = family.param
        noise = (np.outer(ket(1), ket(1).conj()) + np.outer(ket(2), ket(2).conj())) / 2.0
        return DensityMatrix(p * np.outer(phi, phi.conj()) + (1.0 - p) * noise)
    psi = math.cos(family.param) * ket(1) + math.sin(family.param) * ket(2)
    return DensityMatrix(np.outer(psi, psi.conj()))


def concurrence_closed_form(family: StateFamily) -> float:
    """Known concurrence of each family (no spectral computation)."""
    if family.kind == BELL:
        return 1.0
    if family.kind == WERNER:
        return max(0.0, (3.0 * family.param - 1.0) / 2.0)
    if family.kind == COLORED:
        return max(0.0, 2.0 * family.param - 1.0)
    return math.sin(2.0 * family.param)
