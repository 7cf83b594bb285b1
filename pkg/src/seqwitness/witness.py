"""Entanglement witness operators in the two-qubit Pauli basis.

A witness is stored as a real 4x4 coefficient array ``c[i, j]`` on the
basis sigma_i x sigma_j with index order (I, x, y, z), and materialized to
a 4x4 matrix on demand.  Sharpness modulation is then just a coefficient
scaling: every Pauli factor on the first wing picks up ``xi`` and every
Pauli factor on the second wing picks up ``lam``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import states
from .qcore import DensityMatrix, eigen_hermitian, expectation as _matrix_expectation
from .qcore import is_hermitian, partial_transpose_b, pauli, tensor

# A partial transpose eigenvalue above this is not treated as negative.
_NEGATIVITY_TOL = 1e-10

_LABELS = ("identity", "x", "y", "z")
_BASIS = [[tensor(pauli(a), pauli(b)) for b in _LABELS] for a in _LABELS]


@dataclass(frozen=True)
class WitnessOperator:
    """Hermitian witness, nonnegative on all separable states."""

    coefficients: np.ndarray = field(repr=False)
    modulation: tuple[float, float] | None = None

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float)
        if c.shape != (4, 4):
            raise ValueError("witness coefficients must be a real 4x4 array")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def matrix(self) -> np.ndarray:
        """Materialize the 4x4 Hermitian operator."""
        m = np.zeros((4, 4), dtype=complex)
        for i in range(4):
            for j in range(4):
                cij = self.coefficients[i, j]
                if cij != 0.0:
                    m += cij * _BASIS[i][j]
        return m

    def identity_weight(self) -> float:
        """Coefficient of the I x I term (the sharpness-independent part)."""
        return float(self.coefficients[0, 0])


def from_matrix(m: np.ndarray) -> WitnessOperator:
    """Project a Hermitian 4x4 operator onto the Pauli coefficient basis."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4) or not is_hermitian(m):
        raise ValueError("witness source must be a Hermitian 4x4 matrix")
    coeffs = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            coeffs[i, j] = np.trace(_BASIS[i][j] @ m).real / 4.0
    return WitnessOperator(coeffs)


def witness_psi_plus() -> WitnessOperator:
    """Optimal witness for psi+ (and its white-noise mixtures):
    (I.I + Z.Z - X.X - Y.Y) / 4."""
    c = np.zeros((4, 4))
    c[0, 0] = 0.25
    c[1, 1] = -0.25
    c[2, 2] = -0.25
    c[3, 3] = 0.25
    return WitnessOperator(c)


def witness_phi_colored() -> WitnessOperator:
    """Optimal witness for phi+ mixed with |01>/|10> colored noise:
    (I.I - X.X + Y.Y - Z.Z) / 4."""
    c = np.zeros((4, 4))
    c[0, 0] = 0.25
    c[1, 1] = -0.25
    c[2, 2] = 0.25
    c[3, 3] = -0.25
    return WitnessOperator(c)


def family_witness(kind: str) -> WitnessOperator:
    """The witness each state family is detected with."""
    if kind in (states.BELL, states.WERNER, states.PURE):
        return witness_psi_plus()
    if kind == states.COLORED:
        return witness_phi_colored()
    raise ValueError(f"unknown state family {kind!r}")


def witness_from_state(rho) -> WitnessOperator:
    """Derive the optimal witness of an NPT state from partial transposition.

    Takes the eigenvector of the single negative eigenvalue of rho^T_B and
    returns the partially transposed projector onto it.  PPT input has no
    negative eigenvalue and raises ``ValueError``.
    """
    pt = partial_transpose_b(rho)
    evals, vecs = eigen_hermitian(pt)
    negative = np.nonzero(evals < -_NEGATIVITY_TOL)[0]
    if negative.size == 0:
        raise ValueError("state is PPT; no witness can be derived from partial transposition")
    if negative.size > 1:
        raise ValueError("partial transpose has more than one negative eigenvalue")
    v = vecs[:, negative[0]]
    w = from_matrix(partial_transpose_b(np.outer(v, v.conj())))
    if expectation(w, rho) >= 0.0:
        raise RuntimeError("derived operator does not witness the input state")
    return w


def modulate(w: WitnessOperator, xi: float, lam: float) -> WitnessOperator:
    """Rescale the witness for unsharp implementation.

    Each non-identity Pauli factor on the first wing is scaled by ``xi``
    and on the second wing by ``lam``; the identity term is untouched.
    The one-sided form is ``modulate(w, 1.0, lam)``.
    """
    if not (0.0 < xi <= 1.0 and 0.0 < lam <= 1.0):
        raise ValueError("modulation parameters must lie in (0, 1]")
    if w.modulation is not None:
        raise ValueError("witness is already modulated")
    c = np.array(w.coefficients)
    c[1:, :] *= xi
    c[:, 1:] *= lam
    return WitnessOperator(c, modulation=(xi, lam))


def expectation(w: WitnessOperator, rho) -> float:
    """Tr(W rho) for a witness and a (density) matrix."""
    return _matrix_expectation(w.matrix(), rho)


def separability_floor(w: WitnessOperator, samples: int, seed: int = 0) -> float:
    """Minimum of Tr(W rho) over Haar-random pure product states.

    A statistical regression guard for witness nonnegativity on separable
    states; the analytic property itself holds by construction.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)

    def moments(n):
        # Haar-random qubit kets from normalized complex Gaussians.
        raw = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
        kets = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        out = np.empty((n, 4))
        for idx, label in enumerate(_LABELS):
            sigma = pauli(label)
            out[:, idx] = np.einsum("ni,ij,nj->n", kets.conj(), sigma, kets).real
        return out

    a = moments(samples)
    b = moments(samples)
    values = np.einsum("ni,ij,nj->n", a, w.coefficients, b)
    return float(values.min())
