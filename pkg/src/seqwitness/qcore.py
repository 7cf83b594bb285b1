"""Dense complex linear algebra for one- and two-qubit operators.

Everything here works on plain ``numpy`` arrays of ``complex128`` entries
(2x2 or 4x4).  The module also carries the entanglement primitives used as
independent oracles elsewhere in the package: partial transposition on the
second qubit and the Wootters concurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Validation tolerance for structural checks (Hermiticity, unit trace).
VALIDATE_TOL = 1e-12
# Tolerance for oracle-grade comparisons (eigen reconstruction, PSD floor).
ORACLE_TOL = 1e-10
# Off-diagonal mass at which the Jacobi sweep is considered converged.
JACOBI_TOL = 1e-13

_MAX_DIM = 4

_I2 = np.eye(2, dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
for _m in (_I2, _SX, _SY, _SZ):
    _m.setflags(write=False)

_PAULI = {
    "identity": _I2,
    "i": _I2,
    "x": _SX,
    "y": _SY,
    "z": _SZ,
}


def pauli(axis: str) -> np.ndarray:
    """Return the 2x2 Pauli matrix for ``axis`` in {x, y, z, identity}.

    The returned array is read-only; copy before mutating.
    """
    try:
        return _PAULI[axis.lower()]
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, restricted to results of dimension <= 4."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    dim = a.shape[0] * b.shape[0]
    if dim > _MAX_DIM:
        raise ValueError(f"tensor result dimension {dim} exceeds {_MAX_DIM}; "
                         "this package handles at most two qubits")
    return np.kron(a, b)


def is_hermitian(m: np.ndarray, tol: float = VALIDATE_TOL) -> bool:
    """Entrywise check that ``m`` equals its conjugate transpose."""
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def _as_matrix(rho) -> np.ndarray:
    """Accept either a DensityMatrix or a raw array."""
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def expectation(obs: np.ndarray, rho) -> float:
    """Tr(obs . rho) for a Hermitian observable; the result is real.

    Raises ``ValueError`` when the observable is not Hermitian or the trace
    picks up a non-negligible imaginary part.
    """
    obs = np.asarray(obs, dtype=complex)
    if not is_hermitian(obs):
        raise ValueError("expectation requires a Hermitian observable")
    value = complex(np.trace(obs @ _as_matrix(rho)))
    if abs(value.imag) > 1e-9:
        raise ValueError(f"expectation value has imaginary part {value.imag:g}")
    return value.real


def partial_transpose_b(rho) -> np.ndarray:
    """Transpose the second-qubit indices of a 4x4 operator."""
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError("partial_transpose_b expects a 4x4 matrix")
    # indices (i, a; j, b) -> (i, b; j, a)
    return m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4).copy()


def eigen_hermitian(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as the columns of a unitary matrix.  Deterministic and
    dependency-free; adequate for the 2x2/4x4 matrices used here.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eigen_hermitian expects a square matrix")
    if not is_hermitian(m, tol=1e-10):
        raise ValueError("eigen_hermitian expects a Hermitian matrix")

    n = m.shape[0]
    a = m.astype(complex).copy()
    v = np.eye(n, dtype=complex)

    for _ in range(60):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off < JACOBI_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                # smaller-magnitude root of t^2 - 2*tau*t - 1 = 0
                if tau == 0.0:
                    t = 1.0
                elif tau > 0:
                    t = -1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # Column update with W = diag(1, e^{-i phi}) . R(theta) on (p, q).
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + s * np.conj(phase) * col_q
                a[:, q] = -s * col_p + c * np.conj(phase) * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + s * phase * row_q
                a[q, :] = -s * row_p + c * phase * row_q
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + s * np.conj(phase) * vq
                v[:, q] = -s * vp + c * np.conj(phase) * vq
    else:
        raise RuntimeError("Jacobi sweep failed to converge")

    evals = np.diag(a).real.copy()
    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    vecs = v[:, order]

    recon = vecs @ np.diag(evals.astype(complex)) @ vecs.conj().T
    if np.max(np.abs(recon - m)) > ORACLE_TOL:
        raise RuntimeError("eigendecomposition reconstruction error exceeds tolerance")
    return evals, vecs


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value, i.e. the top eigenvalue of sqrt(M^dag M)."""
    m = np.asarray(m, dtype=complex)
    if is_hermitian(m):
        evals, _ = eigen_hermitian(m)
        return float(np.max(np.abs(evals)))
    evals, _ = eigen_hermitian(m.conj().T @ m)
    return float(np.sqrt(max(evals[-1], 0.0)))


@dataclass(frozen=True)
class DensityMatrix:
    """A validated one- or two-qubit state.

    Construction re-checks unit trace, Hermiticity and positivity each time,
    so every state produced by a channel in this package is certified.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
            raise ValueError("density matrix must be 2x2 or 4x4")
        if abs(np.trace(m) - 1.0) > VALIDATE_TOL:
            raise ValueError(f"trace {np.trace(m):.3g} differs from 1")
        if not is_hermitian(m):
            raise ValueError("density matrix must be Hermitian")
        evals, _ = eigen_hermitian(m)
        if evals[0] < -ORACLE_TOL:
            raise ValueError(f"negative eigenvalue {evals[0]:.3g}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def concurrence_wootters(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    The four square-rooted eigenvalues of rho . rho~ (rho~ the spin-flipped
    state) equal the singular values of sqrt(rho) Y sqrt(rho)* with
    Y = sigma_y x sigma_y.  Working with singular values keeps the error in
    each root linear in round-off; square-rooting near-zero eigenvalues of
    the Hermitian sandwich directly would amplify noise to ~1e-8.
    """
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError("concurrence is defined for two-qubit states")
    yy = tensor(_SY, _SY)
    evals, vecs = eigen_hermitian(m)
    # zero out null modes so their round-off never enters the square root
    roots = np.where(evals > 1e-13, np.sqrt(np.clip(evals, 0.0, None)), 0.0)
    sqrt_rho = vecs @ np.diag(roots.astype(complex)) @ vecs.conj().T
    flip = sqrt_rho @ yy @ sqrt_rho.conj()
    jordan = np.zeros((8, 8), dtype=complex)
    jordan[:4, 4:] = flip
    jordan[4:, :4] = flip.conj().T
    spectrum, _ = eigen_hermitian(jordan)
    sigma = spectrum[::-1][:4]  # the +singular-value half, descending
    return float(max(0.0, sigma[0] - sigma[1] - sigma[2] - sigma[3]))
