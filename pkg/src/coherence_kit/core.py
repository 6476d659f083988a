"""Validated state containers and the dense Hermitian linear algebra they share.

Everything in this module is a pure function over immutable values.  The state
classes validate (and, where documented, renormalize) on construction and are
never mutated afterwards, so concurrent use needs no locking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES


class ValidationError(ValueError):
    """Input violates a documented precondition or construction invariant."""


class DimensionMismatchError(ValidationError):
    """Bipartite local dimension does not match the supplied matrix."""


class NumericalDriftWarning(UserWarning):
    """Eigenvalue clipping exceeded the expected floating-point drift."""


def _require_finite(arr: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValidationError(f"{what} must contain only finite entries")


def _require_hermitian(matrix: np.ndarray, tol: float, what: str) -> None:
    gap = np.abs(matrix - matrix.conj().T)
    worst = float(gap.max()) if gap.size else 0.0
    if worst > tol:
        i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
        raise ValidationError(
            f"{what} is not Hermitian: entries ({i},{j}) and ({j},{i}) "
            f"differ from conjugates by {worst:.3e} (tolerance {tol:g})"
        )


@dataclass(frozen=True, eq=False)
class PureState:
    """A unit vector of complex amplitudes.

    The vector is renormalized on construction, so the stored object always
    satisfies sum_j |x_j|^2 = 1 to machine precision.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        if amps.ndim != 1 or amps.size == 0:
            raise ValidationError("pure state amplitudes must form a non-empty 1-D vector")
        _require_finite(amps, "pure state amplitudes")
        norm = float(np.linalg.norm(amps))
        if norm <= 0.0:
            raise ValidationError("pure state amplitudes must not all be zero")
        object.__setattr__(self, "amplitudes", amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def moduli(self) -> np.ndarray:
        return np.abs(self.amplitudes)

    def projector(self) -> np.ndarray:
        """Rank-one density matrix |x><x| as a plain array."""
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> "DensityMatrix":
        return DensityMatrix._trusted(self.projector())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, trace-one matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        tols = DEFAULT_TOLERANCES
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValidationError("density matrix must be a non-empty square matrix")
        _require_finite(m, "density matrix")
        _require_hermitian(m, tols.construction, "density matrix")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > tols.construction:
            raise ValidationError(f"density matrix trace is {trace:.17g}, expected 1")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -tols.psd_drift:
            raise ValidationError(
                f"density matrix has eigenvalue {min_eig:.3e} below -{tols.psd_drift:g}"
            )
        object.__setattr__(self, "matrix", m)

    @classmethod
    def _trusted(cls, matrix: np.ndarray) -> "DensityMatrix":
        # Constructor for matrices that are valid by construction (e.g. |x><x|);
        # skips the O(n^3) eigenvalue check.
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", np.asarray(matrix, dtype=complex))
        return obj

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)).copy()

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class IncoherentState:
    """Probability vector read as a diagonal density matrix.

    Entries within the construction tolerance below zero are clipped to zero,
    and the vector is driven to sum to 1.0 exactly: after normalization the
    residual of the compensated sum is absorbed into the largest entry.
    """

    diag: np.ndarray

    def __post_init__(self):
        tols = DEFAULT_TOLERANCES
        d = np.atleast_1d(np.asarray(self.diag, dtype=float))
        if d.ndim != 1 or d.size == 0:
            raise ValidationError("incoherent state must be a non-empty 1-D vector")
        _require_finite(d, "incoherent state diagonal")
        if float(d.min()) < -tols.construction:
            raise ValidationError(
                f"incoherent state has negative entry {float(d.min()):.3e}"
            )
        d = np.maximum(d, 0.0)
        total = float(np.sum(d))
        if abs(total - 1.0) > tols.construction:
            raise ValidationError(f"incoherent state sums to {total:.17g}, expected 1")
        d = d / total
        for _ in range(2):
            residual = float(np.sum(d)) - 1.0
            if residual == 0.0:
                break
            d[int(np.argmax(d))] -= residual
        object.__setattr__(self, "diag", d)

    @property
    def dim(self) -> int:
        return self.diag.size

    def matrix(self) -> np.ndarray:
        return np.diag(self.diag.astype(complex))

    def density(self) -> DensityMatrix:
        return DensityMatrix._trusted(self.matrix())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.diag, dtype=dtype)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in descending order with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_pure_state(x) -> PureState:
    return x if isinstance(x, PureState) else PureState(x)


def as_density_matrix(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    if isinstance(rho, PureState):
        return rho.density()
    if isinstance(rho, IncoherentState):
        return rho.density()
    return DensityMatrix(rho)


def as_incoherent_state(delta) -> IncoherentState:
    return delta if isinstance(delta, IncoherentState) else IncoherentState(delta)


def hermitian_eig(matrix, tol: float | None = None) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending.

    Parameters
    ----------
    matrix : array_like
        Square matrix, Hermitian within `tol` elementwise.
    tol : float, optional
        Hermiticity tolerance (defaults to the spectral tolerance).

    Raises
    ------
    ValidationError
        If the matrix is not Hermitian; the message names the worst entry pair.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCES.spectral
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("eigendecomposition requires a square matrix")
    _require_finite(m, "matrix")
    _require_hermitian(m, tol, "matrix")
    w, v = np.linalg.eigh(m)
    return SpectralDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def _checked_eigvalsh(matrix, tol: float | None) -> np.ndarray:
    if tol is None:
        tol = DEFAULT_TOLERANCES.spectral
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("norm computation requires a square matrix")
    _require_finite(m, "matrix")
    _require_hermitian(m, tol, "matrix")
    return np.linalg.eigvalsh(m)


def trace_norm(matrix, tol: float | None = None) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.abs(_checked_eigvalsh(matrix, tol)).sum())


def operator_norm(matrix, tol: float | None = None) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    return float(np.abs(_checked_eigvalsh(matrix, tol)).max())


def partial_transpose(matrix, local_dim: int) -> np.ndarray:
    """Transpose the second tensor factor of a matrix on an n (x) n space.

    The local dimension is explicit metadata: entry ((i,j),(k,l)) of the output
    equals entry ((i,l),(k,j)) of the input.
    """
    m = np.asarray(matrix, dtype=complex)
    d = int(local_dim)
    if d < 1 or m.shape != (d * d, d * d):
        raise DimensionMismatchError(
            f"matrix of shape {m.shape} does not act on a {d}(x){d} space"
        )
    return m.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)


def is_ppt(matrix, local_dim: int, tol: float | None = None) -> bool:
    """Whether the partial transpose has no eigenvalue below ``-tol``."""
    if tol is None:
        tol = DEFAULT_TOLERANCES.psd_drift
    pt = partial_transpose(matrix, local_dim)
    return float(np.linalg.eigvalsh(pt)[0]) >= -tol
