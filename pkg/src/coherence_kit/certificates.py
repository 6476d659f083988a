"""Exact optimality certificates for nearest-incoherent-state candidates.

The feasible perturbations of a diagonal state D are the traceless diagonals
F with D - F still a state; that set has at most n extreme points, one per
index, given by f_j = d_j for j != i and f_i = d_i - 1.  A candidate D is the
trace-norm minimizer for a pure state exactly when <v|F_i|v> >= 0 for every
extreme point, where v is the top eigenvector of |x><x| - D.  For mixed states
the analogous dual witness is the Hermitian unitary built from the spectral
signs of A - D, which is forced (hence the certificate is exact) whenever
A - D is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .core import (
    ValidationError,
    as_density_matrix,
    as_incoherent_state,
    as_pure_state,
    hermitian_eig,
)


class IncoherentInputError(ValidationError):
    """The input state is already incoherent, so the certificate is vacuous."""


class InconclusiveCertificateError(RuntimeError):
    """Degenerate spectrum prevented a well-defined certificate evaluation."""


class NonInvertibleDifferenceError(ValidationError):
    """A - D is singular; that case needs a semidefinite feasibility search."""


@dataclass(frozen=True, eq=False)
class ExtremePerturbation:
    """One extreme feasible perturbation: f_j = d_j except f_i = d_i - 1."""

    index: int
    values: np.ndarray


@dataclass(frozen=True)
class PureCertificate:
    optimal: bool
    margin: float


@dataclass(frozen=True)
class MixedCertificate:
    certified: bool
    margin: float


def extreme_points(delta) -> list[ExtremePerturbation]:
    """The n extreme feasible perturbations of a diagonal state, one per index."""
    d = as_incoherent_state(delta).diag
    points = []
    for i in range(d.size):
        values = d.copy()
        values[i] -= 1.0
        points.append(ExtremePerturbation(index=i, values=values))
    return points


def _coherent_moduli_or_raise(state) -> np.ndarray:
    moduli = state.moduli()
    off_diag_mass = float(np.sum(moduli)) ** 2 - float(moduli @ moduli)
    if off_diag_mass < DEFAULT_TOLERANCES.construction:
        raise IncoherentInputError(
            "state is incoherent: its trace distance to the incoherent set is 0 "
            "and the optimality certificate is vacuous"
        )
    return moduli


def verify_pure_optimality(x, delta, tol: float | None = None) -> PureCertificate:
    """Check whether D is the nearest incoherent state of the pure state x.

    Computes the top eigenvector v of |x><x| - D and the margin
    min_i (sum_j d_j |v_j|^2 - |v_i|^2); the candidate is optimal exactly when
    the margin is non-negative (within ``tol``).

    Raises
    ------
    IncoherentInputError
        If x itself is incoherent (the distance is trivially zero).
    InconclusiveCertificateError
        If the top eigenvalue is degenerate within ``tol``, in which case no
        single eigenvector is distinguished.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCES.certificate
    state = as_pure_state(x)
    _coherent_moduli_or_raise(state)
    d = as_incoherent_state(delta).diag
    if d.size != state.dim:
        raise ValidationError(
            f"candidate dimension {d.size} does not match state dimension {state.dim}"
        )

    decomposition = hermitian_eig(state.projector() - np.diag(d))
    w = decomposition.eigenvalues
    positive = int(np.count_nonzero(w > tol))
    if positive != 1:
        raise InconclusiveCertificateError(
            f"expected exactly one eigenvalue above {tol:g}, found {positive}"
        )
    if w.size > 1 and w[0] - w[1] <= tol:
        raise InconclusiveCertificateError(
            f"top eigenvalue is degenerate within {tol:g}; certificate inconclusive"
        )
    v_sq = np.abs(decomposition.eigenvectors[:, 0]) ** 2
    margin = float(d @ v_sq - v_sq.max())
    return PureCertificate(optimal=margin >= -tol, margin=margin)


def verify_mixed_invertible(rho, delta, tol: float | None = None) -> MixedCertificate:
    """Certify a nearest-incoherent candidate for a mixed state A when A - D is invertible.

    Builds the dual witness H = U (I_p (+) -I_q) U* from the spectral
    decomposition of A - D, checks the duality identity
    tr((A - D) H) = ||A - D||_tr, and evaluates the margin min_i tr(F_i H)
    over the extreme perturbations.  For invertible A - D the witness is
    forced, so ``certified=False`` means the candidate is not optimal.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCES.certificate
    a = as_density_matrix(rho).matrix
    d = as_incoherent_state(delta).diag
    if d.size != a.shape[0]:
        raise ValidationError(
            f"candidate dimension {d.size} does not match state dimension {a.shape[0]}"
        )

    difference = a - np.diag(d)
    decomposition = hermitian_eig(difference)
    w = decomposition.eigenvalues
    if float(np.abs(w).min()) <= tol:
        raise NonInvertibleDifferenceError(
            "A - D is not invertible within tolerance; certifying that case "
            "requires a semidefinite feasibility search and is out of scope"
        )
    u = decomposition.eigenvectors
    witness = (u * np.sign(w)) @ u.conj().T

    pairing = float(np.real(np.trace(difference @ witness)))
    nuclear = float(np.abs(w).sum())
    if abs(pairing - nuclear) > 1e-10:
        raise InconclusiveCertificateError(
            f"duality identity violated: tr((A-D)H) = {pairing:.17g} "
            f"but ||A-D||_tr = {nuclear:.17g}"
        )

    h_diag = np.real(np.diag(witness))
    margin = float(d @ h_diag - h_diag.max())
    return MixedCertificate(certified=margin >= -tol, margin=margin)
