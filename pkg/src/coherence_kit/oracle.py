"""Independent brute-force minimizers of ||rho - diag(delta)||_tr over the simplex.

These deliberately share no code path with the closed-form solver: the
subgradient oracle only ever sees the convex objective through dense
eigendecompositions, and the grid oracle is an exhaustive lattice search.
Both exist to validate closed-form results, not to be fast.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import IncoherentState, ValidationError, as_density_matrix


@dataclass(frozen=True, eq=False)
class OracleResult:
    value: float
    argmin: IncoherentState
    iterations: int
    converged: bool


def simplex_project(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-and-threshold)."""
    x = np.atleast_1d(np.asarray(v, dtype=float))
    if x.ndim != 1 or x.size == 0 or not np.all(np.isfinite(x)):
        raise ValidationError("projection input must be a finite 1-D vector")
    u = np.sort(x)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, x.size + 1)
    active = idx[u + (1.0 - css) / idx > 0.0]
    rho = int(active[-1])
    theta = (1.0 - css[rho - 1]) / rho
    return np.maximum(x + theta, 0.0)


def c_tr_subgradient(
    rho,
    max_iters: int = 10000,
    step_scale: float = 0.04,
    tol: float = 1e-12,
    stall_window: int = 100,
) -> OracleResult:
    """Projected subgradient descent on g(delta) = ||rho - diag(delta)||_tr.

    At each iterate the objective is eigendecomposed, the subgradient
    component j is -sum_i sign(lambda_i) |u_i(j)|^2, the step is
    step_scale * g(delta_0) / sqrt(t), and the iterate is projected back onto
    the simplex.  The best iterate is tracked (subgradient methods are not
    monotone) and the run stops early once the best value improves by less
    than ``tol`` over a ``stall_window``-iteration window; improvements of the
    best value arrive in bursts, so a tight budget with ``tol=0`` (never stop
    early) is more accurate than a large budget with a loose ``tol``.

    Starts from the diagonal of rho, the natural incoherent shadow.
    """
    a = as_density_matrix(rho).matrix

    def evaluate(delta: np.ndarray) -> tuple[float, np.ndarray]:
        w, u = np.linalg.eigh(a - np.diag(delta))
        value = float(np.abs(w).sum())
        grad = -((u.real**2 + u.imag**2) @ np.sign(w))
        return value, grad

    delta = simplex_project(np.real(np.diag(a)))
    value, grad = evaluate(delta)
    best_value = value
    best_delta = delta.copy()
    best_history = [best_value]
    scale = step_scale * (value if value > 0.0 else 1.0)
    converged = False
    iterations = 0
    for t in range(1, max_iters + 1):
        iterations = t
        delta = simplex_project(delta - (scale / np.sqrt(t)) * grad)
        value, grad = evaluate(delta)
        if value < best_value:
            best_value = value
            best_delta = delta.copy()
        best_history.append(best_value)
        if t >= stall_window and best_history[-stall_window - 1] - best_value < tol:
            converged = True
            break
    return OracleResult(
        value=best_value,
        argmin=IncoherentState(best_delta),
        iterations=iterations,
        converged=converged,
    )


def _lattice_points(n: int, resolution: int):
    # Compositions of `resolution` into n parts, ascending lexicographic order.
    total = resolution + n - 1
    for bars in itertools.combinations(range(total), n - 1):
        parts = []
        prev = -1
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(total - prev - 1)
        yield parts


def c_tr_grid(rho, resolution: int, chunk: int = 32768) -> OracleResult:
    """Exhaustive search over the simplex lattice {a / resolution : sum a = resolution}.

    The trace norm is 1-Lipschitz in the l1 distance of the diagonal, so the
    lattice optimum is within 2 n / resolution of the true optimum and never
    below it.  Ties break toward the first lattice point in lexicographic
    order.  Guarded to n <= 4; the lattice grows combinatorially.
    """
    a = as_density_matrix(rho).matrix
    n = a.shape[0]
    if n > 4:
        raise ValidationError(f"grid oracle supports n <= 4, got n = {n}")
    if resolution < 1:
        raise ValidationError("resolution must be a positive integer")

    best_value = np.inf
    best_point: np.ndarray | None = None
    count = 0
    diag_idx = np.arange(n)
    points = _lattice_points(n, int(resolution))
    while True:
        block = list(itertools.islice(points, chunk))
        if not block:
            break
        deltas = np.asarray(block, dtype=float) / resolution
        stack = np.broadcast_to(a, (deltas.shape[0], n, n)).copy()
        stack[:, diag_idx, diag_idx] -= deltas
        values = np.abs(np.linalg.eigvalsh(stack)).sum(axis=1)
        i = int(np.argmin(values))
        if values[i] < best_value:
            best_value = float(values[i])
            best_point = deltas[i].copy()
        count += deltas.shape[0]
    assert best_point is not None
    return OracleResult(
        value=best_value,
        argmin=IncoherentState(best_point),
        iterations=count,
        converged=True,
    )
