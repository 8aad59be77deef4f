"""Minimal ℓ¹ representations through scipy's HiGHS linear programming."""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import linprog

from testbench.core.logger import log
from testbench.observability.metrics import record_lp_solve

# Directions used to bound complex moduli from below: |z| >= Re(e^{-iθ} z).
PHASE_DIRECTIONS = 32


class L1Solution(BaseModel):
    """Outcome of min Σ|λ_i| subject to Σ λ_i A_i = b."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    feasible: bool
    value: float
    lower_bound: float
    coefficients: Optional[np.ndarray] = None
    message: str = ""


def _solve(cost, a_eq, b_eq, a_ub=None, b_ub=None, bounds=None):
    result = linprog(
        cost,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=bounds,
        method="highs",
        options={
            "primal_feasibility_tolerance": 1e-10,
            "dual_feasibility_tolerance": 1e-10,
        },
    )
    record_lp_solve("optimal" if result.success else "failed")
    return result


def minimal_l1_representation(generators: np.ndarray, target: np.ndarray) -> L1Solution:
    """
    Solve min Σ|λ_i| with Σ λ_i generators[i] = target.

    Real data gives an exact LP via the split λ = u - v. Complex data uses
    real and imaginary parts of λ with a polygonal lower model of |λ_i|; the
    returned value is the true Σ|λ_i| of the LP solution, so the optimum lies
    in [lower_bound, value].

    Args:
        generators: (K, ...) stack of matrices
        target: matrix of the generators' shape

    Returns:
        L1Solution, infeasible when target is outside the span
    """
    generators = np.asarray(generators, dtype=complex)
    count = generators.shape[0]
    basis = generators.reshape(count, -1).T  # (entries, K)
    rhs = np.asarray(target, dtype=complex).reshape(-1)

    if np.allclose(basis.imag, 0) and np.allclose(rhs.imag, 0):
        a_eq = np.concatenate([basis.real, -basis.real], axis=1)
        result = _solve(np.ones(2 * count), a_eq, rhs.real, bounds=(0, None))
        if not result.success:
            log.warning("gauge LP infeasible", reason=result.message, generators=count)
            return L1Solution(
                feasible=False, value=np.inf, lower_bound=np.inf, message=result.message
            )
        coefficients = result.x[:count] - result.x[count:]
        return L1Solution(
            feasible=True,
            value=float(np.sum(np.abs(coefficients))),
            lower_bound=float(result.fun),
            coefficients=coefficients.astype(complex),
        )

    # variables: a (K), b (K), t (K); λ = a + i b, t_i >= Re(e^{-iθ} λ_i)
    real_rows = np.concatenate([basis.real, -basis.imag, np.zeros_like(basis.real)], axis=1)
    imag_rows = np.concatenate([basis.imag, basis.real, np.zeros_like(basis.real)], axis=1)
    a_eq = np.concatenate([real_rows, imag_rows], axis=0)
    b_eq = np.concatenate([rhs.real, rhs.imag])

    angles = 2 * np.pi * np.arange(PHASE_DIRECTIONS) / PHASE_DIRECTIONS
    identity = np.eye(count)
    a_ub = np.concatenate(
        [
            np.concatenate([np.cos(t) * identity, np.sin(t) * identity, -identity], axis=1)
            for t in angles
        ],
        axis=0,
    )
    b_ub = np.zeros(a_ub.shape[0])
    cost = np.concatenate([np.zeros(2 * count), np.ones(count)])
    bounds = [(None, None)] * (2 * count) + [(0, None)] * count
    result = _solve(cost, a_eq, b_eq, a_ub, b_ub, bounds)
    if not result.success:
        log.warning("gauge LP infeasible", reason=result.message, generators=count)
        return L1Solution(
            feasible=False, value=np.inf, lower_bound=np.inf, message=result.message
        )
    coefficients = result.x[:count] + 1j * result.x[count : 2 * count]
    return L1Solution(
        feasible=True,
        value=float(np.sum(np.abs(coefficients))),
        lower_bound=float(result.fun),
        coefficients=coefficients,
    )
