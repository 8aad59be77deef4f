"""
The averaging-operator family T_j f = k_j * f with k_j = 2^{j-2}·1_{(-2^{-j+1}, 2^{-j+1})}.

Each T_j is a positive contraction on every L^p, so the family is ℓˢ-bounded,
but the ℓ^∞(ℓˢ) inequality fails: tested on the shifted indicators
f_{i,j} = 1_{(2^{-j}, 2^{-j+1}]}(· - (i-1)2^{-n}) its ratio grows like n^{1/s}.
"""

from typing import List, Optional, Tuple

import numpy as np

from testbench.core.exceptions import InvalidParameterError
from testbench.core.logger import log
from testbench.domain.operators import LrsWitness, OperatorFamily
from testbench.domain.reports import TkResult
from testbench.domain.spaces import SpaceSpec

MAX_LEVELS = 40
QUADRATURE_NODES = 16


def _check(n: int, s: float, p: float) -> None:
    if not 1 <= n <= MAX_LEVELS:
        raise InvalidParameterError(f"n must lie in [1, {MAX_LEVELS}], got {n}")
    if not np.isfinite(s) or s < 1:
        raise InvalidParameterError(f"s must be a finite exponent >= 1, got {s}")
    if not np.isfinite(p) or p < 1:
        raise InvalidParameterError(f"p must be a finite exponent >= 1, got {p}")


def _overlaps(u: np.ndarray, n: int) -> np.ndarray:
    """
    h_j(u) = 2^{j-2} |(u - a_j, u + a_j) ∩ (a_j/2, a_j]| with a_j = 2^{-j+1}.

    Returns shape (n, len(u)).
    """
    j = np.arange(1, n + 1)[:, None]
    a = 2.0 ** (1 - j)
    lo = np.maximum(u[None, :] - a, a / 2)
    hi = np.minimum(u[None, :] + a, a)
    return 2.0 ** (j - 2) * np.clip(hi - lo, 0.0, None)


def _profile(u: np.ndarray, n: int, s: float) -> np.ndarray:
    """(Σ_j h_j(u)^s)^{1/s}, evaluated as (1/4)(Σ_j (4h_j)^s)^{1/s} to keep full terms exact."""
    return 0.25 * np.sum((4.0 * _overlaps(u, n)) ** s, axis=0) ** (1.0 / s)


def _pieces(cell: float, n: int) -> List[Tuple[float, float]]:
    """Subintervals of (0, cell] on which both profiles are polynomial."""
    a = 2.0 ** (1 - np.arange(1, n + 1))
    kinks = np.concatenate([-a / 2, np.zeros(1), 1.5 * a, 2 * a])
    points = np.concatenate([kinks, kinks + cell])
    inner = np.unique(points[(points > 0) & (points < cell)])
    edges = np.concatenate([[0.0], inner, [cell]])
    return list(zip(edges[:-1], edges[1:]))


def _integrate(fn, pieces, scale: float, p: float) -> float:
    """∫ (fn/scale)^p over the pieces; constant pieces are integrated exactly."""
    nodes, weights = np.polynomial.legendre.leggauss(QUADRATURE_NODES)
    total = 0.0
    for lo, hi in pieces:
        points = lo + (hi - lo) * (nodes + 1) / 2
        values = fn(np.concatenate([[lo, hi], points])) / scale
        if np.all(values == values[0]):
            total += values[0] ** p * (hi - lo)
            continue
        total += float(np.sum(weights * values[2:] ** p)) * (hi - lo) / 2
    return total


def tk_quantity(n: int, s: float, p: float) -> TkResult:
    """
    ‖sup_i (Σ_j |T_j f_{i,j}|^s)^{1/s}‖_{L^p(0,1]} against the majorant 1
    of ‖sup_i (Σ_j |f_{i,j}|^s)^{1/s}‖_{L^p(0,1]}.

    For t in the i-th cell the supremum over i' is attained at i' = i or
    i' = i + 1 because the profile is unimodal around 0, so F(t) depends
    only on the offset u = t - (i-1)2^{-n}. The rhs integrand is the
    indicator of (2^{-n}, 1], so rhs_exact = (1 - 2^{-n})^{1/p}.
    """
    s, p = float(s), float(p)
    _check(n, s, p)
    cell = 2.0**-n

    def inner_cell(u):
        return np.maximum(_profile(u, n, s), _profile(u - cell, n, s))

    def last_cell(u):
        return _profile(u, n, s)

    pieces = _pieces(cell, n)
    probe = np.concatenate([np.array([lo for lo, _ in pieces] + [cell]), np.linspace(0, cell, 33)])
    scale = float(max(inner_cell(probe[probe > 0]).max(), last_cell(probe[probe > 0]).max()))
    integral = (2**n - 1) * _integrate(inner_cell, pieces, scale, p) + _integrate(
        last_cell, pieces, scale, p
    )
    lhs = scale * integral ** (1.0 / p)
    result = TkResult(
        n=n,
        s=s,
        p=p,
        lhs=lhs,
        rhs=1.0,
        rhs_exact=(1.0 - cell) ** (1.0 / p),
        lower_bound=0.25 * n ** (1.0 / s),
    )
    log.debug("tk quantity", n=n, s=s, p=p, lhs=lhs)
    return result


def _check_grid(n: int, grid_points: Optional[int]) -> int:
    grid_points = grid_points or 2 ** (n + 2)
    if grid_points < 2**n or grid_points % 2**n:
        raise InvalidParameterError(
            f"grid needs a positive multiple of 2^n = {2**n} points, got {grid_points}"
        )
    return grid_points


def tk_family(n: int, grid_points: Optional[int] = None, p: float = 2) -> OperatorFamily:
    """
    T_1, ..., T_n on the M-point torus (0, 1], M = 2^{n+2} by default.

    T_j convolves with 2^{j-2}·1{|u| < 2^{-j+1}} in the torus distance, so
    every matrix is a nonnegative symmetric circulant with row sums at most
    one, a contraction on each ℓ^p_M.
    """
    _check(n, 1.0, float(p))
    grid_points = _check_grid(n, grid_points)
    index = np.arange(grid_points)
    offset = np.abs(index[:, None] - index[None, :])
    distance = np.minimum(offset, grid_points - offset)
    matrices = []
    for j in range(1, n + 1):
        half_width = grid_points * 2.0 ** (1 - j)
        matrices.append((distance < half_width) * (2.0 ** (j - 2) / grid_points))
    spec = SpaceSpec.lp(p, grid_points)
    return OperatorFamily(
        matrices=np.stack(matrices), base_space_in=spec, base_space_out=spec, positive=True
    )


def tk_witness(n: int, grid_points: Optional[int] = None) -> LrsWitness:
    """
    selection[i, j] = j and inputs[i, j] = f_{i,j} on the torus grid, a
    (2^n) × n witness whose ℓ^∞(ℓˢ) ratio is n^{1/s}/4 for every p.

    Grid point l (1..M) sits at l/M; f_{i,j} is the indicator of
    (2^{-j}, 2^{-j+1}] + i·2^{-n} taken modulo 1.
    """
    _check(n, 1.0, 1.0)
    grid_points = _check_grid(n, grid_points)
    cells = 2**n
    points = np.arange(1, grid_points + 1)
    shifts = np.arange(cells)[:, None, None] * (grid_points // cells)
    # representatives in 1..M match the half-open sets (a/2, a]
    offset = (points[None, None, :] - shifts - 1) % grid_points + 1
    j = np.arange(1, n + 1)[None, :, None]
    upper = grid_points // 2 ** (j - 1)
    inputs = ((offset > upper // 2) & (offset <= upper)).astype(float)
    selection = np.broadcast_to(np.arange(n), (cells, n))
    return LrsWitness(selection=selection, inputs=inputs)
