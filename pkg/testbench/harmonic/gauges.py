"""
Gauges on matrix values of symbols.

`OperatorNormGauge` measures the induced norm between two mixed spaces,
`MinkowskiGauge` the gauge of the absolutely convex hull of a finite family,
and `AbsoluteGauge` the modulus of scalar symbols.
"""

import itertools
from typing import Dict, Optional, Union

import numpy as np
from scipy.optimize import minimize

from testbench.core.config import settings
from testbench.core.exceptions import InvalidParameterError, ShapeMismatchError
from testbench.core.logger import log
from testbench.domain.exponent import is_inf
from testbench.domain.interfaces.gauge import Gauge, GaugeResult
from testbench.domain.operators import OperatorFamily
from testbench.domain.spaces import SpaceSpec
from testbench.harmonic.mixed_norms import space_norm_batch
from testbench.infrastructure.lp import minimal_l1_representation
from testbench.observability.metrics import record_evaluations

CERTIFY_MAX_DIMENSION = 3


def _as_matrix(operator) -> np.ndarray:
    return np.atleast_2d(np.asarray(operator, dtype=complex))


def _all_exponents(spec: SpaceSpec, value) -> bool:
    """True when every layer of a nonscalar spec has the given exponent."""
    if not spec.layers:
        return False
    if is_inf(value):
        return all(is_inf(layer.exponent) for layer in spec.layers)
    return all(
        not is_inf(layer.exponent) and layer.exponent == value for layer in spec.layers
    )


class AbsoluteGauge(Gauge):
    """Modulus of scalar values (1×1 symbols)."""

    @property
    def name(self) -> str:
        return "absolute"

    def evaluate(self, operator) -> GaugeResult:
        value = np.asarray(operator, dtype=complex)
        if value.size != 1:
            raise ShapeMismatchError(f"absolute gauge needs scalars, got shape {value.shape}")
        return GaugeResult(value=float(np.abs(value.reshape(-1)[0])), status="exact")

    def pairwise(self, entries: np.ndarray) -> np.ndarray:
        flat = np.asarray(entries, dtype=complex).reshape(len(entries))
        return np.abs(flat[:, None] - flat[None, :])

    def sup(self, entries: np.ndarray) -> float:
        return float(np.max(np.abs(np.asarray(entries))))


class OperatorNormGauge(Gauge):
    """
    ‖T‖ from spec_in to spec_out.

    Closed forms are used for ℓ²→ℓ², ℓ¹ domains and ℓ^∞ codomains. Other
    pairs are maximized by Powell ascent from basis, singular and random
    starts; in dimension ≤ 3 a grid over the faces of the unit cube gives a
    certified upper bound.
    """

    def __init__(
        self,
        spec_in: SpaceSpec,
        spec_out: Optional[SpaceSpec] = None,
        restarts: Optional[int] = None,
        seed: int = 0,
        net_resolution: int = 41,
    ):
        self.spec_in = spec_in
        self.spec_out = spec_out if spec_out is not None else spec_in
        if self.spec_in.size != self.spec_out.size:
            raise ShapeMismatchError("operator norm gauge needs equal dimensions in and out")
        self.restarts = settings.GAUGE_RESTARTS if restarts is None else restarts
        self.seed = seed
        self.net_resolution = net_resolution

    @property
    def name(self) -> str:
        return "operator_norm"

    @property
    def dimension(self) -> int:
        return self.spec_in.size

    def _norm(self, vectors: np.ndarray, spec: SpaceSpec) -> np.ndarray:
        batch = vectors.shape[:-1]
        return space_norm_batch(vectors.reshape(batch + spec.shape), spec)

    def _ratio(self, operator: np.ndarray, vectors: np.ndarray) -> np.ndarray:
        images = vectors @ operator.T
        denominators = self._norm(vectors, self.spec_in)
        numerators = self._norm(images, self.spec_out)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(denominators > 0, numerators / denominators, 0.0)
        return ratio

    def _is_euclidean(self) -> bool:
        return _all_exponents(self.spec_in, 2) and _all_exponents(self.spec_out, 2)

    def closed_form(self, operator: np.ndarray) -> Optional[float]:
        n = self.dimension
        if not np.any(operator):
            return 0.0
        if n == 1:
            return float(np.abs(operator[0, 0]))
        if self.spec_in == self.spec_out and not np.any(operator - np.diag(np.diag(operator))):
            # diagonal maps act by pointwise multiplication on a lattice
            return float(np.max(np.abs(np.diag(operator))))
        if self._is_euclidean():
            return float(np.linalg.norm(operator, ord=2))
        if _all_exponents(self.spec_in, 1):
            columns = operator.T  # images of the unit vectors
            return float(self._norm(columns, self.spec_out).max())
        if _all_exponents(self.spec_out, "inf"):
            dual = self.spec_in.dual()
            return float(self._norm(operator, dual).max())
        return None

    def evaluate(self, operator) -> GaugeResult:
        matrix = _as_matrix(operator)
        if matrix.shape != (self.dimension, self.dimension):
            raise ShapeMismatchError(
                f"matrix of shape {matrix.shape} does not act on {self.spec_in}"
            )
        exact = self.closed_form(matrix)
        if exact is not None:
            return GaugeResult(value=exact, status="exact")
        value = self.ascent(matrix, nonnegative=False)
        if self.dimension <= CERTIFY_MAX_DIMENSION:
            net_value, upper = self.net_bound(matrix)
            value = max(value, net_value)
            if upper is not None:
                return GaugeResult(
                    value=value, status="certified", upper_bound=max(upper, value)
                )
        return GaugeResult(value=value, status="estimate")

    def evaluate_positive(self, operator) -> GaugeResult:
        """Norm of an entrywise nonnegative matrix; maximizers may be taken nonnegative."""
        matrix = _as_matrix(operator)
        exact = self.closed_form(matrix)
        if exact is not None:
            return GaugeResult(value=exact, status="exact")
        if _all_exponents(self.spec_in, "inf"):
            ones = np.ones((1, self.dimension), dtype=complex)
            return GaugeResult(value=float(self._ratio(matrix, ones)[0]), status="exact")
        return GaugeResult(value=self.ascent(matrix, nonnegative=True), status="estimate")

    def _starts(self, matrix: np.ndarray, rng: np.random.Generator, nonnegative: bool):
        n = self.dimension
        starts = [np.eye(n)[i] for i in range(n)]
        starts.append(np.ones(n))
        _, _, vh = np.linalg.svd(matrix)
        top = vh[0].conj()
        starts.append(np.abs(top) if nonnegative else top)
        for _ in range(self.restarts):
            vector = rng.standard_normal(n)
            if not nonnegative:
                vector = vector + 1j * rng.standard_normal(n)
            starts.append(vector)
        return starts

    def ascent(self, matrix: np.ndarray, nonnegative: bool = False) -> float:
        n = self.dimension
        rng = np.random.default_rng(self.seed)
        evaluations = 0

        def unpack(z):
            if nonnegative:
                return (z**2).astype(complex)
            return z[:n] + 1j * z[n:]

        def objective(z):
            nonlocal evaluations
            evaluations += 1
            return -float(self._ratio(matrix, unpack(z)[None, :])[0])

        best = 0.0
        for start in self._starts(matrix, rng, nonnegative):
            start = np.asarray(start, dtype=complex)
            if nonnegative:
                z0 = np.sqrt(np.abs(start))
            else:
                z0 = np.concatenate([start.real, start.imag])
            best = max(best, -objective(z0))
            result = minimize(
                objective,
                z0,
                method="Powell",
                options={"maxiter": 60 * n, "xtol": 1e-10, "ftol": 1e-12},
            )
            best = max(best, -float(result.fun))
        record_evaluations("gauge_ascent", evaluations)
        return best

    def net_bound(self, matrix: np.ndarray):
        """
        Grid search over the faces {x_i = 1, |x_k| <= 1} of the complex unit cube.

        Every maximizer can be rotated and scaled onto some face, and the grid
        covers each face within ε = h/√2 per coordinate, so
        ‖T‖ ≤ R (1 + δ) / (1 - δ) with δ = ε‖(1,...,1)‖_in and R the grid max.
        """
        n = self.dimension
        grid = np.linspace(-1.0, 1.0, self.net_resolution)
        spacing = grid[1] - grid[0]
        epsilon = spacing / np.sqrt(2.0)
        delta = epsilon * float(self._norm(np.ones((1, n)), self.spec_in)[0])

        free = 2 * (n - 1)
        inner = np.array(list(itertools.product(grid, repeat=free - 1)))
        best = 0.0
        for face in range(n):
            for first in grid:
                coordinates = np.column_stack([np.full(inner.shape[0], first), inner])
                others = coordinates[:, 0::2] + 1j * coordinates[:, 1::2]
                vectors = np.insert(others, face, 1.0, axis=1)
                best = max(best, float(self._ratio(matrix, vectors).max()))
        record_evaluations("gauge_net", n * (len(grid) ** free))
        if delta >= 1.0:
            return best, None
        return best, best * (1.0 + delta) / (1.0 - delta)

    def pairwise(self, entries: np.ndarray) -> np.ndarray:
        if self._is_euclidean():
            entries = np.asarray(entries, dtype=complex)
            differences = entries[:, None] - entries[None, :]
            return np.linalg.norm(differences, ord=2, axis=(-2, -1))
        return super().pairwise(entries)

    def sup(self, entries: np.ndarray) -> float:
        if self._is_euclidean():
            return float(np.max(np.linalg.norm(np.asarray(entries), ord=2, axis=(-2, -1))))
        return super().sup(entries)


class MinkowskiGauge(Gauge):
    """Gauge of the absolutely convex hull of a finite operator family."""

    def __init__(self, family: Union[OperatorFamily, np.ndarray]):
        matrices = family.matrices if isinstance(family, OperatorFamily) else family
        matrices = np.asarray(matrices, dtype=complex)
        if matrices.ndim == 1:
            matrices = matrices[:, None, None]
        if matrices.ndim != 3 or matrices.shape[0] == 0:
            raise InvalidParameterError("minkowski gauge needs a nonempty family of matrices")
        self.generators = matrices
        self._cache: Dict[bytes, GaugeResult] = {}

    @property
    def name(self) -> str:
        return "minkowski"

    def evaluate(self, operator) -> GaugeResult:
        matrix = _as_matrix(operator)
        if matrix.shape != self.generators.shape[1:]:
            raise ShapeMismatchError(
                f"matrix of shape {matrix.shape} does not match generators "
                f"{self.generators.shape[1:]}"
            )
        if not np.any(matrix):
            return GaugeResult(value=0.0, status="exact")
        key = matrix.tobytes()
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        solution = minimal_l1_representation(self.generators, matrix)
        if not solution.feasible:
            log.warning(
                "operator outside the span of the family", generators=len(self.generators)
            )
            result = GaugeResult(value=float("inf"), status="infeasible")
        elif np.iscomplexobj(solution.coefficients) and np.any(solution.coefficients.imag):
            result = GaugeResult(
                value=solution.value, status="certified", upper_bound=solution.value
            )
        else:
            result = GaugeResult(value=solution.value, status="exact")
        self._cache[key] = result
        return result


def gauge_value(operator, gauge: Gauge) -> float:
    """Gauge of a single matrix; +∞ when a Minkowski target leaves the span."""
    return gauge(operator)


def default_gauge(dimension: int) -> Gauge:
    """|·| for scalar symbols, the ℓ²_d operator norm otherwise."""
    if dimension == 1:
        return AbsoluteGauge()
    spec = SpaceSpec.lp(2, dimension)
    return OperatorNormGauge(spec, spec)
