"""Mixed sequence-space norms, weighted L^p norms and Muckenhoupt characteristics."""

from fractions import Fraction
from typing import Optional

import numpy as np

from testbench.core.config import settings
from testbench.core.exceptions import InvalidParameterError, ShapeMismatchError
from testbench.core.logger import log
from testbench.core.parallel import parallel_map, resolve_threads
from testbench.domain.exponent import (
    INF,
    conjugate,
    format_exponent,
    is_inf,
    parse_exponent,
    reciprocal,
)
from testbench.domain.signals import TorusSignal
from testbench.domain.spaces import Layer, SpaceSpec, Weight, exponent_key


def _reduce(values: np.ndarray, exponent) -> np.ndarray:
    """ℓ^r norm of nonnegative values along the last axis."""
    if values.shape[-1] == 0:
        return np.zeros(values.shape[:-1])
    if is_inf(exponent):
        return values.max(axis=-1)
    r = float(exponent)
    if r == 1.0:
        return values.sum(axis=-1)
    scale = values.max(axis=-1, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    return (np.sum((values / safe) ** r, axis=-1) ** (1.0 / r)) * safe[..., 0]


def layer_norm(values: np.ndarray, exponent, axis: int = 0) -> np.ndarray:
    """Pointwise ℓ^r combination |·| of a stack of lattice elements along `axis`."""
    moved = np.moveaxis(np.abs(np.asarray(values)), axis, -1)
    return _reduce(moved, parse_exponent(exponent))


def space_norm_batch(values: np.ndarray, spec: SpaceSpec) -> np.ndarray:
    """
    space_norm applied to the trailing axes of `values`.

    The trailing shape must equal spec.shape; leading axes are batch axes.
    """
    values = np.abs(np.asarray(values))
    depth = len(spec.layers)
    if depth == 0:
        return values
    if values.shape[values.ndim - depth :] != spec.shape:
        raise ShapeMismatchError(
            f"value shape {values.shape} does not end with space shape {spec.shape}"
        )
    for layer in reversed(spec.layers):
        values = _reduce(values, layer.exponent)
    return values


def space_norm(value, spec: SpaceSpec) -> float:
    """
    Recursive mixed norm; the innermost layer acts on absolute values first.

    Flat arrays of matching size are reshaped to the space shape.
    """
    value = np.asarray(value)
    if value.shape != spec.shape:
        if value.size != spec.size:
            raise ShapeMismatchError(
                f"value of shape {value.shape} does not fit space {spec} "
                f"of shape {spec.shape}"
            )
        value = value.reshape(spec.shape)
    return float(space_norm_batch(value, spec))


def lp_weighted_norm(
    signal: TorusSignal,
    p,
    weight: Optional[Weight] = None,
    spec: Optional[SpaceSpec] = None,
) -> float:
    """((1/N) Σ_j w_j ‖f_j‖_X^p)^{1/p}; w ≡ 1 when no weight is given."""
    samples = signal.samples
    if spec is None:
        spec = SpaceSpec.lp(2, signal.dimension) if signal.dim_shape else SpaceSpec.scalar()
    if samples[0].size != spec.size:
        raise ShapeMismatchError(f"signal components {signal.dim_shape} do not fit space {spec}")
    pointwise = space_norm_batch(samples.reshape((signal.n_points,) + spec.shape), spec)
    return weighted_lp(pointwise, p, weight)


def weighted_lp(pointwise: np.ndarray, p, weight: Optional[Weight] = None) -> float:
    """Weighted L^p norm of a nonnegative grid function with the 1/N measure."""
    exponent = parse_exponent(p)
    if not is_inf(exponent) and exponent < 1:
        raise InvalidParameterError(f"p must be >= 1, got {format_exponent(exponent)}")
    n_points = pointwise.shape[0]
    if weight is not None and weight.n_points != n_points:
        raise ShapeMismatchError(f"weight has {weight.n_points} points, signal has {n_points}")
    if is_inf(exponent):
        return float(pointwise.max())
    w = np.ones(n_points) if weight is None else weight.values
    scale = pointwise.max()
    if scale == 0:
        return 0.0
    p_float = float(exponent)
    return float(scale * (np.sum(w * (pointwise / scale) ** p_float) / n_points) ** (1.0 / p_float))


def _arc_sums(values: np.ndarray, length: int) -> np.ndarray:
    """Sums of all N cyclic arcs of the given length, indexed by start."""
    n = values.size
    cumulative = np.concatenate(([0.0], np.cumsum(np.concatenate((values, values)))))
    starts = np.arange(n)
    return cumulative[starts + length] - cumulative[starts]


def _ap_over_lengths(weight: np.ndarray, p_float: float, lengths: np.ndarray) -> float:
    best = 0.0
    if p_float == 1.0:
        inverse = 1.0 / weight
        doubled = np.concatenate((inverse, inverse))
        running = inverse.copy()
        current = 1
        for length in lengths:
            while current < length:
                running = np.maximum(running, doubled[current : current + weight.size])
                current += 1
            value = (_arc_sums(weight, length) / length) * running
            best = max(best, float(value.max()))
        return best
    dual = weight ** (-1.0 / (p_float - 1.0))
    for length in lengths:
        average_w = _arc_sums(weight, length) / length
        average_dual = _arc_sums(dual, length) / length
        best = max(best, float(np.max(average_w * average_dual ** (p_float - 1.0))))
    return best


def ap_characteristic(weight: Weight, p, threads: Optional[int] = None) -> float:
    """
    [w]_{A_p}: supremum over every torus arc of avg(w)·avg(w^{-1/(p-1)})^{p-1},
    or avg(w)·max(w^{-1}) when p = 1.
    """
    exponent = parse_exponent(p)
    if is_inf(exponent) or exponent < 1:
        raise InvalidParameterError(f"A_p characteristic needs finite p >= 1, got {p}")
    key = ("ap", exponent_key(exponent))
    cached = weight.cached(key)
    if cached is not None:
        return cached
    n = weight.n_points
    if n > settings.ARC_LIMIT:
        raise InvalidParameterError(
            f"exhaustive arc search limited to N <= {settings.ARC_LIMIT}, got {n}"
        )
    values = np.asarray(weight.values, dtype=float)
    # normalize so that huge or tiny weights do not overflow; the product is scale free
    values = values / np.exp(np.mean(np.log(values)))
    p_float = float(exponent)
    workers = resolve_threads(threads)
    lengths = np.arange(1, n + 1)
    if p_float == 1.0 or workers == 1:
        result = _ap_over_lengths(values, p_float, lengths)
    else:
        chunks = np.array_split(lengths, workers)
        partial = parallel_map(
            lambda chunk: _ap_over_lengths(values, p_float, chunk), chunks, workers
        )
        result = max(partial)
    log.debug("A_p characteristic", p=format_exponent(exponent), n_points=n, value=result)
    return weight.remember(key, max(result, 1.0))


def alpha_characteristic(weight: Weight, p, q) -> float:
    """[w]_{α_{p,q}} = [w^{1-p'}]_{A_{p'/q'}} for 1 < p ≤ q ≤ ∞."""
    p_exp, q_exp = parse_exponent(p), parse_exponent(q)
    if is_inf(p_exp) or p_exp <= 1:
        raise InvalidParameterError(f"alpha characteristic needs 1 < p < inf, got p={p}")
    if not is_inf(q_exp) and q_exp < p_exp:
        raise InvalidParameterError(f"alpha characteristic needs q >= p, got p={p}, q={q}")
    p_dual = conjugate(p_exp)
    # p'/q' = (1 - 1/q) / (1 - 1/p), exact
    ratio = (1 - reciprocal(q_exp)) / (1 - reciprocal(p_exp))
    dual_weight = Weight(
        values=weight.values ** (1.0 - float(p_dual)),
        metadata={**weight.metadata, "dual_of": "alpha"},
    )
    return ap_characteristic(dual_weight, ratio)


def power_weight(n_points: int, alpha: float, center: int = 0) -> Weight:
    """
    w_j = dist(j/N, center/N)^α on the torus, the center value clamped
    to (1/(2N))^α.
    """
    if alpha <= -1:
        raise InvalidParameterError(f"power weight exponent must exceed -1, got {alpha}")
    j = np.arange(n_points)
    offset = np.abs(j - (center % n_points))
    distance = np.minimum(offset, n_points - offset) / n_points
    clamp = 1.0 / (2 * n_points)
    distance = np.maximum(distance, clamp)
    values = np.ones(n_points) if alpha == 0 else distance**alpha
    return Weight(
        values=values,
        metadata={"family": "power", "alpha": float(alpha), "center": int(center), "clamp": clamp},
    )


def concavify(spec: SpaceSpec, p) -> SpaceSpec:
    """X^p for a mixed sequence space: every layer exponent r becomes r/p."""
    exponent = parse_exponent(p)
    if is_inf(exponent) or exponent <= 0:
        raise InvalidParameterError(f"concavification power must be finite and positive, got {p}")
    layers = []
    for index, layer in enumerate(spec.layers):
        if is_inf(layer.exponent):
            layers.append(Layer(exponent=INF, dimension=layer.dimension))
            continue
        value = Fraction(layer.exponent) / exponent
        if value < 1:
            raise InvalidParameterError(
                f"layer {index} ({layer}) gives exponent {format_exponent(value)} < 1 "
                f"after concavification by {format_exponent(exponent)}"
            )
        layers.append(Layer(exponent=value, dimension=layer.dimension))
    return SpaceSpec(layers=tuple(layers))


def is_umd_lattice(spec: SpaceSpec) -> bool:
    """Mixed ℓ^r lattices are UMD (uniformly in dimension) iff every r ∈ (1, ∞)."""
    return all(not is_inf(layer.exponent) and layer.exponent > 1 for layer in spec.layers)
