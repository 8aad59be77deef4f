from fractions import Fraction

import numpy as np
import pytest

from testbench.core.config import settings
from testbench.core.exceptions import InvalidParameterError, ShapeMismatchError
from testbench.domain.exponent import INF
from testbench.domain.signals import TorusSignal
from testbench.domain.spaces import SpaceSpec, Weight
from testbench.harmonic.mixed_norms import (
    alpha_characteristic,
    ap_characteristic,
    concavify,
    is_umd_lattice,
    layer_norm,
    lp_weighted_norm,
    power_weight,
    space_norm,
    weighted_lp,
)


def test_space_spec_parse_and_print():
    spec = SpaceSpec.parse("l3:2(l2:4)")
    assert spec.shape == (2, 4)
    assert spec.size == 8
    assert str(spec) == "l3:2(l2:4)"
    assert str(spec.dual()) == "l3/2:2(l2:4)"
    assert SpaceSpec.parse("scalar").size == 1
    with pytest.raises(ValueError):
        SpaceSpec.parse("x2:3")


def test_flat_and_nested_norms():
    assert space_norm([3.0, 4.0], SpaceSpec.lp(2, 2)) == pytest.approx(5.0)
    assert space_norm([3.0, -4.0], SpaceSpec.lp(INF, 2)) == pytest.approx(4.0)
    nested = SpaceSpec.parse("l1:2(l2:2)")
    assert space_norm([[3.0, 4.0], [6.0, 8.0]], nested) == pytest.approx(15.0)
    # flat input of the right size is reshaped
    assert space_norm([3.0, 4.0, 6.0, 8.0], nested) == pytest.approx(15.0)
    assert space_norm(-2.5, SpaceSpec.scalar()) == pytest.approx(2.5)


def test_space_norm_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        space_norm([1.0, 2.0, 3.0], SpaceSpec.lp(2, 2))


def test_layer_norm_combines_stack():
    stack = np.array([[3.0, 0.0], [4.0, 1.0]])
    assert np.allclose(layer_norm(stack, 2, axis=0), [5.0, 1.0])
    assert np.allclose(layer_norm(stack, "inf", axis=0), [4.0, 1.0])


def test_weighted_lp_norms():
    ones = np.ones(16)
    assert weighted_lp(ones, 3) == pytest.approx(1.0)
    assert weighted_lp(ones, 2, Weight(values=np.full(16, 4.0))) == pytest.approx(2.0)
    point = np.zeros(8)
    point[0] = 1.0
    assert weighted_lp(point, 2) == pytest.approx(np.sqrt(1 / 8))
    assert weighted_lp(point, "inf") == 1.0
    with pytest.raises(ShapeMismatchError):
        weighted_lp(ones, 2, Weight.uniform(8))


def test_lp_weighted_norm_of_vector_signal():
    samples = np.zeros((8, 2))
    samples[:, 0] = 3.0
    samples[:, 1] = 4.0
    signal = TorusSignal.from_samples(samples)
    assert lp_weighted_norm(signal, 2) == pytest.approx(5.0)
    assert lp_weighted_norm(signal, 2, spec=SpaceSpec.lp(1, 2)) == pytest.approx(7.0)
    with pytest.raises(ShapeMismatchError):
        lp_weighted_norm(signal, 2, spec=SpaceSpec.lp(1, 3))


def test_uniform_weight_characteristics(single_thread):
    weight = Weight.uniform(32)
    assert ap_characteristic(weight, 2) == pytest.approx(1.0)
    assert ap_characteristic(weight, 1) == pytest.approx(1.0)
    assert alpha_characteristic(weight, 2, 4) == pytest.approx(1.0)


def test_ap_characteristic_is_scale_free_and_cached(single_thread):
    weight = power_weight(64, 0.5)
    value = ap_characteristic(weight, 2)
    assert value > 1.0
    assert weight.cached(("ap", "2")) == value
    scaled = Weight(values=weight.values * 1e6)
    assert ap_characteristic(scaled, 2) == pytest.approx(value, rel=1e-9)


def test_ap_characteristic_threads_agree():
    weight = power_weight(64, -0.4, center=10)
    serial = ap_characteristic(Weight(values=weight.values), 3, threads=1)
    threaded = ap_characteristic(Weight(values=weight.values), 3, threads=4)
    assert threaded == pytest.approx(serial, rel=1e-12)


def test_ap_characteristic_limits(monkeypatch):
    monkeypatch.setattr(settings, "ARC_LIMIT", 8)
    with pytest.raises(InvalidParameterError):
        ap_characteristic(Weight.uniform(16), 2)
    with pytest.raises(InvalidParameterError):
        ap_characteristic(Weight.uniform(8), "inf")


def test_power_weight():
    weight = power_weight(16, 1.0, center=0)
    assert weight.values[4] == pytest.approx(0.25)
    assert weight.values[0] == pytest.approx(1 / 32)
    assert np.allclose(power_weight(16, 0.0).values, 1.0)
    with pytest.raises(InvalidParameterError):
        power_weight(16, -1.0)


def test_concavify_and_umd():
    spec = concavify(SpaceSpec.parse("l4:2(l2:3)"), 2)
    assert spec.exponents == (Fraction(2), Fraction(1))
    assert concavify(SpaceSpec.lp(INF, 2), 3).exponents == (INF,)
    with pytest.raises(InvalidParameterError):
        concavify(SpaceSpec.lp(2, 2), 4)
    assert is_umd_lattice(SpaceSpec.parse("l3:2(l2:4)"))
    assert not is_umd_lattice(SpaceSpec.lp(1, 2))
    assert not is_umd_lattice(SpaceSpec.lp(INF, 2))
