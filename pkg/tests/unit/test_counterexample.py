import numpy as np
import pytest

from testbench.core.exceptions import InvalidParameterError
from testbench.domain.exponent import INF
from testbench.harmonic.counterexample import tk_family, tk_quantity, tk_witness
from testbench.harmonic.op_bounds import eval_lrs


@pytest.mark.parametrize("n", [1, 4, 8])
@pytest.mark.parametrize("s,p", [(1.5, 2.0), (2.0, 2.0), (3.0, 4.0)])
def test_tk_quantity_meets_lower_bound(n, s, p):
    result = tk_quantity(n, s, p)
    assert result.rhs == 1.0
    assert result.rhs_exact == pytest.approx((1 - 2.0**-n) ** (1 / p))
    assert result.lower_bound == pytest.approx(n ** (1 / s) / 4)
    assert result.lhs >= result.lower_bound * (1 - 1e-12)


@pytest.mark.parametrize("n,s,p", [(0, 2, 2), (41, 2, 2), (3, 0.5, 2), (3, 2, float("inf"))])
def test_tk_quantity_rejects_bad_parameters(n, s, p):
    with pytest.raises(InvalidParameterError):
        tk_quantity(n, s, p)


def test_tk_family_members_are_positive_contractions():
    family = tk_family(4)
    assert family.positive
    assert family.size == 4
    assert family.dimension == 64
    matrices = family.matrices.real
    assert np.allclose(matrices, np.transpose(matrices, (0, 2, 1)))
    row_sums = matrices.sum(axis=2)
    assert np.all(row_sums <= 1 + 1e-12)
    assert np.allclose(row_sums[0], 0.5)


def test_tk_grid_must_align_with_cells():
    with pytest.raises(InvalidParameterError):
        tk_family(3, grid_points=12)
    with pytest.raises(InvalidParameterError):
        tk_witness(3, grid_points=4)


def test_tk_witness_shape():
    witness = tk_witness(3, grid_points=32)
    assert witness.grid == (8, 3)
    assert witness.inputs.shape == (8, 3, 32)
    assert np.array_equal(witness.selection[5], [0, 1, 2])
    # every f_{i,j} is the indicator of 32 / 2^j points
    assert np.array_equal(witness.inputs[0].sum(axis=1), [16, 8, 4])


@pytest.mark.parametrize("n,s,p", [(3, 2.0, 2.0), (4, 1.5, 4.0), (5, 3.0, 1.05)])
def test_tk_witness_ratio_is_exact(n, s, p):
    family = tk_family(n, p=p)
    lhs, rhs = eval_lrs(family, tk_witness(n), INF, s)
    assert lhs / rhs == pytest.approx(n ** (1 / s) / 4, rel=1e-10)


def test_tk_witness_is_flat_for_matching_exponents():
    family = tk_family(4, p=2)
    lhs, rhs = eval_lrs(family, tk_witness(4), 2, 2)
    assert lhs / rhs <= 1 + 1e-12
