from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from isl.ambient import (apply_structure, check_compatibility, make_structure, structure_from_dict,
                         unchecked_structure, with_rotating_field)
from isl.errors import DimensionMismatch, InvalidStructure
from isl.numeric import max_abs

ROT90 = [[0.0, -1.0], [1.0, 0.0]]


def test_swap_exchanges_the_two_halves():
    assert np.array_equal(apply_structure(make_structure("swap", 1), [3, 4]), [4, 3])
    assert np.array_equal(apply_structure(make_structure("swap", 2), [1, 2, 3, 4]), [3, 4, 1, 2])


def test_reflection_negates_the_second_block():
    assert np.array_equal(apply_structure(make_structure("reflection", 1, 1), [3, 4]), [3, -4])
    assert np.array_equal(apply_structure(make_structure("reflection", 2, 2), [1, 2, 3, 4]), [1, 2, -3, -4])


def test_fixed_axis_swap_leaves_the_middle_coordinate():
    assert np.array_equal(apply_structure(make_structure("fixed_axis_swap", 1), [1, 5, 2]), [2, 5, 1])


@pytest.mark.parametrize("kind, dims", [("swap", (3,)), ("fixed_axis_swap", (2,)), ("reflection", (2, 3))])
def test_builtin_structures_pass_compatibility(kind, dims):
    rep = check_compatibility(make_structure(kind, *dims))
    assert rep.passed and rep.max_residual("1.1") == 0.0


def test_quarter_turn_is_an_almost_complex_structure():
    s = make_structure("custom", matrix=ROT90, epsilon=-1)
    assert s.epsilon == -1 and check_compatibility(s).passed


def test_non_orthogonal_matrix_fails_metric_compatibility():
    rep = check_compatibility(unchecked_structure([[0.0, 2.0], [0.5, 0.0]], 1))
    assert rep.status("1.2") == "FAIL"
    assert rep.status("1.1") == "PASS"
    with pytest.raises(InvalidStructure):
        make_structure("custom", matrix=[[0.0, 2.0], [0.5, 0.0]], epsilon=1)


@pytest.mark.parametrize("args, kwargs", [
    (("swap", 0), {}),
    (("swap", 1.5), {}),
    (("reflection", 2), {}),
    (("cube", 2), {}),
    (("custom",), {"matrix": np.eye(2)}),
    (("custom",), {"matrix": np.eye(2), "epsilon": 0}),
    (("custom",), {"matrix": np.ones((2, 3)), "epsilon": 1}),
    (("custom",), {"matrix": [[np.nan, 0], [0, 1]], "epsilon": 1}),
])
def test_bad_structures_are_rejected(args, kwargs):
    with pytest.raises(InvalidStructure):
        make_structure(*args, **kwargs)


def test_structure_matrix_is_read_only():
    s = make_structure("swap", 2)
    with pytest.raises(ValueError):
        s.p_tilde[0, 0] = 5.0


def test_apply_rejects_wrong_length():
    with pytest.raises(DimensionMismatch):
        apply_structure(make_structure("swap", 2), [1, 2, 3])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), arrays(np.float64, 8, elements=st.floats(-10, 10)))
def test_swap_is_an_isometric_involution(p, v):
    s = make_structure("swap", p)
    w = v[: 2 * p]
    once = apply_structure(s, w)
    assert np.array_equal(apply_structure(s, once), w)
    assert np.linalg.norm(once) == pytest.approx(np.linalg.norm(w), rel=1e-12, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.5), st.integers(0, 100), arrays(np.float64, 4, elements=st.floats(-2, 2)))
def test_rotating_field_stays_compatible_everywhere(strength, seed, x):
    s = with_rotating_field(make_structure("swap", 2), strength, seed)
    assert not s.is_constant
    P = s.at(x)
    assert max_abs(P @ P - np.eye(4)) <= 1e-10
    assert max_abs(P.T @ P - np.eye(4)) <= 1e-10


def test_rotating_field_actually_moves():
    s = with_rotating_field(make_structure("swap", 2), 0.2, 1)
    assert max_abs(s.at(np.ones(4)) - s.at(-np.ones(4))) > 1e-3


def test_structure_from_dict_variants():
    assert structure_from_dict({"kind": "swap", "p": 2}).m == 4
    assert structure_from_dict({"kind": "reflection", "p": 1, "q": 2}).m == 3
    assert structure_from_dict({"kind": "custom", "matrix": ROT90, "epsilon": -1}).epsilon == -1
    assert not structure_from_dict({"kind": "swap", "p": 2, "rotating": {"strength": 0.1}}).is_constant
    assert make_structure("swap", 2).describe() == {"kind": "swap", "m": 4, "epsilon": 1, "dims": [2]}
