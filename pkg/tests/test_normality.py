from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from isl.ambient import make_structure
from isl.errors import HypothesisViolated, WrongCodimension
from isl.gallery import ex2
from isl.induced import InducedStructureData, compute_induced
from isl.normality import (basis_independence_check, codim2_lemma_suite, commutators, independence_report,
                           independence_test, n_component_suite, nijenhuis_at, nijenhuis_from_jets,
                           nijenhuis_suite, normality_and_commutativity, numerical_rank, verdict_report)
from isl.numeric import FdConfig, max_abs
from isl.shape import ShapeData, local_jets, shape_from_jets
from isl.submanifold import PointFrame, frames_at, make_implicit, sample_points

STEP = FdConfig(1e-5)
H = np.sqrt(0.5)
SWAP = make_structure("swap", 2)
S3 = make_implicit("sphere", m=4, R=1.0)
ELLIPSOID = make_implicit("custom", m=4, constraints=["x1^2 + 2*x2^2 + x3^2 + 3*x4^2 - 1"])
# codimension 2 with a non-flat normal connection (the quadric comes first in the frame)
TWISTED = make_implicit("custom", m=6, constraints=["x1^2 + 2*x2^2 - x4^2 + x5*x6 - 0.1",
                                                    "x1^2 + x2^2 + x3^2 + x4^2 + x5^2 + x6^2 - 1"])


def _bundle(s, M, x):
    f = frames_at(M, x)
    d = compute_induced(s, f)
    j = local_jets(s, M, f, STEP)
    sh = shape_from_jets(j)
    return f, d, sh, nijenhuis_from_jets(j, d, sh)


def test_sphere_commutators_vanish():
    f, d, sh, _ = _bundle(SWAP, S3, sample_points(S3, 1, seed=1)[0])
    c = commutators(d, sh)
    assert c.size() <= 1e-9 and c.skewness() <= 1e-9


def test_commutator_form_stays_skew_after_a_rank_one_perturbation():
    f, d, sh, _ = _bundle(SWAP, S3, sample_points(S3, 1, seed=1)[0])
    v = np.array([1.0, 0.5, -0.25])
    A = sh.A.copy()
    A[0] += np.outer(v, v)  # symmetric, but not commuting with P
    c = commutators(d, ShapeData(A, np.transpose(A, (0, 2, 1)), sh.l, sh.frame))
    assert c.size() > 0.1
    assert c.skewness() <= 1e-9


def test_sphere_structure_is_normal():
    for x in sample_points(S3, 5, seed=2):
        f, d, sh, nij = _bundle(SWAP, S3, x)
        assert max_abs(nij.NP) <= 1e-5 and max_abs(nij.N1) <= 1e-5
        rep = nijenhuis_suite(SWAP, d, sh, nij)
        assert rep.passed and rep.status("3.22") == "PASS"


def test_nijenhuis_from_public_entry_point_matches_jets():
    x = sample_points(ELLIPSOID, 1, seed=3)[0]
    f, d, sh, nij = _bundle(SWAP, ELLIPSOID, x)
    assert max_abs(nijenhuis_at(SWAP, ELLIPSOID, f, d, STEP).NP - nij.NP) == 0.0


@pytest.mark.parametrize("M, seed", [(ELLIPSOID, 3), (ELLIPSOID, 9), (TWISTED, 1)])
def test_three_forms_of_the_nijenhuis_tensor_agree(M, seed):
    s = make_structure("swap", M.m // 2)
    f, d, sh, nij = _bundle(s, M, sample_points(M, 1, seed=seed)[0])
    rep = nijenhuis_suite(s, d, sh, nij)
    for ident in ("3.1", "3.1.skew", "3.37", "3.11", "3.16", "3.22.corrected"):
        assert rep.status(ident) == "PASS", (ident, rep.max_residual(ident))
    assert max_abs(nij.NP) > 1e-2  # not trivially zero


def test_normal_connection_term_as_printed_misses_when_l_is_nonzero():
    f, d, sh, nij = _bundle(make_structure("swap", 3), TWISTED, sample_points(TWISTED, 1, seed=1)[0])
    assert max_abs(sh.l) > 1e-2
    rep = nijenhuis_suite(make_structure("swap", 3), d, sh, nij)
    assert rep.status("3.22") == "INFO" and rep.max_residual("3.22") > 1e-3
    assert rep.max_residual("3.22.corrected") <= 1e-8


def test_nijenhuis_suite_gates_closed_forms_for_complex_ambients():
    J = make_structure("custom", matrix=np.kron(np.eye(2), [[0.0, -1.0], [1.0, 0.0]]), epsilon=-1)
    f, d, sh, nij = _bundle(J, S3, sample_points(S3, 1, seed=2)[0])
    rep = nijenhuis_suite(J, d, sh, nij)
    assert rep.status("3.1") == "PASS" and rep.status("3.11") == "GATED"


def test_component_closed_forms_on_sphere_and_ellipsoid():
    f, d, sh, nij = _bundle(SWAP, S3, sample_points(S3, 1, seed=5)[0])
    rep = n_component_suite(SWAP, S3, f, d, sh, STEP, nij=nij)
    assert rep.passed and rep.status("3.45.i") == "PASS" and rep.status("3.45.iv") == "PASS"
    f, d, sh, nij = _bundle(SWAP, ELLIPSOID, sample_points(ELLIPSOID, 1, seed=5)[0])
    rep = n_component_suite(SWAP, ELLIPSOID, f, d, sh, STEP, nij=nij)
    assert rep.passed and rep.status("3.42.iii") == "PASS" and rep.status("3.45.i") == "GATED"


def test_component_suite_requires_flat_normal_connection():
    s = make_structure("swap", 3)
    f, d, sh, nij = _bundle(s, TWISTED, sample_points(TWISTED, 1, seed=1)[0])
    with pytest.raises(HypothesisViolated):
        n_component_suite(s, TWISTED, f, d, sh, STEP, nij=nij)


def test_verdict_on_sphere_is_normal_and_commuting():
    f, d, sh, nij = _bundle(SWAP, S3, [0.6, 0.0, 0.0, 0.8])
    v = normality_and_commutativity(d, sh, nij)
    assert v.is_normal and v.commutes and v.theorem_4_2_consistent
    a = d.A_mat[0, 0]
    assert v.det_gate == pytest.approx(1 - a * a)
    assert verdict_report(v).status("4.2") == "PASS"


def test_verdict_is_not_asserted_at_the_degenerate_point():
    f, d, sh, nij = _bundle(SWAP, S3, [H, 0.0, H, 0.0])
    v = normality_and_commutativity(d, sh, nij)
    assert abs(v.det_gate) <= 1e-12 and v.theorem_4_2_consistent is None
    assert verdict_report(v).status("4.2") == "GATED"


def test_verdict_on_ellipsoid_exercises_the_contrapositive():
    for x in sample_points(ELLIPSOID, 5, seed=7):
        f, d, sh, nij = _bundle(SWAP, ELLIPSOID, x)
        v = normality_and_commutativity(d, sh, nij)
        assert not v.is_normal and not v.commutes
        assert v.theorem_4_2_consistent in (True, None)


def test_independence_where_the_product_matrix_vanishes():
    e = ex2(2, H, H)
    rec = independence_test(compute_induced(e.ambient, frames_at(e.manifold, [H, 0.0, 0.0, H])))
    assert rec.det == pytest.approx(1.0) and rec.rank == 2
    assert max_abs(rec.gram - np.eye(2)) <= 1e-12


def test_independence_fails_where_the_product_matrix_squares_to_identity():
    e = ex2(2, H, H)
    d = compute_induced(e.ambient, frames_at(e.manifold, [H, 0.0, H, 0.0]))
    assert max_abs(d.A_mat - np.diag([1.0, -1.0])) <= 1e-12
    rec = independence_test(d)
    assert abs(rec.det) <= 1e-12 and rec.rank < 2 and rec.agrees
    assert independence_report(d).status("4.1") == "PASS"


def test_independence_on_sphere_with_zero_a():
    d = compute_induced(SWAP, frames_at(S3, [1.0, 0, 0, 0]))
    rec = independence_test(d)
    assert rec.det == 1.0 and rec.rank == 1 and rec.gram[0, 0] == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 2.0), st.integers(1, 3))
def test_numerical_rank_of_scaled_identity_follows_determinant(c, r):
    assume(abs(c ** r - 1e-10) > 1e-18)  # exact ties are decided by rounding
    gram = c * np.eye(r)
    assert (numerical_rank(gram) == r) == (c ** r > 1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_rank_and_determinant_agree_on_random_product_points(seed):
    e = ex2(2, 0.6, 0.8)
    x = e.sample(1, seed)[0]
    assert independence_test(compute_induced(e.ambient, frames_at(e.manifold, x))).agrees


def test_commutator_condition_is_frame_independent_on_sphere():
    f, d, sh, nij = _bundle(SWAP, S3, sample_points(S3, 1, seed=2)[0])
    for K in (np.eye(1), -np.eye(1)):
        rep = basis_independence_check(SWAP, S3, f, d, sh, K, STEP)
        assert rep.passed and rep.max_residual("3.24.frame") <= 1e-8


def test_commutator_condition_is_frame_independent_on_product():
    e = ex2(2, 0.6, 0.8)
    f, d, sh, nij = _bundle(e.ambient, e.manifold, e.sample(1, seed=4)[0])
    c, s = np.cos(0.7), np.sin(0.7)
    rep = basis_independence_check(e.ambient, e.manifold, f, d, sh, [[c, -s], [s, c]], STEP,
                                   require_hypotheses=False)
    assert rep.passed and rep.max_residual("3.24.frame") <= 1e-6
    assert rep.select("3.24")[0].residual > 1e-2  # the condition itself fails here: not normal
    with pytest.raises(HypothesisViolated):
        basis_independence_check(e.ambient, e.manifold, f, d, sh, np.eye(2), STEP)


def test_product_of_spheres_lemmas_are_gated():
    e = ex2(2, 0.6, 0.8)
    f, d, sh, nij = _bundle(e.ambient, e.manifold, e.sample(1, seed=4)[0])
    v = normality_and_commutativity(d, sh, nij)
    assert not v.is_normal
    rep = codim2_lemma_suite(d, sh, normal=v.is_normal)
    assert {r.status for r in rep.records} == {"GATED"}
    with pytest.raises(HypothesisViolated):
        codim2_lemma_suite(d, sh, normal=False, strict=True)


def _synthetic_normal_configuration():
    # a = 0, xi_1 = e1, xi_2 = e2, P = diag(0, 0, 1, -1); A_a diagonal so P A_a = A_a P
    n, r = 4, 2
    P = np.diag([0.0, 0.0, 1.0, -1.0])
    xi = np.eye(n)[:, :r]
    frame = PointFrame(np.zeros(6), np.eye(6)[:, :n], np.eye(6)[:, n:])
    d = InducedStructureData(frame, 1, P, xi.T.copy(), xi, np.zeros((r, r)))
    A = np.array([np.diag([1.0, 2.0, 3.0, 3.0]), np.diag([-1.0, 0.5, 2.0, 2.0])])
    return d, ShapeData(A, A.copy(), np.zeros((r, r, n)), frame)


def test_synthetic_normal_configuration_satisfies_all_lemmas():
    d, sh = _synthetic_normal_configuration()
    rep = codim2_lemma_suite(d, sh, normal=True)
    assert rep.passed and len(rep.records) == 11
    assert max(r.residual for r in rep.records) <= 1e-9


def test_lemmas_need_codimension_two():
    f, d, sh, nij = _bundle(SWAP, S3, [1.0, 0, 0, 0])
    with pytest.raises(WrongCodimension):
        codim2_lemma_suite(d, sh, normal=True)
