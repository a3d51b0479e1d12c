"""Acceptance criteria, one test per criterion at the stated tolerance.

Each test prints a single PASS/FAIL line (collected again in the terminal
summary) before asserting.
"""

from __future__ import annotations

import json
from dataclasses import replace

import numpy as np
import pytest

from isl import cli
from isl.ambient import make_structure, with_rotating_field
from isl.gallery import compose_immersions, ex1, ex2, ex2_chain, ex3, ex4, oracle_crosscheck
from isl.induced import (compute_induced, frame_covariance_residuals, random_orthogonal, theorem_1_1_residuals,
                         theorem_1_1_suite)
from isl.normality import (basis_independence_check, commutators, independence_test, n_component_suite,
                           nijenhuis_at, nijenhuis_suite)
from isl.numeric import FdConfig, max_abs
from isl.report import FAIL
from isl.scenario import run_scenario
from isl.shape import (codim1_suite, defect_suite, local_jets, shape_at, shape_from_jets, shape_residuals,
                       theorem_2_1_suite)
from isl.submanifold import frames_at, make_implicit, sample_points

POINTS = 100
STEP = FdConfig(1e-5)


def _worst(values) -> float:
    return max(values) if values else 0.0


def _fd_bundle(s, M, x, cfg=STEP):
    f = frames_at(M, x)
    induced = compute_induced(s, f)
    jets = local_jets(s, M, f, cfg)
    return f, induced, jets, shape_from_jets(jets)


def test_algebraic_identities_hold_on_every_gallery_example(acceptance):
    worst = {}
    for ex in (ex1(2), ex1(3), ex3(2), ex4(2, 3)):
        label = f"{ex.id}{tuple(ex.params.values())}"
        worst[label] = _worst([max(theorem_1_1_residuals(compute_induced(ex.ambient, frames_at(ex.manifold, x)))
                                   .values()) for x in ex.sample(POINTS, seed=11)])
    chain = ex2_chain(2, 0.6, 0.8)
    worst["product chain"] = _worst([max(theorem_1_1_residuals(compose_immersions(chain, x).induced).values())
                                     for x in ex2(2, 0.6, 0.8).sample(POINTS, seed=11)])
    top = max(worst.values())
    ok = acceptance(1, top <= 1e-9, f"algebraic identities, {POINTS} points x 5 examples, max residual {top:.2e}")
    assert ok, worst


def test_closed_forms_agree_with_generic_pipeline(acceptance):
    worst = {}
    for ex in (ex1(2), ex2(2, 0.6, 0.8), ex3(2), ex4(2, 3)):
        rep = oracle_crosscheck(ex, ex.sample(POINTS, seed=5))
        comps = [r.residual for r in rep.records if r.identity.startswith(f"7.{ex.id}.")]
        worst[ex.id] = _worst(comps)
        assert not rep.failures(), [(r.identity, r.residual) for r in rep.failures()[:5]]
    top = max(worst.values())
    ok = acceptance(2, top <= 1e-9, f"closed forms vs generic, {POINTS} points x 4 examples, max diff {top:.2e}")
    assert ok, worst


def test_product_of_spheres_matrix_and_two_paths(acceptance):
    r1, r2 = 0.6, 0.8
    ex = ex2(2, r1, r2)
    lam = r2 / r1 - r1 / r2
    mat_err, path_err = 0.0, 0.0
    for x in ex.sample(POINTS, seed=3) + list(ex.special):
        p = 2
        sd = float(x[:p] @ x[p:])
        expected = np.array([[2 * sd, lam * sd], [lam * sd, -2 * sd]])
        chained = compose_immersions(ex.chain, x).induced
        direct = compute_induced(ex.ambient, frames_at(ex.manifold, x))
        mat_err = max(mat_err, max_abs(chained.A_mat - expected), max_abs(direct.A_mat - expected))
        Tc, Td = chained.frame.T, direct.frame.T
        path_err = max(path_err,
                       max_abs(Tc @ chained.P_tan @ Tc.T - Td @ direct.P_tan @ Td.T),
                       max_abs(chained.u @ Tc.T - direct.u @ Td.T),
                       max_abs(Tc @ chained.xi - Td @ direct.xi),
                       max_abs(chained.A_mat - direct.A_mat))
    ok = acceptance(3, mat_err <= 1e-9 and path_err <= 1e-9,
                    f"(a_ab) matrix residual {mat_err:.2e}, chain vs direct {path_err:.2e}")
    assert ok


def test_derivative_formulas_and_defect_by_finite_differences(acceptance):
    worst_thm, worst_defect = 0.0, 0.0
    sphere = ex1(2)
    chain = ex2_chain(2, 0.6, 0.8)
    cases = [(sphere.ambient, sphere.manifold, sphere.sample(20, seed=2)),
             (chain.ambient, chain.innermost, ex2(2, 0.6, 0.8).sample(20, seed=2))]
    for s, M, pts in cases:
        for x in pts:
            f, induced, jets, shape = _fd_bundle(s, M, x)
            rep = theorem_2_1_suite(s, M, f, induced, shape, STEP, jets=jets)
            worst_thm = max(worst_thm, *(r.residual for r in rep.records))
            drep = defect_suite(s, M, f, induced, shape, STEP, jets=jets)
            worst_defect = max(worst_defect, drep.max_residual("2.30"))
    ok = acceptance(4, worst_thm <= 1e-5 and worst_defect <= 1e-6,
                    f"derivative formulas max residual {worst_thm:.2e} (step 1e-5), defect norm {worst_defect:.2e}")
    assert ok


def test_sphere_shape_operator_oracle(acceptance):
    worst = {"A": 0.0, "l": 0.0, "h": 0.0}
    for R in (1.0, 2.0):
        M = make_implicit("sphere", m=4, R=R)
        for x in sample_points(M, 20, seed=4):
            sh = shape_at(M, frames_at(M, x), STEP)
            res = shape_residuals(sh)
            worst["A"] = max(worst["A"], max_abs(sh.A[0] + np.eye(3) / R))
            worst["l"] = max(worst["l"], res["2.5"])
            worst["h"] = max(worst["h"], res["2.3.sym"])
    ok = acceptance(5, max(worst.values()) <= 1e-6,
                    "sphere A + I/R {A:.2e}, l antisymmetry {l:.2e}, h symmetry {h:.2e}".format(**worst))
    assert ok


def test_umbilical_spheres_are_normal_and_commuting(acceptance):
    worst = {"B": 0.0, "N1": 0.0, "cross": 0.0}
    for ex in (ex1(2), ex3(2), ex4(2, 3)):
        s, M = ex.ambient, ex.manifold
        for x in ex.sample(15, seed=8):
            f, induced, jets, shape = _fd_bundle(s, M, x)
            nij = nijenhuis_at(s, M, f, induced, STEP)
            rep = nijenhuis_suite(s, induced, shape, nij)
            worst["B"] = max(worst["B"], commutators(induced, shape).size())
            worst["N1"] = max(worst["N1"], max_abs(nij.N1))
            worst["cross"] = max(worst["cross"], rep.max_residual("3.11"))
    ok = acceptance(6, worst["B"] <= 1e-6 and worst["N1"] <= 1e-5 and worst["cross"] <= 1e-5,
                    "|PA - AP| {B:.2e}, |N1| {N1:.2e}, covariant vs closed Nijenhuis {cross:.2e}".format(**worst))
    assert ok


def test_degenerate_point_kills_xi(acceptance):
    ex = ex1(2)
    h = np.sqrt(0.5)
    worst_xi, worst_rel = 0.0, 0.0
    for x in (np.array([h, 0, h, 0]), np.array([0, h, 0, h]), np.array([h, 0, -h, 0])):
        f = frames_at(ex.manifold, x)
        d = compute_induced(ex.ambient, f)
        a = float(d.A_mat[0, 0])
        assert abs(a * a - 1) <= 1e-12
        worst_xi = max(worst_xi, float(np.linalg.norm(d.xi)))
        worst_rel = max(worst_rel, abs(float(d.u[0] @ d.xi[:, 0]) - (1 - a * a)))
        jets = local_jets(ex.ambient, ex.manifold, f, STEP)
        rep = codim1_suite(ex.ambient, ex.manifold, f, d, shape_from_jets(jets), STEP, jets=jets)
        worst_rel = max(worst_rel, rep.max_residual("6.3.iii"))
    ok = acceptance(7, worst_xi <= 1e-9 and worst_rel <= 1e-9,
                    f"|a| = 1 points: |xi| {worst_xi:.2e}, u(xi) - (1 - a^2) {worst_rel:.2e}")
    assert ok


def test_rank_of_xi_gram_matches_determinant_test(acceptance):
    ex = ex2(2, 0.6, 0.8)
    pts = ex.sample(500, seed=21) + list(ex.special)
    disagreements, degenerate = 0, 0
    for x in pts:
        rec = independence_test(compose_immersions(ex.chain, x).induced)
        disagreements += not rec.agrees
        degenerate += not rec.independent
    ok = acceptance(8, disagreements == 0,
                    f"{len(pts)} points, {degenerate} rank-deficient, {disagreements} disagreements")
    assert ok


def test_normal_frame_changes_transform_covariantly(acceptance):
    rng = np.random.default_rng(99)
    worst_cov, worst_inv = 0.0, 0.0
    sphere = ex1(2)
    pair = ex2(2, 0.6, 0.8)
    for r, ex in ((1, sphere), (2, pair)):
        s, M = ex.ambient, ex.manifold
        x = ex.sample(1, seed=r)[0]
        f, induced, jets, shape = _fd_bundle(s, M, x)
        for _ in range(20):
            K = random_orthogonal(r, rng)
            worst_cov = max(worst_cov, max(frame_covariance_residuals(induced, K).values()))
        for _ in range(3):
            K = random_orthogonal(r, rng)
            rep = basis_independence_check(s, M, f, induced, shape, K, STEP, require_hypotheses=(r == 1))
            worst_inv = max(worst_inv, rep.max_residual("3.24.frame"), rep.max_residual("3.35"))
    ok = acceptance(9, worst_cov <= 1e-10 and worst_inv <= 1e-5,
                    f"transformation laws {worst_cov:.2e} (20 K per r), commutator condition invariance "
                    f"{worst_inv:.2e}")
    assert ok


def test_injected_faults_are_reported_as_failures(acceptance):
    s = make_structure("swap", 2)
    M = make_implicit("sphere", m=4, R=1.0)
    x = sample_points(M, 1, seed=6)[0]
    f, induced, jets, shape = _fd_bundle(s, M, x)
    caught = {}

    bad = induced.P_tan.copy()
    bad[0, 0] += 0.1
    corrupted = replace(induced, P_tan=bad)
    rep = theorem_1_1_suite(corrupted)
    caught["corrupted P (algebraic)"] = rep.status("1.6.i") == FAIL and rep.max_residual("1.6.i") >= 0.09
    # on a sphere PA = AP for every P, so the N1 closed form needs a non-umbilical hypersurface
    E = make_implicit("custom", m=4, constraints=["x1^2 + 2*x2^2 + x3^2 + 3*x4^2 - 1"])
    fe = frames_at(E, sample_points(E, 1, seed=6)[0])
    de = compute_induced(s, fe)
    bad_e = de.P_tan.copy()
    bad_e[0, 0] += 0.1
    rep = n_component_suite(s, E, fe, replace(de, P_tan=bad_e), shape_at(E, fe, STEP), STEP,
                            nij=nijenhuis_at(s, E, fe, de, STEP))
    caught["corrupted P (N1 closed form)"] = rep.status("3.42.i") == FAIL

    rep = theorem_2_1_suite(s, M, f, induced, shape.scaled(0, 1.1), STEP, jets=jets)
    caught["scaled A"] = any(r.failed and r.residual >= 1e-3 for r in rep.records)

    rotating = with_rotating_field(s, 0.1, seed=0)
    moved = local_jets(rotating, M, f, STEP)
    rep = defect_suite(s, M, f, induced, shape, STEP, jets=moved)
    caught["moving structure in FD path"] = rep.status("2.30") == FAIL

    coarse = run_scenario({"ambient": {"kind": "swap", "p": 2}, "manifold": {"kind": "sphere", "m": 4, "R": 1.0},
                           "sampling": {"count": 3, "seed": 1}, "suites": ["thm2_1"], "fd_step": 0.1})
    caught["coarse step"] = bool(coarse.failures()) and coarse.exit_code != 0

    missed = [k for k, v in caught.items() if not v]
    ok = acceptance(10, not missed, f"{len(caught) - len(missed)}/{len(caught)} injected faults produce FAIL"
                    + (f", missed {missed}" if missed else ""))
    assert ok


def test_fixed_seed_reports_are_byte_identical(acceptance, tmp_path, capsys):
    scen = tmp_path / "s.json"
    scen.write_text(json.dumps({"gallery": "ex2", "params": {"p": 2, "r1": 0.6, "r2": 0.8},
                                "sampling": {"count": 4, "seed": 17}, "suites": ["all"]}))
    outs = []
    for k in range(3):
        out = tmp_path / f"r{k}.json"
        code = cli.main(["verify", "--scenario", str(scen), "--format", "json", "--out", str(out)], environ={})
        assert code in (0, 1)
        outs.append(out.read_bytes())
    capsys.readouterr()
    same = all(o == outs[0] for o in outs)
    ok = acceptance(11, same, f"3 runs, {len(outs[0])} bytes each, identical={same}")
    assert ok


@pytest.mark.parametrize("R", [1.0, 2.0])
def test_sphere_weingarten_sign_uses_outward_normal(R):
    M = make_implicit("sphere", m=3, R=R)
    x = np.array([0.0, 0.0, R])
    sh = shape_at(M, frames_at(M, x), STEP)
    assert np.allclose(sh.A[0], -np.eye(2) / R, atol=1e-6)
