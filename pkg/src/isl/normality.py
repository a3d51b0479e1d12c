"""Nijenhuis torsion of ``P``, commutators with the Weingarten operators and normality.

Everything here works in the tangent coordinates of a :class:`PointFrame`.
Bracket-based quantities use the projected extensions of :mod:`isl.shape`:
a tangent vector ``X_0`` becomes the field ``X = Pi X_0``, ``PX`` becomes
``Pi P~ Pi X_0`` and ``xi_a`` is the field ``eps Pi P~ N_a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambient import AmbientStructure
from .errors import DimensionMismatch, HypothesisViolated, WrongCodimension
from .induced import InducedStructureData
from .numeric import ALG_TOL, FD_TOL, FdConfig, max_abs
from .report import ResidualReport
from .shape import Jets, ShapeData, derivatives_from_jets, local_jets, shape_from_jets
from .submanifold import ImplicitSubmanifold, PointFrame

VERDICT_TOL = 1e-5
DET_GATE = 0.1
INDEPENDENCE_DET = 1e-10


# -- commutators ---------------------------------------------------------------

@dataclass(frozen=True)
class CommutatorData:
    """``B[a] = P A_a - A_a P`` and ``C[a][i, k] = <B_a T_i, T_k>``."""

    B: np.ndarray
    C: np.ndarray

    def skewness(self) -> float:
        return max_abs(self.C + np.transpose(self.C, (0, 2, 1)))

    def size(self) -> float:
        return max_abs(self.B)


def commutators(induced: InducedStructureData, shape: ShapeData) -> CommutatorData:
    if shape.A.shape[1] != induced.n or shape.A.shape[0] != induced.r:
        raise DimensionMismatch(f"shape data is {shape.A.shape}, structure has n={induced.n}, r={induced.r}")
    P = induced.P_tan
    B = np.array([P @ A - A @ P for A in shape.A])
    C = np.transpose(B, (0, 2, 1)).copy()     # C[a][i, k] = (B_a T_i)_k
    return CommutatorData(B, C)


# -- field calculus on the projected extensions -----------------------------------------

class _Fields:
    """Values and first derivatives (along ``T_j``) of the extended fields at ``x``."""

    def __init__(self, j: Jets):
        self.j = j
        self.T = j.frame.T
        self.n = self.T.shape[1]

    def tan(self, v) -> np.ndarray:
        return self.T.T @ v

    # each returns (ambient value, list of ambient derivatives along T_j)
    def plain(self, i: int):
        e = self.T[:, i]
        return self.j.at.Pi @ e, [self.j.dPi[k] @ e for k in range(self.n)]

    def p_of(self, i: int):
        e = self.T[:, i]
        return self.j.at.Pamb @ e, [self.j.dPamb[k] @ e for k in range(self.n)]

    def xi(self, a: int):
        return self.j.at.Xi[:, a], [self.j.dXi[k][:, a] for k in range(self.n)]

    def bracket(self, V, W) -> np.ndarray:
        """Tangent coordinates of ``[V, W] = D_V W - D_W V``."""
        v, dv = V
        w, dw = W
        cv, cw = self.tan(v), self.tan(w)
        out = sum(cv[k] * dw[k] for k in range(self.n)) - sum(cw[k] * dv[k] for k in range(self.n))
        return self.tan(out)

    def u_of(self, a: int, F):
        """Value and derivatives of the function ``u_a(F) = <xi_a, F>``."""
        f, df = F
        xi0 = self.j.at.Xi[:, a]
        return float(xi0 @ f), np.array([self.j.dXi[k][:, a] @ f + xi0 @ df[k] for k in range(self.n)])

    def vdiff(self, V, scalar_derivs) -> float:
        """Derivative of a function along the field ``V`` at ``x``."""
        return float(self.tan(V[0]) @ scalar_derivs)


@dataclass(frozen=True)
class NijenhuisData:
    """Nijenhuis tensor and its components in tangent coordinates.

    ``NP[:, i, k] = N_P(T_i, T_k)`` from the covariant-derivative formula,
    ``NP_bracket`` the same from Lie brackets, ``du2[a][i, k] = 2 du_a(T_i, T_k)``,
    ``N1[:, i, k]``, ``N2[a][i, k]``, ``N3[a][:, i]`` and ``N4[a, b, i]``.
    """

    NP: np.ndarray
    NP_bracket: np.ndarray
    du2: np.ndarray
    N1: np.ndarray
    N2: np.ndarray
    N3: np.ndarray
    N4: np.ndarray
    bracket_xy: np.ndarray   # [:, i, k], bracket of the extensions of T_i and T_k

    def antisymmetry(self) -> float:
        return max_abs(self.NP + np.transpose(self.NP, (0, 2, 1)))


def nijenhuis_from_jets(j: Jets, induced: InducedStructureData, shape: ShapeData | None = None) -> NijenhuisData:
    P = induced.P_tan
    n, r = induced.n, induced.r
    der = derivatives_from_jets(j, P)
    DP, Du = der.DP, der.Du

    # N_P(X, Y) = (nabla_PX P) Y - (nabla_PY P) X - P[(nabla_X P) Y - (nabla_Y P) X]
    DP_along_P = np.einsum("ji,jak->aik", P, DP)          # [:, i, k] = (nabla_{P T_i} P) T_k
    DPik = np.transpose(DP, (1, 0, 2))                     # [:, i, k] = (nabla_{T_i} P) T_k
    NP = (DP_along_P - np.transpose(DP_along_P, (0, 2, 1))
          - np.einsum("ab,bik->aik", P, DPik - np.transpose(DPik, (0, 2, 1))))

    du2 = Du - np.transpose(Du, (0, 2, 1))
    N1 = NP - np.einsum("ca,aik->cik", induced.xi, du2)

    fl = _Fields(j)
    X = [fl.plain(i) for i in range(n)]
    PX = [fl.p_of(i) for i in range(n)]
    XI = [fl.xi(a) for a in range(r)]
    PP = P @ P
    NPb = np.zeros((n, n, n))
    brk = np.zeros((n, n, n))
    for i in range(n):
        for k in range(n):
            b_xy = fl.bracket(X[i], X[k])
            brk[:, i, k] = b_xy
            NPb[:, i, k] = (fl.bracket(PX[i], PX[k]) + PP @ b_xy
                            - P @ fl.bracket(PX[i], X[k]) - P @ fl.bracket(X[i], PX[k]))

    N2 = np.zeros((r, n, n))
    N3 = np.zeros((r, n, n))
    N4 = np.zeros((r, r, n))
    for a in range(r):
        uX = [fl.u_of(a, X[i]) for i in range(n)]
        for i in range(n):
            for k in range(n):
                # (L_{PX} u)(Y) - (L_{PY} u)(X), with (L_V u)(W) = V(u(W)) - u([V, W])
                xi0 = fl.tan(j.at.Xi[:, a])
                lie_x = fl.vdiff(PX[i], uX[k][1]) - xi0 @ fl.bracket(PX[i], X[k])
                lie_y = fl.vdiff(PX[k], uX[i][1]) - xi0 @ fl.bracket(PX[k], X[i])
                N2[a][i, k] = lie_x - lie_y
            N3[a][:, i] = fl.bracket(XI[a], PX[i]) - P @ fl.bracket(XI[a], X[i])
        for b in range(r):
            xib = fl.tan(j.at.Xi[:, b])
            for i in range(n):
                N4[a, b, i] = fl.vdiff(XI[a], fl.u_of(b, X[i])[1]) - xib @ fl.bracket(XI[a], X[i])
    return NijenhuisData(NP, NPb, du2, N1, N2, N3, N4, brk)


def nijenhuis_at(s: AmbientStructure, M: ImplicitSubmanifold, f: PointFrame, induced: InducedStructureData,
                 cfg: FdConfig | None = None, jets: Jets | None = None) -> NijenhuisData:
    j = jets or local_jets(s, M, f, cfg)
    return nijenhuis_from_jets(j, induced, shape_from_jets(j))


# -- closed forms ---------------------------------------------------------------------

def nijenhuis_closed_form(induced: InducedStructureData, comm: CommutatorData) -> np.ndarray:
    """``sum_a [u_a(X) B_a Y - u_a(Y) B_a X - C_a(X, Y) xi_a]`` as ``[:, i, k]``."""
    u, xi = induced.u, induced.xi
    out = np.zeros((induced.n,) * 3)
    for a in range(induced.r):
        B, C = comm.B[a], comm.C[a]
        out += np.einsum("i,ck->cik", u[a], B) - np.einsum("k,ci->cik", u[a], B) - np.einsum("c,ik->cik", xi[:, a], C)
    return out


def du_closed_form(induced: InducedStructureData, shape: ShapeData, comm: CommutatorData) -> np.ndarray:
    """``2 du_a(X, Y) = -C_a(X, Y) + sum_b [l_ab(X) u_b(Y) - l_ab(Y) u_b(X)]``."""
    u, l = induced.u, shape.l
    out = -comm.C.copy()
    for a in range(induced.r):
        for b in range(induced.r):
            out[a] += np.outer(l[a, b], u[b]) - np.outer(u[b], l[a, b])
    return out


def commutator_residual(induced: InducedStructureData, comm: CommutatorData) -> np.ndarray:
    """``sum_a [u_a(X) B_a Y - u_a(Y) B_a X]`` as ``[:, i, k]``."""
    u = induced.u
    out = np.zeros((induced.n,) * 3)
    for a in range(induced.r):
        out += np.einsum("i,ck->cik", u[a], comm.B[a]) - np.einsum("k,ci->cik", u[a], comm.B[a])
    return out


def _l_term_printed(induced, shape) -> np.ndarray:
    # sum_{a,b} (u_b(X) l_ab(X) - u_b(Y) l_ab(Y)) xi_a, evaluated literally
    u, l, xi = induced.u, shape.l, induced.xi
    n = induced.n
    out = np.zeros((n, n, n))
    for a in range(induced.r):
        for b in range(induced.r):
            coef_x = u[b] * l[a, b]                      # depends on X only
            out += np.einsum("c,ik->cik", xi[:, a], coef_x[:, None] - coef_x[None, :])
    return out


def _l_term_corrected(induced, shape) -> np.ndarray:
    # sum_{a,b} (u_b(X) l_ab(Y) - u_b(Y) l_ab(X)) xi_a
    u, l, xi = induced.u, shape.l, induced.xi
    n = induced.n
    out = np.zeros((n, n, n))
    for a in range(induced.r):
        for b in range(induced.r):
            out += np.einsum("c,ik->cik", xi[:, a], np.outer(u[b], l[a, b]) - np.outer(l[a, b], u[b]))
    return out


def n_component_closed_forms(induced: InducedStructureData, shape: ShapeData, comm: CommutatorData,
                             brk: np.ndarray | None = None) -> dict[str, np.ndarray]:
    """Closed forms of ``N1..N4`` for a flat normal connection.

    ``brk`` supplies ``[X, Y]`` for the extensions used on the other side
    (zero for the projected extensions at the base point).
    """
    P, u, xi, Am = induced.P_tan, induced.u, induced.xi, induced.A_mat
    A, B, C = shape.A, comm.B, comm.C
    n, r = induced.n, induced.r
    if brk is None:
        brk = np.zeros((n, n, n))
    N1 = commutator_residual(induced, comm)
    N2 = np.zeros((r, n, n))
    N3 = np.zeros((r, n, n))
    N4 = np.zeros((r, r, n))
    uA = np.array([[u[a] @ A[b] for b in range(r)] for a in range(r)])   # uA[a, b, i] = u_a(A_b T_i)
    for a in range(r):
        for b in range(r):
            N2[a] += -Am[a, b] * C[b] + Am[a, b] * np.einsum("c,cik->ik", u[b], brk)
            N2[a] += np.outer(u[b], uA[a, b]) - np.outer(uA[a, b], u[b])
        N3[a] = sum(Am[a, b] * B[b] for b in range(r)) - P @ B[a]
        for b in range(r):
            N3[a] += np.outer(xi[:, b], uA[a, b]) + np.outer(A[b] @ xi[:, a], u[b])
        for b in range(r):
            N4[a, b] = -(u[a] @ A[b] @ P) - (u[b] @ P @ A[a])
            N4[a, b] += sum(Am[a, g] * uA[b, g] + Am[g, b] * uA[a, g] for g in range(r))
    return {"N1": N1, "N2": N2, "N3": N3, "N4": N4}


def n_component_reduced_forms(induced: InducedStructureData, shape: ShapeData,
                              brk: np.ndarray | None = None) -> dict[str, np.ndarray]:
    """Forms of ``N1..N4`` when ``P`` commutes with every ``A_a`` (``N4`` diagonal only)."""
    P, u, xi, Am = induced.P_tan, induced.u, induced.xi, induced.A_mat
    A = shape.A
    n, r = induced.n, induced.r
    if brk is None:
        brk = np.zeros((n, n, n))
    uA = np.array([[u[a] @ A[b] for b in range(r)] for a in range(r)])
    N2 = np.zeros((r, n, n))
    N3 = np.zeros((r, n, n))
    N4 = np.zeros((r, n))
    for a in range(r):
        for b in range(r):
            N2[a] += Am[a, b] * np.einsum("c,cik->ik", u[b], brk) + np.outer(u[b], uA[a, b]) - np.outer(uA[a, b], u[b])
            N3[a] += np.outer(xi[:, b], uA[a, b]) + np.outer(A[b] @ xi[:, a], u[b])
        N4[a] = 2 * sum(Am[a, g] * uA[a, g] for g in range(r)) - 2 * (u[a] @ P @ A[a])
    return {"N1": np.zeros((n, n, n)), "N2": N2, "N3": N3, "N4": N4}


# -- suites ---------------------------------------------------------------------------

def nijenhuis_suite(s: AmbientStructure, induced: InducedStructureData, shape: ShapeData, nij: NijenhuisData,
                    tol: float = FD_TOL, point: int | None = None) -> ResidualReport:
    """Cross-checks between the derivative, bracket and closed-form Nijenhuis tensors."""
    rep = ResidualReport()
    comm = commutators(induced, shape)
    rep.check("3.1", max_abs(nij.NP - nij.NP_bracket), tol, point, note="bracket form vs covariant form")
    rep.check("3.1.skew", nij.antisymmetry(), tol, point)
    rep.check("3.37", comm.skewness(), tol, point)
    rep.info("3.36", comm.size(), point, note="max |P A_a - A_a P|")
    l_size = max_abs(shape.l)
    parallel = s.is_constant and induced.epsilon == 1
    if not parallel:
        for ident in ("3.11", "3.16", "3.22", "3.22.corrected"):
            rep.gated(ident, "needs a locally product ambient", point)
        return rep
    closed = nijenhuis_closed_form(induced, comm)
    rep.check("3.11", max_abs(nij.NP - closed), tol, point, note="covariant form vs closed form")
    rep.check("3.16", max_abs(nij.du2 - du_closed_form(induced, shape, comm)), tol, point)
    base = commutator_residual(induced, comm)
    printed = base + _l_term_printed(induced, shape)
    corrected = base + _l_term_corrected(induced, shape)
    if l_size <= tol:
        rep.check("3.22", max_abs(nij.N1 - printed), tol, point, note="as printed")
    else:
        rep.info("3.22", max_abs(nij.N1 - printed), point,
                 note="as printed; the l-term pairs l_ab(X) with u_b(X), not asserted when l != 0")
    rep.check("3.22.corrected", max_abs(nij.N1 - corrected), tol, point,
              note="l-term sum (u_b(X) l_ab(Y) - u_b(Y) l_ab(X)) xi_a")
    return rep


def n_component_suite(s: AmbientStructure, M: ImplicitSubmanifold, f: PointFrame, induced: InducedStructureData,
                      shape: ShapeData, cfg: FdConfig | None = None, tol: float = FD_TOL,
                      point: int | None = None, nij: NijenhuisData | None = None) -> ResidualReport:
    """Compare bracket-computed ``N1..N4`` with their closed forms.

    Raises
    ------
    HypothesisViolated
        If the normal connection is not flat, or the ambient is not locally product.
    """
    l_size = max_abs(shape.l)
    if l_size > tol:
        raise HypothesisViolated(f"normal connection is not flat: max |l| = {l_size:.3e}")
    if not (s.is_constant and induced.epsilon == 1):
        raise HypothesisViolated("needs a locally product ambient")
    nij = nij or nijenhuis_at(s, M, f, induced, cfg)
    comm = commutators(induced, shape)
    rep = ResidualReport()
    cf = n_component_closed_forms(induced, shape, comm, nij.bracket_xy)
    rep.check("3.42.i", max_abs(nij.N1 - cf["N1"]), tol, point)
    rep.check("3.42.ii", max_abs(nij.N2 - cf["N2"]), tol, point)
    rep.check("3.42.iii", max_abs(nij.N3 - cf["N3"]), tol, point)
    rep.check("3.42.iv", max_abs(nij.N4 - cf["N4"]), tol, point)
    if comm.size() > tol:
        for ident in ("3.45.i", "3.45.ii", "3.45.iii", "3.45.iv"):
            rep.gated(ident, "P does not commute with the Weingarten operators", point, comm.size())
        return rep
    red = n_component_reduced_forms(induced, shape, nij.bracket_xy)
    rep.check("3.45.i", max_abs(nij.N1), tol, point)
    rep.check("3.45.ii", max_abs(nij.N2 - red["N2"]), tol, point)
    rep.check("3.45.iii", max_abs(nij.N3 - red["N3"]), tol, point)
    diag = np.array([nij.N4[a, a] for a in range(induced.r)])
    rep.check("3.45.iv", max_abs(diag - red["N4"]), tol, point)
    return rep


@dataclass(frozen=True)
class NormalityVerdict:
    is_normal: bool
    commutes: bool
    det_gate: float
    theorem_4_2_consistent: bool | None
    N1_norm: float
    B_norm: float
    l_norm: float
    tol: float

    def margin(self) -> dict:
        """Distance (in decades) of each norm to the tolerance."""
        def dec(v):
            return float(np.log10(self.tol / v)) if v > 0 else float("inf")
        return {"N1": dec(self.N1_norm), "B": dec(self.B_norm)}


def normality_and_commutativity(induced: InducedStructureData, shape: ShapeData, nij: NijenhuisData,
                                tol: float = VERDICT_TOL) -> NormalityVerdict:
    comm = commutators(induced, shape)
    n1 = max_abs(nij.N1)
    b = comm.size()
    l_size = max_abs(shape.l)
    A = induced.A_mat
    det = float(np.linalg.det(np.eye(induced.r) - A @ A))
    is_normal, commutes = n1 <= tol, b <= tol
    consistent = (is_normal == commutes) if (abs(det) >= DET_GATE and l_size <= tol) else None
    return NormalityVerdict(is_normal, commutes, det, consistent, n1, b, l_size, tol)


def verdict_report(v: NormalityVerdict, point: int | None = None) -> ResidualReport:
    rep = ResidualReport()
    rep.info("3.2", v.N1_norm, point, note="normal" if v.is_normal else "not normal")
    rep.info("4.1.commute", v.B_norm, point, note="P A_a = A_a P" if v.commutes else "P does not commute")
    rep.info("4.1.det", v.det_gate, point, note="det(I - A^2)")
    if v.theorem_4_2_consistent is None:
        why = "|det(I - A^2)| < 0.1" if abs(v.det_gate) < DET_GATE else "normal connection not flat"
        rep.gated("4.2", why, point, abs(float(v.is_normal) - float(v.commutes)))
    else:
        rep.check("4.2", 0.0 if v.theorem_4_2_consistent else 1.0, 0.5, point,
                  note=f"normal={v.is_normal}, commutes={v.commutes}")
    return rep


def numerical_rank(gram: np.ndarray, det_threshold: float = INDEPENDENCE_DET) -> int:
    """Eigenvalues of the Gram matrix above ``det_threshold ** (1/r)``.

    The per-eigenvalue threshold is the geometric mean matching the
    determinant threshold, so a Gram matrix with equal eigenvalues is full
    rank exactly when its determinant exceeds ``det_threshold``.
    """
    r = gram.shape[0]
    w = np.linalg.eigvalsh((gram + gram.T) / 2)
    return int(np.sum(w > det_threshold ** (1.0 / r)))


@dataclass(frozen=True)
class IndependenceRecord:
    det: float
    rank: int
    r: int
    gram: np.ndarray

    @property
    def independent(self) -> bool:
        return self.rank == self.r

    @property
    def agrees(self) -> bool:
        return self.independent == (abs(self.det) > INDEPENDENCE_DET)


def independence_test(induced: InducedStructureData) -> IndependenceRecord:
    A = induced.A_mat
    r = induced.r
    det = float(np.linalg.det(np.eye(r) - A @ A))
    gram = induced.xi.T @ induced.xi
    return IndependenceRecord(det, numerical_rank(gram), r, gram)


def independence_report(induced: InducedStructureData, point: int | None = None) -> ResidualReport:
    rec = independence_test(induced)
    rep = ResidualReport()
    rep.info("4.1.rank", rec.rank, point, note=f"det(I - A^2) = {rec.det:.6e}")
    rep.check("4.1", 0.0 if rec.agrees else 1.0, 0.5, point,
              note="rank of xi Gram = r iff |det(I - A^2)| > 1e-10")
    return rep


def basis_independence_check(s: AmbientStructure, M: ImplicitSubmanifold, f: PointFrame,
                             induced: InducedStructureData, shape: ShapeData, K, cfg: FdConfig | None = None,
                             tol: float = FD_TOL, point: int | None = None, normal: bool | None = None,
                             require_hypotheses: bool = True) -> ResidualReport:
    """Evaluate the commutator condition in the original and in a rotated normal frame.

    The rotated frame is recomputed from scratch (finite differences with the
    rotated normal field), and also predicted from ``A'_a = sum s_ab A_b`` and
    ``xi'_a = sum s_ab xi_b``. Both must leave the residual unchanged.

    Raises
    ------
    HypothesisViolated
        If ``require_hypotheses`` and the normal connection is not flat or the
        structure is not normal.
    """
    K = np.atleast_2d(np.asarray(K, dtype=float))
    from .induced import rotate_normal_frame

    l_size = max_abs(shape.l)
    if require_hypotheses:
        if l_size > tol:
            raise HypothesisViolated(f"normal connection is not flat: max |l| = {l_size:.3e}")
        if normal is None:
            normal = max_abs(nijenhuis_at(s, M, f, induced, cfg).N1) <= tol
        if not normal:
            raise HypothesisViolated("structure is not normal")
    base = commutator_residual(induced, commutators(induced, shape))
    rot_induced = rotate_normal_frame(induced, K)
    rot_shape = shape_from_jets(local_jets(s, M, f, cfg, rotation=K @ _frame_rotation(M, f)))
    rotated = commutator_residual(rot_induced, commutators(rot_induced, rot_shape))
    pred_shape = ShapeData(np.einsum("ab,bij->aij", K, shape.A), np.einsum("ab,bij->aij", K, shape.h),
                           shape.l, f.rotated(K))
    predicted = commutator_residual(rot_induced, commutators(rot_induced, pred_shape))
    rep = ResidualReport()
    rep.info("3.24", max_abs(base), point, note="residual in the original frame")
    rep.check("3.24.frame", max_abs(rotated - base), tol, point, note="recomputed in the rotated frame")
    rep.check("3.28", max_abs(rot_shape.A - pred_shape.A), tol, point, note="A'_a = sum s_ab A_b")
    rep.check("3.35", max_abs(predicted - base), tol, point, note="transformed A' and xi'")
    return rep


def _frame_rotation(M: ImplicitSubmanifold, f: PointFrame) -> np.ndarray:
    """Orthogonal matrix ``R`` with ``f.N = M.normal_field(x) R^T`` (identity for canonical frames)."""
    N0 = M.normal_field(f.x)
    return f.N.T @ N0


# -- codimension-2 lemmas ---------------------------------------------------------------

def codim2_lemma_suite(induced: InducedStructureData, shape: ShapeData, commut: CommutatorData | None = None,
                       normal: bool = False, tol: float = FD_TOL, tol_alg: float = ALG_TOL,
                       point: int | None = None, strict: bool = False) -> ResidualReport:
    """Consequences of normality for codimension 2 with flat normal connection and trace-free ``(a_ab)``.

    When a hypothesis fails each identity is reported GATED with the reason
    (``strict=True`` raises instead).
    """
    if induced.r != 2:
        raise WrongCodimension(f"codimension-2 lemmas need r = 2, got r = {induced.r}")
    comm = commut or commutators(induced, shape)
    Am, xi = induced.A_mat, induced.xi
    a, b = Am[0, 0], Am[0, 1]
    sigma_len = 1 - a * a - b * b
    gates = []
    if not normal:
        gates.append("structure not normal")
    if max_abs(shape.l) > tol:
        gates.append("normal connection not flat")
    if abs(np.trace(Am)) > tol_alg:
        gates.append("trace of (a_ab) nonzero")
    if abs(sigma_len) <= 1e-8:
        gates.append("sigma_len = 1 - a^2 - b^2 vanishes")
    ids = ("6.29", "6.32.i", "6.32.ii", "6.32.iii", "6.32.iv", "6.37.i", "6.37.ii",
           "6.41.i", "6.41.ii", "6.41.iii", "6.41.iv")
    rep = ResidualReport()
    if gates:
        if strict:
            raise HypothesisViolated(", ".join(gates))
        for ident in ids:
            rep.gated(ident, ", ".join(gates), point)
        return rep
    B, C = comm.B, comm.C
    u = induced.u
    n = induced.n
    lhs = np.zeros((n, n, n))   # [:, i, k] with X = T_i, Y = T_k
    for al in range(2):
        lhs += np.einsum("k,ci->cik", u[al], B[al]) + np.einsum("c,ik->cik", xi[:, al], C[al])
    rep.check("6.29", max_abs(lhs), tol, point)
    for ident, al, be in (("6.32.i", 0, 0), ("6.32.ii", 1, 1), ("6.32.iii", 0, 1), ("6.32.iv", 1, 0)):
        rep.check(ident, max_abs(B[al] @ xi[:, be]), tol, point)
    rep.check("6.37.i", max_abs(B[0]), tol, point)
    rep.check("6.37.ii", max_abs(B[1]), tol, point)
    h = shape.h
    for ident, al, be in (("6.41.i", 0, 0), ("6.41.ii", 0, 1), ("6.41.iii", 1, 0), ("6.41.iv", 1, 1)):
        rhs = sum(xi[:, g] @ h[al] @ xi[:, be] * xi[:, g] for g in range(2)) / sigma_len
        rep.check(ident, max_abs(shape.A[al] @ xi[:, be] - rhs), tol, point)
    return rep
