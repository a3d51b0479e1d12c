"""Weingarten operators, normal connection and the covariant-derivative identities.

Finite-difference derivatives are taken along the curves
``c_i(t) = retract(x + t T e_i)``, one per tangent basis vector. Every field
is written as an ambient matrix field evaluated along the curve (projector
``Pi = I - N N^T``, ``P = Pi P~ Pi``, the columns of ``xi``, the normals,
the matrix ``(a_ab)``), so a derivative along an arbitrary tangent vector
``V`` is the linear combination ``sum_i V^i d_i``.

Tangent test fields ``Y`` are extended off the point by orthogonal
projection, ``Y(c(t)) = Pi(c(t)) Y_0``; the covariant derivative is the
tangential part of the ambient derivative.

Sign convention for the Weingarten operator: ``D_X N_a = -A_a X + (normal
part)``. With the outward normal on a sphere of radius ``R`` this gives
``A = -I / R``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambient import AmbientStructure
from .errors import DegenerateStructure, HypothesisViolated, WrongCodimension
from .induced import InducedStructureData
from .numeric import ALG_TOL, FD_TOL, FdConfig, max_abs
from .report import ResidualReport
from .submanifold import ImplicitSubmanifold, PointFrame, retract

SHAPE_TOL = 1e-6


@dataclass(frozen=True)
class FieldSample:
    """Ambient fields evaluated at one point of ``M``."""

    N: np.ndarray      # m x r
    Pi: np.ndarray     # m x m tangential projector
    Pt: np.ndarray     # m x m ambient structure
    Pamb: np.ndarray   # m x m, Pi Pt Pi
    Xi: np.ndarray     # m x r, columns xi_a
    A_mat: np.ndarray  # r x r
    PtPi: np.ndarray   # Pt Pi (P~ applied to the projected test fields)
    PtN: np.ndarray    # Pt N


def sample_fields(s: AmbientStructure, M: ImplicitSubmanifold, y, rotation=None) -> FieldSample:
    N = M.normal_field(y)
    if rotation is not None:
        N = N @ rotation.T
    Pi = np.eye(M.m) - N @ N.T
    Pt = s.at(y)
    PtPi = Pt @ Pi
    PtN = Pt @ N
    return FieldSample(
        N=N, Pi=Pi, Pt=Pt, Pamb=Pi @ PtPi, Xi=s.epsilon * (Pi @ PtN),
        A_mat=N.T @ Pt.T @ N, PtPi=PtPi, PtN=PtN,
    )


@dataclass(frozen=True)
class Jets:
    """Values at ``x`` and central differences along each tangent basis vector.

    Every ``d*`` array has a leading axis of length ``n``: ``dN[i]`` is the
    derivative of the normal frame along ``T e_i``.
    """

    frame: PointFrame
    epsilon: int
    step: float
    at: FieldSample
    dN: np.ndarray
    dPi: np.ndarray
    dPt: np.ndarray
    dPamb: np.ndarray
    dXi: np.ndarray
    dA: np.ndarray
    dPtPi: np.ndarray
    dPtN: np.ndarray

    def along(self, name: str, V) -> np.ndarray:
        """Derivative of field ``name`` along the tangent vector with coordinates ``V``."""
        return np.tensordot(np.asarray(V, dtype=float), getattr(self, name), axes=(0, 0))


def local_jets(s: AmbientStructure, M: ImplicitSubmanifold, f: PointFrame, cfg: FdConfig | None = None,
               rotation=None) -> Jets:
    """Sample all fields at ``x`` and at ``retract(x +- h T e_i)`` for every ``i``."""
    cfg = cfg or FdConfig()
    h = cfg.step_at(f.x)
    rot = None if rotation is None else np.asarray(rotation, dtype=float)
    at = sample_fields(s, M, f.x, rot)
    names = ("N", "Pi", "Pt", "Pamb", "Xi", "A_mat", "PtPi", "PtN")
    derivs = {k: [] for k in names}
    for i in range(f.n):
        v = f.T[:, i]
        plus = sample_fields(s, M, retract(M, f.x + h * v), rot)
        minus = sample_fields(s, M, retract(M, f.x - h * v), rot)
        for k in names:
            derivs[k].append((getattr(plus, k) - getattr(minus, k)) / (2.0 * h))
    stack = {k: np.array(v) if v else np.zeros((0,) + getattr(at, k).shape) for k, v in derivs.items()}
    return Jets(f, s.epsilon, h, at, stack["N"], stack["Pi"], stack["Pt"], stack["Pamb"], stack["Xi"],
                stack["A_mat"], stack["PtPi"], stack["PtN"])


# -- shape data ----------------------------------------------------------------

@dataclass(frozen=True)
class ShapeData:
    """Extrinsic data in tangent coordinates.

    ``A[a]`` is the Weingarten matrix (column ``i`` is ``A_a T_i``),
    ``h[a][i, j] = <A_a T_i, T_j>``, ``l[a, b, i] = l_ab(T_i)``, and
    ``h_gauss`` is the second fundamental form read off the Gauss formula
    (normal part of the derivative of the extended test fields).
    """

    A: np.ndarray
    h: np.ndarray
    l: np.ndarray
    frame: PointFrame
    h_gauss: np.ndarray | None = None

    @property
    def r(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def scaled(self, alpha: int, factor: float) -> "ShapeData":
        """Copy with ``A_alpha`` (and ``h_alpha``) multiplied by ``factor``."""
        A, h = self.A.copy(), self.h.copy()
        A[alpha] *= factor
        h[alpha] *= factor
        return ShapeData(A, h, self.l, self.frame, self.h_gauss)


def shape_from_jets(j: Jets) -> ShapeData:
    T, N = j.frame.T, j.at.N
    n, r = T.shape[1], N.shape[1]
    A = np.zeros((r, n, n))
    l = np.zeros((r, r, n))
    h_gauss = np.zeros((r, n, n))
    for i in range(n):
        for a in range(r):
            A[a][:, i] = -(T.T @ j.dN[i][:, a])
            l[a, :, i] = N.T @ j.dN[i][:, a]
        # normal part of d_i (Pi Y0) for Y0 = T_j
        h_gauss[:, i, :] = N.T @ j.dPi[i] @ T
    h = np.transpose(A, (0, 2, 1)).copy()  # h[a][i, k] = <A_a T_i, T_k> = A[a][k, i]
    return ShapeData(A, h, l, j.frame, h_gauss)


def shape_at(M: ImplicitSubmanifold, f: PointFrame, cfg: FdConfig | None = None, rotation=None,
             s: AmbientStructure | None = None) -> ShapeData:
    """Weingarten operators, second fundamental forms and normal connection at ``f.x``.

    ``rotation`` is an optional constant orthogonal ``r x r`` matrix applied to
    the canonical normal frame field. The ambient structure does not enter.
    """
    from .ambient import make_structure

    s = s or make_structure("custom", matrix=np.eye(M.m), epsilon=1)
    return shape_from_jets(local_jets(s, M, f, cfg, rotation))


def shape_residuals(shape: ShapeData) -> dict[str, float]:
    A, h, l = shape.A, shape.h, shape.l
    out = {
        "2.3": max_abs(h - np.transpose(A, (0, 2, 1))),
        "2.3.sym": max_abs(h - np.transpose(h, (0, 2, 1))),
        "2.5": max_abs(l + np.transpose(l, (1, 0, 2))),
    }
    if shape.h_gauss is not None:
        out["2.1"] = max_abs(shape.h_gauss - h)
    return out


def shape_suite(shape: ShapeData, tol: float = SHAPE_TOL, point: int | None = None) -> ResidualReport:
    rep = ResidualReport()
    for ident, value in shape_residuals(shape).items():
        rep.check(ident, value, tol, point)
    return rep


# -- covariant derivatives from jets -----------------------------------------------

@dataclass(frozen=True)
class Derivatives:
    """Finite-difference covariant derivatives in tangent coordinates.

    ``DP[i][:, k] = (nabla_{T_i} P) T_k``; ``Du[a][i, k] = (nabla_{T_i} u_a) T_k``;
    ``Dxi[a][:, i] = nabla_{T_i} xi_a``; ``DA[i] = T_i(a_ab)``;
    ``Gamma[i][:, k] = nabla_{T_i} T_k`` (zero for projected extensions).
    """

    DP: np.ndarray
    Du: np.ndarray
    Dxi: np.ndarray
    DA: np.ndarray
    Gamma: np.ndarray


def derivatives_from_jets(j: Jets, P_tan: np.ndarray | None = None) -> Derivatives:
    T = j.frame.T
    n, r = T.shape[1], j.at.N.shape[1]
    if P_tan is None:
        P_tan = T.T @ j.at.Pt @ T
    Xi0 = j.at.Xi
    DP = np.zeros((n, n, n))
    Du = np.zeros((r, n, n))
    Dxi = np.zeros((r, n, n))
    Gamma = np.zeros((n, n, n))
    for i in range(n):
        Gamma[i] = T.T @ j.dPi[i] @ T
        # (nabla_X P) Y = tangential d(P Y) - P(nabla_X Y)
        DP[i] = T.T @ j.dPamb[i] @ T - P_tan @ Gamma[i]
        for a in range(r):
            # (nabla_X u_a) Y = X(u_a(Y)) - u_a(nabla_X Y), with u_a(Y) = <xi_a, Pi Y0>
            d_uY = j.dXi[i][:, a] @ T + Xi0[:, a] @ j.dPi[i] @ T
            Du[a][i, :] = d_uY - (T.T @ Xi0[:, a]) @ Gamma[i]
            Dxi[a][:, i] = T.T @ j.dXi[i][:, a]
    return Derivatives(DP, Du, Dxi, j.dA.copy(), Gamma)


def along(tensor: np.ndarray, V) -> np.ndarray:
    """Contract the leading derivative axis of ``tensor`` with ``V``."""
    return np.tensordot(np.asarray(V, dtype=float), tensor, axes=(0, 0))


# -- derivative-formula residuals -------------------------------------------------------------

def covariant_rhs(induced: InducedStructureData, shape: ShapeData) -> dict[str, np.ndarray]:
    """Right-hand sides of the derivative formulas for a parallel ambient structure.

    Shapes match :class:`Derivatives`: ``P[i][:, k]``, ``u[a][i, k]``,
    ``xi[a][:, i]``, ``a[i][a, b]``.
    """
    eps, P, u, xi, Amat = induced.epsilon, induced.P_tan, induced.u, induced.xi, induced.A_mat
    A, h, l = shape.A, shape.h, shape.l
    n, r = induced.n, induced.r
    rP = np.zeros((n, n, n))
    ru = np.zeros((r, n, n))
    rxi = np.zeros((r, n, n))
    ra = np.zeros((n, r, r))
    for i in range(n):
        for k in range(n):
            rP[i][:, k] = eps * sum(h[a][i, k] * xi[:, a] for a in range(r)) + sum(u[a, k] * A[a][:, i] for a in range(r))
        for a in range(r):
            for k in range(n):
                ru[a][i, k] = (-h[a][i] @ P[:, k]
                               + sum(u[b, k] * l[a, b, i] for b in range(r))
                               + sum(h[b][i, k] * Amat[b, a] for b in range(r)))
            rxi[a][:, i] = (-eps * P @ A[a][:, i]
                            + eps * sum(Amat[a, b] * A[b][:, i] for b in range(r))
                            + sum(l[a, b, i] * xi[:, b] for b in range(r)))
        for a in range(r):
            for b in range(r):
                ra[i][a, b] = (-eps * u[a] @ A[b][:, i] - u[b] @ A[a][:, i]
                               + sum(l[a, g, i] * Amat[g, b] + l[b, g, i] * Amat[a, g] for g in range(r)))
    return {"P": rP, "u": ru, "xi": rxi, "a": ra}


def theorem_2_1_residuals(der: Derivatives, rhs: dict) -> dict[str, float]:
    return {
        "2.6.i": max_abs(der.DP - rhs["P"]),
        "2.6.ii": max_abs(der.Du - rhs["u"]),
        "2.6.iii": max_abs(der.Dxi - rhs["xi"]),
        "2.6.iv": max_abs(der.DA - rhs["a"]),
    }


def theorem_2_1_suite(s: AmbientStructure, M: ImplicitSubmanifold, f: PointFrame, induced: InducedStructureData,
                      shape: ShapeData, cfg: FdConfig | None = None, tol: float = FD_TOL,
                      point: int | None = None, jets: Jets | None = None) -> ResidualReport:
    """Compare finite-difference derivatives of the induced fields with their closed forms.

    Raises
    ------
    HypothesisViolated
        If the ambient structure is position dependent.
    """
    if not s.is_constant:
        raise HypothesisViolated("ambient structure is not parallel (position-dependent field)")
    j = jets or local_jets(s, M, f, cfg)
    der = derivatives_from_jets(j, induced.P_tan)
    rep = ResidualReport()
    for ident, value in theorem_2_1_residuals(der, covariant_rhs(induced, shape)).items():
        rep.check(ident, value, tol, point)
    return rep


@dataclass(frozen=True)
class DefectTensor:
    """``tangent[i][:, k] = Pdef(T_i, T_k)`` and ``normal[i][:, a] = Pdef(T_i, N_a)`` (ambient vectors)."""

    tangent: np.ndarray
    normal: np.ndarray

    def max_norm(self) -> float:
        return max(max_abs(self.tangent), max_abs(self.normal))


def defect_from_jets(j: Jets) -> DefectTensor:
    T, Pt0 = j.frame.T, j.at.Pt
    n = T.shape[1]
    tangent = np.zeros((n, T.shape[0], n))
    normal = np.zeros((n, T.shape[0], j.at.N.shape[1]))
    for i in range(n):
        # D_X(P~ Y) - P~ D_X Y for Y = Pi Y0, and the same with Y = N_a
        tangent[i] = j.dPtPi[i] @ T - Pt0 @ (j.dPi[i] @ T)
        normal[i] = j.dPtN[i] - Pt0 @ j.dN[i]
    return DefectTensor(tangent, normal)


def defect_suite(s: AmbientStructure, M: ImplicitSubmanifold, f: PointFrame, induced: InducedStructureData,
                 shape: ShapeData, cfg: FdConfig | None = None, tol: float = FD_TOL,
                 defect_tol: float = SHAPE_TOL, point: int | None = None, jets: Jets | None = None) -> ResidualReport:
    """Derivative formulas with the parallelism defect included.

    For a constant ambient structure the defect itself must vanish (record
    ``2.30``); for a position-dependent one its size is reported as INFO.
    """
    j = jets or local_jets(s, M, f, cfg)
    der = derivatives_from_jets(j, induced.P_tan)
    rhs = covariant_rhs(induced, shape)
    dft = defect_from_jets(j)
    T, N, eps = f.T, j.at.N, induced.epsilon
    n, r = induced.n, induced.r
    tanP = np.array([T.T @ dft.tangent[i] for i in range(n)])            # [i][:, k]
    norP = np.array([N.T @ dft.tangent[i] for i in range(n)])            # [i][a, k]
    tanN = np.array([T.T @ dft.normal[i] for i in range(n)])             # [i][:, a]
    norN = np.array([N.T @ dft.normal[i] for i in range(n)])             # [i][b, a] = <Pdef(T_i, N_a), N_b>
    rep = ResidualReport()
    size = dft.max_norm()
    if s.is_constant:
        rep.check("2.30", size, defect_tol, point, note="constant structure: defect must vanish")
    else:
        rep.info("2.30", size, point, note="position-dependent structure")
    rP = rhs["P"] + tanP
    rep.check("2.32.i", max_abs(der.DP - rP), tol, point)
    ru = rhs["u"] + np.transpose(norP, (1, 0, 2))
    rep.check("2.32.ii", max_abs(der.Du - ru), tol, point)
    rxi = rhs["xi"] + eps * np.transpose(tanN, (2, 1, 0))
    rep.check("2.32.iii", max_abs(der.Dxi - rxi), tol, point,
              note="defect term enters with factor epsilon")
    ra = rhs["a"] + np.transpose(norN, (0, 2, 1))
    rep.check("2.32.iv", max_abs(der.DA - ra), tol, point)
    if s.is_constant:
        gap = max(max_abs(rP - rhs["P"]), max_abs(ru - rhs["u"]), max_abs(rxi - rhs["xi"]), max_abs(ra - rhs["a"]))
        rep.check("2.32.reduces", gap, 1e-8, point, note="defect-augmented forms equal the parallel forms")
    return rep


# -- codimension 1 ---------------------------------------------------------------

def _eig_rank(A: np.ndarray, tol: float) -> int:
    return int(np.sum(np.abs(np.linalg.eigvalsh((A + A.T) / 2)) > tol))


def killing_eigenvalue(a: float, xi_a: float) -> float:
    """Eigenvalue ``xi(a) / (2 (a^2 - 1))``; raises when ``a^2 = 1``."""
    if abs(a * a - 1.0) <= 1e-8:
        raise DegenerateStructure(f"a^2 = {a * a:.12f} is 1 to within 1e-8")
    return xi_a / (2.0 * (a * a - 1.0))


def codim1_suite(s: AmbientStructure, M: ImplicitSubmanifold, f: PointFrame, induced: InducedStructureData,
                 shape: ShapeData, cfg: FdConfig | None = None, tol_alg: float = ALG_TOL,
                 tol_fd: float = FD_TOL, point: int | None = None, jets: Jets | None = None,
                 normal: bool | None = None) -> ResidualReport:
    """Hypersurface relations, Killing test, umbilical relations and divergence of ``xi``.

    ``normal`` is the normality verdict used to gate the rank-one
    diagnostics; when ``None`` it is computed from the Nijenhuis data.

    Raises
    ------
    WrongCodimension
        If the submanifold is not a hypersurface.
    """
    if induced.r != 1:
        raise WrongCodimension(f"codimension-1 relations need r = 1, got r = {induced.r}")
    rep = ResidualReport()
    n = induced.n
    eye = np.eye(n)
    P, u, xi, a = induced.P_tan, induced.u[0], induced.xi[:, 0], float(induced.A_mat[0, 0])
    A = shape.A[0]
    h = shape.h[0]
    if induced.epsilon != 1:
        for ident in ("6.3.i", "6.3.ii", "6.3.iii", "6.3.iv", "6.4.i", "6.4.ii"):
            rep.gated(ident, "needs an almost product ambient (epsilon = +1)", point)
    else:
        rep.check("6.3.i", max_abs(P @ P - (eye - np.outer(xi, u))), tol_alg, point)
        rep.check("6.3.ii", max_abs(u @ P + a * u), tol_alg, point)
        rep.check("6.3.iii", abs(u @ xi - (1 - a * a)), tol_alg, point)
        rep.check("6.3.iv", max_abs(P @ xi + a * xi), tol_alg, point)
        rep.check("6.4.i", max_abs(u - xi), tol_alg, point)
        rep.check("6.4.ii", max_abs(P.T @ P - (eye - np.outer(u, u))), tol_alg, point)

    if not s.is_constant or induced.epsilon != 1:
        for ident in ("6.7.i", "6.7.ii", "6.7.iii", "6.7.iv", "6.10"):
            rep.gated(ident, "needs a locally product ambient", point)
        return rep

    j = jets or local_jets(s, M, f, cfg)
    der = derivatives_from_jets(j, P)
    DP, Du, Dxi, DA = der.DP, der.Du[0], der.Dxi[0], der.DA[:, 0, 0]
    # (nabla_X P) Y = u(Y) A X + h(X, Y) xi
    rP = np.array([np.outer(A[:, i], u) + np.outer(xi, h[i]) for i in range(n)])
    rep.check("6.7.i", max_abs(DP - rP), tol_fd, point)
    ru = -h @ P + a * h
    rep.check("6.7.ii", max_abs(Du - ru), tol_fd, point)
    rxi = -P @ A + a * A
    rep.check("6.7.iii", max_abs(Dxi - rxi), tol_fd, point)
    rep.check("6.7.iv", max(max_abs(DA + 2 * (u @ A)), max_abs(DA + 2 * (A.T @ xi))), tol_fd, point)

    killing = 2 * a * A - P @ A - A @ P
    bilinear = Dxi.T + Dxi                    # <nabla_Y xi, Z> + <nabla_Z xi, Y>
    rep.check("6.10", max_abs(bilinear - killing.T), tol_fd, point,
              note="sum of covariant derivatives vs (2aA - PA - AP)")
    killing_size = max_abs(killing)
    is_killing = killing_size <= tol_fd
    rep.info("6.9", killing_size, point, note="xi is Killing" if is_killing else "xi is not Killing")

    lam = float(np.trace(A)) / n
    dev = max_abs(A - lam * eye)
    umbilical = dev <= 10 * tol_fd
    rep.info("umbilical", dev, point, note=f"lambda = {lam:.9g}" + ("" if umbilical else "; not umbilical"))
    umb_ids = ("6.19.i", "6.19.ii", "6.19.iii", "6.19.iii.xi", "6.19.iv", "6.19.du",
               "6.20.i", "6.20.i.full", "6.20.ii", "6.20.iii", "6.21.i", "6.21.ii", "6.21.iii", "6.22")
    if not umbilical:
        for ident in umb_ids:
            rep.gated(ident, "hypersurface is not totally umbilical", point, dev)
    else:
        rP = np.array([lam * (np.outer(eye[:, i], xi) + np.outer(xi, eye[i])) for i in range(n)])
        rep.check("6.19.i", max_abs(DP - rP), tol_fd, point)
        rep.check("6.19.ii", max_abs(Du - (-lam * P + a * lam * eye)), tol_fd, point)
        rep.check("6.19.iii", max_abs(Dxi - (-lam * P + a * lam * eye)), tol_fd, point)
        rep.check("6.19.iii.xi", max_abs(Dxi @ xi - 2 * a * lam * xi), tol_fd, point)
        rep.check("6.19.iv", max_abs(DA + 2 * lam * xi), tol_fd, point)
        rep.check("6.19.du", max_abs(Du - Du.T), tol_fd, point, note="u is closed")
        DP_X_xi = np.array([DP[i] @ xi for i in range(n)])          # row i: (nabla_{T_i} P) xi
        full = lam * ((1 - a * a) * eye + np.outer(xi, xi))
        rep.check("6.20.i.full", max_abs(DP_X_xi - full), tol_fd, point,
                  note="lambda (1 - a^2) X + lambda <X, xi> xi")
        DP_xi = along(DP, xi)                                          # (nabla_xi P) T_k, column k
        rep.check("6.20.ii", max_abs(DP_xi - 2 * lam * np.outer(xi, xi)), tol_fd, point)
        rep.check("6.20.iii", max_abs(Du @ xi - 2 * a * lam * xi), tol_fd, point)
        xi_norm = np.linalg.norm(xi)
        if xi_norm > 1e-8:
            perp = eye - np.outer(xi, xi) / xi_norm ** 2
            # the short form lambda (1 - a^2) X holds for X orthogonal to xi
            rep.check("6.20.i", max_abs(perp @ (DP_X_xi - lam * (1 - a * a) * eye)), tol_fd, point,
                      note="checked on the orthogonal complement of xi")
            rep.check("6.21.i", max_abs(DP_xi @ perp), tol_fd, point)
            rep.check("6.21.ii", max_abs(perp @ Du @ xi), tol_fd, point)
            rep.check("6.21.iii", max_abs(perp @ DA), tol_fd, point)
        else:
            rep.check("6.20.i", max_abs(DP_X_xi - lam * (1 - a * a) * eye), tol_fd, point)
            for ident in ("6.21.i", "6.21.ii", "6.21.iii"):
                rep.gated(ident, "xi = 0, orthogonal complement is the whole tangent space", point)
        div = float(np.trace(Dxi))
        rep.check("6.22", abs(div - lam * (n * a - np.trace(P))), tol_fd, point)

    # rank-one diagnostics: both sides always reported, asserted only under the hypotheses
    if normal is None:
        from .normality import nijenhuis_from_jets

        normal = max_abs(nijenhuis_from_jets(j, induced, shape).N1) <= tol_fd
    xi_a = float(DA @ xi)
    degenerate = abs(a * a - 1.0) <= 1e-8
    gates = []
    if not normal:
        gates.append("structure not normal")
    if not is_killing:
        gates.append("xi not Killing")
    if degenerate:
        gates.append("a^2 = 1")
    if degenerate:
        k1 = float("nan")
        r614 = r616 = r618 = 0.0
    else:
        k1 = killing_eigenvalue(a, xi_a)
        r614 = max_abs(A @ xi - k1 * xi)
        r616 = abs(_eig_rank(A, tol_fd) - 1)
        r618 = abs(np.trace(A) / n - k1 / n)
    note = f"A xi = {np.round(A @ xi, 9).tolist()}, eigenvalue formula = {k1:.9g}"
    if gates:
        for ident, value in (("6.14", r614), ("6.16", r616), ("6.18", r618)):
            rep.gated(ident, ", ".join(gates), point, value, tol_fd, note=note)
    else:
        rep.check("6.14", r614, tol_fd, point, note=note)
        rep.check("6.16", r616, 0.5, point, note="rank A = 1")
        rep.check("6.18", r618, tol_fd, point)
    return rep


# -- codimension 2 ------------------------------------------------------------------

def codim2_suite(s: AmbientStructure, M: ImplicitSubmanifold, f: PointFrame, induced: InducedStructureData,
                 shape: ShapeData, cfg: FdConfig | None = None, tol_alg: float = ALG_TOL,
                 tol_fd: float = FD_TOL, point: int | None = None, jets: Jets | None = None) -> ResidualReport:
    """Codimension-2 relations.

    The trace-free block is evaluated when ``|trace (a_ab)|`` is within
    ``tol_alg``; the derivative block additionally needs ``l_ab = 0`` and a
    parallel almost product ambient. The ``l = 0`` status is reported as the
    INFO record ``normal-connection``.
    """
    if induced.r != 2:
        raise WrongCodimension(f"codimension-2 relations need r = 2, got r = {induced.r}")
    rep = ResidualReport()
    n = induced.n
    eye = np.eye(n)
    P, u, xi, Am = induced.P_tan, induced.u, induced.xi, induced.A_mat
    a11, a12, a21, a22 = Am[0, 0], Am[0, 1], Am[1, 0], Am[1, 1]
    x1, x2 = xi[:, 0], xi[:, 1]
    u1, u2 = u[0], u[1]
    l_size = max_abs(shape.l)
    flat_normal = l_size <= tol_fd
    rep.info("normal-connection", l_size, point, note="l = 0" if flat_normal else "l != 0")

    if induced.epsilon != 1:
        rep.gated("6.23", "needs an almost product ambient (epsilon = +1)", point)
        return rep
    rep.check("6.23.i", max_abs(P @ P - (eye - np.outer(x1, u1) - np.outer(x2, u2))), tol_alg, point)
    rep.check("6.23.ii", max_abs(u1 @ P + a11 * u1 + a12 * u2), tol_alg, point)
    rep.check("6.23.iii", max_abs(u2 @ P + a21 * u1 + a22 * u2), tol_alg, point)
    rep.check("6.23.iv", abs(u1 @ x1 - (1 - a11 ** 2 - a12 ** 2)), tol_alg, point)
    rep.check("6.23.v", abs(u2 @ x2 - (1 - a12 ** 2 - a22 ** 2)), tol_alg, point)
    rep.check("6.23.vi", max(abs(u1 @ x2 + a12 * (a11 + a22)), abs(u2 @ x1 + a12 * (a11 + a22))), tol_alg, point)
    rep.check("6.23.vii", max_abs(P @ x1 + a11 * x1 + a12 * x2), tol_alg, point)
    rep.check("6.23.viii", max_abs(P @ x2 + a21 * x1 + a22 * x2), tol_alg, point)
    rep.check("6.23.ix", max_abs(P.T @ P - (eye - np.outer(u1, u1) - np.outer(u2, u2))), tol_alg, point)

    trace = abs(a11 + a22)
    trace_free = trace <= tol_alg
    ids_alg = ("6.24.i", "6.24.ii", "6.24.iii", "6.24.iv", "6.24.v", "6.24.vi")
    ids_fd = ("6.25", "6.26", "6.27", "6.28.i", "6.28.ii")
    if not trace_free:
        for ident in ids_alg + ids_fd:
            rep.gated(ident, "trace of (a_ab) is nonzero", point, trace)
        return rep
    a, b = a11, a12
    sigma_len = 1 - a * a - b * b
    rep.check("6.24.i", max(abs(u1 @ x1 - sigma_len), abs(u2 @ x2 - sigma_len), abs(x1 @ x1 - sigma_len),
                            abs(x2 @ x2 - sigma_len)), tol_alg, point)
    rep.check("6.24.ii", max(abs(u2 @ x1), abs(u1 @ x2), abs(x1 @ x2)), tol_alg, point)
    rep.check("6.24.iii", max_abs(u1 @ P + a * u1 + b * u2), tol_alg, point)
    rep.check("6.24.iv", max_abs(u2 @ P + b * u1 - a * u2), tol_alg, point)
    rep.check("6.24.v", max_abs(P @ x1 + a * x1 + b * x2), tol_alg, point)
    rep.check("6.24.vi", max_abs(P @ x2 + b * x1 - a * x2), tol_alg, point)

    if not flat_normal or not s.is_constant:
        gate = "normal connection is not flat" if not flat_normal else "needs a locally product ambient"
        for ident in ids_fd:
            rep.gated(ident, gate, point, l_size)
        return rep
    j = jets or local_jets(s, M, f, cfg)
    der = derivatives_from_jets(j, P)
    A1, A2 = shape.A
    h1, h2 = shape.h
    rP = np.array([np.outer(x1, h1[i]) + np.outer(x2, h2[i]) + np.outer(A1[:, i], u1) + np.outer(A2[:, i], u2)
                   for i in range(n)])
    rep.check("6.25", max_abs(der.DP - rP), tol_fd, point)
    ru1 = -h1 @ P + a * h1 + b * h2
    ru2 = -h2 @ P + b * h1 - a * h2
    rep.check("6.26", max(max_abs(der.Du[0] - ru1), max_abs(der.Du[1] - ru2)), tol_fd, point)
    rx1 = -P @ A1 + a * A1 + b * A2
    rx2 = -P @ A2 + b * A1 - a * A2
    rep.check("6.27", max(max_abs(der.Dxi[0] - rx1), max_abs(der.Dxi[1] - rx2)), tol_fd, point)
    rep.check("6.28.i", max_abs(der.DA[:, 0, 0] + 2 * (A1.T @ x1)), tol_fd, point)
    rep.check("6.28.ii", max_abs(der.DA[:, 0, 1] + A1.T @ x2 + A2.T @ x1), tol_fd, point)
    return rep
