"""Induced structure ``(P, g, u_a, eps xi_a, (a_ab))`` at a point and its algebraic checks.

All tangent quantities are stored in the coordinates of the frame's
tangent basis: ``P_tan`` is ``n x n``, row ``a`` of ``u`` is the covector
``u_a``, column ``a`` of ``xi`` is the vector ``xi_a``, and ``A_mat[a, b]``
is ``a_ab``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .ambient import AmbientStructure
from .errors import DimensionMismatch, NotOrthogonal
from .numeric import ALG_TOL, max_abs, nullspace_basis
from .report import ResidualReport
from .submanifold import PointFrame


@dataclass(frozen=True)
class InducedStructureData:
    frame: PointFrame
    epsilon: int
    P_tan: np.ndarray
    u: np.ndarray
    xi: np.ndarray
    A_mat: np.ndarray
    p_tilde: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.P_tan.shape[0]

    @property
    def r(self) -> int:
        return self.A_mat.shape[0]

    def ambient_P(self) -> np.ndarray:
        """``P`` as an ``m x m`` map that kills normal vectors."""
        T = self.frame.T
        return T @ self.P_tan @ T.T

    def ambient_xi(self) -> np.ndarray:
        return self.frame.T @ self.xi


def decompose(p_tilde: np.ndarray, frame: PointFrame, epsilon: int) -> tuple:
    """Split ``P~ T_i`` and ``P~ N_a`` into tangential and normal parts."""
    T, N = frame.T, frame.N
    PT = p_tilde @ T
    PN = p_tilde @ N
    P_tan = T.T @ PT              # tangential part of P~ T_i, column i
    u = N.T @ PT                  # u[a, i] = u_a(T_i)
    xi = epsilon * (T.T @ PN)     # P~ N_a = eps xi_a + ...
    A_mat = (N.T @ PN).T          # A_mat[a, b] = <P~ N_a, N_b>
    return P_tan, u, xi, A_mat


def compute_induced(s: AmbientStructure, f: PointFrame) -> InducedStructureData:
    """Induced structure at the frame's point."""
    if f.x.shape[0] != s.m or f.T.shape[0] != s.m or f.N.shape[0] != s.m:
        raise DimensionMismatch(f"frame lives in E^{f.x.shape[0]}, ambient is E^{s.m}")
    p_tilde = s.at(f.x)
    P_tan, u, xi, A_mat = decompose(p_tilde, f, s.epsilon)
    return InducedStructureData(f, s.epsilon, P_tan, u, xi, A_mat, p_tilde)


# -- identity residuals --------------------------------------------------------

def theorem_1_1_residuals(d: InducedStructureData) -> dict[str, float]:
    """Maximum residual of each algebraic identity over all basis vectors."""
    eps, P, u, xi, A = d.epsilon, d.P_tan, d.u, d.xi, d.A_mat
    n, r = d.n, d.r
    eye_n, eye_r = np.eye(n), np.eye(r)
    gram = xi.T @ xi
    return {
        "1.6.i": max_abs(P @ P - eps * (eye_n - xi @ u)),
        "1.6.ii": max_abs(u @ P + A.T @ u),
        "1.6.iii": max_abs(A - eps * A.T),
        "1.6.iv": max(max_abs(u @ xi - (eye_r - eps * A @ A)), max_abs(gram - (eye_r - eps * A @ A))),
        "1.6.v": max_abs(P @ xi + xi @ A.T),
        "1.7.i": max_abs(u - xi.T),
        "1.7.ii": max_abs(P.T - eps * P),
        "1.7.iii": max_abs(P.T @ P - (eye_n - u.T @ u)),
    }


def theorem_1_1_suite(d: InducedStructureData, tol: float = ALG_TOL, point: int | None = None) -> ResidualReport:
    """Check every identity of the induced-structure theorem at one point."""
    rep = ResidualReport()
    for ident, value in theorem_1_1_residuals(d).items():
        rep.check(ident, value, tol, point)
    return rep


def rotate_normal_frame(d: InducedStructureData, K) -> InducedStructureData:
    """Recompute the structure after the normal frame change ``N'_a = sum_c K[a, c] N_c``.

    Raises
    ------
    NotOrthogonal
        If ``K^T K`` differs from the identity by more than ``1e-10``.
    """
    K = np.atleast_2d(np.asarray(K, dtype=float))
    if K.shape != (d.r, d.r):
        raise DimensionMismatch(f"K must be {d.r}x{d.r}, got {K.shape}")
    if max_abs(K.T @ K - np.eye(d.r)) > 1e-10:
        raise NotOrthogonal("frame change matrix is not orthogonal")
    frame = d.frame.rotated(K)
    if d.p_tilde is None:
        # no ambient matrix recorded: transform the components instead
        return replace(d, frame=frame, u=K @ d.u, xi=d.xi @ K.T, A_mat=K @ d.A_mat @ K.T)
    P_tan, u, xi, A_mat = decompose(d.p_tilde, frame, d.epsilon)
    return InducedStructureData(frame, d.epsilon, P_tan, u, xi, A_mat, d.p_tilde)


def frame_covariance_residuals(d: InducedStructureData, K) -> dict[str, float]:
    """Compare the recomputed rotated structure with the transformation laws."""
    K = np.atleast_2d(np.asarray(K, dtype=float))
    rot = rotate_normal_frame(d, K)
    return {
        "1.19": max_abs(rot.u - K @ d.u),
        "1.20": max_abs(rot.xi - d.xi @ K.T),
        "1.21": max_abs(rot.A_mat - K @ d.A_mat @ K.T),
        "1.18.P": max_abs(rot.P_tan - d.P_tan),
    }


def frame_covariance_suite(d: InducedStructureData, Ks, tol: float = 1e-10, point: int | None = None) -> ResidualReport:
    rep = ResidualReport()
    worst: dict[str, float] = {}
    for K in Ks:
        for ident, value in frame_covariance_residuals(d, K).items():
            worst[ident] = max(worst.get(ident, 0.0), value)
    for ident, value in worst.items():
        rep.check(ident, value, tol, point)
    return rep


def random_orthogonal(r: int, rng: np.random.Generator) -> np.ndarray:
    q, rr = np.linalg.qr(rng.standard_normal((r, r)))
    return q * np.sign(np.diag(rr))


# -- classification ------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    """Kind of induced structure at a point.

    ``tag`` is ``"(a,1)f"``/``"(a,-1)f"`` in general, ``"f(3,-1)"`` or
    ``"f(3,1)"`` when the matrix ``(a_ab)`` vanishes. ``residuals`` holds the
    checks that back the specialised tag.
    """

    tag: str
    name: str
    A_norm: float
    residuals: dict


def classify_structure(d: InducedStructureData, tol: float = ALG_TOL) -> Classification:
    A_norm = max_abs(d.A_mat)
    if A_norm > tol:
        tag = f"(a,{d.epsilon})f"
        return Classification(tag, f"{tag} Riemannian structure", A_norm, {})
    P, u, xi, eps = d.P_tan, d.u, d.xi, d.epsilon
    n, r = d.n, d.r
    checks = {
        "P2": max_abs(P @ P - eps * (np.eye(n) - xi @ u)),
        "uP": max_abs(u @ P),
        "u_xi": max_abs(u @ xi - np.eye(r)),
        "P_xi": max_abs(P @ xi),
    }
    if eps == 1:
        checks["P3-P"] = max_abs(P @ P @ P - P)
        tag = "f(3,-1)"
        name = "almost paracontact" if r == 1 else f"almost {r}-paracontact"
    else:
        checks["P3+P"] = max_abs(P @ P @ P + P)
        tag = "f(3,1)"
        name = "almost contact" if r == 1 else f"almost {r}-contact"
    return Classification(tag, name, A_norm, checks)


def classification_report(d: InducedStructureData, tol: float = ALG_TOL, point: int | None = None) -> ResidualReport:
    rep = ResidualReport()
    c = classify_structure(d, tol)
    rep.info("1.def.class", c.A_norm, point, note=c.tag)
    if c.residuals:
        ident = "1.11" if d.epsilon == 1 else "1.9"
        block = "1.10" if d.epsilon == 1 else "1.8"
        rep.check(ident, c.residuals["P3-P" if d.epsilon == 1 else "P3+P"], tol, point, note=c.name)
        rep.check(block, max(c.residuals[k] for k in ("P2", "uP", "u_xi", "P_xi")), tol, point, note=c.name)
    else:
        for ident in ("1.8", "1.9") if d.epsilon == -1 else ("1.10", "1.11"):
            rep.gated(ident, "matrix (a_ab) is nonzero", point, c.A_norm)
    return rep


# -- distribution D ------------------------------------------------------------

@dataclass(frozen=True)
class DistributionData:
    basis: np.ndarray        # n x k, orthonormal columns spanning D in tangent coordinates
    dim: int
    expected_dim: int
    degenerate: bool
    residuals: dict


def distribution_data(d: InducedStructureData) -> DistributionData:
    u = d.u
    n, r = d.n, d.r
    if max_abs(u) <= 1e-12:
        D = np.eye(n)
    else:
        # rank-revealing: drop near-zero singular directions of u before taking the kernel
        U, svals, Vt = np.linalg.svd(u)
        rank = int(np.sum(svals > 1e-10 * max(1.0, svals[0])))
        rows = Vt[:rank]
        D = np.column_stack(nullspace_basis(rows)) if rank < n else np.zeros((n, 0))
    k = D.shape[1]
    P, xi, eps = d.P_tan, d.xi, d.epsilon
    res = {
        "1.12": max_abs(u @ D),
        "1.14": max_abs(u @ P @ D),
        "1.16": max_abs(P @ P @ D - eps * D),
        "1.17": max_abs((P @ D).T @ (P @ D) - D.T @ D),
        "1.15": max_abs(xi.T @ D),
    }
    return DistributionData(D, k, n - r, k != n - r, res)


def distribution_check(d: InducedStructureData, tol: float = ALG_TOL, point: int | None = None) -> ResidualReport:
    """Checks on ``D = intersection of ker u_a``.

    ``dim D`` is reported as an INFO record; the note says whether it equals
    ``n - r`` or the ``xi_a`` are degenerate at the point.
    """
    dd = distribution_data(d)
    rep = ResidualReport()
    note = "dim D = n - r" if not dd.degenerate else f"degenerate: dim D = {dd.dim}, n - r = {dd.expected_dim}"
    rep.info("1.13.dim", dd.dim, point, note=note)
    for ident, value in dd.residuals.items():
        rep.check(ident, value, tol, point)
    return rep
