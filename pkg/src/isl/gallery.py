"""Worked examples with closed-form induced structures, and composition of immersions.

The closed forms below are written out by hand in ambient coordinates and
only then contracted with the canonical frame of the submanifold. They share
no code with :func:`isl.induced.decompose`, which is what makes them useful
as an oracle for the generic pipeline.

Examples
--------
``ex1``  sphere ``S^{2p-1}(R)`` in ``E^{2p}`` with the swap ``(x, y) -> (y, x)``.
``ex2``  product ``S^{p-1}(r1) x S^{p-1}(r2)`` in ``E^{2p}`` with the swap,
         ``r1^2 + r2^2 = 1``; also reachable as a chain through the unit sphere.
``ex3``  sphere ``S^{2p}(R)`` in ``E^{2p+1}`` with ``(x, t, y) -> (y, t, x)``.
``ex4``  sphere ``S^{p+q-1}(R)`` in ``E^{p+q}`` with ``(x, y) -> (x, -y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ambient import AmbientStructure, make_structure
from .errors import ChainMismatch, DimensionMismatch, InvalidParams
from .induced import InducedStructureData, compute_induced, theorem_1_1_residuals
from .numeric import ALG_TOL, max_abs
from .report import ResidualReport
from .submanifold import ImplicitSubmanifold, PointFrame, frames_at, make_implicit, sample_points

ORACLE_TOL = 1e-9
TANGENCY_TOL = 1e-10


@dataclass(frozen=True)
class ImmersionChain:
    """Nested submanifolds ``E^m > M_1 > M_2 > ...``, outermost first.

    Link ``k`` (counting from 0) must have codimension ``k + 1`` in ``E^m``,
    so each link is a hypersurface of the one before it.
    """

    ambient: AmbientStructure
    links: tuple

    def __post_init__(self):
        if not self.links:
            raise ChainMismatch("a chain needs at least one link")
        for k, M in enumerate(self.links):
            if M.m != self.ambient.m:
                raise ChainMismatch(f"link {k} lives in E^{M.m}, ambient is E^{self.ambient.m}")
            if M.r != k + 1:
                raise ChainMismatch(f"link {k} has codimension {M.r} in E^{M.m}; expected {k + 1}")

    @property
    def innermost(self) -> ImplicitSubmanifold:
        return self.links[-1]


@dataclass(frozen=True)
class GalleryExample:
    id: str
    params: dict
    ambient: AmbientStructure
    manifold: ImplicitSubmanifold
    chain: ImmersionChain | None = None
    title: str = ""
    special: tuple = field(default_factory=tuple)

    def sample(self, count: int, seed: int = 0) -> list[np.ndarray]:
        return sample_points(self.manifold, count, seed)

    def describe(self) -> dict:
        return {"id": self.id, "params": dict(self.params), "title": self.title}


def _unit(m: int, i: int) -> np.ndarray:
    e = np.zeros(m)
    e[i] = 1.0
    return e


def ex1(p: int = 2, R: float = 1.0) -> GalleryExample:
    s = make_structure("swap", p)
    M = make_implicit("sphere", m=2 * p, R=R)
    h = np.sqrt(0.5) * R
    special = (R * _unit(2 * p, 0), h * (_unit(2 * p, 0) + _unit(2 * p, p)))
    return GalleryExample("ex1", {"p": p, "R": float(R)}, s, M, None,
                          f"S^{2 * p - 1}({R:g}) in E^{2 * p}, swap structure", special)


def ex2_chain(p: int = 2, r1: float = np.sqrt(0.5), r2: float = np.sqrt(0.5)) -> ImmersionChain:
    """``E^{2p} > S^{2p-1}(1) > S^{p-1}(r1) x S^{p-1}(r2)``."""
    m = 2 * p
    s = make_structure("swap", p)
    outer = make_implicit("sphere", m=m, R=1.0)

    def F(z):
        return np.array([z @ z - 1.0, z[:p] @ z[:p] - r1 * r1])

    def JF(z):
        z = np.asarray(z, dtype=float)
        out = np.zeros((2, m))
        out[0] = 2.0 * z
        out[1, :p] = 2.0 * z[:p]
        return out

    inner = make_implicit("custom", m=m, F=F, JF=JF, r=2, sample_scale=1.0)
    return ImmersionChain(s, (outer, inner))


def ex2(p: int = 2, r1: float = np.sqrt(0.5), r2: float = np.sqrt(0.5)) -> GalleryExample:
    if not (r1 > 0 and r2 > 0) or abs(r1 * r1 + r2 * r2 - 1.0) > 1e-12:
        raise InvalidParams(f"Ex2 needs r1, r2 > 0 with r1^2 + r2^2 = 1, got r1={r1}, r2={r2}")
    s = make_structure("swap", p)
    M = make_implicit("product_spheres", p=p, r1=r1, r2=r2)
    e0, e1 = _unit(p, 0), _unit(p, 1)
    special = (
        np.concatenate([r1 * e0, r2 * e0]),        # sigma_dot = r1 r2: xi degenerate
        np.concatenate([r1 * e0, -r2 * e0]),       # sigma_dot = -r1 r2
        np.concatenate([r1 * e0, r2 * e1]),        # sigma_dot = 0: A = 0
    )
    return GalleryExample("ex2", {"p": p, "r1": float(r1), "r2": float(r2)}, s, M, ex2_chain(p, r1, r2),
                          f"S^{p - 1}({r1:g}) x S^{p - 1}({r2:g}) in E^{2 * p}, swap structure", special)


def ex3(p: int = 2, R: float = 1.0) -> GalleryExample:
    s = make_structure("fixed_axis_swap", p)
    m = 2 * p + 1
    M = make_implicit("sphere", m=m, R=R)
    special = (R * _unit(m, p), R * _unit(m, 0))
    return GalleryExample("ex3", {"p": p, "R": float(R)}, s, M, None,
                          f"S^{2 * p}({R:g}) in E^{m}, swap with a fixed axis", special)


def ex4(p: int = 2, q: int = 3, R: float = 1.0) -> GalleryExample:
    s = make_structure("reflection", p, q)
    m = p + q
    M = make_implicit("sphere", m=m, R=R)
    h = np.sqrt(0.5) * R
    special = (R * _unit(m, 0), R * _unit(m, p), h * (_unit(m, 0) + _unit(m, p)))
    return GalleryExample("ex4", {"p": p, "q": q, "R": float(R)}, s, M, None,
                          f"S^{m - 1}({R:g}) in E^{m}, reflection of the last {q} coordinates", special)


GALLERY = {
    "ex1": (ex1, "sphere S^{2p-1}(R) in E^{2p}, swap structure (params p, R)"),
    "ex2": (ex2, "product of spheres S^{p-1}(r1) x S^{p-1}(r2), r1^2 + r2^2 = 1, swap structure (params p, r1, r2)"),
    "ex3": (ex3, "sphere S^{2p}(R) in E^{2p+1}, swap with fixed middle axis (params p, R)"),
    "ex4": (ex4, "sphere S^{p+q-1}(R) in E^{p+q}, reflection structure (params p, q, R)"),
}


def get_example(ex_id: str, **params) -> GalleryExample:
    try:
        factory = GALLERY[ex_id.lower()][0]
    except KeyError:
        raise InvalidParams(f"unknown gallery example {ex_id!r}; choose from {sorted(GALLERY)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise InvalidParams(f"bad parameters for {ex_id}: {exc}") from None


def list_gallery() -> list[tuple[str, str]]:
    return [(k, v[1]) for k, v in GALLERY.items()]


# -- closed forms ---------------------------------------------------------------------

def _from_ambient(frame: PointFrame, eps: int, P_of, w_rows, xi_cols, A_mat, p_tilde) -> InducedStructureData:
    """Contract ambient closed-form tensors with the frame's tangent basis."""
    T = frame.T
    PT = np.column_stack([P_of(T[:, i]) for i in range(T.shape[1])])
    P_tan = T.T @ PT
    u = np.array([w @ T for w in w_rows])
    xi = np.column_stack([T.T @ v for v in xi_cols])
    return InducedStructureData(frame, eps, P_tan, u, xi, np.atleast_2d(np.asarray(A_mat, dtype=float)), p_tilde)


def ex2_closed_form(ex: GalleryExample, x) -> dict:
    """The named closed-form pieces of the product-of-spheres example at ``x``.

    Frame order is (radial normal ``(x, y)``, then ``((r2/r1) x, -(r1/r2) y)``).
    """
    p, r1, r2 = ex.params["p"], ex.params["r1"], ex.params["r2"]
    z = np.asarray(x, dtype=float)
    xs, ys = z[:p], z[p:]
    sigma_dot = float(xs @ ys)
    lam = r2 / r1 - r1 / r2
    xi_top = np.concatenate([ys - sigma_dot * xs / r1 ** 2, xs - sigma_dot * ys / r2 ** 2])
    u_top = np.concatenate([ys, xs])
    xi0 = np.concatenate([sigma_dot * xs / (r1 * r2) - (r1 / r2) * ys, (r2 / r1) * xs - sigma_dot * ys / (r1 * r2)])
    u0 = np.concatenate([-(r1 / r2) * ys, (r2 / r1) * xs])

    def P0(v):
        X, Y = v[:p], v[p:]
        return np.concatenate([Y - (xs @ Y) * xs / r1 ** 2, X - (ys @ X) * ys / r2 ** 2])

    A = np.array([[2 * sigma_dot, lam * sigma_dot], [lam * sigma_dot, -2 * sigma_dot]])
    N = np.column_stack([z, np.concatenate([(r2 / r1) * xs, -(r1 / r2) * ys])])
    return {"sigma_dot": sigma_dot, "lambda": lam, "xi_top": xi_top, "u_top": u_top, "xi0": xi0, "u0": u0,
            "P0": P0, "A": A, "N": N}


def closed_form_structure(ex: GalleryExample, x) -> InducedStructureData:
    """Induced structure of a gallery example from its printed formulas.

    Raises
    ------
    NotOnManifold
        If ``x`` is not on the example's submanifold.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != ex.manifold.m:
        raise DimensionMismatch(f"point has length {x.shape[0]}, example lives in E^{ex.manifold.m}")
    frame = frames_at(ex.manifold, x)
    pt = ex.ambient.p_tilde
    if ex.id == "ex2":
        c = ex2_closed_form(ex, x)
        return _from_ambient(frame, 1, c["P0"], [c["u_top"], c["u0"]], [c["xi_top"], c["xi0"]], c["A"], pt)

    R = ex.params["R"]
    p = ex.params["p"]
    if ex.id == "ex1":
        xs, ys = x[:p], x[p:]
        a = 2.0 * (xs @ ys) / R ** 2
        xi = np.concatenate([ys - a * xs, xs - a * ys]) / R
        w = np.concatenate([ys, xs]) / R

        def tilde(v):
            return np.concatenate([v[p:], v[:p]])
    elif ex.id == "ex3":
        xs, t, ys = x[:p], x[p], x[p + 1:]
        a = (2.0 * (xs @ ys) + t * t) / R ** 2
        xi = np.concatenate([ys - a * xs, [t * (1 - a)], xs - a * ys]) / R
        w = np.concatenate([ys, [t], xs]) / R

        def tilde(v):
            return np.concatenate([v[p + 1:], v[p:p + 1], v[:p]])
    elif ex.id == "ex4":
        xs, ys = x[:p], x[p:]
        a = (xs @ xs - ys @ ys) / R ** 2
        xi = np.concatenate([(1 - a) * xs, -(1 + a) * ys]) / R
        w = np.concatenate([xs, -ys]) / R

        def tilde(v):
            return np.concatenate([v[:p], -v[p:]])
    else:
        raise InvalidParams(f"no closed form for {ex.id!r}")

    def P(v):
        return tilde(v) - (w @ v) * x / R

    return _from_ambient(frame, 1, P, [w], [xi], [[a]], pt)


# -- composition of immersions -----------------------------------------------------------

@dataclass(frozen=True)
class ChainStructure:
    """Result of :func:`compose_immersions`: the structure plus the per-level data."""

    induced: InducedStructureData
    normals: np.ndarray        # m x r, outermost normal first
    levels: tuple              # ambient P matrix used at each level


def compose_immersions(chain: ImmersionChain, x) -> ChainStructure:
    """Induced structure on the innermost link, built one hypersurface at a time.

    At each level the current structure ``(P, xi_b, a_bc)`` on ``M_k`` is
    decomposed along the unit normal ``nu`` of ``M_{k+1}`` in ``M_k``:
    ``P nu = eps xi_new + a_new nu``, ``xi_b = xi_b' + eps a_{b,new} nu``
    and ``P X = P' X + u_new(X) nu``.
    """
    s = chain.ambient
    eps = s.epsilon
    x = np.asarray(x, dtype=float).reshape(-1)
    inner = chain.innermost
    frame0 = frames_at(inner, x)  # validates the point
    m = s.m
    pt = s.at(x)
    nu = chain.links[0].normal_field(x)[:, 0]
    Pi = np.eye(m) - np.outer(nu, nu)
    normals = [nu]
    levels = [pt]
    P = Pi @ pt @ Pi
    xis = [eps * (Pi @ pt @ nu)]
    A = np.array([[float(nu @ pt @ nu)]])
    for k in range(1, len(chain.links)):
        cand = chain.links[k].normal_field(x)
        proj = Pi @ cand
        j = int(np.argmax(np.linalg.norm(proj, axis=0)))
        nu = proj[:, j] / np.linalg.norm(proj[:, j])
        if nu @ cand[:, k] < 0:
            nu = -nu
        new_Pi = Pi - np.outer(nu, nu)
        Pnu = P @ nu
        r_old = A.shape[0]
        A_new = np.zeros((r_old + 1, r_old + 1))
        A_new[:r_old, :r_old] = A
        for b in range(r_old):
            A_new[b, r_old] = eps * float(xis[b] @ nu)
            A_new[r_old, b] = float(nu @ xis[b])
        A_new[r_old, r_old] = float(Pnu @ nu)
        xis = [new_Pi @ v for v in xis] + [eps * (new_Pi @ Pnu)]
        levels.append(P)
        normals.append(nu)
        P = new_Pi @ P @ new_Pi
        Pi = new_Pi
        A = A_new
    N = np.column_stack(normals)
    T = frame0.T
    frame = PointFrame(x, T, N)
    u = np.array([normals[k] @ levels[k] @ T for k in range(len(normals))])
    induced = InducedStructureData(frame, eps, T.T @ P @ T, u, np.column_stack([T.T @ v for v in xis]), A, pt)
    return ChainStructure(induced, N, tuple(levels))


def structure_difference(a: InducedStructureData, b: InducedStructureData) -> dict[str, float]:
    """Componentwise differences of two structures expressed in ambient coordinates."""
    Ta, Tb = a.frame.T, b.frame.T
    return {
        "P": max_abs(Ta @ a.P_tan @ Ta.T - Tb @ b.P_tan @ Tb.T),
        "u": max_abs(a.u @ Ta.T - b.u @ Tb.T),
        "xi": max_abs(Ta @ a.xi - Tb @ b.xi),
        "a": max_abs(a.A_mat - b.A_mat),
        "N": max_abs(a.frame.N - b.frame.N),
    }


def composition_suite(chain: ImmersionChain, x, direct: ImplicitSubmanifold | None = None,
                      tol: float = ALG_TOL, point: int | None = None) -> ResidualReport:
    """Chain-built structure against the direct decomposition, plus the two-level identities."""
    rep = ResidualReport()
    cs = compose_immersions(chain, x)
    d = cs.induced
    s = chain.ambient
    targets = [("5.8", chain.innermost)]
    if direct is not None:
        targets.append(("5.8.direct", direct))
    for ident, M in targets:
        ref = compute_induced(s, frames_at(M, x))
        diff = structure_difference(d, ref)
        rep.check(ident, max(diff.values()), tol, point, note=", ".join(f"{k}={v:.1e}" for k, v in diff.items()))
    if d.r == 2 and d.epsilon == 1:
        P, u, xi, A = d.P_tan, d.u, d.xi, d.A_mat
        eye = np.eye(d.n)
        u1, u2, x1, x2 = u[0], u[1], xi[:, 0], xi[:, 1]
        a11, a12, a21, a22 = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
        rep.check("5.10", abs(a12 - a21), tol, point, note="a_12 = a_21")
        rep.check("5.12.i", max_abs(P @ P - (eye - np.outer(x1, u1) - np.outer(x2, u2))), tol, point)
        rep.check("5.12.ii", max_abs(u1 @ P + a11 * u1 + a12 * u2), tol, point)
        rep.check("5.12.iii", max_abs(u2 @ P + a21 * u1 + a22 * u2), tol, point)
        rep.check("5.12.iv", abs(u1 @ x1 - (1 - a11 ** 2 - a12 ** 2)), tol, point)
        rep.check("5.12.v", abs(u2 @ x1 + a11 * a12 + a12 * a22), tol, point)
        rep.check("5.12.vi", abs(u1 @ x2 + a11 * a12 + a12 * a22), tol, point)
        rep.check("5.12.vii", abs(u2 @ x2 - (1 - a12 ** 2 - a22 ** 2)), tol, point)
        rep.check("5.12.viii", max_abs(P @ x1 + a11 * x1 + a12 * x2), tol, point)
        rep.check("5.12.ix", max_abs(P @ x2 + a12 * x1 + a22 * x2), tol, point)
        rep.check("5.13.i", max_abs(u1 - x1), tol, point)
        rep.check("5.13.ii", max_abs(u2 - x2), tol, point)
        rep.check("5.13.iii", max_abs(P - P.T), tol, point)
        rep.check("5.13.iv", max_abs(P.T @ P - (eye - np.outer(u1, u1) - np.outer(u2, u2))), tol, point)
    return rep


# -- oracle cross-check -------------------------------------------------------------------

def oracle_crosscheck(ex: GalleryExample, points, tol: float = ORACLE_TOL) -> ResidualReport:
    """Closed forms against the generic pipeline, plus each example's own identities."""
    rep = ResidualReport()
    s = ex.ambient
    for k, x in enumerate(points):
        x = np.asarray(x, dtype=float)
        frame = frames_at(ex.manifold, x)
        generic = compute_induced(s, frame)
        closed = closed_form_structure(ex, x)
        diff = structure_difference(closed, generic)
        for comp in ("P", "u", "xi", "a"):
            rep.check(f"7.{ex.id}.{comp}", diff[comp], tol, k)
        for ident, value in theorem_1_1_residuals(closed).items():
            rep.check(ident, value, tol, k, note="closed form")
        a = closed.A_mat
        if ex.id == "ex2":
            c = ex2_closed_form(ex, x)
            rep.check("7.36", max_abs(generic.A_mat - c["A"]), tol, k, note="computed (a_ab) vs closed form")
            rep.check("7.ex2.N", max_abs(frame.N - c["N"]), tol, k, note="frame order: radial, then tangential")
            J = np.atleast_2d(ex.manifold.JF(x))
            rep.check("7.ex2.tangency", max(max_abs(J @ c["xi_top"]), max_abs(J @ c["xi0"])), TANGENCY_TOL, k)
            u_N1 = float(frame.N[:, 0] @ s.p_tilde @ frame.N[:, 1])
            rep.check("7.35", abs(u_N1 - c["lambda"] * c["sigma_dot"]), TANGENCY_TOL, k, note="a_12 two ways")
            if ex.chain is not None:
                rep.extend(composition_suite(ex.chain, x, ex.manifold, tol, k))
        else:
            av = float(a[0, 0])
            P, u, xi = closed.P_tan, closed.u[0], closed.xi[:, 0]
            eye = np.eye(closed.n)
            rep.check("6.3.i", max_abs(P @ P - (eye - np.outer(xi, u))), tol, k)
            rep.check("6.3.ii", max_abs(u @ P + av * u), tol, k)
            rep.check("6.3.iii", abs(u @ xi - (1 - av * av)), tol, k)
            rep.check("6.3.iv", max_abs(P @ xi + av * xi), tol, k)
            rep.check("6.4.i", max_abs(u - xi), tol, k)
            rep.check("6.4.ii", max_abs(P.T @ P - (eye - np.outer(u, u))), tol, k)
            if abs(av * av - 1.0) <= 1e-8:
                rep.check("6.3.degenerate", float(np.linalg.norm(closed.ambient_xi())), tol, k,
                          note="a^2 = 1 forces xi = 0")
    return rep

