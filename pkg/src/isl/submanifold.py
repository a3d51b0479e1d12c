"""Implicit submanifolds ``M = F^{-1}(0)`` of Euclidean space.

Frames are computed from the constraint Jacobian in a fixed, smooth way so
that finite differences of the normal frame along curves are meaningful.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidParams, NoConvergence, NotOnManifold, RankDeficient
from .numeric import newton_retract, nullspace_basis, orthonormalize

ON_MANIFOLD_TOL = 1e-10


# -- polynomial constraints ------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Sum of monomials ``coef * prod x_k ** e_k`` in ``m`` variables."""

    m: int
    terms: tuple  # of (coef, exponent tuple)

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        total = 0.0
        for coef, exps in self.terms:
            total += coef * float(np.prod(x ** np.asarray(exps)))
        return total

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        grad = np.zeros(self.m)
        for coef, exps in self.terms:
            exps = np.asarray(exps)
            for k in np.nonzero(exps)[0]:
                e = exps.copy()
                e[k] -= 1
                grad[k] += coef * exps[k] * float(np.prod(x ** e))
        return grad

    @classmethod
    def from_terms(cls, m: int, terms) -> "Polynomial":
        out = []
        for item in terms:
            coef, exps = item
            exps = tuple(int(e) for e in exps)
            if len(exps) != m or any(e < 0 for e in exps):
                raise InvalidParams(f"monomial exponents {exps} invalid for {m} variables")
            out.append((float(coef), exps))
        return cls(m, tuple(out))

    @classmethod
    def parse(cls, m: int, text: str) -> "Polynomial":
        """Parse strings like ``"x1^2 + x2^2 - 2*x1*x3 - 1"`` (variables ``x1..xm``)."""
        src = text.replace(" ", "").replace("**", "^")
        if not src:
            raise InvalidParams("empty polynomial")
        terms = []
        for raw in re.split(r"(?<![eE])(?=[+-])", src):
            if not raw:
                continue
            sign = -1.0 if raw[0] == "-" else 1.0
            body = raw.lstrip("+-")
            coef, exps = sign, [0] * m
            for factor in filter(None, body.split("*")):
                var = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
                if var:
                    k = int(var.group(1)) - 1
                    if not 0 <= k < m:
                        raise InvalidParams(f"variable x{k + 1} out of range for m={m}")
                    exps[k] += int(var.group(2) or 1)
                    continue
                try:
                    coef *= float(factor)
                except ValueError:
                    raise InvalidParams(f"cannot parse factor {factor!r} in {text!r}") from None
            terms.append((coef, tuple(exps)))
        return cls(m, tuple(terms))


def polynomial_from_spec(m: int, spec) -> Polynomial:
    if isinstance(spec, Polynomial):
        return spec
    if isinstance(spec, str):
        return Polynomial.parse(m, spec)
    if isinstance(spec, dict) and "terms" in spec:
        return Polynomial.from_terms(m, spec["terms"])
    if isinstance(spec, (list, tuple)):
        return Polynomial.from_terms(m, spec)
    raise InvalidParams(f"unrecognised constraint {spec!r}")


# -- submanifolds ------------------------------------------------------------

@dataclass(frozen=True)
class ImplicitSubmanifold:
    """Level set ``F(x) = 0`` of codimension ``r`` in ``E^m``.

    ``frame_rotation`` is a constant ``r x r`` orthogonal matrix applied to the
    Gram-Schmidt normal frame (row ``a`` of the matrix gives the coefficients
    of the new normal ``a``).
    """

    m: int
    r: int
    F: Callable[[np.ndarray], np.ndarray]
    JF: Callable[[np.ndarray], np.ndarray]
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    frame_rotation: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.m - self.r

    def normal_field(self, x) -> np.ndarray:
        """Canonical orthonormal normal frame at ``x`` as an ``m x r`` matrix."""
        x = np.asarray(x, dtype=float)
        if self.kind == "sphere":
            return (x / self.params["R"]).reshape(self.m, 1)
        N = np.column_stack(orthonormalize(list(np.atleast_2d(self.JF(x)))))
        if self.frame_rotation is not None:
            N = N @ self.frame_rotation.T
        return N

    def residual(self, x) -> float:
        return float(np.linalg.norm(np.atleast_1d(self.F(np.asarray(x, dtype=float)))))

    def describe(self) -> dict:
        return {"kind": self.kind, "m": self.m, "r": self.r, **{k: v for k, v in self.params.items()
                                                                 if isinstance(v, (int, float, str))}}


def make_implicit(kind: str, **params) -> ImplicitSubmanifold:
    """Construct a submanifold.

    Kinds
    -----
    ``sphere(m, R)``
        ``|x|^2 - R^2 = 0`` in ``E^m``.
    ``product_spheres(p, r1, r2)``
        ``|x|^2 = r1^2, |y|^2 = r2^2`` in ``E^{2p}``. The normal frame is
        ordered (radial, then the normal tangent to the sphere of radius
        ``sqrt(r1^2 + r2^2)``).
    ``custom(m, constraints)``
        Constraints are :class:`Polynomial` objects, polynomial strings or
        term lists; alternatively pass callables ``F`` and ``JF`` with ``r``.
    """
    kind = kind.lower()
    if kind == "sphere":
        m, R = int(params["m"]), float(params["R"])
        if m < 2 or not R > 0:
            raise InvalidParams(f"sphere needs m >= 2 and R > 0, got m={m}, R={R}")
        return ImplicitSubmanifold(
            m, 1,
            lambda x: np.array([x @ x - R * R]),
            lambda x: 2.0 * np.asarray(x, dtype=float).reshape(1, -1),
            "sphere", {"m": m, "R": R},
        )
    if kind == "product_spheres":
        p, r1, r2 = int(params["p"]), float(params["r1"]), float(params["r2"])
        if p < 2 or not (r1 > 0 and r2 > 0):
            raise InvalidParams(f"product of spheres needs p >= 2, r1, r2 > 0; got {p}, {r1}, {r2}")

        def F(x):
            return np.array([x[:p] @ x[:p] - r1 * r1, x[p:] @ x[p:] - r2 * r2])

        def JF(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros((2, 2 * p))
            out[0, :p] = 2.0 * x[:p]
            out[1, p:] = 2.0 * x[p:]
            return out

        rho = np.hypot(r1, r2)
        rot = np.array([[r1, r2], [r2, -r1]]) / rho
        return ImplicitSubmanifold(2 * p, 2, F, JF, "product_spheres", {"p": p, "r1": r1, "r2": r2}, rot)
    if kind == "custom":
        m = int(params["m"])
        if "F" in params:
            r = int(params["r"])
            F, JF = params["F"], params["JF"]
            polys = None
        else:
            polys = [polynomial_from_spec(m, c) for c in params["constraints"]]
            r = len(polys)

            def F(x):
                return np.array([poly(x) for poly in polys])

            def JF(x):
                return np.array([poly.gradient(x) for poly in polys])

        if r < 1 or m < r + 1:
            raise InvalidParams(f"need 1 <= r < m, got m={m}, r={r}")
        extra = {k: v for k, v in params.items() if k not in ("F", "JF", "constraints")}
        extra["m"] = m
        if polys is not None:
            extra["constraints"] = polys
        return ImplicitSubmanifold(m, r, F, JF, "custom", extra)
    raise InvalidParams(f"unknown submanifold kind {kind!r}")


@dataclass(frozen=True)
class PointFrame:
    """A point on ``M`` with orthonormal tangent (``T``) and normal (``N``) columns."""

    x: np.ndarray
    T: np.ndarray
    N: np.ndarray

    @property
    def n(self) -> int:
        return self.T.shape[1]

    @property
    def r(self) -> int:
        return self.N.shape[1]

    @property
    def m(self) -> int:
        return self.x.shape[0]

    def tangent_coords(self, v) -> np.ndarray:
        return self.T.T @ np.asarray(v, dtype=float)

    def rotated(self, K) -> "PointFrame":
        """Frame with normals ``N'_a = sum_c K[a, c] N_c``."""
        return PointFrame(self.x, self.T, self.N @ np.asarray(K, dtype=float).T)


def frames_at(M: ImplicitSubmanifold, x, rotation=None) -> PointFrame:
    """Canonical frame at ``x``.

    Raises
    ------
    NotOnManifold
        If ``|F(x)| > 1e-10``.
    RankDeficient
        If the constraint Jacobian is rank deficient at ``x``.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != M.m:
        raise DimensionMismatch(f"point has length {x.shape[0]}, ambient dimension is {M.m}")
    res = M.residual(x)
    if not res <= ON_MANIFOLD_TOL:
        raise NotOnManifold(f"|F(x)| = {res:.3e} exceeds {ON_MANIFOLD_TOL:g}")
    J = np.atleast_2d(M.JF(x))
    T = np.column_stack(nullspace_basis(J)) if M.n else np.zeros((M.m, 0))
    N = M.normal_field(x)
    if rotation is not None:
        N = N @ np.asarray(rotation, dtype=float).T
    return PointFrame(x, T, N)


def split_vector(f: PointFrame, v) -> tuple[np.ndarray, np.ndarray]:
    """Tangential and normal coordinates of an ambient vector."""
    v = np.asarray(v, dtype=float)
    if v.shape[0] != f.m:
        raise DimensionMismatch(f"vector has length {v.shape[0]}, ambient dimension is {f.m}")
    return f.T.T @ v, f.N.T @ v


def retract(M: ImplicitSubmanifold, x0) -> np.ndarray:
    return newton_retract(M.F, M.JF, x0)


def curve_point(M: ImplicitSubmanifold, x, X, t: float, frame: PointFrame | None = None) -> np.ndarray:
    """Point ``retract(x + t T X)`` of the curve through ``x`` with velocity ``T X``."""
    x = np.asarray(x, dtype=float)
    if t == 0:
        return x.copy()
    if frame is None:
        frame = frames_at(M, x)
    return retract(M, x + t * (frame.T @ np.asarray(X, dtype=float)))


def sample_points(M: ImplicitSubmanifold, count: int, seed: int = 0, scale: float | None = None) -> list[np.ndarray]:
    """``count`` points on ``M`` drawn from a seeded Gaussian and retracted."""
    rng = np.random.default_rng(seed)
    pts: list[np.ndarray] = []
    if M.kind == "sphere":
        R = M.params["R"]
        while len(pts) < count:
            g = rng.standard_normal(M.m)
            pts.append(retract(M, R * g / np.linalg.norm(g)))
        return pts
    if M.kind == "product_spheres":
        p, r1, r2 = M.params["p"], M.params["r1"], M.params["r2"]
        while len(pts) < count:
            g = rng.standard_normal(M.m)
            x0 = np.concatenate([r1 * g[:p] / np.linalg.norm(g[:p]), r2 * g[p:] / np.linalg.norm(g[p:])])
            pts.append(retract(M, x0))
        return pts
    scale = float(M.params.get("sample_scale", 1.0) if scale is None else scale)
    attempts = 0
    while len(pts) < count:
        attempts += 1
        if attempts > 200 * count + 200:
            raise NoConvergence("could not generate enough points on the submanifold")
        try:
            x = retract(M, scale * rng.standard_normal(M.m))
            frames_at(M, x)
        except (NoConvergence, RankDeficient, NotOnManifold, np.linalg.LinAlgError):
            continue
        pts.append(x)
    return pts
