"""Euclidean ambient space carrying a metric-compatible structure ``P~``.

``P~`` is stored as an explicit ``m x m`` matrix with ``P~^2 = eps I`` and
``P~^T P~ = I``. An optional position-dependent field can be attached; it
exists only so the parallelism defect tensor has something to detect.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, InvalidStructure
from .numeric import cayley
from .report import ResidualReport

COMPAT_TOL = 1e-12


@dataclass(frozen=True)
class AmbientStructure:
    """Ambient ``(E^m, <,>, P~)``.

    Attributes
    ----------
    m : int
        Ambient dimension.
    epsilon : int
        ``+1`` for an almost product structure, ``-1`` for an almost complex one.
    p_tilde : ndarray, shape (m, m)
        Matrix of ``P~`` (at the origin when a field is attached).
    kind : str
        ``"swap"``, ``"fixed_axis_swap"``, ``"reflection"`` or ``"custom"``.
    dims : tuple
        Parameters of the kind, e.g. ``(p,)`` or ``(p, q)``.
    field : callable, optional
        ``x -> matrix`` giving a position-dependent ``P~``.
    """

    m: int
    epsilon: int
    p_tilde: np.ndarray
    kind: str = "custom"
    dims: tuple = ()
    field: Callable[[np.ndarray], np.ndarray] | None = None

    @property
    def is_constant(self) -> bool:
        return self.field is None

    def at(self, x) -> np.ndarray:
        """Matrix of ``P~`` at the point ``x``."""
        if self.field is None:
            return self.p_tilde
        return np.asarray(self.field(np.asarray(x, dtype=float)), dtype=float)

    def describe(self) -> dict:
        out = {"kind": self.kind, "m": self.m, "epsilon": self.epsilon}
        if self.dims:
            out["dims"] = list(self.dims)
        if self.kind == "custom":
            out["matrix"] = self.p_tilde.tolist()
        if self.field is not None:
            out["position_dependent"] = True
        return out


def compatibility_residuals(p_tilde: np.ndarray, epsilon: int) -> dict[str, float]:
    m = p_tilde.shape[0]
    eye = np.eye(m)
    return {
        "1.1": float(np.max(np.abs(p_tilde @ p_tilde - epsilon * eye))),
        "1.2": float(np.max(np.abs(p_tilde.T @ p_tilde - eye))),
        "1.3": float(np.max(np.abs(p_tilde.T - epsilon * p_tilde))),
    }


def _swap(p: int) -> np.ndarray:
    z, i = np.zeros((p, p)), np.eye(p)
    return np.block([[z, i], [i, z]])


def _fixed_axis_swap(p: int) -> np.ndarray:
    m = 2 * p + 1
    out = np.zeros((m, m))
    out[:p, p + 1:] = np.eye(p)
    out[p + 1:, :p] = np.eye(p)
    out[p, p] = 1.0
    return out


def _reflection(p: int, q: int) -> np.ndarray:
    return np.diag(np.concatenate([np.ones(p), -np.ones(q)]))


def make_structure(kind: str, *dims, matrix=None, epsilon: int | None = None) -> AmbientStructure:
    """Build an ambient structure.

    Parameters
    ----------
    kind : {"swap", "fixed_axis_swap", "reflection", "custom"}
        ``swap`` takes ``p`` and acts on ``E^{2p}`` as ``(x, y) -> (y, x)``;
        ``fixed_axis_swap`` takes ``p`` and acts on ``E^{2p+1}`` as
        ``(x, t, y) -> (y, t, x)``; ``reflection`` takes ``p, q`` and acts on
        ``E^{p+q}`` as ``(x, y) -> (x, -y)``; ``custom`` needs ``matrix`` and
        ``epsilon``.

    Raises
    ------
    InvalidStructure
        If dimensions are not positive or a compatibility condition fails.
    """
    kind = kind.lower()
    if kind == "custom":
        if matrix is None or epsilon is None:
            raise InvalidStructure("custom structure needs matrix and epsilon")
        mat = np.array(matrix, dtype=float)
        eps = int(epsilon)
        dims = ()
    else:
        if any(int(d) != d or d <= 0 for d in dims):
            raise InvalidStructure(f"dimensions must be positive integers, got {dims}")
        dims = tuple(int(d) for d in dims)
        eps = 1
        if kind == "swap" and len(dims) == 1:
            mat = _swap(*dims)
        elif kind == "fixed_axis_swap" and len(dims) == 1:
            mat = _fixed_axis_swap(*dims)
        elif kind == "reflection" and len(dims) == 2:
            mat = _reflection(*dims)
        else:
            raise InvalidStructure(f"unknown structure {kind!r} with dims {dims}")
    if eps not in (1, -1):
        raise InvalidStructure(f"epsilon must be +1 or -1, got {epsilon!r}")
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise InvalidStructure(f"structure matrix must be square, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise InvalidStructure("structure matrix has non-finite entries")
    bad = {k: v for k, v in compatibility_residuals(mat, eps).items() if v > COMPAT_TOL}
    if bad:
        raise InvalidStructure(f"structure fails compatibility: {bad}")
    mat.setflags(write=False)
    return AmbientStructure(mat.shape[0], eps, mat, kind, dims)


def apply_structure(s: AmbientStructure, v, x=None) -> np.ndarray:
    """Return ``P~ v`` (evaluated at ``x`` for a position-dependent field)."""
    v = np.asarray(v, dtype=float)
    if v.shape[0] != s.m:
        raise DimensionMismatch(f"vector has length {v.shape[0]}, ambient dimension is {s.m}")
    mat = s.p_tilde if x is None else s.at(x)
    return mat @ v


def check_compatibility(s: AmbientStructure, tol: float = COMPAT_TOL) -> ResidualReport:
    """Residuals of ``P~^2 = eps I``, ``P~^T P~ = I`` and ``P~^T = eps P~``.

    Works on any matrix, including ones that :func:`make_structure` would
    reject, so a report can show exactly which condition breaks.
    """
    rep = ResidualReport()
    for ident, value in compatibility_residuals(np.asarray(s.p_tilde, dtype=float), s.epsilon).items():
        rep.check(ident, value, tol)
    return rep


def unchecked_structure(matrix, epsilon: int) -> AmbientStructure:
    """Wrap a matrix without validation (for exercising failure reports)."""
    mat = np.array(matrix, dtype=float)
    return AmbientStructure(mat.shape[0], int(epsilon), mat, "custom", ())


def with_rotating_field(s: AmbientStructure, strength: float = 0.1, seed: int = 0) -> AmbientStructure:
    """Attach the field ``x -> Q(x) P~ Q(x)^T`` with ``Q(x)`` orthogonal.

    ``Q(x)`` is the Cayley transform of ``strength * (w . x) * S`` for a fixed
    skew matrix ``S`` and vector ``w``. Every value of the field is still a
    compatible structure, but it is no longer parallel, so the defect tensor
    is nonzero.
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((s.m, s.m))
    skew = (g - g.T) / 2.0
    w = rng.standard_normal(s.m)
    base = np.array(s.p_tilde)

    def field(x):
        q = cayley(strength * float(w @ x) * skew)
        return q @ base @ q.T

    return AmbientStructure(s.m, s.epsilon, base, s.kind, s.dims, field)


def structure_from_dict(spec: dict) -> AmbientStructure:
    """Build a structure from a scenario-style dictionary.

    An optional ``"rotating": {"strength": s, "seed": k}`` entry attaches the
    position-dependent field of :func:`with_rotating_field`.
    """
    kind = str(spec.get("kind", "")).lower()
    if kind in ("swap", "fixed_axis_swap"):
        s = make_structure(kind, spec["p"])
    elif kind == "reflection":
        s = make_structure(kind, spec["p"], spec["q"])
    elif kind == "custom":
        s = make_structure(kind, matrix=spec["matrix"], epsilon=spec.get("epsilon"))
    else:
        raise InvalidStructure(f"unknown ambient kind {kind!r}")
    rot = spec.get("rotating")
    if rot:
        s = with_rotating_field(s, float(rot.get("strength", 0.1)), int(rot.get("seed", 0)))
    return s
