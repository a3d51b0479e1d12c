"""Small dense linear algebra and finite-difference helpers.

Everything here is a pure function of its inputs. Vectors are 1-d float
arrays and matrices are 2-d float arrays; nothing fancier is needed at the
dimensions this package works with.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EvaluationFailed, NoConvergence, RankDeficient

#: Tolerance for identities that involve no differentiation.
ALG_TOL = 1e-9
#: Tolerance for identities evaluated through finite differences.
FD_TOL = 1e-5
#: Residual norm below which a vector counts as linearly dependent.
RANK_TOL = 1e-10

DEFAULT_STEP = 1e-5


@dataclass(frozen=True)
class FdConfig:
    """Central two-point finite-difference settings.

    Parameters
    ----------
    step : float, optional
        Fixed step. When ``None`` the step is ``1e-5 * max(1, |x|)`` for the
        base point ``x`` at hand (see :meth:`step_at`).
    """

    step: float | None = None

    def __post_init__(self):
        if self.step is not None and not (np.isfinite(self.step) and self.step > 0):
            raise ValueError(f"finite-difference step must be > 0, got {self.step!r}")

    def step_at(self, x=None) -> float:
        if self.step is not None:
            return float(self.step)
        if x is None:
            return DEFAULT_STEP
        return DEFAULT_STEP * max(1.0, float(np.linalg.norm(x)))


def as_vector(v, dim: int | None = None) -> np.ndarray:
    out = np.asarray(v, dtype=float).reshape(-1)
    if dim is not None and out.shape[0] != dim:
        from .errors import DimensionMismatch

        raise DimensionMismatch(f"expected a vector of length {dim}, got {out.shape[0]}")
    if not np.all(np.isfinite(out)):
        raise EvaluationFailed("vector has non-finite entries")
    return out


def orthonormalize(vectors: Sequence) -> list[np.ndarray]:
    """Modified Gram-Schmidt in input order.

    A second elimination pass is applied to each vector to keep the result
    orthonormal to working precision.

    Raises
    ------
    RankDeficient
        If some vector has residual norm below ``1e-10`` after removing the
        span of its predecessors.
    """
    basis: list[np.ndarray] = []
    for k, v in enumerate(vectors):
        w = np.array(v, dtype=float).reshape(-1)
        for _ in range(2):
            for q in basis:
                w = w - np.dot(q, w) * q
        norm = np.linalg.norm(w)
        if norm < RANK_TOL:
            raise RankDeficient(f"vector {k} is dependent on its predecessors (residual {norm:.3e})")
        basis.append(w / norm)
    return basis


def _fix_sign(v: np.ndarray) -> np.ndarray:
    # "first nonzero component positive"
    for c in v:
        if abs(c) > 1e-12:
            return v if c > 0 else -v
    return v


def nullspace_basis(J) -> list[np.ndarray]:
    """Orthonormal basis of the kernel of a full-row-rank matrix.

    The rows of ``J`` are orthonormalized first, then the standard basis
    vectors ``e_1, ..., e_m`` are tried in order and kept whenever they add
    a new direction. Each kept vector has its first nonzero entry positive,
    so the output depends on ``J`` alone.
    """
    J = np.atleast_2d(np.asarray(J, dtype=float))
    r, m = J.shape
    rows = orthonormalize(list(J))  # raises RankDeficient when rank < r
    basis = list(rows)
    out: list[np.ndarray] = []
    for i in range(m):
        if len(basis) == m:
            break
        w = np.zeros(m)
        w[i] = 1.0
        for _ in range(2):
            for q in basis:
                w = w - np.dot(q, w) * q
        norm = np.linalg.norm(w)
        if norm < 1e-8:
            continue
        w = w / norm
        basis.append(w)
        out.append(_fix_sign(w))
    return out


def central_difference(f: Callable[[float], object], cfg: FdConfig | float | None = None):
    """Return ``(f(h) - f(-h)) / (2h)`` for the configured step ``h``.

    ``f`` may return a scalar or an array. Errors raised by ``f`` propagate
    as :class:`EvaluationFailed`.
    """
    if cfg is None:
        h = DEFAULT_STEP
    elif isinstance(cfg, FdConfig):
        h = cfg.step_at()
    else:
        h = float(cfg)
    try:
        plus = np.asarray(f(h), dtype=float)
        minus = np.asarray(f(-h), dtype=float)
    except EvaluationFailed:
        raise
    except Exception as exc:  # noqa: BLE001 - wrap anything the callback throws
        raise EvaluationFailed(str(exc)) from exc
    if not (np.all(np.isfinite(plus)) and np.all(np.isfinite(minus))):
        raise EvaluationFailed("finite difference produced non-finite values")
    out = (plus - minus) / (2.0 * h)
    return float(out) if out.ndim == 0 else out


def newton_retract(F: Callable, J: Callable, x0, tol: float = 1e-12, max_iter: int = 20) -> np.ndarray:
    """Project ``x0`` onto ``{F = 0}`` with minimum-norm Gauss-Newton steps.

    Each correction ``-J^T (J J^T)^{-1} F`` lies in the span of the
    constraint gradients, so the point only moves along normal directions.

    Raises
    ------
    NoConvergence
        If ``|F(x)| > tol`` after ``max_iter`` iterations.
    RankDeficient
        If ``J J^T`` is singular at an iterate.
    """
    x = np.array(x0, dtype=float).reshape(-1)
    for _ in range(max_iter + 1):
        Fx = np.atleast_1d(np.asarray(F(x), dtype=float))
        if not np.all(np.isfinite(Fx)):
            raise NoConvergence("constraint evaluation diverged")
        if np.linalg.norm(Fx) <= tol:
            return x
        Jx = np.atleast_2d(np.asarray(J(x), dtype=float))
        gram = Jx @ Jx.T
        if np.linalg.cond(gram) > 1e20:
            raise RankDeficient("constraint Jacobian lost rank during retraction")
        x = x - Jx.T @ np.linalg.solve(gram, Fx)
    raise NoConvergence(f"retraction did not reach |F| <= {tol:g} in {max_iter} iterations")


def max_abs(a) -> float:
    """Largest absolute entry; 0 for empty input."""
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def cayley(skew: np.ndarray) -> np.ndarray:
    """Orthogonal matrix ``(I - S)^{-1} (I + S)`` for skew-symmetric ``S``."""
    eye = np.eye(skew.shape[0])
    return np.linalg.solve(eye - skew, eye + skew)
