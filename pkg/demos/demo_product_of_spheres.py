"""
Two paths to a codimension-2 structure
======================================

A product of circles ``S^1(r1) x S^1(r2)`` with ``r1^2 + r2^2 = 1`` sits
inside the unit 3-sphere. Its structure can be computed directly, or one
hypersurface at a time through ``E^4 > S^3(1) > S^1 x S^1``.
"""

import numpy as np

from isl import compose_immersions, compute_induced, frames_at, get_example
from isl.gallery import structure_difference
from isl.normality import independence_test, nijenhuis_at, normality_and_commutativity
from isl.numeric import FdConfig
from isl.shape import shape_at

np.set_printoptions(precision=4, suppress=True)

ex = get_example("ex2", p=2, r1=0.6, r2=0.8)
x = ex.sample(1, seed=5)[0]

# %%
# Both paths give the same tensors. The matrix ``(a_ab)`` is
# ``[[2s, ls], [ls, -2s]]`` with ``s = <x, y>`` and ``l = r2/r1 - r1/r2``.

chained = compose_immersions(ex.chain, x).induced
direct = compute_induced(ex.ambient, frames_at(ex.manifold, x))
print("componentwise differences:", structure_difference(chained, direct))
s_dot = x[:2] @ x[2:]
lam = 0.8 / 0.6 - 0.6 / 0.8
print("(a_ab) =\n", direct.A_mat)
print("closed form =\n", np.array([[2 * s_dot, lam * s_dot], [lam * s_dot, -2 * s_dot]]))

# %%
# The Gram matrix of ``xi_1, xi_2`` is ``I - (a_ab)^2``. It is singular exactly
# where ``|s| = r1 r2``, e.g. at ``x = (r1, 0), y = (r2, 0)``.

for point in (x, np.array([0.6, 0.0, 0.8, 0.0])):
    rec = independence_test(compute_induced(ex.ambient, frames_at(ex.manifold, point)))
    print(f"det(I - A^2) = {rec.det:+.3e}, rank = {rec.rank}, consistent = {rec.agrees}")

# %%
# This structure is not normal. ``P`` does not commute with the Weingarten
# operators, and ``N^(1)`` is far from zero, which matches the commuting criterion.

cfg = FdConfig(1e-5)
f = frames_at(ex.manifold, x)
verdict = normality_and_commutativity(direct, shape_at(ex.manifold, f, cfg), nijenhuis_at(ex.ambient, ex.manifold,
                                                                                          f, direct, cfg))
print(f"|N1| = {verdict.N1_norm:.3f}, |PA - AP| = {verdict.B_norm:.3f}, "
      f"normal = {verdict.is_normal}, commutes = {verdict.commutes}")
