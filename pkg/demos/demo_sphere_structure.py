"""
Induced structure on a sphere
=============================

The swap map ``(x, y) -> (y, x)`` on ``E^4`` is an almost product structure.
Restricting it to the unit sphere splits ``P~ X`` and ``P~ N`` into tangential
and normal pieces, giving a tensor ``P``, a 1-form ``u``, a vector field
``xi`` and a function ``a`` on the sphere.
"""

import numpy as np

from isl import compute_induced, frames_at, make_implicit, make_structure, theorem_1_1_suite
from isl.induced import classify_structure, distribution_data

np.set_printoptions(precision=4, suppress=True)

s = make_structure("swap", 2)
M = make_implicit("sphere", m=4, R=1.0)

# %%
# At the first axis the tangent frame is ``(e2, e3, e4)``. ``P`` swaps
# ``e2`` and ``e4``, kills ``e3``, and ``xi`` is ``e3`` itself.

d = compute_induced(s, frames_at(M, [1.0, 0.0, 0.0, 0.0]))
print("P (columns are P e2, P e3, P e4):\n", d.P_tan)
print("u =", d.u[0], " xi =", d.ambient_xi()[:, 0], " a =", d.A_mat[0, 0])

# %%
# With ``a = 0`` the structure is an almost paracontact one: ``P^3 = P``.

c = classify_structure(d)
print(c.name, c.tag, "| P^3 - P residual:", c.residuals["P3-P"])
print("D = ker u has dimension", distribution_data(d).dim)

# %%
# At a generic point ``a = 2 <x, y>`` and the algebraic identities hold to
# machine precision.

rng = np.random.default_rng(0)
z = rng.standard_normal(4)
z /= np.linalg.norm(z)
d = compute_induced(s, frames_at(M, z))
rep = theorem_1_1_suite(d)
print("a =", d.A_mat[0, 0], "vs 2<x,y> =", 2 * z[:2] @ z[2:])
for row in rep.summary():
    print(f"  {row['identity']:8s} {row['status']}  {row['max_residual']:.1e}")

# %%
# Where ``|a| = 1`` the vector field ``xi`` vanishes, since ``|xi|^2 = 1 - a^2``.

h = np.sqrt(0.5)
d = compute_induced(s, frames_at(M, [h, 0.0, h, 0.0]))
print("a =", d.A_mat[0, 0], " |xi| =", np.linalg.norm(d.xi))
print("degenerate distribution:", distribution_data(d).degenerate)
