"""Induced structures on submanifolds of Euclidean spaces with an almost product
or almost complex structure, and numerical verification of their identities.

Typical use::

    from isl import make_structure, make_implicit, frames_at, compute_induced
    s = make_structure("swap", 2)
    M = make_implicit("sphere", m=4, R=1.0)
    f = frames_at(M, [1.0, 0.0, 0.0, 0.0])
    d = compute_induced(s, f)      # P, u, xi, (a_ab) in tangent coordinates
"""

from .ambient import AmbientStructure, apply_structure, check_compatibility, make_structure, with_rotating_field
from .errors import *  # noqa: F401,F403
from .gallery import (GalleryExample, ImmersionChain, closed_form_structure, compose_immersions, get_example,
                      oracle_crosscheck)
from .induced import InducedStructureData, classify_structure, compute_induced, rotate_normal_frame, theorem_1_1_suite
from .normality import (commutators, independence_test, n_component_suite, nijenhuis_at,
                        normality_and_commutativity)
from .numeric import ALG_TOL, FD_TOL, FdConfig
from .report import ResidualReport, emit_report
from .scenario import build_scenario, load_scenario, run_scenario
from .shape import ShapeData, codim1_suite, codim2_suite, defect_suite, shape_at, theorem_2_1_suite
from .submanifold import PointFrame, frames_at, make_implicit, sample_points

__version__ = "0.1.0"
