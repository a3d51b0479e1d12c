"""Scenario files: validation, point sampling and running the selected suites."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .ambient import AmbientStructure, check_compatibility, structure_from_dict
from .errors import (ConfigError, DegenerateStructure, EvaluationFailed, HypothesisViolated, InvalidParams,
                     InvalidStructure, ISLError, NoConvergence, RankDeficient, WrongCodimension)
from .gallery import GalleryExample, ImmersionChain, composition_suite, get_example, oracle_crosscheck
from .induced import (InducedStructureData, classification_report, compute_induced, distribution_check,
                      frame_covariance_suite, random_orthogonal, theorem_1_1_suite)
from .normality import (basis_independence_check, codim2_lemma_suite, independence_report, n_component_suite,
                        nijenhuis_from_jets, nijenhuis_suite, normality_and_commutativity, verdict_report)
from .numeric import ALG_TOL, FD_TOL, FdConfig, max_abs
from .report import ResidualReport
from .shape import (SHAPE_TOL, ShapeData, codim1_suite, codim2_suite, defect_suite, local_jets, shape_from_jets,
                    shape_suite, theorem_2_1_suite)
from .submanifold import ON_MANIFOLD_TOL, ImplicitSubmanifold, frames_at, make_implicit, sample_points

SUITES = {
    "compat": "ambient compatibility P~^2 = eps I, P~^T P~ = I, P~^T = eps P~",
    "thm1_1": "algebraic identities of the induced structure, distribution D, classification, frame covariance",
    "thm2_1": "Weingarten data and finite-difference derivatives of P, u, xi, (a_ab)",
    "defect": "derivative formulas with the parallelism defect tensor",
    "nijenhuis": "Nijenhuis tensor three ways, du, and the components N1..N4",
    "normality": "normality / commutativity verdict, independence of xi, frame invariance, codim-2 lemmas",
    "codim1": "hypersurface relations, Killing test, umbilical relations",
    "codim2": "codimension-2 relations",
    "composition": "structure built through a chain of hypersurfaces vs direct decomposition",
    "crosscheck": "gallery closed forms vs the generic pipeline",
}
ALL_SUITES = tuple(SUITES)
FORMATS = ("text", "json", "csv")
FRAME_ROTATIONS_PER_POINT = 3


@dataclass(frozen=True)
class Scenario:
    ambient: AmbientStructure
    manifold: ImplicitSubmanifold
    points: tuple
    suites: tuple
    tol_alg: float = ALG_TOL
    tol_fd: float = FD_TOL
    fd_step: float = 1e-5
    seed: int = 0
    fmt: str = "text"
    out: str | None = None
    gallery: GalleryExample | None = None
    chain: ImmersionChain | None = None
    inject: dict = field(default_factory=dict)
    echo: dict = field(default_factory=dict)


def _num(value, name: str, positive: bool = True) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not np.isfinite(out) or (positive and out <= 0):
        raise ConfigError(f"{name} must be a positive finite number, got {value!r}")
    return out


def _int(value, name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    try:
        out = int(value)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from None
    if isinstance(value, float) and out != value:
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if out < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {out}")
    return out


def _manifold_from_dict(spec: dict, m_hint: int | None = None) -> tuple[ImplicitSubmanifold, ImmersionChain | None]:
    kind = str(spec.get("kind", "")).lower()
    if kind == "chain":
        raise ConfigError("chain manifolds are built by _chain_from_dict")
    params = {k: v for k, v in spec.items() if k != "kind"}
    if kind in ("sphere", "custom") and "m" not in params and m_hint is not None:
        params["m"] = m_hint
    return make_implicit(kind, **params), None


def _chain_from_dict(spec: dict, s: AmbientStructure) -> ImmersionChain:
    links = spec.get("links")
    if not isinstance(links, list) or not links:
        raise ConfigError("chain manifold needs a non-empty 'links' list")
    return ImmersionChain(s, tuple(_manifold_from_dict(link, s.m)[0] for link in links))


def build_scenario(data: dict, overrides: dict | None = None) -> Scenario:
    """Validate a scenario dictionary and build every object it names.

    ``overrides`` (seed, points, tol_alg, tol_fd, fd_step, format, out) take
    precedence over the file.

    Raises
    ------
    ConfigError
        For unknown keys, bad values or objects that cannot be built.
    """
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    known = {"ambient", "manifold", "gallery", "params", "sampling", "points", "suites", "tolerances",
             "fd_step", "output", "inject", "name"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown scenario keys: {unknown}")
    ov = {k: v for k, v in (overrides or {}).items() if v is not None}

    try:
        gallery = chain = None
        if "gallery" in data:
            if "ambient" in data or "manifold" in data:
                raise ConfigError("give either 'gallery' or 'ambient' + 'manifold', not both")
            gallery = get_example(str(data["gallery"]), **dict(data.get("params") or {}))
            s, M, chain = gallery.ambient, gallery.manifold, gallery.chain
        else:
            if "ambient" not in data or "manifold" not in data:
                raise ConfigError("scenario needs 'gallery' or both 'ambient' and 'manifold'")
            if not isinstance(data["ambient"], dict) or not isinstance(data["manifold"], dict):
                raise ConfigError("'ambient' and 'manifold' must be objects")
            s = structure_from_dict(data["ambient"])
            if str(data["manifold"].get("kind", "")).lower() == "chain":
                chain = _chain_from_dict(data["manifold"], s)
                M = chain.innermost
            else:
                M, _ = _manifold_from_dict(data["manifold"], s.m)
    except ConfigError:
        raise
    except (InvalidStructure, InvalidParams, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"cannot build scenario: {exc}") from None
    if M.m != s.m:
        raise ConfigError(f"manifold lives in E^{M.m} but the ambient structure acts on E^{s.m}")

    suites = data.get("suites", ["all"])
    if isinstance(suites, str):
        suites = [suites]
    if not isinstance(suites, list) or not suites:
        raise ConfigError("'suites' must be a non-empty list")
    bad = [x for x in suites if x != "all" and x not in SUITES]
    if bad:
        raise ConfigError(f"unknown suites {bad}; valid: {sorted(SUITES) + ['all']}")
    selected = ALL_SUITES if "all" in suites else tuple(x for x in ALL_SUITES if x in suites)

    tols = data.get("tolerances") or {}
    if not isinstance(tols, dict) or set(tols) - {"alg", "fd"}:
        raise ConfigError("'tolerances' must be an object with keys 'alg' and/or 'fd'")
    tol_alg = _num(ov.get("tol_alg", tols.get("alg", ALG_TOL)), "tolerances.alg")
    tol_fd = _num(ov.get("tol_fd", tols.get("fd", FD_TOL)), "tolerances.fd")
    fd_step = _num(ov.get("fd_step", data.get("fd_step", 1e-5)), "fd_step")

    sampling = data.get("sampling") or {}
    if not isinstance(sampling, dict) or set(sampling) - {"count", "seed"}:
        raise ConfigError("'sampling' must be an object with keys 'count' and/or 'seed'")
    seed = _int(ov.get("seed", sampling.get("seed", 0)), "seed")
    if "points" in data and "points" not in ov:
        raw = data["points"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("'points' must be a non-empty list of coordinate lists")
        try:
            points = tuple(np.asarray(p, dtype=float).reshape(-1) for p in raw)
        except (TypeError, ValueError):
            raise ConfigError("'points' entries must be numeric lists") from None
        for k, p in enumerate(points):
            if p.shape[0] != M.m:
                raise ConfigError(f"point {k} has {p.shape[0]} coordinates, expected {M.m}")
            if not M.residual(p) <= ON_MANIFOLD_TOL:
                raise ConfigError(f"point {k} is not on the manifold (|F| = {M.residual(p):.3e})")
    else:
        count = _int(ov.get("points", sampling.get("count", 10)), "sampling.count", minimum=1)
        try:
            points = tuple(sample_points(M, count, seed))
        except ISLError as exc:
            raise ConfigError(f"cannot sample points: {exc}") from None

    output = data.get("output") or {}
    if not isinstance(output, dict) or set(output) - {"format", "path"}:
        raise ConfigError("'output' must be an object with keys 'format' and/or 'path'")
    fmt = str(ov.get("format", output.get("format", "text")))
    if fmt not in FORMATS:
        raise ConfigError(f"unknown output format {fmt!r}; choose from {FORMATS}")
    out = ov.get("out", output.get("path"))

    inject = data.get("inject") or {}
    if not isinstance(inject, dict) or set(inject) - {"p_tan_offset", "shape_scale"}:
        raise ConfigError("'inject' accepts 'p_tan_offset' (number) and 'shape_scale' ([alpha, factor])")

    echo = {
        "ambient": s.describe(),
        "manifold": M.describe() if chain is None else {"kind": "chain", "links": [L.describe() for L in chain.links]},
        "gallery": None if gallery is None else gallery.describe(),
        "points": [p.tolist() for p in points],
        "suites": list(selected),
        "tolerances": {"alg": tol_alg, "fd": tol_fd},
        "fd_step": fd_step,
        "seed": seed,
        "inject": inject,
    }
    if "name" in data:
        echo["name"] = str(data["name"])
    return Scenario(s, M, points, selected, tol_alg, tol_fd, fd_step, seed, fmt, out, gallery, chain, inject, echo)


def load_scenario(path, overrides: dict | None = None) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario {path} is not valid JSON: {exc}") from None
    return build_scenario(data, overrides)


# -- running -----------------------------------------------------------------------

def _inject(induced: InducedStructureData, shape: ShapeData, inject: dict):
    if "p_tan_offset" in inject:
        induced = replace(induced, P_tan=induced.P_tan + float(inject["p_tan_offset"]))
    if "shape_scale" in inject:
        alpha, factor = inject["shape_scale"]
        shape = shape.scaled(int(alpha), float(factor))
    return induced, shape


def _gate_all(rep: ResidualReport, idents, why: str, point: int | None):
    for ident in idents:
        rep.gated(ident, why, point)


def _point_suites(sc: Scenario, k: int, x: np.ndarray, rng: np.random.Generator) -> ResidualReport:
    s, M = sc.ambient, sc.manifold
    cfg = FdConfig(sc.fd_step)
    rep = ResidualReport()
    f = frames_at(M, x)
    induced = compute_induced(s, f)
    need_jets = set(sc.suites) & {"thm2_1", "defect", "nijenhuis", "normality", "codim1", "codim2"}
    jets = local_jets(s, M, f, cfg) if need_jets else None
    shape = shape_from_jets(jets) if jets is not None else None
    if shape is not None:
        induced, shape = _inject(induced, shape, sc.inject)
    elif "p_tan_offset" in sc.inject:
        induced = replace(induced, P_tan=induced.P_tan + float(sc.inject["p_tan_offset"]))
    tol_alg, tol_fd = sc.tol_alg, sc.tol_fd
    nij = None

    if "thm1_1" in sc.suites:
        rep.extend(theorem_1_1_suite(induced, tol_alg, k))
        rep.extend(distribution_check(induced, tol_alg, k))
        rep.extend(classification_report(induced, tol_alg, k))
        Ks = [random_orthogonal(induced.r, rng) for _ in range(FRAME_ROTATIONS_PER_POINT)]
        rep.extend(frame_covariance_suite(induced, Ks, max(tol_alg, 1e-10), k))

    if "thm2_1" in sc.suites:
        rep.extend(shape_suite(shape, max(SHAPE_TOL, tol_fd / 10), k))
        if M.kind == "sphere":
            R = M.params["R"]
            rep.check("2.2.sphere", max_abs(shape.A[0] + np.eye(M.n) / R), max(SHAPE_TOL, tol_fd / 10), k,
                      note="A = -I/R for the outward normal")
        try:
            rep.extend(theorem_2_1_suite(s, M, f, induced, shape, cfg, tol_fd, k, jets))
        except HypothesisViolated as exc:
            _gate_all(rep, ("2.6.i", "2.6.ii", "2.6.iii", "2.6.iv"), str(exc), k)

    if "defect" in sc.suites:
        rep.extend(defect_suite(s, M, f, induced, shape, cfg, tol_fd, SHAPE_TOL, k, jets))

    if {"nijenhuis", "normality", "codim1"} & set(sc.suites) and s.is_constant:
        nij = nijenhuis_from_jets(jets, induced, shape)

    if "nijenhuis" in sc.suites:
        if nij is None:
            _gate_all(rep, ("3.1", "3.11", "3.42.i"), "needs a parallel ambient structure", k)
        else:
            rep.extend(nijenhuis_suite(s, induced, shape, nij, tol_fd, k))
            try:
                rep.extend(n_component_suite(s, M, f, induced, shape, cfg, tol_fd, k, nij))
            except HypothesisViolated as exc:
                _gate_all(rep, ("3.42.i", "3.42.ii", "3.42.iii", "3.42.iv"), str(exc), k)

    verdict = None
    if "normality" in sc.suites:
        rep.extend(independence_report(induced, k))
        if nij is None:
            _gate_all(rep, ("4.2", "3.24.frame"), "needs a parallel ambient structure", k)
        else:
            verdict = normality_and_commutativity(induced, shape, nij, tol_fd)
            rep.extend(verdict_report(verdict, k))
            K = random_orthogonal(induced.r, rng)
            try:
                rep.extend(basis_independence_check(s, M, f, induced, shape, K, cfg, tol_fd, k,
                                                    normal=verdict.is_normal))
            except HypothesisViolated as exc:
                _gate_all(rep, ("3.24.frame",), str(exc), k)
            if induced.r == 2:
                rep.extend(codim2_lemma_suite(induced, shape, normal=verdict.is_normal, tol=tol_fd,
                                              tol_alg=tol_alg, point=k))

    if "codim1" in sc.suites:
        if induced.r != 1:
            _gate_all(rep, ("6.3",), f"codimension is {induced.r}, not 1", k)
        else:
            normal = nij is not None and bool(max_abs(nij.N1) <= tol_fd)
            rep.extend(codim1_suite(s, M, f, induced, shape, cfg, tol_alg, tol_fd, k, jets, normal))

    if "codim2" in sc.suites:
        if induced.r != 2:
            _gate_all(rep, ("6.23",), f"codimension is {induced.r}, not 2", k)
        else:
            rep.extend(codim2_suite(s, M, f, induced, shape, cfg, tol_alg, tol_fd, k, jets))

    if "composition" in sc.suites:
        if sc.chain is None:
            _gate_all(rep, ("5.8",), "scenario has no immersion chain", k)
        else:
            direct = sc.manifold if sc.gallery is not None else None
            rep.extend(composition_suite(sc.chain, x, direct, tol_alg, k))

    if "crosscheck" in sc.suites:
        if sc.gallery is None:
            _gate_all(rep, ("7.crosscheck",), "scenario is not a gallery example", k)
        else:
            for rec in oracle_crosscheck(sc.gallery, [x], tol_alg).records:
                rec.point = k
                rep.records.append(rec)
    return rep


def run_scenario(sc: Scenario | dict | str | Path) -> ResidualReport:
    """Run every selected suite at every point; deterministic for a fixed scenario.

    Geometry errors are re-raised with the index of the offending point.
    """
    if isinstance(sc, dict):
        sc = build_scenario(sc)
    elif isinstance(sc, (str, Path)):
        sc = load_scenario(sc)
    rep = ResidualReport()
    if "compat" in sc.suites:
        rep.extend(check_compatibility(sc.ambient))
    rng = np.random.default_rng(sc.seed)
    for k, x in enumerate(sc.points):
        try:
            rep.extend(_point_suites(sc, k, x, rng))
        except (RankDeficient, NoConvergence, EvaluationFailed, DegenerateStructure, WrongCodimension) as exc:
            raise type(exc)(f"point {k}: {exc}") from exc
    return rep
