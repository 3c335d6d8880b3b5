"""Command-line entry point: config ingestion, tasks, verify, repro.

Usage:
    mmsgeo <task> --config <file> [--out <dir>] [--workers N] [--seed S]
    mmsgeo verify --space <file> --level quick|full
    mmsgeo repro --suite <name>|all [--out <dir>] [--workers N] [--seed S]
    mmsgeo repro --list-suites

Configs are TOML with a [space] section, a [task] section, and optional
[task.set] / [task.field] / [task.params] subsections; unknown keys are
rejected. The default output directory comes from --out, then the
MMSGEO_OUT environment variable, then ./mmsgeo-out.

Exit codes: 0 all verdicts pass; 2 a verdict failed; 3 config error;
4 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__, cheeger, hausdorff_gauge, kernels, minkowski
from . import parallel, perimeter_coarea, slope_semigroup, space_core
from .report import Report, write_csv, write_report

TASKS = ("minkowski", "perimeter", "coarea", "distance-levels", "hausdorff",
         "cheeger", "eq13-gap", "verify", "repro")


class ConfigError(ValueError):
    pass


def _require_keys(section, allowed, path):
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError("unknown key(s) %s in [%s]"
                          % (sorted(unknown), path))


# -- space construction -------------------------------------------------------

SPACE_KEYS = {
    "grid_box": {"kind", "dims", "n_per_side", "box", "density"},
    "fat_cantor": {"kind", "n", "depth", "target_k_mass"},
    "circle": {"kind", "n", "circumference"},
    "explicit": {"kind", "matrix", "weights"},
    "table": {"kind", "path"},
}


def build_space(spec: dict):
    kind = spec.get("kind")
    if kind not in SPACE_KEYS:
        raise ConfigError("unknown space kind %r" % (kind,))
    _require_keys(spec, SPACE_KEYS[kind], "space")
    if kind == "grid_box":
        density = spec.get("density", "unit")
        if isinstance(density, dict):
            _require_keys(density, {"kind", "target_k_mass", "depth"},
                          "space.density")
            if density.get("kind") != "fat_cantor":
                raise ConfigError("unknown density kind %r"
                                  % (density.get("kind"),))
            density = space_core.fat_cantor_density(
                density["target_k_mass"], density.get("depth", 10))
        return space_core.build_grid_box(spec["dims"], spec["n_per_side"],
                                         spec["box"], density)
    if kind == "fat_cantor":
        return space_core.build_fat_cantor_interval(
            spec["n"], spec["depth"], spec["target_k_mass"])
    if kind == "circle":
        return space_core.build_circle(spec["n"], spec["circumference"])
    if kind == "explicit":
        return space_core.build_explicit(np.asarray(spec["matrix"], float),
                                         np.asarray(spec["weights"], float))
    space, _ = space_core.import_table(spec["path"])
    return space


# -- set and field builders ----------------------------------------------------

def build_set(space, spec: dict):
    kind = spec.get("kind")
    if kind == "ball":
        _require_keys(spec, {"kind", "center", "radius", "closed"}, "task.set")
        return space_core.indicator_ball(space, spec["center"],
                                         spec["radius"],
                                         closed=spec.get("closed", True))
    if kind == "box":
        _require_keys(spec, {"kind", "lo", "hi"}, "task.set")
        return space_core.indicator_box(space, spec["lo"], spec["hi"])
    if kind == "point":
        _require_keys(spec, {"kind", "at"}, "task.set")
        at = np.asarray(spec["at"], dtype=float)
        diff = space.coords - at
        idx = int(np.argmin((diff * diff).sum(axis=1)))
        marks = np.zeros(space.n, dtype=bool)
        marks[idx] = True
        return space_core.SetIndicator.from_mask(space, marks)
    if kind == "full":
        return space_core.full_indicator(space)
    if kind == "every_k":
        _require_keys(spec, {"kind", "k", "lo", "hi"}, "task.set")
        inside = space_core.indicator_box(space, spec["lo"], spec["hi"]).marks
        marks = inside & (np.arange(space.n) % int(spec["k"]) == 0)
        return space_core.SetIndicator.from_mask(space, marks)
    if kind == "cantor_marks":
        return space_core.fat_cantor_marks(space)
    raise ConfigError("unknown set kind %r" % (kind,))


def build_field(space, spec: dict):
    kind = spec.get("kind")
    if kind == "coordinate":
        _require_keys(spec, {"kind", "axis", "shift"}, "task.field")
        axis = int(spec.get("axis", 0))
        vals = space.coords[:, axis] + float(spec.get("shift", 0.0))
        return space_core.ScalarField.from_values(space, vals)
    if kind == "cone":
        _require_keys(spec, {"kind", "apex", "height"}, "task.field")
        apex = np.asarray(spec.get("apex", [0.0] * space.coords.shape[1]),
                          dtype=float)
        height = float(spec.get("height", 1.0))
        diff = space.coords - apex
        d = np.sqrt((diff * diff).sum(axis=1))
        return space_core.ScalarField.from_values(
            space, np.maximum(height - d, 0.0))
    if kind == "distance":
        _require_keys(spec, {"kind", "set"}, "task.field")
        return minkowski.distance_to_set(space, build_set(space, spec["set"]))
    raise ConfigError("unknown field kind %r" % (kind,))


# -- run record ------------------------------------------------------------------


@dataclass
class RunRecord:
    config: dict
    versions: dict
    wall_time: float
    verdicts: list
    artifacts: list = field(default_factory=list)
    passed: bool = True

    def to_json(self) -> dict:
        return {
            "config": self.config, "versions": self.versions,
            "wall_time_s": self.wall_time, "passed": self.passed,
            "verdicts": self.verdicts, "artifacts": self.artifacts,
        }


def _versions():
    import scipy

    return {"mmsgeo": __version__, "numpy": np.__version__,
            "scipy": scipy.__version__, "kernels": kernels.backend_name()}


# -- tasks ------------------------------------------------------------------------


def _content_windows(params):
    win = params.get("window")
    return tuple(win) if win else None


def task_minkowski(space, task, outdir):
    A = build_set(space, task["set"])
    params = task.get("params", {})
    _require_keys(params, {"window", "s", "t"}, "task.params")
    window = _content_windows(params)
    rep = Report("minkowski", meta={})
    lo = minkowski.content(space, A, window=window, kind="lower")
    hi = minkowski.content(space, A, window=window, kind="upper")
    rel = minkowski.relaxed_content(space, A,
                                    minkowski.RelaxedParams(window=window))
    rep.meta.update({"lower": lo.summary_dict(), "upper": hi.summary_dict(),
                     "relaxed": rel.summary_dict()})
    rep.add_table("lower_profile", *lo.table())
    rep.add_table("upper_profile", *hi.table())
    rep.check("inf-quotient-below-sup", "content-order",
              lo.inf_quotient, hi.sup_quotient, mode="le")
    rep.check("relaxed-below-lower", "relaxed-content-domination",
              rel.extrapolated, lo.extrapolated + rel.band + lo.band,
              mode="le")
    s = params.get("s", 4.0 * space.resolution_h)
    t = params.get("t", 6.0 * space.resolution_h)
    inc = minkowski.check_semigroup_inclusion(space, A, s, t)
    rep.verdicts.extend(inc.verdicts)
    chain = minkowski.check_quotient_chain(space, A, lo.r_values[::4])
    rep.verdicts.extend(chain.verdicts)
    for name, (h, r) in chain.tables.items():
        rep.add_table("chain_%s" % name, h, r)
    return [rep]


def task_perimeter(space, task, outdir):
    A = build_set(space, task["set"])
    params = task.get("params", {})
    _require_keys(params, {"window"}, "task.params")
    window = _content_windows(params)
    est = perimeter_coarea.perimeter(
        space, A, perimeter_coarea.PerimeterParams(content_window=window))
    lo = minkowski.content(space, A, window=window, kind="lower")
    rep = Report("perimeter", meta={"estimate": est.summary_dict(),
                                    "content_lower": lo.summary_dict()})
    rep.add_table("family", ["s", "r_prime", "slope_mass", "l1"], est.table)
    rep.check("perimeter-agrees-with-relaxed", "sandwich-agreement",
              abs(est.upper - est.cross_check), est.band + est.cross_band,
              mode="le")
    rep.check("relaxed-below-content-lower", "sandwich-agreement",
              est.cross_check, lo.extrapolated + est.cross_band + lo.band,
              mode="le")
    rep.check("perimeter-below-content-lower", "sandwich-agreement",
              est.upper, lo.extrapolated + est.band + lo.band, mode="le")
    return [rep]


def task_coarea(space, task, outdir):
    f = build_field(space, task["field"])
    params = task.get("params", {})
    _require_keys(params, {"window", "n_levels", "tolerance"}, "task.params")
    cp = perimeter_coarea.CoareaParams(
        window=_content_windows(params),
        n_levels=int(params.get("n_levels", 48)),
        tolerance=float(params.get("tolerance", 0.03)))
    out = perimeter_coarea.coarea_check(space, f, params=cp)
    return [out.report]


def task_distance_levels(space, task, outdir):
    A = build_set(space, task["set"])
    params = task.get("params", {})
    _require_keys(params, {"t_grid", "r_window", "tolerance"}, "task.params")
    t_grid = params.get("t_grid")
    if t_grid is None:
        raise ConfigError("distance-levels needs task.params.t_grid")
    dl = perimeter_coarea.DistanceLevelParams(
        tolerance=float(params.get("tolerance", 0.04)))
    r_window = params.get("r_window")
    rep = perimeter_coarea.distance_levels(
        space, A, t_grid, r_window=tuple(r_window) if r_window else None,
        params=dl)
    return [rep]


def task_hausdorff(space, task, outdir):
    S = build_set(space, task["set"])
    params = task.get("params", {})
    _require_keys(params, {"delta_max", "field"}, "task.params")
    gp = hausdorff_gauge.GaugeParams(
        delta_max=params.get("delta_max"))
    est = hausdorff_gauge.hausdorff(space, S, gp)
    rep = Report("hausdorff", meta={"estimate": est.summary_dict()})
    rep.add_table("stage_costs", ["delta", "cost"],
                  [[d, c] for d, c in zip(est.delta_grid, est.costs)])
    reps = [rep]
    if "field" in params:
        f = build_field(space, params["field"])
        reps.append(hausdorff_gauge.coarea_inequalities(
            space, f, space_core.full_indicator(space)))
    return reps


def task_cheeger(space, task, outdir):
    params = task.get("params", {})
    _require_keys(params, {"family", "window"}, "task.params")
    family = params.get("family", "sublevel_sweep")
    cp = cheeger.CheegerParams(window=_content_windows(params))
    rep = cheeger.compare_definitions(space, family, cp)
    return [rep]


def task_eq13_gap(space, task, outdir):
    _require_keys(task.get("params", {}), set(), "task.params")
    return [perimeter_coarea.eq13_gap_demo(space)]


# -- verify battery ----------------------------------------------------------------


def _verify_set_and_field(space):
    """Canonical probe set and field for the invariant battery."""
    if space.kind == "matrix":
        marks = np.zeros(space.n, dtype=bool)
        marks[0] = True
        A = space_core.SetIndicator.from_mask(space, marks)
        f = slope_semigroup.indicator_field(space, A)
        return A, f
    diam = space.diameter_hint()
    center = space.n // 2
    A = space_core.indicator_ball(space, center, 0.21 * diam, closed=True)
    marks0 = np.zeros(space.n, dtype=bool)
    marks0[0] = True
    d = space.dist_to_marks(marks0)
    f = space_core.ScalarField.from_values(space, d)
    return A, f


def verify_space(space, level: str = "quick") -> Report:
    """Exact-invariant battery; level 'full' adds the numeric checks."""
    rep = Report("verify-%s" % level, meta={"kind": space.kind,
                                            "n": space.n,
                                            "level": level})
    h = space.resolution_h
    violations = space_core.audit_triangle(space, 10_000, seed=0)
    rep.check("triangle-audit", "metric-axioms", violations, 0, mode="le")

    A, f = _verify_set_and_field(space)
    if not A.marks.any() or A.marks.all():
        marks = np.zeros(space.n, dtype=bool)
        marks[: max(1, space.n // 4)] = True
        A = space_core.SetIndicator.from_mask(space, marks)

    diam = space.diameter_hint()
    s = max(4.0 * h, 0.008 * diam)
    t = max(6.0 * h, 0.012 * diam)
    rep.verdicts.extend(
        minkowski.check_semigroup_inclusion(space, A, s, t).verdicts)

    r_lo = max(h, 0.01 * diam)
    r_grid = np.geomspace(r_lo, max(0.2 * diam, 2.5 * r_lo), 8)
    prof = minkowski.profile(space, A, r_grid)
    rep.check("profile-monotone", "profile-monotonicity",
              int(np.sum(np.diff(prof.masses) < 0)), 0, mode="le")

    closure = space.dist_to_marks(A.marks) <= 0.0
    same = np.array_equal(
        minkowski.enlarge(space, A, t).marks,
        minkowski.enlarge(space, space_core.SetIndicator.from_mask(
            space, closure), t).marks)
    rep.check("closure-invariance", "enlargement-closure-invariance",
              int(not same), 0, mode="le")

    rep.verdicts.extend(
        slope_semigroup.check_semigroup_ops(space, f, s, t).verdicts)

    chi = slope_semigroup.indicator_field(space, A)
    T_chi = slope_semigroup.sup_semigroup(space, chi, t)
    enl = minkowski.enlarge(space, A, t)
    rep.check("dilated-indicator-is-enlargement", "indicator-dilation",
              int(np.sum((T_chi.values > 0.5) != enl.marks)), 0, mode="le")

    if level == "full":
        lo = minkowski.content(space, A, kind="lower")
        hi = minkowski.content(space, A, kind="upper")
        rep.check("inf-quotient-below-sup", "content-order",
                  lo.inf_quotient, hi.sup_quotient, mode="le")
        rel = minkowski.relaxed_content(space, A)
        rep.check("relaxed-below-lower", "relaxed-content-domination",
                  rel.extrapolated, lo.extrapolated + rel.band + lo.band,
                  mode="le")
        if space.kind != "matrix":
            est = perimeter_coarea.perimeter(space, A)
            rep.check("perimeter-agrees-with-relaxed", "sandwich-agreement",
                      abs(est.upper - est.cross_check),
                      est.band + est.cross_band, mode="le")
            sl = slope_semigroup.slope_at_scale(
                space, f, slope_semigroup.slope_scale(space))
            la = slope_semigroup.asymptotic_lip(
                space, f, slope_semigroup.slope_scale(space))
            rep.check("slope-below-pair-lip", "slope-vs-asymptotic-lip",
                      int(np.sum(sl.values > la.values + 1e-12)), 0,
                      mode="le")
        if "fat_cantor" in space.meta:
            demo = perimeter_coarea.eq13_gap_demo(space)
            rep.check("lsc-hypothesis-fails-as-expected",
                      "lsc-gap-weighted-interval",
                      int(not demo.meta.get("gap_found", False)), 0,
                      mode="le", informational=True,
                      note="expected failure on fat-Cantor weighting")
    return rep


# -- repro suites ---------------------------------------------------------------------


def _suite_disk(outdir):
    space = space_core.build_grid_box(2, 256, [[-2, 2], [-2, 2]])
    A = space_core.indicator_ball(space, [0.0, 0.0], 1.0)
    est = perimeter_coarea.perimeter(space, A)
    lo = minkowski.content(space, A, kind="lower")
    rep = Report("repro-disk", meta={"target": 2 * np.pi,
                                     "perimeter": est.summary_dict(),
                                     "content_lower": lo.summary_dict()})
    rep.add_table("family", ["s", "r_prime", "slope_mass", "l1"], est.table)
    rep.add_table("lower_profile", *lo.table())
    target = 2 * np.pi
    for name, value in (("perimeter-upper", est.upper),
                        ("relaxed", est.cross_check),
                        ("content-lower", lo.extrapolated)):
        rep.check("%s-near-circumference" % name, "sandwich-agreement",
                  abs(value - target), 0.04 * target, mode="le")
    return [("disk", rep)]


def _suite_coarea(outdir):
    space = space_core.build_grid_box(2, 192, [[-2, 2], [-2, 2]])
    f = build_field(space, {"kind": "cone", "apex": [0.0, 0.0], "height": 1.0})
    out = perimeter_coarea.coarea_check(
        space, f, params=perimeter_coarea.CoareaParams(
            n_levels=24, tolerance=0.05))
    return [("coarea", out.report)]


def _suite_cheeger(outdir):
    reps = []
    interval = space_core.build_grid_box(1, 1001, [0.0, 1.0])
    reps.append(("cheeger_interval",
                 cheeger.compare_definitions(interval, "sublevel_sweep")))
    circle = space_core.build_circle(1024, 2 * np.pi)
    reps.append(("cheeger_circle",
                 cheeger.compare_definitions(circle, "ball_sweep")))
    return reps


def _suite_gap(outdir):
    space = space_core.build_fat_cantor_interval(4001, 6, 0.5)
    return [("eq13_gap", perimeter_coarea.eq13_gap_demo(space))]


def _suite_divergence(outdir):
    space = space_core.build_grid_box(1, 32768, [0.0, 1.1])
    pts = np.concatenate([[0.0], 1.0 / np.arange(1, 1001)])
    idx = np.unique(np.clip(
        np.round(pts / space.cell_sizes[0] - 0.5).astype(int), 0,
        space.n - 1))
    marks = np.zeros(space.n, dtype=bool)
    marks[idx] = True
    A = space_core.SetIndicator.from_mask(space, marks)
    est = minkowski.content(space, A, window=(1e-4, 1e-2), kind="lower")
    rep = Report("repro-divergence", meta={"content": est.summary_dict()})
    rep.add_table("profile", *est.table())
    rep.check("divergence-flag", "scattered-set-divergence",
              int(not est.diverging), 0, mode="le")
    return [("divergence", rep)]


def _suite_gauge(outdir):
    space = space_core.build_grid_box(2, 128, [[0, 1], [0, 1]])
    row = space.n // 2 // 128 * 128
    marks = np.zeros(space.n, dtype=bool)
    marks[row: row + 128] = True
    S = space_core.SetIndicator.from_mask(space, marks)
    est = hausdorff_gauge.hausdorff(space, S, hausdorff_gauge.GaugeParams(
        delta_max=0.05))
    rep = Report("repro-gauge", meta={"estimate": est.summary_dict(),
                                      "target": np.pi / 4})
    rep.add_table("stage_costs", ["delta", "cost"],
                  [[d, c] for d, c in zip(est.delta_grid, est.costs)])
    rep.check("segment-gauge-near-quarter-pi", "gauge-planar-factor",
              abs(est.extrapolated - np.pi / 4), 0.06 * np.pi / 4, mode="le")
    return [("gauge", rep)]


SUITES = {
    "disk": _suite_disk,
    "coarea": _suite_coarea,
    "cheeger": _suite_cheeger,
    "eq13-gap": _suite_gap,
    "divergence": _suite_divergence,
    "gauge": _suite_gauge,
}


# -- driver ------------------------------------------------------------------------


def load_config(path):
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError("config file not found: %s" % path)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("config parse error in %s: %s" % (path, exc))
    _require_keys(cfg, {"space", "task", "run"}, "")
    return cfg


def _validate_run(run):
    _require_keys(run, {"seed", "output", "workers"}, "run")
    seed = run.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("run.seed must be an integer")
    for key in ("tolerance",):
        pass
    return run


TASK_FUNCS = {
    "minkowski": task_minkowski,
    "perimeter": task_perimeter,
    "coarea": task_coarea,
    "distance-levels": task_distance_levels,
    "hausdorff": task_hausdorff,
    "cheeger": task_cheeger,
    "eq13-gap": task_eq13_gap,
}


def _check_params_positive(task):
    params = task.get("params", {})
    tol = params.get("tolerance")
    if tol is not None and not tol > 0:
        raise ConfigError("task.params.tolerance must be positive")
    win = params.get("window")
    if win is not None and (len(win) != 2 or win[0] <= 0 or win[1] <= win[0]):
        raise ConfigError("task.params.window must be (r_min, r_max), "
                          "0 < r_min < r_max")


def run_config(cfg: dict, outdir: str, task_name=None) -> RunRecord:
    started = time.time()
    task = cfg.get("task", {})
    name = task_name or task.get("name")
    if name not in TASK_FUNCS:
        raise ConfigError("unknown task %r" % (name,))
    _check_params_positive(task)
    space = build_space(cfg.get("space", {}))
    reports = TASK_FUNCS[name](space, task, outdir)
    artifacts = []
    verdicts = []
    for i, rep in enumerate(reports):
        stem = name.replace("-", "_") if len(reports) == 1 \
            else "%s_%d" % (name.replace("-", "_"), i)
        artifacts.extend(write_report(rep, outdir, stem))
        verdicts.extend(rep.summary_dict()["verdicts"])
    record = RunRecord(
        config=cfg, versions=_versions(), wall_time=time.time() - started,
        verdicts=verdicts, artifacts=artifacts,
        passed=all(v["passed"] for v in verdicts if not v["informational"]))
    with open(os.path.join(outdir, "run_record.json"), "w") as fh:
        json.dump(record.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return record


def run_repro(suite: str, outdir: str) -> RunRecord:
    started = time.time()
    names = list(SUITES) if suite == "all" else [suite]
    for n in names:
        if n not in SUITES:
            raise ConfigError("unknown suite %r (see --list-suites)" % (n,))
    artifacts = []
    verdicts = []
    for n in names:
        for stem, rep in SUITES[n](outdir):
            artifacts.extend(write_report(rep, outdir, stem))
            verdicts.extend(rep.summary_dict()["verdicts"])
    record = RunRecord(
        config={"task": {"name": "repro", "suite": suite}},
        versions=_versions(), wall_time=time.time() - started,
        verdicts=verdicts, artifacts=artifacts,
        passed=all(v["passed"] for v in verdicts if not v["informational"]))
    with open(os.path.join(outdir, "run_record.json"), "w") as fh:
        json.dump(record.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return record


def _default_out(args):
    return args.out or os.environ.get("MMSGEO_OUT") or "mmsgeo-out"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mmsgeo",
        description="Boundary measures on sampled metric measure spaces")
    sub = parser.add_subparsers(dest="task")
    for name in TASK_FUNCS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("verify")
    p.add_argument("--space", required=True,
                   help="config file whose [space] section to verify")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("repro")
    p.add_argument("--suite", default="all")
    p.add_argument("--list-suites", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    if args.task is None:
        parser.print_help()
        return 3

    try:
        parallel.set_workers(getattr(args, "workers", 1))
        if args.task == "repro" and args.list_suites:
            for name in SUITES:
                print(name)
            return 0
        outdir = _default_out(args)
        os.makedirs(outdir, exist_ok=True)
        if args.task == "verify":
            cfg = load_config(args.space)
            space = build_space(cfg.get("space", {}))
            rep = verify_space(space, args.level)
            write_report(rep, outdir, "verify")
            record_passed = rep.passed
            for v in rep.verdicts:
                print("%-48s %s" % (v.name,
                                    "pass" if v.passed else "FAIL"))
        elif args.task == "repro":
            record = run_repro(args.suite, outdir)
            record_passed = record.passed
            for v in record.verdicts:
                print("%-48s %s" % (v["name"],
                                    "pass" if v["passed"] else "FAIL"))
        else:
            cfg = load_config(args.config)
            record = run_config(cfg, outdir, task_name=args.task)
            record_passed = record.passed
            for v in record.verdicts:
                print("%-48s %s" % (v["name"],
                                    "pass" if v["passed"] else "FAIL"))
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 3
    except (ValueError, RuntimeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 4
    return 0 if record_passed else 2


if __name__ == "__main__":
    sys.exit(main())
