"""Batch front end: ``latvortex run <config>`` and ``latvortex verify <config>``.

The config is a single JSON object. Unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import calculus, diagnostics, oracles
from .abelian_higgs import sandwich_violation, solve_ah, uniqueness_probe
from .calculus import LatticeField
from .chern_simons import check_comparison, solve_cs_exhaustion, solve_cs_on_domain
from .exceptions import InvalidInputError, LatVortexError
from .iteration import DomainSolution
from .lattice import box_domain
from .linear import ScreenedSystem, solve_screened
from .models import ABELIAN_HIGGS, CHERN_SIMONS, SolverParams, VortexConfig

REPORT_SCHEMA_VERSION = "1.0"
MODELS = (CHERN_SIMONS, ABELIAN_HIGGS, "both")


class ConfigError(InvalidInputError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class DecaySettings:
    annulus: tuple[float, float] = (0.25, 0.75)
    value_floor: float = 1e-12
    epsilon_accept: float = 0.2


@dataclass
class RunConfig:
    model: str
    dim: int
    lam: float
    vortices: list = field(default_factory=list)
    K_cs: float | None = None
    K_ah: float | None = None
    schedule: tuple[int, ...] = (10, 20, 40)
    tol_outer: float = 1e-9
    tol_linear: float = 1e-11
    max_outer_iter: int = 10_000
    max_cg_iter: int = 10_000
    decay: DecaySettings = field(default_factory=DecaySettings)
    seed: int = 0
    output_dir: str = "latvortex_out"

    KEYS = ("model", "dim", "lambda", "vortices", "K_cs", "K_ah", "schedule", "tol_outer", "tol_linear",
            "max_outer_iter", "max_cg_iter", "decay", "seed", "output_dir")
    REQUIRED = ("model", "dim", "lambda", "vortices")

    @property
    def vortex_config(self) -> VortexConfig:
        return VortexConfig(self.dim, self.lam, tuple((tuple(v["coords"]), v["multiplicity"]) for v in self.vortices))

    def cs_params(self) -> SolverParams:
        return SolverParams(K=self.K_cs, tol_outer=self.tol_outer, tol_linear=self.tol_linear,
                            max_outer_iter=self.max_outer_iter, max_cg_iter=self.max_cg_iter)

    def ah_params(self) -> SolverParams:
        return SolverParams(K=self.K_ah, tol_outer=self.tol_outer, tol_linear=self.tol_linear,
                            max_outer_iter=self.max_outer_iter, max_cg_iter=self.max_cg_iter)

    def echo(self) -> dict:
        return {
            "model": self.model,
            "dim": self.dim,
            "lambda": self.lam,
            "vortices": [{"coords": list(v["coords"]), "multiplicity": v["multiplicity"]} for v in self.vortices],
            "K_cs": self.K_cs,
            "K_ah": self.K_ah,
            "schedule": list(self.schedule),
            "tol_outer": self.tol_outer,
            "tol_linear": self.tol_linear,
            "max_outer_iter": self.max_outer_iter,
            "max_cg_iter": self.max_cg_iter,
            "decay": {
                "annulus": list(self.decay.annulus),
                "value_floor": self.decay.value_floor,
                "epsilon_accept": self.decay.epsilon_accept,
            },
            "seed": self.seed,
        }


def _number(name, value, *, positive=True, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(name, "must be finite")
    if integer and int(value) != value:
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(name, f"must be positive, got {value!r}")
    return int(value) if integer else float(value)


def parse_config(data: dict) -> RunConfig:
    """Validate a decoded config object against every solver precondition."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    unknown = sorted(set(data) - set(RunConfig.KEYS))
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    for key in RunConfig.REQUIRED:
        if key not in data:
            raise ConfigError(key, "missing required key")

    model = data["model"]
    if model not in MODELS:
        raise ConfigError("model", f"must be one of {MODELS}, got {model!r}")
    dim = _number("dim", data["dim"], integer=True)
    if dim < 2:
        raise ConfigError("dim", f"must be >= 2, got {dim}")
    lam = _number("lambda", data["lambda"])

    vortices = []
    raw_v = data["vortices"]
    if not isinstance(raw_v, list):
        raise ConfigError("vortices", "must be a list")
    for i, v in enumerate(raw_v):
        name = f"vortices[{i}]"
        if not isinstance(v, dict) or set(v) != {"coords", "multiplicity"}:
            raise ConfigError(name, "each vortex is an object with exactly 'coords' and 'multiplicity'")
        coords = v["coords"]
        if not isinstance(coords, list) or len(coords) != dim or any(
            isinstance(c, bool) or not isinstance(c, int) for c in coords
        ):
            raise ConfigError(f"{name}.coords", f"expected {dim} integers, got {coords!r}")
        mult = _number(f"{name}.multiplicity", v["multiplicity"], integer=True)
        vortices.append({"coords": tuple(coords), "multiplicity": mult})
    if len({v["coords"] for v in vortices}) != len(vortices):
        raise ConfigError("vortices", "vortex points must be distinct")

    cfg = RunConfig(model=model, dim=dim, lam=lam, vortices=vortices)
    if data.get("K_cs") is not None:
        cfg.K_cs = _number("K_cs", data["K_cs"])
        if not cfg.K_cs > 2 * lam:
            raise ConfigError("K_cs", f"must exceed 2*lambda = {2 * lam:g}, got {cfg.K_cs:g}")
    if data.get("K_ah") is not None:
        cfg.K_ah = _number("K_ah", data["K_ah"])
        if not cfg.K_ah > lam:
            raise ConfigError("K_ah", f"must exceed lambda = {lam:g}, got {cfg.K_ah:g}")
    if "schedule" in data:
        sched = data["schedule"]
        if not isinstance(sched, list) or not sched:
            raise ConfigError("schedule", "must be a nonempty list of half-widths")
        cfg.schedule = tuple(_number(f"schedule[{i}]", L, integer=True) for i, L in enumerate(sched))
        if any(b <= a for a, b in zip(cfg.schedule, cfg.schedule[1:])):
            raise ConfigError("schedule", "must be strictly increasing")
    for key in ("tol_outer", "tol_linear"):
        if key in data:
            setattr(cfg, key, _number(key, data[key]))
    if cfg.tol_linear * 100 > cfg.tol_outer * (1 + 1e-12):
        raise ConfigError("tol_linear", "must be at least 100 times tighter than tol_outer")
    for key in ("max_outer_iter", "max_cg_iter"):
        if key in data:
            setattr(cfg, key, _number(key, data[key], integer=True))
    if "seed" in data:
        cfg.seed = _number("seed", data["seed"], positive=False, integer=True)
    if "output_dir" in data:
        if not isinstance(data["output_dir"], str) or not data["output_dir"]:
            raise ConfigError("output_dir", "must be a nonempty string")
        cfg.output_dir = data["output_dir"]
    if "decay" in data:
        dec = data["decay"]
        if not isinstance(dec, dict):
            raise ConfigError("decay", "must be an object")
        extra = sorted(set(dec) - {"annulus", "value_floor", "epsilon_accept"})
        if extra:
            raise ConfigError(f"decay.{extra[0]}", "unknown key")
        if "annulus" in dec:
            ann = dec["annulus"]
            if not isinstance(ann, list) or len(ann) != 2:
                raise ConfigError("decay.annulus", "expected [lo_fraction, hi_fraction]")
            lo = _number("decay.annulus[0]", ann[0])
            hi = _number("decay.annulus[1]", ann[1])
            if not lo < hi < 1:
                raise ConfigError("decay.annulus", "need 0 < lo < hi < 1")
            cfg.decay.annulus = (lo, hi)
        if "value_floor" in dec:
            cfg.decay.value_floor = _number("decay.value_floor", dec["value_floor"])
        if "epsilon_accept" in dec:
            eps = _number("decay.epsilon_accept", dec["epsilon_accept"])
            if not eps < 1:
                raise ConfigError("decay.epsilon_accept", "must lie in (0, 1)")
            cfg.decay.epsilon_accept = eps

    vc = cfg.vortex_config
    for p, _ in vc.vortices:
        if max(abs(c) for c in p) > cfg.schedule[0]:
            raise ConfigError("vortices", f"vortex {p} lies outside the smallest box (half-width {cfg.schedule[0]})")
    if model == "both" or model == CHERN_SIMONS:
        cfg.cs_params().resolve_K(lam, CHERN_SIMONS)
    if model != CHERN_SIMONS:
        cfg.ah_params().resolve_K(lam, ABELIAN_HIGGS)
    return cfg


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON: {exc}") from exc
    return parse_config(data)


def _fmt(x: float) -> str:
    # +0.0 folds negative zero; repr-free formatting is locale independent
    return format(float(x) + 0.0, ".17g")


def field_dump(u: LatticeField) -> str:
    dom = u.domain
    header = [f"x_{i + 1}" for i in range(dom.dim)] + ["d", "u"]
    lines = [",".join(header)]
    d = dom.l1_norms()
    for v, dist, val in zip(dom.closure, d, u.values):
        lines.append(",".join([*(str(c) for c in v), str(int(dist)), _fmt(val)]))
    return "\n".join(lines) + "\n"


def series_dump(u: LatticeField) -> str:
    dom = u.domain
    d = dom.l1_norms()[dom.interior_in_closure]
    vals = u.interior
    lines = ["d,log_abs_u"]
    for dist, val in zip(d, vals):
        if val != 0.0:
            lines.append(f"{int(dist)},{_fmt(math.log(abs(val)))}")
    return "\n".join(lines) + "\n"


def _json_safe(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _solution_checks(sol: DomainSolution, slack_energy_rel=1e-8) -> dict:
    F = np.asarray(sol.energy_trace)
    margins = sol.energy_gap_margins()
    allowed = slack_energy_rel * (1 + np.abs(F[:-1]))
    C = sol.total_mass
    rec = sol.to_record()
    rec.update(
        {
            "tail_sum": sol.tail_sum,
            "monotone_descent": bool(max(sol.max_increase_trace, default=0.0) <= sol.slack),
            "max_step_increase": max(sol.max_increase_trace, default=0.0),
            "energy_descent": bool(np.all(margins >= -allowed)),
            "min_energy_gap_margin": float(margins.min()) if margins.size else 0.0,
            "flux_identity": bool(sol.flux_gap <= 1e-6 * (1 + C)),
        }
    )
    if sol.model == CHERN_SIMONS:
        rec["tail_bound_ok"] = bool(sol.tail_sum <= C / sol.lam + 1e-6)
    return rec


def _decay_record(sol: DomainSolution, cfg: RunConfig) -> dict:
    dom = sol.domain
    annulus = (dom.half_width * cfg.decay.annulus[0], dom.half_width * cfg.decay.annulus[1])
    try:
        fit = diagnostics.fit_decay_rate(sol.u, cfg.vortex_config, annulus=annulus,
                                         value_floor=cfg.decay.value_floor)
    except LatVortexError as exc:
        return {"status": "skipped", "reason": str(exc), "half_width": dom.half_width}
    rec = fit.to_record()
    rec.update({"status": "ok", "half_width": dom.half_width,
                "passes": fit.passes(cfg.decay.epsilon_accept), "epsilon_accept": cfg.decay.epsilon_accept})
    return rec


class StageError(Exception):
    def __init__(self, stage, exc):
        super().__init__(str(exc))
        self.stage = stage
        self.exc = exc


def run(cfg: RunConfig, output_dir: Path | None = None, *, quiet: bool = False) -> dict:
    out = Path(cfg.output_dir if output_dir is None else output_dir)
    out.mkdir(parents=True, exist_ok=True)
    vc = cfg.vortex_config
    timings = {}
    log = (lambda *a: None) if quiet else (lambda *a: print(*a, file=sys.stderr))
    do_cs = cfg.model in (CHERN_SIMONS, "both")
    do_ah = cfg.model in (ABELIAN_HIGGS, "both")
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": cfg.echo(),
        "trivial": len(vc.vortices) == 0,
        "total_mass": vc.total_mass,
        "decay_rate_theory": vc.decay_rate,
    }

    stage = "chern_simons"
    t0 = time.perf_counter()
    try:
        if len(cfg.schedule) >= 2:
            exh = solve_cs_exhaustion(vc, cfg.schedule, cfg.cs_params())
            cs_solutions = exh.solutions
        else:
            exh = None
            cs_solutions = [solve_cs_on_domain(vc, box_domain((0,) * cfg.dim, cfg.schedule[0]), cfg.cs_params())]
    except LatVortexError as exc:
        raise StageError(stage, exc) from exc
    timings[stage] = time.perf_counter() - t0
    log(f"chern_simons: solved {len(cs_solutions)} domains")

    if do_cs:
        cs_rec = {"domains": [_solution_checks(s) for s in cs_solutions]}
        if exh is not None:
            cs_rec["exhaustion"] = exh.to_record()
            comparisons = []
            for small, big in zip(cs_solutions, cs_solutions[1:]):
                res = check_comparison(big.u.restrict(small.domain), small, vc, slack=exh.slack)
                comparisons.append({"inner": small.domain.half_width, "outer": big.domain.half_width,
                                    "holds": res.holds, "max_violation": res.max_violation})
            cs_rec["comparison_checks"] = comparisons
        cs_rec["decay_fit"] = _decay_record(cs_solutions[-1], cfg)
        report[CHERN_SIMONS] = cs_rec
        for s in cs_solutions:
            (out / f"field_{CHERN_SIMONS}_L{s.domain.half_width:03d}.csv").write_text(field_dump(s.u), encoding="utf-8")
        (out / f"series_{CHERN_SIMONS}.csv").write_text(series_dump(cs_solutions[-1].u), encoding="utf-8")

    if do_ah:
        stage = "abelian_higgs"
        t0 = time.perf_counter()
        ah_solutions = []
        try:
            for cs in cs_solutions:
                ah_solutions.append(solve_ah(vc, cs.domain, cfg.ah_params(), cs))
        except LatVortexError as exc:
            raise StageError(stage, exc) from exc
        timings[stage] = time.perf_counter() - t0
        log(f"abelian_higgs: solved {len(ah_solutions)} domains")
        slack = 10 * cfg.tol_linear + 10 * cfg.tol_outer
        domains = []
        for ah, cs in zip(ah_solutions, cs_solutions):
            rec = _solution_checks(ah)
            viol = sandwich_violation(ah, cs)
            rec["sandwich_violation"] = viol
            rec["sandwich"] = bool(viol <= slack)
            domains.append(rec)
        ah_rec = {"domains": domains, "sandwich_verdict": all(d["sandwich"] for d in domains)}
        smallest = ah_solutions[0].domain
        ah_rec["sup_diffs_on_smallest"] = [
            float(np.max(np.abs(a.u.restrict(smallest).interior - b.u.restrict(smallest).interior)))
            for a, b in zip(ah_solutions, ah_solutions[1:])
        ]
        stage = "uniqueness_probe"
        try:
            probe_sol = ah_solutions[0]
            dists = uniqueness_probe(probe_sol, vc, [0.5 * probe_sol.u.interior, cs_solutions[0].u.interior])
        except LatVortexError as exc:
            raise StageError(stage, exc) from exc
        ah_rec["uniqueness_probe"] = {"half_width": probe_sol.domain.half_width, "sup_distances": dists,
                                      "passes": bool(max(dists) <= 1e-8)}
        ah_rec["decay_fit"] = _decay_record(ah_solutions[-1], cfg)
        report[ABELIAN_HIGGS] = ah_rec
        for s in ah_solutions:
            (out / f"field_{ABELIAN_HIGGS}_L{s.domain.half_width:03d}.csv").write_text(field_dump(s.u), encoding="utf-8")
        (out / f"series_{ABELIAN_HIGGS}.csv").write_text(series_dump(ah_solutions[-1].u), encoding="utf-8")

    (out / "report.json").write_text(dumps_json(report), encoding="utf-8")
    # wall-clock numbers vary run to run, so they stay out of report.json
    (out / "timings.json").write_text(dumps_json({"seconds": timings}), encoding="utf-8")
    return report


# --------------------------------------------------------------------------- verify battery


def _check_green_identity(cfg, rng):
    dom = box_domain((0,) * cfg.dim, 4)
    worst = 0.0
    for _ in range(100):
        f = LatticeField(dom, rng.standard_normal(len(dom.closure)))
        g = LatticeField(dom, rng.standard_normal(len(dom.closure)))
        gap, lhs = calculus.green_identity_gap(f, g)
        worst = max(worst, gap / (1 + abs(lhs)))
    return worst <= 1e-10, f"max relative gap {worst:.2e} over 100 pairs"


def _check_max_principle(cfg, rng):
    dom = box_domain((0,) * cfg.dim, 2)
    counts = diagnostics.max_principle_trials(dom, 1000, rng)
    ok = counts[diagnostics.ProbeOutcome.PASS] == 1000
    return ok, ", ".join(f"{k.value}={v}" for k, v in counts.items())


def _check_barrier(cfg, rng):
    vc = VortexConfig(cfg.dim, cfg.lam)
    eps_grid = (0.01, 0.1, 0.5, 0.9)
    reports = [diagnostics.barrier_check(vc, eps, (1, 40 if cfg.dim == 2 else 20)) for eps in eps_grid]
    worst = min(r.min_margin for r in reports)
    return all(r.holds for r in reports), f"min margin {worst:.3e} over eps {eps_grid}"


def _check_isoperimetric(cfg, rng):
    n = cfg.dim
    exact = all(
        diagnostics.isoperimetric_ratio(box_domain((0,) * n, L).vertices, n) == 2 * n * 1.0
        for L in range(1, 4 if n > 2 else 8)
    )
    ratios = [diagnostics.isoperimetric_ratio(diagnostics.random_connected_cluster(int(rng.integers(1, 201)), n, rng), n)
              for _ in range(500)]
    return exact and min(ratios) > 0, f"cube ratio exact={exact}, min cluster ratio {min(ratios):.4f}"


def _check_gns(cfg, rng):
    n = cfg.dim
    worst_scale = 0.0
    running = 0.0
    for _ in range(1000):
        v = diagnostics.random_sparse_field(n, rng)
        r = diagnostics.gns_ratio(v, n)
        c = float(rng.choice([-1, 1]) * 10 ** rng.uniform(-3, 3))
        r2 = diagnostics.gns_ratio({k: c * x for k, x in v.items()}, n)
        worst_scale = max(worst_scale, abs(r2 - r) / r)
        running = max(running, r)
    delta = diagnostics.gns_ratio({(0,) * n: 1.0}, n)
    ok = worst_scale <= 1e-12 and abs(delta - (4 * n) ** -0.25) <= 1e-14 and math.isfinite(running)
    return ok, f"scale drift {worst_scale:.1e}, empirical constant {running:.4f}"


def _check_screened_oracle(cfg, rng):
    dom = box_domain((0,) * cfg.dim, 2)
    rhs = rng.standard_normal(len(dom.vertices))
    u = solve_screened(ScreenedSystem(dom, 3.0, rhs), 1e-13).interior
    ref = oracles.dense_screened_solve(list(dom.vertices), 3.0, rhs)
    err = float(np.max(np.abs(u - ref)))
    return err <= 1e-10, f"sup error {err:.2e}"


def _check_cs_oracle(cfg, rng):
    vc = VortexConfig.single(cfg.dim, cfg.lam)
    worst = 0.0
    for L in ((2, 3) if cfg.dim == 2 else (1, 2)):
        dom = box_domain((0,) * cfg.dim, L)
        sol = solve_cs_on_domain(vc, dom, SolverParams(tol_outer=1e-12, tol_linear=1e-14))
        ref = oracles.dense_newton(list(dom.vertices), cfg.lam, vc.vortices, "cs")
        worst = max(worst, float(np.max(np.abs(sol.u.interior - ref))))
    return worst <= 1e-8, f"sup error {worst:.2e}"


def _check_ah_oracle(cfg, rng):
    vc = VortexConfig.single(cfg.dim, cfg.lam)
    dom = box_domain((0,) * cfg.dim, 2)
    params = SolverParams(tol_outer=1e-12, tol_linear=1e-14)
    cs = solve_cs_on_domain(vc, dom, params)
    ah = solve_ah(vc, dom, params, cs)
    ref = oracles.dense_newton(list(dom.vertices), cfg.lam, vc.vortices, "ah")
    err = float(np.max(np.abs(ah.u.interior - ref)))
    viol = sandwich_violation(ah, cs)
    dists = uniqueness_probe(ah, vc, [0.5 * ah.u.interior, cs.u.interior])
    ok = err <= 1e-8 and viol <= 1e-9 and max(dists) <= 1e-8
    return ok, f"sup error {err:.2e}, sandwich violation {viol:.1e}, uniqueness {max(dists):.1e}"


BATTERY = (
    ("green_identity", _check_green_identity),
    ("maximum_principle", _check_max_principle),
    ("barrier_inequality", _check_barrier),
    ("isoperimetric", _check_isoperimetric),
    ("gns_scale_invariance", _check_gns),
    ("screened_solver_oracle", _check_screened_oracle),
    ("chern_simons_oracle", _check_cs_oracle),
    ("abelian_higgs_oracle", _check_ah_oracle),
)


def verify(cfg: RunConfig) -> list[tuple[str, bool, str]]:
    """Run the diagnostics battery; each check gets its own seeded generator."""
    results = []
    for i, (name, check) in enumerate(BATTERY):
        rng = np.random.default_rng([cfg.seed, i])
        try:
            ok, detail = check(cfg, rng)
        except LatVortexError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results


# --------------------------------------------------------------------------- entry point


def _write_error(out: Path | None, record: dict) -> None:
    text = dumps_json(record)
    print(text, file=sys.stderr, end="")
    if out is not None:
        try:
            out.mkdir(parents=True, exist_ok=True)
            (out / "error.json").write_text(text, encoding="utf-8")
        except OSError:
            pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latvortex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "solve and write field dumps and a report"),
                            ("verify", "run the diagnostics battery")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to the JSON run configuration")
        p.add_argument("--output-dir", default=None, help="override output_dir from the config")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.output_dir) if args.output_dir else None
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        _write_error(out, {"stage": "validation", "error": type(exc).__name__, "field": exc.field,
                           "message": str(exc)})
        return 2
    except LatVortexError as exc:
        _write_error(out, {"stage": "validation", "error": type(exc).__name__, "field": None,
                           "message": str(exc)})
        return 2
    out = Path(cfg.output_dir) if out is None else out

    if args.command == "verify":
        results = verify(cfg)
        if not args.quiet:
            width = max(len(n) for n, _, _ in results)
            for name, ok, detail in results:
                print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}")
        failed = [n for n, ok, _ in results if not ok]
        if failed:
            print(f"verify: failing property: {failed[0]}", file=sys.stderr)
            return 1
        return 0

    try:
        run(cfg, out, quiet=args.quiet)
    except StageError as exc:
        _write_error(out, {"stage": exc.stage, "error": type(exc.exc).__name__, "field": None,
                           "message": str(exc.exc)})
        return 1
    if not args.quiet:
        print(f"wrote results to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
