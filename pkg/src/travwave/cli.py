"""Command-line interface: ``travwave <command> [options]``.

Commands
--------
classify    wave classes on one level (``--h``) or on a grid (``--h-grid``)
profile     build a sampled profile and write it as CSV plus a JSON sidecar
verify      certify a profile (read from ``--profile`` or built on the fly)
table       energy table of a model (``--model``) or of a raw potential
sweep       classification over an energy grid with critical levels inserted
conjecture  peaked-solitary search over the generalized CH family

Configuration comes from ``--config`` (a JSON file or an inline JSON object)
and is overridden by flags.  Exit status: 0 success, 1 no waves found,
2 invalid input, 3 numeric failure (including a failed verification).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import models
from .classify import WaveClass, classify_level, critical_levels, report
from .potential import Potential, to_fraction
from .profile import CompositionSpec, ProfileError, build_profile, read_profile, write_profile
from .quad import BranchDomainError
from .verify import THRESHOLD, verify_profile

EXIT_OK, EXIT_EMPTY, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("classify", "profile", "verify", "table", "sweep", "conjecture")
MODEL_KEYS = {"ch": ("c", "kappa", "r"), "gch": ("a", "c", "kappa", "r"), "mase": ("c", "K")}


class ConfigError(ValueError):
    """Invalid job configuration; the message names the offending field."""


@dataclass
class JobConfig:
    command: str
    potential: Potential | None = None
    model: str | None = None
    params: dict = field(default_factory=dict)
    h: Fraction | str | None = None
    h_grid: tuple[float, float, int] | None = None
    out: Path | None = None
    tol: float = THRESHOLD
    seed: int = 42
    jobs: int | None = None
    tag: str | None = None
    profile: Path | None = None
    gap: float = 1.0
    direction: str = "rising"
    placements: tuple[float, ...] = (0.0, 2.0)
    grid: dict | None = None
    random_points: int = 0

    def validate(self) -> "JobConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown command {self.command!r}")
        if self.potential is not None and self.model is not None:
            raise ConfigError("coeffs/model: give exactly one of a potential and a model")
        needs_source = self.command in ("classify", "profile", "table", "sweep") or (
            self.command == "verify" and self.profile is None)
        if needs_source and self.potential is None and self.model is None:
            raise ConfigError("coeffs/model: a potential or model is required")
        if self.model is not None and self.model not in MODEL_KEYS:
            raise ConfigError(f"model: expected one of {sorted(MODEL_KEYS)}, got {self.model!r}")
        if not self.tol > 0:
            raise ConfigError("tol: must be positive")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError("jobs: must be >= 1")
        if self.h_grid is not None and self.h_grid[2] < 1:
            raise ConfigError("h_grid: needs at least one point")
        return self

    def resolve_potential(self) -> Potential:
        if self.potential is not None:
            return self.potential
        return model_reduction(self.model, self.params).potential


def model_params(model: str, params: dict):
    keys = MODEL_KEYS[model]
    missing = [k for k in keys if k not in params and not (k in ("kappa", "r"))]
    if missing:
        raise ConfigError(f"{missing[0]}: required for model {model}")
    vals = {k: to_fraction(params.get(k, 0)) for k in keys}
    cls = {"ch": models.CHParams, "gch": models.GCHParams, "mase": models.MASEParams}[model]
    return cls(**vals)


def model_reduction(model: str, params: dict) -> models.Reduction:
    p = model_params(model, params)
    if model == "ch":
        return models.ch_reduction(p)
    if model == "gch":
        return models.gch_reduction(p)
    return models.Reduction(models.mase_reduce(p), False, "mase", p)


# --- parsing ------------------------------------------------------------------


def _parse_coeffs(text) -> Potential:
    if isinstance(text, str):
        parts = [x for x in text.replace(" ", "").split(",") if x]
    else:
        parts = list(text)
    try:
        return Potential([to_fraction(x) for x in parts])
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"coeffs: {exc}") from None


def _parse_h(text):
    if text is None:
        return None
    if isinstance(text, str) and text.strip().lower() == "h0":
        return "h0"
    try:
        return to_fraction(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ConfigError(f"h: cannot parse {text!r}") from None


def _parse_grid(text):
    if text is None:
        return None
    try:
        if isinstance(text, str):
            lo, hi, n = text.split(":")
        else:
            lo, hi, n = text
        return float(lo), float(hi), int(n)
    except (ValueError, TypeError):
        raise ConfigError(f"h_grid: expected lo:hi:n, got {text!r}") from None


def _load_config(arg) -> dict:
    if arg is None:
        return {}
    text = arg
    if not arg.lstrip().startswith("{"):
        path = Path(arg)
        if not path.exists():
            raise ConfigError(f"config: file not found: {arg}")
        text = path.read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ConfigError("config: top level must be a JSON object")
    return obj


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file or inline JSON object with job settings")
    common.add_argument("--coeffs", help='potential coefficients c0,c1,... (e.g. "0,-1,1")')
    common.add_argument("--model", choices=sorted(MODEL_KEYS), help="model reduction instead of --coeffs")
    common.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="model parameter, repeatable (e.g. --param c=-1)")
    common.add_argument("--h", help='energy level (number, fraction "a/b", or "h0")')
    common.add_argument("--h-grid", dest="h_grid", help="energy grid lo:hi:n")
    common.add_argument("--out", help="output directory (default $TRAVWAVE_OUT, else stdout only)")
    common.add_argument("--tol", type=float, help="verification threshold")
    common.add_argument("--seed", type=int, help="seed for randomized parts (default 42)")
    common.add_argument("--jobs", type=int, help="worker processes for sweep/table (default: all cores)")

    parser = argparse.ArgumentParser(prog="travwave", description="Bounded traveling waves of u u'' + u'^2/2 + F'(u) = 0.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="wave classes on an energy level")
    p = sub.add_parser("profile", parents=[common], help="build a profile CSV")
    p.add_argument("--tag", help="wave class to build (default: first non-constant class)")
    p.add_argument("--gap", type=float, help="plateau length for plateau waves")
    p.add_argument("--direction", choices=("rising", "falling"), help="front orientation")
    v = sub.add_parser("verify", parents=[common], help="verify a profile")
    v.add_argument("--profile", help="profile CSV written by the profile command")
    v.add_argument("--tag", help="wave class to build when no --profile is given")
    sub.add_parser("table", parents=[common], help="energy classification table")
    sub.add_parser("sweep", parents=[common], help="classification over an energy grid")
    c = sub.add_parser("conjecture", parents=[common], help="generalized CH peaked-solitary scan")
    c.add_argument("--random-points", dest="random_points", type=int,
                   help="extra random grid points (a <= 0) drawn with --seed")
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    cfg = _load_config(args.config)
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "param")}
    merged = dict(cfg)
    merged.update(flags)
    params = {k: merged.pop(k) for k in list(merged) if k in ("a", "c", "kappa", "K", "r")}
    for item in args.param:
        if "=" not in item:
            raise ConfigError(f"param: expected KEY=VALUE, got {item!r}")
        k, val = item.split("=", 1)
        params[k.strip()] = val.strip()
    known = {"command", "coeffs", "model", "h", "h_grid", "out", "tol", "seed", "jobs", "tag", "profile",
             "gap", "direction", "placements", "grid", "random_points"}
    unknown = sorted(set(merged) - known)
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown field")
    out = merged.get("out") or os.environ.get("TRAVWAVE_OUT")
    try:
        job = JobConfig(
            command=merged["command"],
            potential=_parse_coeffs(merged["coeffs"]) if "coeffs" in merged else None,
            model=merged.get("model"),
            params=params,
            h=_parse_h(merged.get("h")),
            h_grid=_parse_grid(merged.get("h_grid")),
            out=Path(out) if out else None,
            tol=float(merged.get("tol", THRESHOLD)),
            seed=int(merged.get("seed", 42)),
            jobs=merged.get("jobs"),
            tag=merged.get("tag"),
            profile=Path(merged["profile"]) if merged.get("profile") else None,
            gap=float(merged.get("gap", 1.0)),
            direction=merged.get("direction", "rising"),
            placements=tuple(float(x) for x in merged.get("placements", (0.0, 2.0))),
            grid=merged.get("grid"),
            random_points=int(merged.get("random_points", 0)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"config: {exc}") from None
    return job.validate()


# --- commands -----------------------------------------------------------------


def _level(F: Potential, h):
    if h is None:
        raise ConfigError("h: an energy level is required")
    return F.exact[0] if h == "h0" else h


def _energies(F: Potential, job: JobConfig) -> list:
    if job.h_grid is not None:
        lo, hi, n = job.h_grid
        return [float(x) for x in np.linspace(lo, hi, n)]
    return [_level(F, job.h)]


def _classify_cell(args):
    coeffs, h = args
    F = Potential(coeffs)
    return report(h, classify_level(F, h))


def _map(fn, cells, jobs):
    if jobs == 1 or len(cells) < 2:
        return [fn(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, cells))


def cmd_classify(job: JobConfig) -> tuple[dict, int]:
    F = job.resolve_potential()
    levels = [report(h, classify_level(F, h)) for h in _energies(F, job)]
    found = any(lv["classes"] for lv in levels)
    return {"command": "classify", "potential": F.to_json(), "levels": levels}, EXIT_OK if found else EXIT_EMPTY


def cmd_sweep(job: JobConfig) -> tuple[dict, int]:
    F = job.resolve_potential()
    hs = _energies(F, job) if (job.h_grid or job.h is not None) else []
    hs = sorted(set(float(h) for h in hs) | set(critical_levels(F)))
    cells = [(F.exact, F.exact[0] if F.is_h0(h) else h) for h in hs]
    levels = _map(_classify_cell, cells, job.jobs or os.cpu_count() or 1)
    found = any(lv["classes"] for lv in levels)
    return {"command": "sweep", "potential": F.to_json(), "levels": levels}, EXIT_OK if found else EXIT_EMPTY


def _pick_class(F: Potential, h, tag: str | None) -> WaveClass:
    classes = classify_level(F, h)
    if tag is None:
        nontrivial = [c for c in classes if c.tag not in ("constant", "none-singular")]
        if not nontrivial:
            raise LookupError("no nonconstant wave on this level")
        return nontrivial[0]
    for c in classes:
        if c.tag == tag:
            return c
    raise LookupError(f"no {tag} wave on this level (found {[c.tag for c in classes]})")


def _build(job: JobConfig):
    F = job.resolve_potential()
    h = _level(F, job.h)
    wave = _pick_class(F, h, job.tag)
    spec = CompositionSpec(job.placements) if wave.tag == "composite-admissible" else None
    prof = build_profile(F, h, wave, spec=spec, gap=job.gap, direction=job.direction)
    return F, wave, prof


def cmd_profile(job: JobConfig) -> tuple[dict, int]:
    F, wave, prof = _build(job)
    rep = {"command": "profile", "potential": F.to_json(), "h": float(prof.energy), "tag": wave.tag,
           "class": wave.to_json(), "samples": len(prof.t), "domain": [float(prof.t[0]), float(prof.t[-1])],
           "singular_set": [{"t": sp.t, "kind": sp.kind} for sp in prof.singular_set]}
    if job.out is not None:
        job.out.mkdir(parents=True, exist_ok=True)
        csv_path, meta_path = write_profile(prof, job.out / f"profile_{wave.tag}.csv")
        rep["csv"] = csv_path.name
        rep["sidecar"] = meta_path.name
    return rep, EXIT_OK


def cmd_verify(job: JobConfig) -> tuple[dict, int]:
    if job.profile is not None:
        prof = read_profile(job.profile)
        tag = prof.tag
    else:
        _, wave, prof = _build(job)
        tag = wave.tag
    vr = verify_profile(prof, threshold=job.tol)
    rep = {"command": "verify", "tag": tag, "report": vr.to_json()}
    return rep, EXIT_OK if vr.verdict != "fail" else EXIT_NUMERIC


def cmd_table(job: JobConfig) -> tuple[dict, int]:
    if job.model is not None:
        red = model_reduction(job.model, job.params)
        F = red.potential
        extra = {"model": job.model, "flipped": red.flipped,
                 "params": {k: str(v) for k, v in vars(red.params).items()}}
        if job.model == "ch":
            extra["case"] = models.ch_case(F.exact[1], F.exact[2])
        elif job.model == "mase":
            extra["case"] = models.mase_case(red.params)
    else:
        F = job.potential
        extra = {}
    rows = models.energy_table(F)
    text = models.table_text(rows)
    rep = {"command": "table", "potential": F.to_json(), **extra, "rows": [r.to_json() for r in rows], "text": text}
    return rep, EXIT_OK if any(r.tags for r in rows) else EXIT_EMPTY


def cmd_conjecture(job: JobConfig) -> tuple[dict, int]:
    grid = dict(models.DEFAULT_GCH_GRID)
    grid.update(job.grid or {})
    points = [models.GCHParams(*x) for x in _product(grid)]
    if job.random_points:
        rng = np.random.default_rng(job.seed)
        for _ in range(job.random_points):
            a, c, k, r = rng.integers(-5, 6, size=4)
            points.append(models.GCHParams(-abs(int(a)), int(c), int(k), int(r)))
    res = models.gch_conjecture_scan(points=points)
    return {"command": "conjecture", "seed": job.seed, **res.to_json()}, EXIT_OK


def _product(grid: dict):
    import itertools
    return itertools.product(grid["a"], grid["c"], grid["kappa"], grid["r"])


DISPATCH = {"classify": cmd_classify, "profile": cmd_profile, "verify": cmd_verify,
            "table": cmd_table, "sweep": cmd_sweep, "conjecture": cmd_conjecture}


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, non-finite values as strings."""
    def clean(x):
        if isinstance(x, dict):
            return {str(k): clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        if isinstance(x, Fraction):
            return float(x)
        if isinstance(x, (np.floating, float)):
            x = float(x)
            return x if math.isfinite(x) else str(x)
        if isinstance(x, np.integer):
            return int(x)
        if isinstance(x, np.bool_):
            return bool(x)
        return x
    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


def run(job: JobConfig, stream=None) -> int:
    """Execute a validated job; returns the exit status."""
    stream = stream if stream is not None else sys.stdout
    try:
        rep, status = DISPATCH[job.command](job)
    except (ConfigError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID if isinstance(exc, ConfigError) else EXIT_EMPTY
    except (ProfileError, BranchDomainError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = dumps(rep)
    if job.out is not None:
        job.out.mkdir(parents=True, exist_ok=True)
        (job.out / f"report_{job.command}.json").write_text(text)
    stream.write(text)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        job = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
