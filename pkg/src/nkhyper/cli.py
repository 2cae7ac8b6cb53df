"""Command-line entry point: identity suites, catalog surfaces and obstruction cases.

Every command writes one JSON report (stdout or ``--out``) and exits with
0 when all checks pass, 1 when any check fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time

import numpy as np

from . import __version__, catalog, hypersurface, obstructions, s3s3, s6
from .checks import Check
from .quat import DomainError
from .riemann import FD_STEP, FD_STEP_CURVATURE

DEFAULTS = {
    "ambient": "s3s3",
    "name": None,
    "case": None,
    "samples": None,
    "seed": 0,
    "fd_step": FD_STEP,
    "fd_step2": FD_STEP_CURVATURE,
    "tol": {},
    "grid": 100,
    "refine": 50,
    "workers": None,
    "out": None,
}
DEFAULT_SAMPLES = {"identities": 1000, "surface": 100}

SURFACE_TOL = {
    "commuting": 1e-5,
    "codazzi": 1e-3,
    "hopf_lemma": 1e-3,
    "totally_geodesic": 1e-6,
    "anticommuting": 1e-6,
    "umbilical": 1e-4,
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialisation


def _encode(obj) -> str:
    """JSON with floats at 17 significant digits and keys in insertion order."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return '"nan"'
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        text = format(v, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(report: dict) -> str:
    return _encode(report) + "\n"


# ---------------------------------------------------------------------------
# configuration


def _parse_tol(items):
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise UsageError(f"bad tolerance value in {item!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file mirroring the flags; flags take precedence")
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--fd-step", type=float, default=None, dest="fd_step")
    common.add_argument("--fd-step2", type=float, default=None, dest="fd_step2")
    common.add_argument("--tol", action="append", default=None, metavar="NAME=VALUE",
                        help="override a check threshold; repeatable")
    common.add_argument("--grid", type=int, default=None)
    common.add_argument("--refine", type=int, default=None)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="nkhyper", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nkhyper {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("identities", parents=[common], help="ambient structure identities")
    p.add_argument("--ambient", choices=("s3s3", "s6"), default=None)
    p = sub.add_parser("surface", parents=[common], help="catalog hypersurface analysis")
    p.add_argument("--name", default=None, help="f1 | f2 | f3 | equator | sphere:<r>")
    p = sub.add_parser("obstruction", parents=[common], help="infeasibility margin of a case")
    p.add_argument("--case", default=None, choices=obstructions.CASE_IDS)
    return parser


def resolve_config(args) -> dict:
    cfg = dict(DEFAULTS)
    cfg["samples"] = DEFAULT_SAMPLES.get(args.command)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise UsageError(f"unknown config key {key!r}")
            cfg[key] = value
    cfg["tol"] = dict(cfg["tol"] or {})
    for key in DEFAULTS:
        if key == "tol":
            cfg["tol"].update(_parse_tol(getattr(args, "tol", None)))
            continue
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    _validate(cfg, args.command)
    return {"command": args.command, **cfg}


def _validate(cfg, command):
    if cfg["samples"] is not None and (not isinstance(cfg["samples"], int) or cfg["samples"] < 1):
        raise UsageError("--samples must be a positive integer")
    if not isinstance(cfg["seed"], int) or not 0 <= cfg["seed"] < 2**64:
        raise UsageError("--seed must be a 64-bit nonnegative integer")
    for key in ("fd_step", "fd_step2"):
        if not cfg[key] > 0:
            raise UsageError(f"--{key.replace('_', '-')} must be positive")
    for name, value in cfg["tol"].items():
        if not value > 0:
            raise UsageError(f"tolerance {name} must be positive")
    if cfg["grid"] < 2 or cfg["refine"] < 0:
        raise UsageError("--grid must be at least 2 and --refine nonnegative")
    if cfg["workers"] is not None and cfg["workers"] < 1:
        raise UsageError("--workers must be positive")
    if command == "identities" and cfg["ambient"] not in ("s3s3", "s6"):
        raise UsageError("--ambient must be s3s3 or s6")
    if command == "surface" and not cfg["name"]:
        raise UsageError("surface needs --name")
    if command == "obstruction" and cfg["case"] not in obstructions.CASE_IDS:
        raise UsageError(f"--case must be one of {', '.join(obstructions.CASE_IDS)}")


def _override(checks, tol):
    unknown = set(tol) - {c.name for c in checks}
    if unknown:
        raise UsageError(f"no check named {sorted(unknown)[0]!r}")
    out = []
    for c in checks:
        if c.name in tol:
            thr = tol[c.name]
            c = dataclasses.replace(c, threshold=thr, passed=bool(math.isfinite(c.max) and c.max <= thr))
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_identities(cfg) -> dict:
    if cfg["ambient"] == "s3s3":
        checks = s3s3.identity_suite(cfg["samples"], cfg["seed"], cfg["fd_step"], cfg["fd_step2"])
    else:
        checks = s6.identity_suite(cfg["samples"], cfg["seed"])
    checks = _override(checks, cfg["tol"])
    return {"checks": [c.as_dict() for c in checks], "pass": all(c.passed for c in checks)}


def _surface_record(smp, gen):
    x, y = gen.standard_normal(5), gen.standard_normal(5)
    x, y = x / np.linalg.norm(x), y / np.linalg.norm(y)
    comm, anti = hypersurface.commutator_norms(smp)
    rec = {
        "params": smp.params.tolist(),
        "commutator": comm,
        "anticommutator": anti,
        "hopf_defect": hypersurface.hopf_defect(smp),
        "codazzi": hypersurface.codazzi_residual(smp, x, y),
        "shape_norm": float(np.linalg.norm(smp.A_sym)),
    }
    vals = np.linalg.eigvalsh(smp.A_sym)
    rec["eigenvalue_spread"] = float(vals[-1] - vals[0])
    if rec["hopf_defect"] <= hypersurface.HOPF_TOL:
        xo, yo = hypersurface.orthogonal_to_U(smp, x), hypersurface.orthogonal_to_U(smp, y)
        rec["hopf_lemma"] = hypersurface.hopf_identity_residual(smp, xo, yo)
    else:
        rec["hopf_lemma"] = None
    if smp.ambient == "s3s3":
        try:
            d = hypersurface.distribution_D(smp)
            rec["dim_D"], rec["abc"] = d.dim, [d.a, d.b, d.c]
        except hypersurface.AmbiguityError:
            rec["dim_D"], rec["abc"] = None, None
    return rec


def cmd_surface(cfg) -> dict:
    try:
        entry = catalog.entry(cfg["name"])
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    tol = dict(SURFACE_TOL)
    unknown = set(cfg["tol"]) - set(tol)
    if unknown:
        raise UsageError(f"no check named {sorted(unknown)[0]!r}")
    tol.update(cfg["tol"])
    recs = hypersurface.sweep(
        entry.immersion, cfg["samples"], cfg["seed"], _surface_record,
        cfg["fd_step"], cfg["fd_step2"], cfg["workers"],
    )
    col = lambda k: [r[k] for r in recs if r.get(k) is not None]  # noqa: E731
    asserted = {
        "commuting": ("commutator", col("commutator")),
        "codazzi": ("codazzi", col("codazzi")),
        "hopf_lemma": ("hopf_lemma", col("hopf_lemma")),
        "totally_geodesic": ("shape_norm", col("shape_norm")),
        "anticommuting": ("anticommutator", col("anticommutator")),
        "umbilical": ("eigenvalue_spread", col("eigenvalue_spread")),
    }
    checks = []
    for tag in entry.tags:
        key, values = asserted[tag]
        if values:
            checks.append(Check.from_values(tag, values, tol[tag]))
    recorded = ["hopf_defect", "anticommutator", "commutator", "shape_norm"]
    if entry.immersion.ambient == "s3s3":
        dims = col("dim_D")
        if dims:
            checks.append(Check.from_values("dim_D", dims))
    used = {asserted[tag][0] for tag in entry.tags}
    for key in recorded:
        if key not in used:
            checks.append(Check.from_values(f"{key}_recorded", col(key)))
    return {
        "surface": entry.name,
        "ambient": entry.immersion.ambient,
        "tags": list(entry.tags),
        "checks": [c.as_dict() for c in checks],
        "samples": recs,
        "pass": all(c.passed for c in checks),
    }


def cmd_obstruction(cfg) -> dict:
    rep = obstructions.analyse(cfg["case"], cfg["grid"], cfg["refine"], cfg["workers"], cfg["seed"])
    body = rep.as_dict()
    return {"obstruction": body, "pass": rep.passed}


COMMANDS = {"identities": cmd_identities, "surface": cmd_surface, "obstruction": cmd_obstruction}


def run(argv=None) -> tuple[int, dict | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    try:
        cfg = resolve_config(args)
        start = time.perf_counter()
        body = COMMANDS[cfg["command"]](cfg)
    except UsageError as exc:
        print(f"nkhyper: error: {exc}", file=sys.stderr)
        return 2, None
    report = {
        "command": cfg["command"],
        "config": {k: v for k, v in cfg.items() if k != "command"},
        "version": __version__,
        **body,
        "wall_time": time.perf_counter() - start,
    }
    return (0 if report["pass"] else 1), report


def main(argv=None) -> int:
    code, report = run(argv)
    if report is not None:
        text = dumps(report)
        if report["config"]["out"]:
            with open(report["config"]["out"], "w", encoding="utf-8") as fh:
                fh.write(text)
            print(f"{report['command']}: {'pass' if report['pass'] else 'FAIL'}")
        else:
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
