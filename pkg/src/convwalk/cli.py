"""Command-line front end: walk | measure | geometry | selftest.

Every run takes a JSON configuration, writes its artifacts into one
output directory together with a manifest (config copy, tool version,
seed), and prints a short summary.  Outputs are deterministic for a
fixed (config, seed) regardless of the worker count.

Exit codes: 0 success, 2 configuration error, 3 I/O error,
4 computation error.  Errors are also emitted on stderr as one JSON
line with machine-readable fields.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__, annuli, circle, walks
from .group_models import (
    F2,
    PSL2Z,
    MODELS,
    BoundaryPoint,
    GroupElement,
    circle_point,
    f2_element,
    f2_point,
    psl2z_element,
    rational_point,
)
from .quasimetric import (
    estimate_hyperbolicity,
    loxodromic_displacement,
    pair_crossratio_to_point,
)
from .triple_space import Triple, basepoint

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_COMPUTE = 4


class ConfigError(ValueError):
    pass


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------

def _require(cfg: dict, allowed: set, required: set, where: str) -> None:
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} fields: {sorted(unknown)}")
    missing = required - set(cfg)
    if missing:
        raise ConfigError(f"missing {where} fields: {sorted(missing)}")


def parse_element(model: str, data) -> GroupElement:
    if model == F2:
        if not isinstance(data, str):
            raise ConfigError("an F2 element is a reduced word string")
        return f2_element(data)
    if not (isinstance(data, list) and len(data) == 4):
        raise ConfigError("a PSL2Z element is a 4-entry integer list")
    return psl2z_element(*data)


def parse_point(model: str, data) -> BoundaryPoint:
    if model == F2:
        _require(data, {"prefix", "block"}, {"block"}, "point")
        return f2_point(data.get("prefix", ""), data["block"])
    if "rational" in data:
        _require(data, {"rational"}, {"rational"}, "point")
        p, q = data["rational"]
        return rational_point(int(p), int(q))
    _require(data, {"angle"}, {"angle"}, "point")
    return circle_point(angle=float(data["angle"]))


def parse_triple(model: str, data) -> Triple:
    if data == "basepoint":
        return basepoint(model)
    if not (isinstance(data, list) and len(data) == 3):
        raise ConfigError("a triple is a 3-element list of points or 'basepoint'")
    return Triple(*(parse_point(model, d) for d in data))


def parse_mu(model: str, data) -> walks.StepDistribution:
    if data == "uniform":
        return walks.uniform_f2() if model == F2 else walks.uniform_psl2z()
    _require(data, {"support", "assume_generating"}, {"support"}, "mu")
    support = tuple((parse_element(model, g), float(p)) for g, p in data["support"])
    return walks.StepDistribution(support, assume_generating=bool(data.get("assume_generating", False)))


def parse_annulus(model: str, data) -> annuli.Annulus:
    if data in (None, "default"):
        return annuli.default_generator_annulus(model)
    _require(data, {"minus", "plus"}, {"minus", "plus"}, "annulus")
    from .group_models import ClosedSet

    if model == F2:
        return annuli.Annulus(ClosedSet(F2, cylinders=tuple(data["minus"])),
                              ClosedSet(F2, cylinders=tuple(data["plus"])))
    return annuli.Annulus(ClosedSet(PSL2Z, arcs=tuple(tuple(a) for a in data["minus"])),
                          ClosedSet(PSL2Z, arcs=tuple(tuple(a) for a in data["plus"])))


def _load_config(path: str) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _model_of(cfg: dict) -> str:
    model = cfg.get("model")
    if model not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}")
    return model


def _seed_of(cfg: dict, args) -> int:
    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is None:
        raise ConfigError("a seed is required (config 'seed' or --seed)")
    return int(seed)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _outdir(args, cfg) -> Path:
    out = args.out or cfg.get("out")
    if not out:
        raise ConfigError("an output directory is required (config 'out' or --out)")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_manifest(out: Path, command: str, cfg: dict, seed: int, workers: int) -> None:
    manifest = {"tool": "convwalk", "version": __version__, "command": command,
                "seed": seed, "workers": workers, "config": cfg}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)


def _write_summary(out: Path, data: dict) -> None:
    (out / "summary.json").write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

_WALK_FIELDS = {"model", "mu", "n", "trials", "seed", "depth", "bins", "basepoint", "out"}


def cmd_walk(cfg: dict, args) -> int:
    _require(cfg, _WALK_FIELDS, {"model", "mu", "n", "trials"}, "walk config")
    model = _model_of(cfg)
    seed = _seed_of(cfg, args)
    mu = parse_mu(model, cfg["mu"])
    n = int(cfg["n"])
    trials = int(cfg["trials"])
    depth = int(cfg.get("depth", 6 if model == F2 else 10))
    x = parse_triple(model, cfg.get("basepoint", "basepoint"))
    out = _outdir(args, cfg)
    _write_manifest(out, "walk", cfg, seed, args.workers)

    cum = mu.cumulative()
    rows = []
    inconclusive = 0
    for stream in range(trials):
        est = walks._limit_bin(mu, n, seed, stream, x, depth, cum)
        if est.conclusive:
            target = est.word if model == F2 else f"{est.level}:{est.bin_index}"
        else:
            target = ""
            inconclusive += 1
        rows.append((stream, int(est.conclusive), target))
    _write_csv(out / "limits.csv", ["path_index", "conclusive", "target"], rows)
    frac = inconclusive / trials
    _write_summary(out, {"trials": trials, "n": n, "inconclusive_fraction": frac})
    print(f"walk: {trials} paths of length {n}; inconclusive {frac:.2%}; "
          f"artifacts in {out}")
    return EXIT_OK


_MEASURE_FIELDS = {"model", "mu", "n", "trials", "seed", "depth", "bins", "basepoint",
                   "out", "stationarity", "sat", "finite_boundary", "ball_radius",
                   "annulus"}


def cmd_measure(cfg: dict, args) -> int:
    _require(cfg, _MEASURE_FIELDS, {"model", "mu", "n", "trials"}, "measure config")
    model = _model_of(cfg)
    seed = _seed_of(cfg, args)
    mu = parse_mu(model, cfg["mu"])
    out = _outdir(args, cfg)
    _write_manifest(out, "measure", cfg, seed, args.workers)

    nu = walks.estimate_hitting_measure(
        mu, trials=int(cfg["trials"]), n=int(cfg["n"]),
        depth=int(cfg["depth"]) if "depth" in cfg else None,
        bins=int(cfg["bins"]) if "bins" in cfg else None,
        seed=seed, x=parse_triple(model, cfg.get("basepoint", "basepoint")),
        workers=args.workers)
    rows = [(k, f"{v:.12g}") for k, v in sorted(nu.masses.items(), key=lambda kv: str(kv[0]))]
    _write_csv(out / "bins.csv", ["bin", "mass"], rows)
    summary = {"trials": nu.trials, "depth": nu.depth,
               "inconclusive_fraction": nu.inconclusive_fraction,
               "total_mass": nu.total()}

    if cfg.get("stationarity"):
        summary["stationarity_defect"] = walks.check_stationarity(nu, mu)
    if "sat" in cfg:
        sat = cfg["sat"]
        _require(sat, {"set", "eps", "radius"}, {"set", "eps", "radius"}, "sat config")
        witness = walks.sat_probe(tuple(sat["set"]), float(sat["eps"]),
                                  int(sat["radius"]), nu)
        summary["sat_witness"] = witness.word if witness else None
    if "finite_boundary" in cfg:
        fb = cfg["finite_boundary"]
        _require(fb, {"R", "ball_radius", "trials", "basepoint"}, {"R", "ball_radius"},
                 "finite_boundary config")
        sysm = annuli.build_system(model, int(fb["ball_radius"]),
                                   parse_annulus(model, cfg.get("annulus")))
        x = parse_triple(model, fb.get("basepoint", "basepoint"))
        rep = walks.estimate_finite_boundary_mass(
            mu, sysm, x, int(fb["R"]), int(fb.get("trials", cfg["trials"])),
            int(cfg["n"]), seed=seed)
        summary["finite_boundary"] = {
            "fraction": rep.fraction, "conclusive": rep.conclusive,
            "saturated": rep.saturated, "max_observed": rep.max_observed}
    _write_summary(out, summary)
    print(f"measure: {len(rows)} bins, total mass {nu.total():.6f}; artifacts in {out}")
    return EXIT_OK


_GEOMETRY_FIELDS = {"model", "task", "seed", "ball_radius", "annulus", "out",
                    "K", "L", "samples", "element", "n_max", "basepoint",
                    "a", "b", "p", "radii"}


def cmd_geometry(cfg: dict, args) -> int:
    _require(cfg, _GEOMETRY_FIELDS, {"model", "task"}, "geometry config")
    model = _model_of(cfg)
    task = cfg["task"]
    out = _outdir(args, cfg)
    generator = parse_annulus(model, cfg.get("annulus"))

    if task == "crossratio":
        _require(cfg, _GEOMETRY_FIELDS, {"model", "task", "K", "L", "ball_radius"},
                 "crossratio config")
        sysm = annuli.AnnulusSystem(model, generator, int(cfg["ball_radius"]))
        K = [parse_point(model, d) for d in cfg["K"]]
        L = [parse_point(model, d) for d in cfg["L"]]
        value = sysm.crossratio(K, L)
        _write_manifest(out, "geometry", cfg, int(cfg.get("seed", 0)), args.workers)
        _write_csv(out / "profile.csv", ["ball_radius", "value"],
                   [(cfg["ball_radius"], value)])
        _write_summary(out, {"task": task, "crossratio": value})
        print(f"crossratio: {value} (ball radius {cfg['ball_radius']})")
        return EXIT_OK

    if task == "hyperbolicity":
        _require(cfg, _GEOMETRY_FIELDS,
                 {"model", "task", "samples", "ball_radius"}, "hyperbolicity config")
        seed = _seed_of(cfg, args)
        samples = int(cfg["samples"])
        if samples < 100:
            raise ConfigError("hyperbolicity needs at least 100 samples")
        sysm = annuli.AnnulusSystem(model, generator, int(cfg["ball_radius"]))
        rep = estimate_hyperbolicity(samples, sysm, seed)
        _write_manifest(out, "geometry", cfg, seed, args.workers)
        _write_csv(out / "profile.csv", ["quantity", "value"],
                   [("triangle_defect", rep.triangle_defect),
                    ("delta_estimate", float(rep.delta_estimate))])
        _write_summary(out, {"task": task, "samples": samples, "seed": seed,
                             "triangle_defect": rep.triangle_defect,
                             "delta_estimate": float(rep.delta_estimate)})
        print(f"hyperbolicity: triangle defect {rep.triangle_defect}, "
              f"delta {float(rep.delta_estimate)}")
        return EXIT_OK

    if task == "loxodromic":
        _require(cfg, _GEOMETRY_FIELDS,
                 {"model", "task", "element", "n_max", "ball_radius"}, "loxodromic config")
        sysm = annuli.AnnulusSystem(model, generator, int(cfg["ball_radius"]))
        g = parse_element(model, cfg["element"])
        x = parse_triple(model, cfg.get("basepoint", "basepoint"))
        prof = loxodromic_displacement(g, x, int(cfg["n_max"]), sysm)
        _write_manifest(out, "geometry", cfg, int(cfg.get("seed", 0)), args.workers)
        _write_csv(out / "profile.csv", ["n", "value"], prof.entries)
        _write_summary(out, {"task": task, "flagged_non_hyperbolic": prof.flagged,
                             "profile": list(prof.entries)})
        print(f"loxodromic profile written ({len(prof.entries)} rows; "
              f"flagged={prof.flagged})")
        return EXIT_OK

    if task == "pair_profile":
        _require(cfg, _GEOMETRY_FIELDS,
                 {"model", "task", "a", "b", "p", "radii"}, "pair_profile config")
        a = parse_point(model, cfg["a"])
        b = parse_point(model, cfg["b"])
        p = parse_point(model, cfg["p"])
        prof = pair_crossratio_to_point(a, b, p, [int(r) for r in cfg["radii"]],
                                        generator=generator)
        _write_manifest(out, "geometry", cfg, int(cfg.get("seed", 0)), args.workers)
        _write_csv(out / "profile.csv", ["radius", "value"], prof)
        _write_summary(out, {"task": task, "profile": prof})
        print(f"pair profile: {prof}")
        return EXIT_OK

    raise ConfigError(f"unknown geometry task {task!r}")


def cmd_selftest(args) -> int:
    from . import acceptance

    results = acceptance.run_all(verbose=True)
    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} acceptance criteria passed")
    return EXIT_OK if not failed else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="convwalk",
                                 description="Convergence-group walks and boundary geometry")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("walk", "measure", "geometry"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", default=None)
    st = sub.add_parser("selftest")
    st.add_argument("--workers", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "selftest":
        return cmd_selftest(args)
    try:
        cfg = _load_config(args.config)
    except FileNotFoundError as e:
        return _fail(EXIT_IO, "io", str(e))
    except json.JSONDecodeError as e:
        return _fail(EXIT_CONFIG, "config", f"invalid JSON: {e}")
    try:
        if args.command == "walk":
            return cmd_walk(cfg, args)
        if args.command == "measure":
            return cmd_measure(cfg, args)
        return cmd_geometry(cfg, args)
    except (ConfigError, ValueError) as e:
        return _fail(EXIT_CONFIG, "config", str(e))
    except walks.InconclusiveWalks as e:
        return _fail(EXIT_COMPUTE, "compute", str(e))
    except OSError as e:
        return _fail(EXIT_IO, "io", str(e))


if __name__ == "__main__":
    raise SystemExit(main())
