"""Command-line front end: configure, run, and persist experiments.

Every run writes its CSVs plus manifest.json into a directory suffixed by
the hash of the resolved configuration, so distinct configs never collide
and identical reruns produce byte-identical CSVs.  Exit status: 0 all
gates pass, 1 a gate failed (failures.json written), 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, experiments as ex
from .backend import backend_name
from .errors import DomainError

Z_GATE = 3.0
KS_TASEP_GATE = 0.05
STABILITY_GATE = 0.05
EXCLUDED_GATE = 0.01


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(path: Path, header: list[str], rows: list[tuple]):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _float_grid(text: str) -> list[float]:
    try:
        grid = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {err}")
    if not grid:
        raise argparse.ArgumentTypeError("empty grid")
    return grid


def _out_root(args) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get("LPP_DUALITY_OUT", "runs"))


def _resolve(args, fields: list[str]) -> dict:
    """File config < flags; only the named fields are part of the config."""
    file_cfg = {}
    if args.config:
        file_cfg = json.loads(Path(args.config).read_text())
    config = {}
    for name in fields:
        flag = getattr(args, name, None)
        config[name] = flag if flag is not None else file_cfg.get(name)
    missing = [k for k, v in config.items() if v is None]
    if missing:
        raise DomainError(f"missing required parameters: {', '.join(missing)}")
    return config


def _emit(command: str, args, config: dict, files: dict,
          failures: list[dict], t_start: float) -> int:
    cfg_hash = _config_hash(config)
    outdir = _out_root(args) / f"{command}-{cfg_hash}"
    outdir.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in files.items():
        _write_csv(outdir / name, header, rows)
    manifest = {
        "command": command,
        "master_seed": config.get("seed"),
        "config": config,
        "config_hash": cfg_hash,
        "tool_version": __version__,
        "backend": backend_name(),
        "wall_time_s": round(time.time() - t_start, 3),
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2,
                                                     sort_keys=True) + "\n")
    if failures:
        (outdir / "failures.json").write_text(
            json.dumps({"failures": failures}, indent=2, sort_keys=True) + "\n")
        print(f"{command}: {len(failures)} gate(s) failed -> {outdir}")
        return 1
    print(f"{command}: all gates passed -> {outdir}")
    return 0


def _gate(failures: list[dict], name: str, value, threshold, ok: bool):
    print(f"  gate {name}: value={value} threshold={threshold} "
          f"{'PASS' if ok else 'FAIL'}")
    if not ok:
        failures.append({"gate": name, "value": value, "threshold": threshold})


# ---------------------------------------------------------------------------
# commands

def cmd_duality(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["m", "n", "samples", "seed"])
    est = ex.estimate_duality(config["m"], config["n"], config["samples"],
                              config["seed"], workers=args.workers)
    failures = []
    _gate(failures, "z_score", est.z, Z_GATE, est.z <= Z_GATE)
    _gate(failures, "excluded_fraction",
          max(est.excluded_lhs, est.excluded_rhs) / config["samples"],
          EXCLUDED_GATE, not est.flagged)
    files = {"duality.csv": (
        ["m", "n", "S", "p_lhs", "se_lhs", "p_rhs", "se_rhs", "z"],
        [(est.m, est.n, config["samples"], est.p_lhs, est.se_lhs,
          est.p_rhs, est.se_rhs, est.z)])}
    return _emit("duality", args, config, files, failures, t0)


def cmd_gcurve(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["m", "samples", "seed", "r_grid"])
    curve = ex.estimate_g(config["r_grid"], config["m"], config["samples"],
                          config["seed"], workers=args.workers)
    failures = []
    _gate(failures, "t_min_ge_m", curve.t_min, config["m"],
          curve.t_min >= config["m"])
    _gate(failures, "excluded_fraction",
          curve.n_excluded / config["samples"], EXCLUDED_GATE,
          curve.n_excluded <= EXCLUDED_GATE * config["samples"])
    mono = all(a >= b for a, b in zip(curve.g_hat, curve.g_hat[1:]))
    _gate(failures, "survival_monotone", mono, True, mono)
    rows = [(r, curve.m, config["samples"], g, curve.dkw)
            for r, g in zip(curve.r_grid, curve.g_hat)]
    files = {"gcurve.csv": (["r", "m", "S", "G_hat", "dkw"], rows)}
    return _emit("gcurve", args, config, files, failures, t0)


def cmd_fcdf(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["n", "samples", "seed", "s_grid"])
    curve = ex.estimate_f(config["s_grid"], config["n"], config["samples"],
                          config["seed"], workers=args.workers)
    failures = []
    mono = all(a <= b for a, b in zip(curve.f_hat, curve.f_hat[1:]))
    _gate(failures, "cdf_monotone", mono, True, mono)
    rows = [(sv, curve.n, config["samples"], f, curve.dkw)
            for sv, f in zip(curve.s_grid, curve.f_hat)]
    files = {"fcdf.csv": (["s", "n", "S", "F_hat", "dkw"], rows)}
    return _emit("fcdf", args, config, files, failures, t0)


def cmd_lowtail(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["m", "n", "samples", "seed", "r_grid"])
    checks = ex.check_lowtail(config["r_grid"], config["m"], config["n"],
                              config["samples"], config["seed"],
                              workers=args.workers)
    failures = []
    for chk in checks:
        _gate(failures, f"lowtail_r={chk.r:g}", chk.lhs, chk.rhs, chk.passed)
    rows = [(chk.r, chk.lhs, chk.rhs, chk.passed) for chk in checks]
    files = {"lowtail.csv": (["r", "lhs", "rhs", "pass"], rows)}
    return _emit("lowtail", args, config, files, failures, t0)


def cmd_profiles(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["n", "samples", "seed", "u_grid"])
    profile_rows = []
    scalar_rows = []
    bad_max = 0
    skipped = 0
    from .rng import replicate_seed
    for k in range(config["samples"]):
        seed = replicate_seed(config["seed"], f"profiles/{config['n']}", k)
        samp = ex.rescaled_profiles(config["n"], config["u_grid"], seed)
        for u, a, b in zip(samp.u_grid, samp.a_values, samp.b_values):
            profile_rows.append((samp.n, u, a, b))
        scalar_rows.append((samp.n, samp.c_value, samp.u_n))
        if samp.max_ok is False:
            bad_max += 1
        if samp.max_ok is None:
            skipped += 1
    failures = []
    _gate(failures, "exact_max_violations", bad_max, 0, bad_max == 0)
    print(f"  argmax outside grid (skipped exact-max check): {skipped}")
    files = {
        "profiles.csv": (["n", "u", "A_n", "B_n"], profile_rows),
        "scalars.csv": (["n", "C_n", "U_n"], scalar_rows),
    }
    return _emit("profiles", args, config, files, failures, t0)


def cmd_tree_check(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["m", "n", "samples", "seed", "window"])
    reps = ex.sample_pathwise(config["m"], config["n"], config["window"],
                              config["samples"], config["seed"],
                              workers=args.workers)
    stable = reps.column("stable") == 1.0
    agree = reps.column("lhs")[stable] == reps.column("rhs")[stable]
    fail_rate = 1.0 - float(np.mean(stable))
    agree_rate = float(np.mean(agree)) if agree.size else 0.0
    failures = []
    _gate(failures, "pathwise_agreement", agree_rate, 1.0, agree_rate == 1.0)
    _gate(failures, "stabilization_failure_rate", fail_rate, STABILITY_GATE,
          fail_rate <= STABILITY_GATE)
    rows = [(int(k), int(l), int(r), int(st), ts)
            for k, l, r, st, ts in zip(reps.index, reps.column("lhs"),
                                       reps.column("rhs"),
                                       reps.column("stable"),
                                       reps.column("t_star"))]
    files = {"treecheck.csv": (
        ["replicate", "lhs", "rhs", "stabilized", "t_star"], rows)}
    return _emit("tree-check", args, config, files, failures, t0)


def cmd_burke(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["samples", "seed"])
    s = config["samples"]
    failures = []
    rows = []
    # marginal of the down-left Busemann increment at (1, 0)
    reps = ex.sample_busemann_down((1, 0), s, config["seed"],
                                   workers=args.workers)
    vals = reps.column("value")[reps.column("ok") == 1.0]
    dist = ex.EmpiricalDistribution.from_samples(vals)
    ks = dist.ks_vs_cdf(ex.exp_cdf(0.5))
    thr = dist.dkw99()
    rows.append(("busemann_exp_half", dist.n, ks, thr, ks <= thr))
    _gate(failures, "busemann_exp_half", ks, thr, ks <= thr)
    # horizontal increments of the boundary passage time at height 64
    n_inc = 64
    x_max = 200
    n_rep = max(1, s // x_max)
    inc = ex.sample_row_increments(n_inc, x_max, n_rep, config["seed"],
                                   workers=args.workers)
    flat = inc.values.ravel()
    dist2 = ex.EmpiricalDistribution.from_samples(flat)
    ks2 = dist2.ks_vs_cdf(ex.exp_cdf(0.5))
    thr2 = dist2.dkw99()
    rows.append(("increments_exp_half", dist2.n, ks2, thr2, ks2 <= thr2))
    _gate(failures, "increments_exp_half", ks2, thr2, ks2 <= thr2)
    # stationary mean along the diagonal
    n_diag = 500
    s_diag = 2000
    diag = ex.sample_lbar_diag(n_diag, s_diag, config["seed"],
                               workers=args.workers)
    ratio = float(np.mean(diag.column("value"))) / (4.0 * n_diag)
    ok = 0.99 <= ratio <= 1.01
    rows.append(("diag_mean_ratio", s_diag, ratio, 0.01, ok))
    _gate(failures, "diag_mean_ratio", ratio, "[0.99, 1.01]", ok)
    files = {"burke.csv": (
        ["gate", "n_samples", "statistic", "threshold", "pass"], rows)}
    return _emit("burke", args, config, files, failures, t0)


def cmd_tasep(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["k_half", "samples", "seed", "horizon"])
    s = config["samples"]
    i_max = j_max = 1
    reps = ex.sample_tasep(config["k_half"], i_max, j_max, config["horizon"],
                           s, config["seed"], workers=args.workers)
    ok = reps.column("ok") == 1.0
    g00 = reps.column("g00")[ok]
    g11 = reps.column("g11")[ok]
    g11 = g11[~np.isnan(g11)]
    lbar11 = ex.sample_lbar11(len(g11), config["seed"])
    failures = []
    zero_ok = bool(np.all(g00 == 0.0))
    _gate(failures, "g00_zero", float(np.max(np.abs(g00))) if g00.size else 0.0,
          0.0, zero_ok)
    ks = ex.two_sample_ks(ex.EmpiricalDistribution.from_samples(g11),
                          ex.EmpiricalDistribution.from_samples(lbar11))
    _gate(failures, "g11_vs_lbar11_ks", ks, KS_TASEP_GATE, ks <= KS_TASEP_GATE)
    dens = ex.sample_tasep_density(config["k_half"],
                                   max(8, s // 16), config["seed"],
                                   workers=args.workers)
    sites = 2 * (config["k_half"] // 2) + 1
    pooled = float(np.sum(dens.column("count"))) / (sites * dens.n)
    band = 5.0 * math.sqrt(0.25 / (sites * dens.n))
    dens_ok = abs(pooled - 0.5) <= band
    _gate(failures, "density_half", pooled, f"0.5 +/- {band:.4g}", dens_ok)
    rows = []
    for k, row_ok in zip(reps.index, reps.column("ok")):
        ridx = np.where(reps.index == k)[0][0]
        for i in range(i_max + 1):
            for j in range(j_max + 1):
                gval = reps.values[ridx, reps.columns.index(f"g{i}{j}")]
                rows.append((int(k), i, j, gval, int(row_ok)))
    files = {"tasep.csv": (["replicate", "i", "j", "G_value", "valid"], rows)}
    return _emit("tasep", args, config, files, failures, t0)


def cmd_massfield(args) -> int:
    t0 = time.time()
    config = _resolve(args, ["rho", "steps", "sites", "seed"])
    reps = ex.sample_massfield(config["rho"], config["steps"],
                               config["sites"], 1, config["seed"],
                               workers=1)
    masses = reps.values.ravel()
    dist = ex.EmpiricalDistribution.from_samples(masses)
    ks = dist.ks_vs_cdf(ex.exp_cdf(config["rho"]))
    thr = dist.dkw99()
    failures = []
    _gate(failures, "stationary_increments_ks", ks, thr, ks <= thr)
    rows = [(i + 1, m) for i, m in enumerate(masses)]
    files = {"massfield.csv": (["site", "mass"], rows)}
    return _emit("massfield", args, config, files, failures, t0)


def cmd_validate(args) -> int:
    command = args.target
    spec = _COMMANDS.get(command)
    if spec is None:
        print(f"unknown command {command!r}")
        return 0
    _, fields, _ = spec
    try:
        config = _resolve(args, fields)
    except DomainError as err:
        print(f"violation: {err}")
        return 0
    violations = []
    m, n = config.get("m"), config.get("n")
    if m is not None and n is not None and not (n > m >= 1):
        violations.append(f"duality needs n > m >= 1, got m={m}, n={n}")
    if config.get("samples") is not None and config["samples"] < 100:
        violations.append("samples must be >= 100")
    for grid_name in ("r_grid", "s_grid", "u_grid"):
        grid = config.get(grid_name)
        if grid is not None and list(grid) != sorted(grid):
            violations.append(f"{grid_name} must be monotone increasing")
    print(f"resolved config: {json.dumps(config, sort_keys=True)}")
    print(f"config hash: {_config_hash(config)}")
    for v in violations:
        print(f"violation: {v}")
    if not violations:
        print("config ok")
    return 0


_COMMANDS = {
    "duality": (cmd_duality, ["m", "n", "samples", "seed"], "duality formula z-test"),
    "gcurve": (cmd_gcurve, ["m", "samples", "seed", "r_grid"],
               "rescaled coalescence-time survival curve"),
    "fcdf": (cmd_fcdf, ["n", "samples", "seed", "s_grid"],
             "rescaled exit-point CDF"),
    "lowtail": (cmd_lowtail, ["m", "n", "samples", "seed", "r_grid"],
                "low-tail inequality panel"),
    "profiles": (cmd_profiles, ["n", "samples", "seed", "u_grid"],
                 "rescaled profiles and scalars"),
    "tree-check": (cmd_tree_check, ["m", "n", "samples", "seed", "window"],
                   "pathwise non-crossing tally"),
    "burke": (cmd_burke, ["samples", "seed"], "stationarity gates"),
    "tasep": (cmd_tasep, ["k_half", "samples", "seed", "horizon"],
              "exclusion-process interchange bridge"),
    "massfield": (cmd_massfield, ["rho", "steps", "sites", "seed"],
                  "mass-field stationarity"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpp-duality",
        description="Last-passage percolation duality experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--samples", type=int, help="replicates per side")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", type=str, default=None,
                       help="output root (default $LPP_DUALITY_OUT or ./runs)")
        p.add_argument("--config", type=str, default=None,
                       help="JSON config file; flags override")

    for name, (_, fields, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        common(p)
        if "m" in fields:
            p.add_argument("--m", type=int)
        if "n" in fields:
            p.add_argument("--n", type=int)
        if "r_grid" in fields:
            p.add_argument("--r-grid", dest="r_grid", type=_float_grid)
        if "s_grid" in fields:
            p.add_argument("--s-grid", dest="s_grid", type=_float_grid)
        if "u_grid" in fields:
            p.add_argument("--u-grid", dest="u_grid", type=_float_grid)
        if "window" in fields:
            p.add_argument("--window", type=int)
        if "k_half" in fields:
            p.add_argument("--k-half", dest="k_half", type=int)
        if "horizon" in fields:
            p.add_argument("--horizon", type=float)
        if "rho" in fields:
            p.add_argument("--rho", type=float)
        if "steps" in fields:
            p.add_argument("--steps", type=int)
        if "sites" in fields:
            p.add_argument("--sites", type=int)
        p.add_argument("--window-cap", dest="window_cap", type=int,
                       default=None, help="hard cap for window growth")

    vp = sub.add_parser("validate", help="check a config without running")
    vp.add_argument("target", type=str, help="command whose config to check")
    common(vp)
    for flag, typ in [("--m", int), ("--n", int), ("--window", int),
                      ("--k-half", int), ("--horizon", float),
                      ("--rho", float), ("--steps", int), ("--sites", int)]:
        vp.add_argument(flag, dest=flag.strip("-").replace("-", "_"), type=typ)
    for flag in ("--r-grid", "--s-grid", "--u-grid"):
        vp.add_argument(flag, dest=flag.strip("-").replace("-", "_"),
                        type=_float_grid)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args)
    handler = _COMMANDS[args.command][0]
    if args.workers > 1:
        ex.warmup()
    try:
        return handler(args)
    except DomainError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
