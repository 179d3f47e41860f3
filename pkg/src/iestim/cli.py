"""Command-line experiment runner.

Every subcommand reads an optional JSON config (``--config``); explicit flags
override config fields.  Exit codes: 0 success, 2 configuration error,
3 size-cap error, 4 runtime error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import algorithms as alg
from . import bounds, dims
from .core import estimation_errors, regret, run_protocol
from .errors import ConfigError, InvalidArgument, SizeCapError
from .instances import (build_instance, run_hard_lower_bound, separation_eluder_certificate,
                        special_alternatives, tilde_alternatives)

log = logging.getLogger("iestim")

LEARNERS = ("ls", "optimistic", "oracle_ls", "optimistic_oracle", "karmed_closed_form", "scan_baseline",
            "uniform_random", "structured_ls", "structured_optimistic")
DIM_CAP = 200


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n")


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return str(obj)


def resolve_alpha(cfg: dict, instance) -> tuple[float | None, bool]:
    """Numeric alpha (or None when unknown) and whether it is unknown."""
    a = cfg.get("alpha", "alpha_star")
    if a == "alpha_star":
        return instance.alpha_star, False
    if a == "unknown":
        return None, True
    try:
        return float(a), False
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"alpha must be a number, 'alpha_star' or 'unknown', got {a!r}") from exc


def build_learner(name: str, instance, alpha, cfg: dict):
    """Learner instance from a config name."""
    T = int(cfg.get("T", 100))
    delta = float(cfg.get("delta", 0.1))
    if alpha is None and name not in ("optimistic", "optimistic_oracle", "structured_optimistic",
                                      "scan_baseline", "uniform_random"):
        raise ConfigError(f"learner {name!r} needs a known alpha; use an optimistic learner for 'unknown'")
    R = cfg.get("R")
    if name == "ls":
        return alg.LSLearner(instance, alpha)
    if name == "optimistic":
        return alg.OptimisticLearner(instance, float(R) if R is not None else bounds.optimistic_radius(T, instance.size, delta=delta))
    if name == "oracle_ls":
        return alg.OracleLSLearner(instance, alpha, cfg.get("oracle_kind", "aggregating"))
    if name == "optimistic_oracle":
        if R is None:
            R = bounds.oracle_radius(8.0 * math.log(instance.size), 2.0, 4.0, T, delta)
        return alg.OptimisticOracleLearner(instance, float(R), cfg.get("oracle_kind", "aggregating"))
    if name == "karmed_closed_form":
        return alg.KArmedLearner(instance, alpha)
    if name == "structured_ls":
        return alg.StructuredLSLearner(instance, alpha)
    if name == "structured_optimistic":
        return alg.StructuredOptimisticLearner(instance, float(R) if R is not None else bounds.optimistic_radius(T, instance.size, delta=delta))
    if name == "scan_baseline":
        if instance.metadata.get("generator") == "hard_indicator":
            return alg.ScanLearner(special_alternatives(instance), stop_on_positive=True)
        return alg.ScanLearner(range(instance.size))
    if name == "uniform_random":
        if instance.metadata.get("generator") == "hard_indicator":
            return alg.UniformRandomLearner(special_alternatives(instance))
        return alg.UniformRandomLearner(np.arange(instance.size))
    raise ConfigError(f"unknown learner {name!r}; expected one of {LEARNERS}")


def _try_dim(instance, alpha, eps):
    try:
        d, _ = dims.dissimilarity_dim(instance, alpha, eps, max_size=DIM_CAP)
        return d
    except SizeCapError:
        return None


def cmd_simulate(cfg: dict, out: Path) -> dict:
    instance = build_instance(cfg["generator"])
    alpha, unknown = resolve_alpha(cfg, instance)
    name = cfg.get("learner", "optimistic" if unknown else "ls")
    T = int(cfg.get("T", 100))
    seeds = [int(s) for s in cfg.get("seeds", [0])]
    delta = float(cfg.get("delta", 0.1))
    eps_grid = [float(e) for e in cfg.get("eps_grid", [0.25, 0.5, 1.0])]
    mode = cfg.get("bounds_mode", "constant_faithful")
    if mode not in ("constant_faithful", "empirical"):
        raise ConfigError(f"unknown bounds_mode {mode!r}")
    build_learner(name, instance, alpha, cfg)  # validate before fanning out
    run_alpha = instance.alpha_star if alpha is None else alpha

    def one(seed):
        tr = run_protocol(instance, build_learner(name, instance, alpha, cfg), T, run_alpha, seed)
        tr.to_csv(out / f"transcript_seed{seed}.csv")
        tr.to_json(out / f"transcript_seed{seed}.json")
        return tr

    with ThreadPoolExecutor(max_workers=int(cfg.get("threads", 1))) as pool:
        transcripts = list(pool.map(one, seeds))

    deterministic = instance.noise_mode == "deterministic"
    est_max = [float(estimation_errors(tr, instance).max()) for tr in transcripts]
    if mode == "empirical":
        C = 1.1 * max(est_max)
    else:
        C = 0.0 if deterministic else bounds.c_finite(T, instance.size, delta)
    d = _try_dim(instance, run_alpha, float(cfg.get("dim_eps", min(eps_grid))))
    regrets = [regret(tr) for tr in transcripts]
    summary = {
        "learner": name, "T": T, "alpha": run_alpha, "alpha_unknown": unknown, "seeds": seeds,
        "instance": instance.metadata, "bounds_mode": mode, "C": C,
        "mean_regret": float(np.mean(regrets)), "max_regret": float(np.max(regrets)), "regrets": regrets,
        "bad_queries": {str(e): [int(np.sum(tr.means < run_alpha - e)) for tr in transcripts] for e in eps_grid},
        "max_estimation_error": {"per_seed": est_max, "max": max(est_max)},
        "dissimilarity_dim": d,
    }
    if d is not None and d >= 1:
        summary["regret_comparator"] = bounds.regret_bound(d, C, T, deterministic).value
    _dump(out / "summary.json", summary)
    cum = np.mean([np.cumsum(tr.raw_gaps) for tr in transcripts], axis=0)
    with open(out / "plot.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "mean_cumulative_regret", "comparator"])
        for t in range(1, T + 1):
            comp = bounds.regret_bound(d, C, t, deterministic).value if d else ""
            w.writerow([t, repr(float(cum[t - 1])), repr(comp) if comp != "" else ""])
    return summary


def cmd_dims(cfg: dict, out: Path) -> dict:
    instance = build_instance(cfg["generator"])
    alpha, _ = resolve_alpha(cfg, instance)
    if alpha is None:
        alpha = instance.alpha_star
    eps = cfg.get("eps")
    if eps is None:
        raise ConfigError("dims needs eps")
    eps = float(eps)
    which = set(cfg.get("which", ["dissimilarity", "eluder"]))
    cap = int(cfg.get("size_cap", DIM_CAP))
    report = {"instance": instance.metadata, "alpha": alpha, "eps": eps}
    if "dissimilarity" in which:
        d, cert = dims.dissimilarity_dim(instance, alpha, eps, max_size=cap)
        report["dissimilarity"] = {"value": d, "certificate": cert.to_dict(),
                                   "valid": dims.validate_dissimilarity(cert, instance)}
        if instance.metadata.get("generator") == "separation":
            report["dissimilarity"]["bound"] = 16
            report["dissimilarity"]["within_bound"] = d <= 16
    if "monotone" in which:
        d, g, cert = dims.monotone_dissimilarity_dim(instance, alpha, eps)
        report["monotone_dissimilarity"] = {"value": d, "argmax_eps": g, "approx": cert.approx,
                                            "certificate": cert.to_dict()}
    if "eluder" in which and hasattr(instance, "f_table"):
        if instance.metadata.get("generator") == "separation":
            cert = separation_eluder_certificate(instance)
            report["eluder"] = {"lower_bound": cert.value, "certificate": cert.to_dict(), "exact": False,
                                "valid": dims.validate_eluder(cert, instance.f_table)}
        else:
            d, cert = dims.eluder_dim(instance.f_table, eps)
            report["eluder"] = {"value": d, "certificate": cert.to_dict(), "exact": True,
                                "valid": dims.validate_eluder(cert, instance.f_table)}
    if "strong_sq" in which and hasattr(instance, "hypotheses"):
        d, cert = dims.strong_sq_dim(instance.hypotheses, instance.dist, eps, max_size=cap)
        report["strong_sq"] = {"value": d, "certificate": cert.to_dict()}
    _dump(out / "dims.json", report)
    return report


def cmd_bounds(cfg: dict, out: Path) -> dict:
    d = float(cfg.get("d", 1))
    C = float(cfg.get("C", 0.0))
    T = int(cfg.get("T", 100))
    eps = float(cfg.get("eps", 0.5))
    delta = float(cfg.get("delta", 0.1))
    N = int(cfg.get("card_Z", 10))
    reports = {
        "c_finite": bounds.c_finite(T, N, delta),
        "ls_guarantee_c": bounds.ls_guarantee_c(T, N, 2.0, 4.0, delta),
        "optimistic_C": bounds.optimistic_c(T, N, delta=delta),
        "bad_query_bound": bounds.bad_query_bound(d, C, eps, T).to_dict(),
        "regret_bound": bounds.regret_bound(d, C, T, bool(cfg.get("deterministic", False))).to_dict(),
        "pac_params": bounds.pac_params(d, C, eps, delta, bool(cfg.get("deterministic", False))),
        "oracle_radius": bounds.oracle_radius(float(cfg.get("regret_sq", 0.0)), 2.0, 4.0, T, delta),
    }
    _dump(out / "bounds.json", reports)
    print(json.dumps(reports, indent=2, sort_keys=True, default=_default))
    return reports


def cmd_pac(cfg: dict, out: Path) -> dict:
    if cfg.get("eps") is None:
        raise ConfigError("pac needs eps")
    eps = float(cfg["eps"])
    delta = float(cfg.get("delta", 0.1))
    instance = build_instance(cfg["generator"])
    alpha, unknown = resolve_alpha(cfg, instance)
    if alpha is None:
        alpha = instance.alpha_star
    name = cfg.get("learner", "ls")
    runs = int(cfg.get("runs", 20))
    seeds = [int(s) for s in cfg.get("seeds", list(range(runs)))]
    deterministic = instance.noise_mode == "deterministic"
    d = cfg.get("d") or _try_dim(instance, alpha, eps) or 1
    if deterministic:
        params = bounds.pac_params(d, 0.0, eps, delta, deterministic=True)
        pcfg = alg.PacConfig(int(cfg.get("T", params["T_min"])), 1, 1, alpha, eps, delta)
    else:
        C = float(cfg["C"]) if "C" in cfg else bounds.c_finite(int(cfg.get("T", 100)), instance.size, delta / 2)
        params = bounds.pac_params(d, C, eps, delta)
        pcfg = alg.PacConfig(int(cfg.get("T", params["T_min"])), params["n1"], params["n2"], alpha, eps, delta)
    results = []
    for s in seeds:
        z = alg.pac_estimate(instance, build_learner(name, instance, alpha, dict(cfg, T=pcfg.T)), pcfg, s)
        results.append({"seed": s, "estimate": z, "value": instance.mean_reward(z),
                        "success": bool(instance.mean_reward(z) >= alpha - eps)})
    rate = float(np.mean([r["success"] for r in results]))
    report = {"eps": eps, "delta": delta, "alpha": alpha, "d": d, "params": params, "T": pcfg.T,
              "n1": pcfg.n1 if not deterministic else 0, "n2": pcfg.n2 if not deterministic else 0,
              "success_rate": rate, "target_rate": 1 - delta, "runs": results}
    _dump(out / "pac.json", report)
    return report


def cmd_lowerbound(cfg: dict, out: Path) -> dict:
    N = int(cfg.get("N", 50))
    eps = float(cfg.get("eps", 0.5))
    T = int(cfg.get("T", 25))
    trials = int(cfg.get("trials", 100))
    seed = int(cfg.get("seed", 0))
    name = cfg.get("learner", "ls")
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")

    def factory(inst):
        if name == "ls":
            return alg.LSLearner(inst, eps, candidates=tilde_alternatives(inst))
        return build_learner(name, inst, eps, cfg)

    rep = run_hard_lower_bound(N, eps, T, factory, trials, seed, cfg.get("net_size"))
    # Upper-side check: the same learner on targets drawn from the lifted class at alpha = 1.
    from .instances import hard_combined

    base = hard_combined(N, eps, cfg.get("net_size"), seed)
    tl = tilde_alternatives(base)
    rng = np.random.default_rng(seed + 1)
    tilde_regrets = []
    lo, hi = base.metadata["tilde_rows"]
    for k in range(trials):
        f = int(rng.integers(lo, hi))
        inst = base.with_target_function(f)
        learner = alg.LSLearner(inst, 1.0, candidates=tl)
        tilde_regrets.append(regret(run_protocol(inst, learner, T, 1.0, int(rng.integers(2**31)))))
    rep["tilde_mean_regret"] = float(np.mean(tilde_regrets))
    rep["tilde_beats_lower_rate"] = bool(rep["tilde_mean_regret"] < rep["regret_comparator"])
    rep["learner"] = name
    rep.pop("regrets", None)
    _dump(out / "lowerbound.json", rep)
    return rep


def cmd_cover(cfg: dict, out: Path) -> dict:
    instance = build_instance(cfg["generator"])
    if cfg.get("eps") is None:
        raise ConfigError("cover needs eps")
    mode = cfg.get("mode", "greedy")
    rep = dims.covering_number(instance, float(cfg["eps"]), mode)
    obj = {"epsilon": rep.epsilon, "cover": rep.cover, "size": rep.size, "exact": rep.exact}
    _dump(out / "cover.json", obj)
    return obj


COMMANDS = {"simulate": cmd_simulate, "dims": cmd_dims, "bounds": cmd_bounds, "pac": cmd_pac,
            "lowerbound": cmd_lowerbound, "cover": cmd_cover}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iestim", description="Interactive estimation experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", type=Path, help="JSON config document")
        s.add_argument("--out", type=Path, help="output directory")
        s.add_argument("--seeds", type=str, help="comma-separated seeds or a range a:b")
        s.add_argument("--threads", type=int)
        s.add_argument("--set", action="append", default=[], metavar="KEY=JSON",
                       help="override any config field, value parsed as JSON")
        s.add_argument("--learner")
        s.add_argument("--alpha")
        s.add_argument("--T", type=int)
        s.add_argument("--eps", type=float)
        s.add_argument("--delta", type=float)
        s.add_argument("--R", type=float)
        s.add_argument("--trials", type=int)
        s.add_argument("--N", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--mode")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def _parse_seeds(text: str) -> list:
    if ":" in text:
        a, b = text.split(":")
        return list(range(int(a), int(b)))
    return [int(x) for x in text.split(",") if x]


def load_config(args) -> dict:
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    for key in ("learner", "T", "eps", "delta", "R", "trials", "N", "seed", "mode", "threads"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    if args.alpha is not None:
        cfg["alpha"] = args.alpha if args.alpha in ("alpha_star", "unknown") else float(args.alpha)
    if args.seeds:
        cfg["seeds"] = _parse_seeds(args.seeds)
    for item in args.set:
        key, _, raw = item.partition("=")
        try:
            cfg[key] = json.loads(raw)
        except json.JSONDecodeError:
            cfg[key] = raw
    return cfg


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args)
        out = Path(args.out or cfg.get("out") or ".")
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise RuntimeError(f"cannot create output directory {out}: {exc}") from exc
        if args.command in ("simulate", "dims", "pac", "cover") and "generator" not in cfg:
            raise ConfigError(f"{args.command} needs a generator spec in the config")
        COMMANDS[args.command](cfg, out)
    except SizeCapError as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, InvalidArgument, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - top-level reporting
        print(f"runtime error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
