"""Command-line entry point.

    fepmix verify --max-n 12
    fepmix exact tv --family fep-seg --n 4 --k 3 --p 0.5 --eps 0.25
    fepmix simulate --family segment --start minus --n 12 --k 8 --T 50
    fepmix hit --family circle --start block --n 64 --k 48 --reps 100
    fepmix sweep afep-slope --p 0.7 --gaps 4,6,8,10
    fepmix plotdata --results DIR

Options come from defaults, then a JSON file given by --config (a manifest
written by an earlier run is accepted), then explicit flags.  Unknown keys
are rejected.  Exit codes: 0 success, 1 a check failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import experiments as X
from .io import ManifestError, atomic_write, read_csv, read_manifest, svg_line_chart, write_csv, write_json, write_manifest

log = logging.getLogger("fepmix")

OUTPUT_ROOT_ENV = "FEP_OUTPUT_ROOT"


class ConfigError(ValueError):
    pass


class CheckFailed(AssertionError):
    pass


# Defaults per command; these are also the only accepted config keys
# besides the common ones.
COMMON = {"seed": 0, "threads": 1}
DEFAULTS = {
    "verify": {"max_n": 12, "p": 0.7},
    "exact": {"analysis": "tv", "family": "fep-seg", "n": 4, "k": 3, "m": None, "p": 0.5,
              "eps": 0.25, "points": 50, "ell": 4, "rho": 0.7},
    "simulate": {"family": "segment", "start": "minus", "occupation": None, "n": 12, "k": 8, "p": 0.5,
                 "T": 50.0, "q": 0.3, "reservoir": "right"},
    "hit": {"family": "segment", "start": "minus", "n": 12, "k": 8, "p": 0.5, "reps": 100,
            "horizon": None, "method": "fep", "crosscheck": 4},
    "sweep": {"kind": "afep-slope", "p": 0.7, "gaps": "4,6,8,10", "ns": "64,128,256", "rho": 0.75,
              "reps": 200},
    "plotdata": {"results": None},
}
POSITIONAL = {"exact": "analysis", "sweep": "kind"}
EXACT_ANALYSES = ("tv", "stationary", "gap", "aldous-brown", "ensembles")
SWEEP_KINDS = ("sfep-ratio", "afep-slope", "circle-ratio")


@dataclass(frozen=True)
class CliConfig:
    command: str
    options: dict
    out: Path
    seed: int
    threads: int
    verbosity: int

    def resolved(self) -> dict:
        return dict(self.options)


# ------------------------------------------------------------ parsing

def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="fepmix", description="Facilitated exclusion mixing toolkit")
    parser.add_argument("--version", action="version", version=f"fepmix {__version__}")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", help="JSON config or manifest file")
        p.add_argument("--out", help=f"output directory (default under ${OUTPUT_ROOT_ENV} or ./fepmix-output)")
        p.add_argument("--seed", type=int, default=S)
        p.add_argument("--threads", type=int, default=S)
        p.add_argument("-v", "--verbose", action="count", default=0)

    p = sub.add_parser("verify", help="run the invariant suite on small systems")
    common(p)
    p.add_argument("--max-n", dest="max_n", type=int, default=S)
    p.add_argument("--p", type=float, default=S)

    p = sub.add_parser("exact", help="exhaustive analysis of a small chain")
    p.add_argument("analysis", nargs="?", default=S, help="|".join(EXACT_ANALYSES))
    common(p)
    for name, typ in (("family", str), ("n", int), ("k", int), ("m", int), ("p", float), ("eps", float),
                      ("points", int), ("ell", int), ("rho", float)):
        p.add_argument(f"--{name}", type=typ, default=S)

    p = sub.add_parser("simulate", help="record one trajectory")
    common(p)
    for name, typ in (("family", str), ("start", str), ("occupation", str), ("n", int), ("k", int),
                      ("p", float), ("T", float), ("q", float), ("reservoir", str)):
        p.add_argument(f"--{name}", type=typ, default=S)

    p = sub.add_parser("hit", help="hitting times of the ergodic component")
    common(p)
    for name, typ in (("family", str), ("start", str), ("n", int), ("k", int), ("p", float), ("reps", int),
                      ("horizon", float), ("method", str), ("crosscheck", int)):
        p.add_argument(f"--{name}", type=typ, default=S)

    p = sub.add_parser("sweep", help="scaling sweep over a grid")
    p.add_argument("kind", nargs="?", default=S, help="|".join(SWEEP_KINDS))
    common(p)
    for name, typ in (("p", float), ("gaps", str), ("ns", str), ("rho", float), ("reps", int)):
        p.add_argument(f"--{name}", type=typ, default=S)

    p = sub.add_parser("plotdata", help="plot-ready CSV and SVG from a results directory")
    common(p)
    p.add_argument("--results", default=S)
    return parser


def load_config_file(path, command: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if "command" in data and "config" in data:
        if data["command"] != command:
            raise ConfigError(f"manifest is for {data['command']!r}, not {command!r}")
        data = data["config"]
    return data


def resolve(args: argparse.Namespace) -> CliConfig:
    command = args.command
    allowed = {**COMMON, **DEFAULTS[command]}
    opts = dict(allowed)
    if args.config:
        file_opts = load_config_file(args.config, command)
        unknown = sorted(set(file_opts) - set(allowed))
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {', '.join(unknown)}")
        opts.update(file_opts)
    for key in allowed:
        if hasattr(args, key):
            opts[key] = getattr(args, key)
    if args.out:
        out = Path(args.out)
    else:
        root = Path(os.environ.get(OUTPUT_ROOT_ENV, "fepmix-output"))
        sub = opts.get(POSITIONAL.get(command, ""), None)
        out = root / (f"{command}-{sub}" if sub else command)
    if not isinstance(opts["seed"], int) or opts["seed"] < 0:
        raise ConfigError("seed must be a nonnegative integer")
    if not isinstance(opts["threads"], int) or opts["threads"] < 1:
        raise ConfigError("threads must be a positive integer")
    return CliConfig(command, opts, out, opts["seed"], opts["threads"], args.verbose)


def _int_list(text) -> list[int]:
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected a comma separated list of integers, got {text!r}") from exc


def _require_nk(N, k, strict: bool = False):
    if N is None or k is None or N < 1:
        raise ConfigError("need n >= 1 and k")
    if not (2 * k > N and k <= N):
        raise ConfigError(f"need n/2 < k <= n, got n={N}, k={k}")
    if strict and k == N:
        raise ConfigError("need k < n")


# ------------------------------------------------------------ verify

def cmd_verify(cfg: CliConfig) -> int:
    from . import exact as ex
    from .engine import ClockField, order_violations
    from .engine import gillespie as G
    from .lattice_path import from_path, iter_paths, leq, path_to_sep, sep_to_path, to_path
    from .mappings import segment_of_zrp, zrp_of_segment
    from .state import count_ergodic, enumerate_circle, enumerate_segment

    o = cfg.options
    max_n, p = int(o["max_n"]), float(o["p"])
    if max_n < 4:
        raise ConfigError("max_n must be at least 4")
    pairs = [(N, k) for N in range(4, max_n + 1) for k in range(N // 2 + 1, N)]
    results = []

    def record(name, value, ok):
        results.append({"check": name, "value": value, "ok": bool(ok)})
        log.info("%s %s: %s", "PASS" if ok else "FAIL", name, value)

    bad = [(N, k) for N, k in pairs
           if len(enumerate_circle(N, k, True)) != count_ergodic("circle", N, k)
           or len(enumerate_segment(N, k, True)) != count_ergodic("segment", N, k)]
    record("counting", len(bad), not bad)

    bad = 0
    for N, k in pairs:
        for path in iter_paths(N, k):
            if to_path(from_path(path)) != path:
                bad += 1
        for c in enumerate_segment(N, k, True):
            if sep_to_path(N, path_to_sep(to_path(c))) != to_path(c):
                bad += 1
        for c in enumerate_segment(N, k):
            if segment_of_zrp(zrp_of_segment(c)) != c:
                bad += 1
    record("bijections", bad, bad == 0)

    err = 0.0
    for N, k in pairs:
        err = max(err, ex.fep_sep_error(N, k, p), ex.fep_zrp_error(N, k, p),
                  ex.fep_obep_error(N, k, p, "minus"), ex.fep_obep_error(N, k, p, "plus"))
        if N <= min(max_n, 10):
            err = max(err, ex.circle_zrp_error(N, k, 0.5))
    record("intertwining", err, err <= 1e-14)

    worst = 0.0
    for N, k in pairs:
        for fam, params in (("fep-seg", {"N": N, "k": k, "p": p}), ("fep-circle", {"N": N, "k": k})):
            rm, mu = ex.stationary(fam, params)
            worst = max(worst, ex.stationarity_residual(rm, mu))
            if fam == "fep-seg":
                worst = max(worst, ex.detailed_balance_error(rm, mu))
    for n in range(2, 6):
        for m in range(1, 6):
            rm, mu = ex.stationary("zrp-const", {"n": n, "m": m, "p": p})
            worst = max(worst, ex.stationarity_residual(rm, mu), ex.detailed_balance_error(rm, mu))
    record("stationarity", worst, worst <= 1e-12)

    viol = tested = 0
    N = max_n
    k = max(N // 2 + 1, (3 * N) // 4)
    paths = list(iter_paths(N, k))
    rng = np.random.default_rng(cfg.seed)
    while tested < 50:
        a, b = (paths[j] for j in rng.choice(len(paths), 2, replace=False))
        if not (leq(a, b) or leq(b, a)):
            continue
        starts = [a, b] if leq(a, b) else [b, a]
        viol += order_violations(starts, ClockField(0.5, cfg.seed + tested), 20.0)[0]
        tested += 1
    record("monotone_coupling", viol, viol == 0)

    mism = 0
    for N, k in pairs[-3:]:
        for c in enumerate_segment(N, k)[:20]:
            occ = np.asarray(c.occ, dtype=np.int64)
            w = np.asarray(zrp_of_segment(c).w, dtype=np.int64)
            seeds = np.arange(cfg.seed, cfg.seed + 5, dtype=np.int64)
            a = G.fep_segment_hits(occ, seeds, p, 1e4)
            b = G.zrp_segment_hits(w, seeds, p, np.int64(2), 1e4)
            mism += int(np.sum(a != b))
    record("pile_hitting_identity", mism, mism == 0)

    phi = max(ex.phi_rate_mismatch(n, ell) for n in range(2, 5) for ell in range(2, 6))
    record("block_map_rates", phi, phi <= 1e-14)

    write_json(cfg.out / "verify.json", {"max_n": max_n, "p": p, "checks": results})
    ok = all(r["ok"] for r in results)
    for r in results:
        print(f"{'PASS' if r['ok'] else 'FAIL'} {r['check']} {r['value']}")
    if not ok:
        raise CheckFailed("invariant suite failed")
    return 0


# ------------------------------------------------------------ exact

def _family_params(o) -> tuple[str, dict]:
    from .exact.generators import canonical_family

    try:
        fam = canonical_family(o["family"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    n, k, m, p = o["n"], o["k"], o["m"], float(o["p"])
    if fam == "fep-seg":
        _require_nk(n, k)
        return fam, {"N": n, "k": k, "p": p}
    if fam == "fep-circle":
        _require_nk(n, k)
        return fam, {"N": n, "k": k, "p": p}
    if fam in ("zrp-seg", "zrp-circle", "zrp-const"):
        if m is None:
            raise ConfigError(f"{fam} needs --m")
        return fam, {"n": n, "m": m, "p": p}
    if fam == "sep":
        if m is None:
            raise ConfigError("sep needs --m (number of holes)")
        return fam, {"n": n, "m": m, "q": 1.0 - p}
    raise ConfigError(f"exact analyses do not support family {fam!r}")


def cmd_exact(cfg: CliConfig) -> int:
    from . import exact as ex

    o = cfg.options
    analysis = o["analysis"]
    if analysis not in EXACT_ANALYSES:
        raise ConfigError(f"unknown analysis {analysis!r}; choose from {', '.join(EXACT_ANALYSES)}")
    out = cfg.out
    if analysis in ("tv", "stationary", "gap"):
        fam, params = _family_params(o)
        try:
            rm = ex.build_generator(fam, **params)
        except ex.StateSpaceOverflow as exc:
            raise ConfigError(str(exc)) from exc
        rm, mu = ex.stationary(fam, rm=rm)
        if analysis == "tv":
            eps = float(o["eps"])
            if not 0 < eps < 1:
                raise ConfigError("eps must lie in (0, 1)")
            mt = ex.mixing_time_exact(rm, eps, mu)
            times = np.linspace(0.0, 2.0 * mt.T, int(o["points"]))
            curve = ex.tv_curve(rm, times, mu)
            write_csv(out / "tv_curve.csv", [{"t": float(t), "d": float(d)} for t, d in zip(curve.times, curve.d)],
                      ["t", "d"], [f"family={fam}", f"T_eps={mt.T!r}", f"eps={eps!r}"])
            summary = {"family": fam, "params": params, "eps": eps, "T": mt.T, "d_at_T": mt.d_at_T,
                       "worst_state": "".join(map(str, mt.worst_state or ()))}
            print(f"T({eps}) = {mt.T!r}")
        elif analysis == "stationary":
            rows = [{"state": "".join(map(str, s)), "probability": float(v)} for s, v in zip(rm.states, mu)]
            write_csv(out / "stationary.csv", rows, ["state", "probability"], [f"family={fam}"])
            summary = {"family": fam, "params": params, "residual": ex.stationarity_residual(rm, mu)}
            print(f"residual = {summary['residual']!r}")
        else:
            gap = ex.spectral_gap(rm, mu) if fam != "fep-circle" else ex.spectral_gap(ex.restrict_to_ergodic(rm))
            summary = {"family": fam, "params": params, "gap": gap}
            print(f"gap = {gap!r}")
        write_json(out / "summary.json", summary)
        return 0
    if analysis == "aldous-brown":
        n, m = o["n"], o["m"] if o["m"] is not None else o["k"]
        chk = ex.aldous_brown_check(n, m, str(o["p"]))
        write_csv(out / "survival.csv",
                  [{"t": float(t), "survival": float(s), "bound": float(b)}
                   for t, s, b in zip(chk.times, chk.survival, chk.bound)],
                  ["t", "survival", "bound"], [f"n={n}", f"m={m}", f"p={o['p']!r}"])
        write_json(out / "summary.json", {"n": n, "m": m, "p": o["p"], "bound_holds": chk.bound_holds,
                                          "power_bound_holds": chk.power_bound_holds,
                                          "first_pile_one": str(chk.first_pile_one)})
        print(f"bound holds: {chk.bound_holds}; power bound holds: {chk.power_bound_holds}")
        if not (chk.bound_holds and chk.power_bound_holds):
            raise CheckFailed("capacity bound violated")
        return 0
    ell, rho = int(o["ell"]), float(o["rho"])
    rows = []
    for N in (50, 100, 200, 500, 1000, 2000):
        k = round(rho * N)
        rows.append({"N": N, "k": k, "deviation": ex.equivalence_error(N, k, ell, rho)})
    write_csv(out / "equivalence.csv", rows, ["N", "k", "deviation"], [f"ell={ell}", f"rho={rho!r}"])
    from .exact.ensembles import max_correlation_deviation

    corr = [{"ell": L, "deviation": max_correlation_deviation(ex.correlation_ratio(rho, L))} for L in range(2, 21)]
    write_csv(out / "correlation.csv", corr, ["ell", "deviation"], [f"rho={rho!r}"])
    write_json(out / "summary.json", {"ell": ell, "rho": rho, "equivalence": rows, "correlation": corr})
    for r in rows:
        print(f"N={r['N']} deviation={r['deviation']:.3e}")
    return 0


# ------------------------------------------------------------ simulate / hit

def _start_from(o, family):
    from .state import CircleConfig, SegmentConfig

    if o.get("occupation"):
        bits = [int(c) for c in str(o["occupation"])]
        return SegmentConfig(bits) if family in ("segment", "path") else CircleConfig(bits)
    try:
        return X.start_config(o["start"], o["n"], o["k"], "circle" if family == "circle" else "segment")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_simulate(cfg: CliConfig) -> int:
    from .engine import ClockField, ObepParams, simulate_circle, simulate_obep, simulate_path, simulate_segment
    from .lattice_path import to_path

    o = cfg.options
    fam, T, p = o["family"], float(o["T"]), float(o["p"])
    if T <= 0:
        raise ConfigError("T must be positive")
    if fam == "obep":
        params = ObepParams.right_reservoir(o["q"]) if o["reservoir"] == "right" else \
            ObepParams.left_reservoir(o["q"])
        traj = simulate_obep(np.zeros(o["n"], dtype=np.int64), params, cfg.seed, T)
    else:
        if not o.get("occupation"):
            _require_nk(o["n"], o["k"])
        c0 = _start_from(o, fam)
        if fam == "segment":
            traj = simulate_segment(c0, cfg.seed, T, p)
        elif fam == "circle":
            traj = simulate_circle(c0, cfg.seed, T, p)
        elif fam == "path":
            if not 0.5 <= p < 1:
                raise ConfigError("path simulation needs 1/2 <= p < 1")
            traj = simulate_path(to_path(c0), ClockField(p, cfg.seed), T)
        else:
            raise ConfigError(f"unknown family {fam!r}")
    traj.to_csv(cfg.out / "trajectory.csv")
    write_json(cfg.out / "summary.json", {"family": fam, "events": len(traj), "kind": traj.kind,
                                          "initial": [int(v) for v in traj.initial],
                                          "final": [int(v) for v in traj.final()]})
    print(f"{len(traj)} events")
    return 0


HIT_COLUMNS = ["N", "k", "p", "replicate", "seed", "statistic", "value", "censored"]


def cmd_hit(cfg: CliConfig) -> int:
    o = cfg.options
    fam = o["family"]
    if fam not in ("segment", "circle"):
        raise ConfigError("family must be segment or circle")
    _require_nk(o["n"], o["k"], strict=True)
    if o["reps"] < 2:
        raise ConfigError("reps must be at least 2")
    res = X.hitting_time(o["start"] if fam == "segment" or o["start"] != "minus" else "block",
                         o["n"], o["k"], float(o["p"]), int(o["reps"]), cfg.seed, family=fam,
                         horizon=o["horizon"], crosscheck=int(o["crosscheck"]), method=o["method"])
    write_csv(cfg.out / "samples.csv", res.records(), HIT_COLUMNS)
    write_json(cfg.out / "summary.json", res.summary())
    print(f"mean = {res.stats.mean!r} (stderr {res.stats.stderr!r}, censored {res.stats.censored_fraction})")
    if not res.checks.get("pile_identity", True):
        raise CheckFailed("hitting time differs from the pile process")
    return 0


# ------------------------------------------------------------ sweep

def cmd_sweep(cfg: CliConfig) -> int:
    o = cfg.options
    kind = o["kind"]
    if kind not in SWEEP_KINDS:
        raise ConfigError(f"unknown sweep {kind!r}; choose from {', '.join(SWEEP_KINDS)}")
    reps = int(o["reps"])
    if reps < 2:
        raise ConfigError("reps must be at least 2")
    try:
        if kind == "afep-slope":
            results, fit = X.afep_slope_sweep(_int_list(o["gaps"]), float(o["p"]), reps, cfg.seed)
        elif kind == "sfep-ratio":
            results, fit = X.sfep_ratio_sweep(_int_list(o["ns"]), float(o["rho"]), reps, cfg.seed)
        else:
            results, fit = X.circle_ratio_sweep(_int_list(o["ns"]), float(o["rho"]), reps, cfg.seed)
    except X.FitError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [r for res in results for r in res.records()]
    write_csv(cfg.out / "samples.csv", rows, HIT_COLUMNS)
    write_json(cfg.out / "summary.json", {"kind": kind, "fit": fit.as_dict(),
                                          "points": [r.summary() for r in results]})
    if kind == "afep-slope":
        print(f"slope = {fit.slope!r} stderr = {fit.stderr!r}")
    else:
        print(f"ratio spread = {fit.statistic!r}")
    return 0


# ------------------------------------------------------------ plotdata

def cmd_plotdata(cfg: CliConfig) -> int:
    src = cfg.options["results"]
    if not src:
        raise ConfigError("plotdata needs --results DIR")
    src = Path(src)
    man = read_manifest(src)
    command, conf = man["command"], man["config"]
    out = cfg.out
    if command == "exact" and conf.get("analysis") == "tv":
        rows, _ = read_csv(src / "tv_curve.csv")
        if not rows:
            raise ConfigError("empty results")
        t = [float(r["t"]) for r in rows]
        d = [float(r["d"]) for r in rows]
        write_csv(out / "tv_decay.csv", [{"t": a, "d": b} for a, b in zip(t, d)], ["t", "d"])
        atomic_write(out / "tv_decay.svg", svg_line_chart([("d(t)", t, d)], "worst-case distance", "t", "d(t)"))
        return 0
    if command == "sweep":
        summary = json.loads((src / "summary.json").read_text())
        pts = summary.get("points", [])
        if not pts:
            raise ConfigError("empty results")
        fit = summary["fit"]
        if summary["kind"] == "afep-slope":
            rows = [{"gap": pt["N"] - pt["k"], "log_mean": math.log(pt["mean"])} for pt in pts]
            comments = [f"slope={fit['slope']!r}", f"stderr={fit['stderr']!r}", f"intercept={fit['intercept']!r}"]
            write_csv(out / "log_hitting_vs_gap.csv", rows, ["gap", "log_mean"], comments)
            xs = [r["gap"] for r in rows]
            line = [fit["intercept"] + fit["slope"] * x for x in xs]
            svg = svg_line_chart([("log mean", xs, [r["log_mean"] for r in rows]), ("fit", xs, line)],
                                 "hitting time against gap", "N-k", "log mean")
            atomic_write(out / "log_hitting_vs_gap.svg", svg)
        else:
            rows = [{"N": N, "ratio": v} for N, v in zip(fit["xs"], fit["values"])]
            write_csv(out / "ratio_vs_n.csv", rows, ["N", "ratio"], [f"spread={fit['statistic']!r}"])
            svg = svg_line_chart([("ratio", [r["N"] for r in rows], [r["ratio"] for r in rows])],
                                 summary["kind"], "N", "ratio")
            atomic_write(out / "ratio_vs_n.svg", svg)
        return 0
    raise ManifestError(f"no plot data defined for {command} results")


COMMANDS = {"verify": cmd_verify, "exact": cmd_exact, "simulate": cmd_simulate, "hit": cmd_hit,
            "sweep": cmd_sweep, "plotdata": cmd_plotdata}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    try:
        cfg = resolve(args)
        if cfg.threads > 1:
            import numba

            numba.set_num_threads(min(cfg.threads, numba.config.NUMBA_NUM_THREADS))
        cfg.out.mkdir(parents=True, exist_ok=True)
        write_manifest(cfg.out, cfg.command, cfg.resolved())
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, ManifestError, X.CensoringError) as exc:
        print(f"fepmix: configuration error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"fepmix: check failed: {exc}", file=sys.stderr)
        return 1
    except (TypeError, ValueError, KeyError) as exc:
        print(f"fepmix: configuration error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
