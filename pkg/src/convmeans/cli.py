"""Command-line front end.

Functions are catalog names (``I``, ``koebe``, ...) or paths to series JSON
files. Tables and verdicts go under the output directory, which the
``CONVMEANS_OUT`` environment variable overrides.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

from .circle import integral_mean_err, sample_circle
from .config import RunConfig
from .loewner import Driving, fekete_szego_search, load_known_driving, loewner_coefficients
from .measures import UnitCircleMeasure, cauchy_transform
from .series import CATALOG_NAMES, SeriesError, TruncatedSeries, catalog, hadamard
from .star import reflect_negate, star_leq, star_profile
from .verify import SCENARIOS, run_scenario

log = logging.getLogger("convmeans")

SCENARIO_ORDER = ("thmA", "baernstein", "q1", "q2", "steiner")


class UsageError(Exception):
    pass


def _load_series(spec: str, N: int) -> TruncatedSeries:
    if spec in CATALOG_NAMES:
        return catalog(spec, N)
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"{spec!r} is neither a catalog name nor a file")
    obj = json.loads(path.read_text())
    if "atoms" in obj:
        return cauchy_transform(UnitCircleMeasure.from_json(obj), N)
    return TruncatedSeries.from_json(obj)


def _parse_p(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _num(x) -> str:
    return repr(float(x))


def _fmt(x: complex) -> str:
    x = complex(x)
    if abs(x.imag) <= 1e-12 * max(1.0, abs(x.real)):
        return f"{x.real:.12g}"
    return f"{x.real:.12g}{x.imag:+.12g}j"


def _emit_csv(rows, header, path: Path | None) -> None:
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(header)
    out.writerows(rows)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        log.info("wrote %s", path)


def _out(cfg: RunConfig, args, name: str) -> Path | None:
    return cfg.output_path() / name if args.save else None


def cmd_means(cfg, args) -> int:
    f = _load_series(args.fn, cfg.N)
    radii = args.r or list(cfg.r_grid)
    rows = []
    for r in radii:
        s = sample_circle(f, r, cfg.M)
        for p in args.p:
            value, err = integral_mean_err(s, p)
            rows.append((r, p, _num(value), _num(err)))
    _emit_csv(rows, ("r", "p", "value", "err_bound"), _out(cfg, args, f"means_{Path(args.fn).stem}.csv"))
    return 0


def cmd_star(cfg, args) -> int:
    f = _load_series(args.fn, cfg.N)
    g = _load_series(args.vs, cfg.N) if args.vs else None
    radii = args.r or list(cfg.r_grid)
    rows = []
    verdicts = []
    for r in radii:
        pu = star_profile(sample_circle(f, r, cfg.M).log_abs(), cfg.K)
        if args.neg:
            pu = reflect_negate(pu)
        if g is None:
            rows += [(r, _num(t), _num(u), "", "", _num(pu.err_bound)) for t, u in zip(pu.thetas, pu.values)]
            continue
        pv = star_profile(sample_circle(g, r, cfg.M).log_abs(), cfg.K)
        if args.neg:
            pv = reflect_negate(pv)
        gaps = pu.values - pv.values
        err = pu.err_bound + pv.err_bound
        rows += [(r, _num(t), _num(a), _num(b), _num(d), _num(err)) for t, a, b, d in zip(pu.thetas, pu.values, pv.values, gaps)]
        verdicts.append((r, star_leq(pu, pv)))
    stem = Path(args.fn).stem + (f"_vs_{Path(args.vs).stem}" if args.vs else "") + ("_neg" if args.neg else "")
    _emit_csv(rows, ("r", "theta", "u_star", "v_star", "gap", "err_bound"), _out(cfg, args, f"star_{stem}.csv"))
    for r, v in verdicts:
        state = "holds" if v.holds else "FAILS"
        print(f"# r={r:g}: {state} (max gap {v.gap:.3e} at theta={v.theta:.6f}, err {v.err:.3e}, margin {v.margin:.3e})")
    return 0


def cmd_convolve(cfg, args) -> int:
    f = _load_series(args.fn, cfg.N)
    g = _load_series(args.other, cfg.N)
    h = hadamard(f, g)
    shown = ", ".join(_fmt(c) for c in h.coeffs[: args.show])
    more = ", ..." if len(h) > args.show else ""
    print(f"({shown}{more})")
    if args.save:
        path = cfg.output_path() / f"convolve_{Path(args.fn).stem}_{Path(args.other).stem}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(h.to_json(), indent=2) + "\n")
        log.info("wrote %s", path)
    return 0


def cmd_measure(cfg, args) -> int:
    if args.action != "moments":
        raise UsageError(f"unknown measure action {args.action!r}")
    mu = UnitCircleMeasure.from_json(json.loads(Path(args.file).read_text()))
    F = cauchy_transform(mu, args.n)
    rows = [(n, _num(c.real), _num(c.imag)) for n, c in enumerate(F.coeffs)]
    print(f"# total variation {_num(mu.total_variation)}")
    _emit_csv(rows, ("n", "re", "im"), _out(cfg, args, f"moments_{Path(args.file).stem}.csv"))
    return 0


def cmd_loewner(cfg, args) -> int:
    out = cfg.output_path()
    if args.action == "search":
        res = fekete_szego_search(
            m_segments=args.segments, budget=args.budget, seed=cfg.seed, n_coeffs=args.order
        )
        print(f"|a5| = {abs(res.a5):.6f}  success = {res.success}  evaluations = {res.evaluations}")
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"loewner_search_seed{cfg.seed}.json"
        path.write_text(json.dumps(res.to_json(), indent=2) + "\n")
        print(f"# wrote {path}")
        return 0 if res.success else 1
    if args.action == "coeffs":
        d = Driving.from_json(json.loads(Path(args.driving).read_text())) if args.driving else load_known_driving()
        H = loewner_coefficients(d, N=args.order)
        for n, c in enumerate(H.coeffs):
            print(f"{n},{_num(c.real)},{_num(c.imag)}")
        if args.save:
            out.mkdir(parents=True, exist_ok=True)
            (out / "loewner_coeffs.json").write_text(json.dumps(H.to_json(), indent=2) + "\n")
        return 0
    raise UsageError(f"unknown loewner action {args.action!r}")


def cmd_verify(cfg, args) -> int:
    names = SCENARIO_ORDER if args.scenario == "all" else (args.scenario,)
    out = cfg.output_path()
    ok = True
    for name in names:
        v = run_scenario(name, cfg, out_dir=out)
        print(v.summary())
        ok &= v.as_expected
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON file with RunConfig fields")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory ($CONVMEANS_OUT wins)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--n-coeffs", type=int, dest="n_coeffs", default=argparse.SUPPRESS)
    common.add_argument("--fft-size", type=int, dest="fft_size", default=argparse.SUPPRESS)
    common.add_argument("--theta-points", type=int, dest="theta_points", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="convmeans", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("means", parents=[common], help="integral means M_p(r, f) as CSV")
    p.add_argument("fn")
    p.add_argument("--p", type=_parse_p, action="append", required=True)
    p.add_argument("--r", type=float, action="append")
    p.add_argument("--save", action="store_true", help="also write the CSV to the output directory")
    p.set_defaults(func=cmd_means)

    p = sub.add_parser("star", parents=[common], help="star-function profile of log|f|")
    p.add_argument("fn")
    p.add_argument("--vs", help="compare against this function")
    p.add_argument("--neg", action="store_true", help="use -log|f| instead")
    p.add_argument("--r", type=float, action="append")
    p.add_argument("--save", action="store_true")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("convolve", parents=[common], help="Hadamard product of two series")
    p.add_argument("fn")
    p.add_argument("other", help="catalog name, series JSON, or measure JSON")
    p.add_argument("--show", type=int, default=8)
    p.add_argument("--save", action="store_true")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("measure", parents=[common], help="measure utilities")
    p.add_argument("action", choices=("moments",))
    p.add_argument("file")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--save", action="store_true")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("loewner", parents=[common], help="Loewner-chain search and coefficients")
    p.add_argument("action", choices=("search", "coeffs"))
    p.add_argument("--segments", type=int, default=3)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--driving", help="driving JSON for coeffs (default: shipped driving)")
    p.add_argument("--save", action="store_true")
    p.set_defaults(func=cmd_loewner)

    p = sub.add_parser("verify", parents=[common], help="run theorem scenarios and write verdicts")
    p.add_argument("scenario", choices=(*SCENARIOS, "all"))
    p.set_defaults(func=cmd_verify)
    return ap


def _config(args) -> RunConfig:
    overrides = {k: getattr(args, k, None) for k in ("seed", "n_coeffs", "fft_size", "theta_points")}
    overrides["out_dir"] = getattr(args, "out", None)
    if getattr(args, "config", None):
        return RunConfig.load(args.config, **overrides)
    return RunConfig(**{k: v for k, v in overrides.items() if v is not None})


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING, format="%(message)s")
    try:
        cfg = _config(args)
        return args.func(cfg, args)
    except (UsageError, SeriesError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"convmeans: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
