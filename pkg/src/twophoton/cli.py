"""Command-line front end.

    twophoton ghosh-mandel --aA 1 --aB 1 --sweep dx:0:2L0:64 --models classical,converted
    twophoton eraser --case c --phi 90deg --theta1 0 --theta2 90deg
    twophoton franson --mode narrow --delta-L 63cm --sigma-x 36um --lambda-p 351nm --sweep phase:0:4pi:256
    twophoton convert terms.txt
    twophoton run experiment.cfg

Every option can also come from a flat ``key = value`` file given with
``--config``; flags on the command line win.  Exit codes: 0 ok, 2 bad
configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, TextIO

import numpy as np

from . import experiments, franson
from .convert import IntensityPoly, apply_conversion_rule, parse_poly, visibility_of
from .errors import (ConfigError, NotFringeForm, ParseError, QuadratureNotConverged,
                     RegimeError)
from .experiments import EraserConfig, GhoshMandelConfig
from .units import parse_angle, parse_float, parse_length, parse_multiple

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

COMMON_DEFAULTS = {"models": None, "seed": None, "samples": "100000", "sweep": None, "out": None}
GM_DEFAULTS = {"aA": "1", "aB": "1", "L0": "1um", "K1": str(math.sqrt(0.5)),
               "K2": str(math.sqrt(0.5)), "x1": "0", "x2": "0"}
ERASER_DEFAULTS = {"case": None, "phi": "90deg", "theta1": None, "theta2": None,
                   "Is": "1", "Ii": "1"}
FRANSON_DEFAULTS = {"mode": "narrow", "delta_L": "63cm", "sigma_x": "36um", "sigma_k": None,
                    "lambda_p": "351nm", "xs": "0", "xi": "0", "tau": None}


@dataclass
class Sweep:
    name: str
    start: float
    stop: float
    points: int


def parse_sweep(text: str, parsers: dict[str, Callable[[str], float]]) -> Sweep:
    parts = text.split(":")
    if len(parts) != 4:
        raise ParseError(f"sweep must be name:start:stop:points, got {text!r}")
    name, start, stop, points = parts
    if name not in parsers:
        raise ConfigError(f"cannot sweep {name!r}; choose from {sorted(parsers)}")
    try:
        n = int(points)
    except ValueError:
        raise ParseError(f"sweep point count {points!r} is not an integer") from None
    if n < 2:
        raise ConfigError("a sweep needs at least 2 points")
    return Sweep(name, parsers[name](start), parsers[name](stop), n)


def read_config_file(path: str) -> dict[str, str]:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def resolve(args: argparse.Namespace, defaults: dict[str, str | None]) -> dict[str, str | None]:
    """Merge defaults < config file < command-line flags."""
    merged = {**COMMON_DEFAULTS, **defaults}
    if getattr(args, "config", None):
        file_values = read_config_file(args.config)
        file_values.pop("experiment", None)
        unknown = set(file_values) - set(merged)
        if unknown:
            raise ConfigError(f"unknown keys in {args.config}: {sorted(unknown)}")
        merged.update(file_values)
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def parse_models(text: str | None, allowed: tuple[str, ...], default: tuple[str, ...]) -> list[str]:
    if not text:
        return list(default)
    models = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in models if m not in allowed]
    if bad:
        raise ConfigError(f"unknown models {bad}; choose from {list(allowed)}")
    return models


def parse_seed(text: str | None) -> int | None:
    if text is None:
        return None
    try:
        seed = int(text)
    except ValueError:
        raise ParseError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must fit in 64 bits")
    return seed


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_csv(scan: experiments.FringeScan, fh: TextIO):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([scan.parameter, *scan.models])
    for row in scan.samples:
        writer.writerow([fmt(v) for v in row])


def emit(scan: experiments.FringeScan, out: str | None, summary: list[str]):
    if out:
        with open(out, "w", newline="") as fh:
            write_csv(scan, fh)
        stream = sys.stdout
    else:
        write_csv(scan, sys.stdout)
        stream = sys.stderr
    for line in summary:
        print(line, file=stream)


def visibility_lines(scan: experiments.FringeScan) -> list[str]:
    return [f"V_{name} = {v:.6f}" for name, v in scan.visibilities.items()]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_ghosh_mandel(args) -> int:
    o = resolve(args, GM_DEFAULTS)
    cfg = GhoshMandelConfig(parse_float(o["aA"]), parse_float(o["aB"]), parse_length(o["L0"]),
                            parse_float(o["K1"]), parse_float(o["K2"]))
    models = parse_models(o["models"], ("classical", "converted", "quantum", "mc"),
                          ("classical", "converted", "quantum"))
    seed = parse_seed(o["seed"])
    if "mc" in models and seed is None:
        raise ConfigError("the Monte Carlo model (mc) needs --seed")
    samples = int(parse_float(o["samples"]))
    x1, x2 = parse_length(o["x1"]), parse_length(o["x2"])
    lengths = lambda s: parse_multiple(s, "L0", cfg.L0, parse_length)
    if o["sweep"]:
        sw = parse_sweep(o["sweep"], {"dx": lengths, "x1": lengths, "x2": lengths})
        scan = experiments.scan(cfg, sw.name, (sw.start, sw.stop), sw.points, models,
                                samples=samples, seed=seed, base_point={"x1": x1, "x2": x2})
        summary = visibility_lines(scan)
        summary.append(f"V_closed_form = {experiments.ghosh_mandel_visibility(cfg):.6f}")
        emit(scan, o["out"], summary)
        return EXIT_OK
    point = {
        "classical": lambda: experiments.ghosh_mandel_classical(cfg, x1, x2),
        "converted": lambda: experiments.ghosh_mandel_converted(cfg, x1, x2),
        "quantum": lambda: experiments.ghosh_mandel_quantum(cfg, x1, x2),
        "mc": lambda: experiments.ghosh_mandel_mc(cfg, x1, x2, samples, seed),
    }
    return _point_output({m: point[m]() for m in models}, "dx", x1 - x2, o["out"])


def _point_output(values: dict[str, float], param: str, at: float, out: str | None) -> int:
    for name, v in values.items():
        print(f"{name} = {fmt(v)}")
    if out:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([param, *values])
            writer.writerow([fmt(at), *(fmt(v) for v in values.values())])
    return EXIT_OK


def _eraser_config(o) -> EraserConfig:
    theta1 = None if o["theta1"] is None else parse_angle(o["theta1"])
    theta2 = None if o["theta2"] is None else parse_angle(o["theta2"])
    return EraserConfig(parse_angle(o["phi"]), theta1, theta2,
                        parse_float(o["Is"]), parse_float(o["Ii"]), o["case"])


def cmd_eraser(args) -> int:
    o = resolve(args, ERASER_DEFAULTS)
    cfg = _eraser_config(o)
    models = parse_models(o["models"], ("classical", "converted", "quantum", "mc"),
                          ("classical", "converted", "quantum"))
    seed = parse_seed(o["seed"])
    if "mc" in models and seed is None:
        raise ConfigError("the Monte Carlo model (mc) needs --seed")
    samples = int(parse_float(o["samples"]))
    if o["sweep"]:
        sw = parse_sweep(o["sweep"], {"phi": parse_angle, "theta1": parse_angle,
                                      "theta2": parse_angle})
        scan = experiments.scan(cfg, sw.name, (sw.start, sw.stop), sw.points, models,
                                samples=samples, seed=seed)
        emit(scan, o["out"], [f"case ({cfg.case})", *visibility_lines(scan)])
        return EXIT_OK
    values = {}
    for m in models:
        if m == "mc":
            values[m] = experiments.eraser_mc(cfg, samples, seed).value
        else:
            values[m] = experiments.eraser_coincidence(cfg, m)
    print(f"case ({cfg.case})")
    return _point_output(values, "phi", cfg.phi, o["out"])


def _franson_config(o) -> franson.FransonConfig:
    lambda_p = parse_length(o["lambda_p"])
    k_p = 2.0 * math.pi / lambda_p
    if o["sigma_k"] is not None:
        sigma_k = parse_float(o["sigma_k"])
    else:
        sigma_k = 1.0 / (2.0 * parse_length(o["sigma_x"]))
    mode = o["mode"]
    if mode not in ("narrow", "wide"):
        raise ConfigError(f"--mode must be narrow or wide, got {mode!r}")
    return franson.FransonConfig(parse_length(o["delta_L"]), k_p,
                                 franson.SpectralAmplitude(k_p / 2.0, sigma_k),
                                 parse_length(o["xs"]), parse_length(o["xi"]), mode)


def cmd_franson(args) -> int:
    o = resolve(args, FRANSON_DEFAULTS)
    cfg = _franson_config(o)
    requested = parse_models(o["models"], ("quantum", "classical", "narrow", "wide"),
                             ("quantum", "classical"))
    modes = list(dict.fromkeys(cfg.window.value if m == "quantum" else m for m in requested))
    summary = [
        f"sigma_k*delta_L = {cfg.regime_parameter:.6g} (threshold {franson.SUPPRESSION_THRESHOLD:g}): "
        + ("pass" if cfg.in_suppression_regime() else "FAIL"),
    ]
    amps = franson.amplitudes(cfg.replace(x_s=cfg.x_i))
    summary.append(f"|psi_SL|/|psi_SS| = {abs(amps.sl) / abs(amps.ss):.6g}")
    if o["tau"] is not None:
        tau = parse_float(o["tau"])
        window = franson.classify_window(cfg.delta_L, tau)
        summary.append(f"c*tau = {franson.C_UM_PER_NS * tau / 1e4:.4g} cm vs delta_L = "
                       f"{cfg.delta_L / 1e4:.4g} cm: {window.value} window")
    if o["sweep"]:
        sw = parse_sweep(o["sweep"], {"phase": parse_angle})
        phases = np.linspace(sw.start, sw.stop, sw.points)
        scan = franson.fringe_scan(cfg, modes, phases=phases)
        emit(scan, o["out"], summary + visibility_lines(scan))
        return EXIT_OK
    values = {}
    for m in modes:
        if m == "narrow":
            values[m] = franson.coincidence_narrow(cfg)
        elif m == "wide":
            values[m] = franson.coincidence_wide(cfg)
        else:
            values[m] = franson.coincidence_classical(cfg)
    for line in summary:
        print(line)
    return _point_output(values, "phase", cfg.fringe_phase, o["out"])


def _poly_visibility(p: IntensityPoly) -> str:
    if "cos" not in p.labels():
        return "n/a (no cos-labelled fringe term)"
    try:
        return f"{visibility_of(p):.6f}"
    except NotFringeForm as exc:
        return f"n/a ({exc})"


def cmd_convert(args) -> int:
    names = ("s", "i")
    if args.file:
        try:
            text = Path(args.file).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.file}: {exc}") from None
        poly, names = parse_poly(text)
    elif args.preset == "ghosh-mandel":
        o = resolve(args, GM_DEFAULTS)
        poly = experiments.ghosh_mandel_poly(GhoshMandelConfig(parse_float(o["aA"]),
                                                               parse_float(o["aB"])))
        names = ("A", "B")
    elif args.preset == "eraser":
        o = resolve(args, ERASER_DEFAULTS)
        poly = experiments.eraser_poly(_eraser_config(o))
    else:
        raise ConfigError("convert needs a polynomial file or --preset")
    after = apply_conversion_rule(poly)
    print(f"before = {poly.format(names)}")
    print(f"after  = {after.format(names)}")
    print(f"V_before = {_poly_visibility(poly)}")
    print(f"V_after  = {_poly_visibility(after)}")
    return EXIT_OK


def cmd_run(args) -> int:
    values = read_config_file(args.config_file)
    experiment = values.get("experiment")
    if experiment not in ("ghosh-mandel", "eraser", "franson"):
        raise ConfigError(f"{args.config_file}: experiment must be ghosh-mandel, eraser or franson")
    return main([experiment, "--config", args.config_file, *args.rest])


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--sweep", help="name:start:stop:points (units allowed, e.g. phase:0:4pi:256)")
    p.add_argument("--models", help="comma-separated model list")
    p.add_argument("--seed", help="64-bit seed, required by the mc model")
    p.add_argument("--samples", help="Monte Carlo samples per point (default 100000)")
    p.add_argument("--out", help="CSV output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twophoton", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gm = sub.add_parser("ghosh-mandel", help="two-place source fringes vs detector separation")
    gm.add_argument("--aA")
    gm.add_argument("--aB")
    gm.add_argument("--L0", help="fringe spacing (length)")
    gm.add_argument("--K1")
    gm.add_argument("--K2")
    gm.add_argument("--x1")
    gm.add_argument("--x2")
    _common(gm)
    gm.set_defaults(func=cmd_ghosh_mandel)

    er = sub.add_parser("eraser", help="polarization eraser behind a 50:50 beam splitter")
    er.add_argument("--case", choices=("a", "b", "c"))
    er.add_argument("--phi")
    er.add_argument("--theta1")
    er.add_argument("--theta2")
    er.add_argument("--Is")
    er.add_argument("--Ii")
    _common(er)
    er.set_defaults(func=cmd_eraser)

    fr = sub.add_parser("franson", help="unbalanced interferometers on both photons")
    fr.add_argument("--mode", choices=("narrow", "wide"))
    fr.add_argument("--delta-L", dest="delta_L")
    fr.add_argument("--sigma-x", dest="sigma_x")
    fr.add_argument("--sigma-k", dest="sigma_k", help="rad/um; overrides --sigma-x")
    fr.add_argument("--lambda-p", dest="lambda_p")
    fr.add_argument("--xs")
    fr.add_argument("--xi")
    fr.add_argument("--tau", help="coincidence window in ns, for the window classification")
    _common(fr)
    fr.set_defaults(func=cmd_franson)

    cv = sub.add_parser("convert", help="apply the conversion rule to an intensity polynomial")
    cv.add_argument("file", nargs="?", help="lines of '<sources> <coefficient> [label]'")
    cv.add_argument("--preset", choices=("ghosh-mandel", "eraser"))
    cv.add_argument("--config")
    for flag in ("--aA", "--aB", "--phi", "--theta1", "--theta2", "--Is", "--Ii"):
        cv.add_argument(flag)
    cv.add_argument("--case", choices=("a", "b", "c"))
    cv.set_defaults(func=cmd_convert)

    rn = sub.add_parser("run", help="run the experiment named by 'experiment = ...' in a config file")
    rn.add_argument("config_file")
    rn.add_argument("rest", nargs=argparse.REMAINDER)
    rn.set_defaults(func=cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureNotConverged, RegimeError, NotFringeForm) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
