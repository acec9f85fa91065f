"""Named experiment models: two-place source fringes and the polarization eraser.

Each experiment is evaluated three ways:

* classical    - intensity products averaged over the random phase (via ``fields``)
* converted    - the classical polynomial after the same-source conversion rule
* quantum      - the quantum-optics closed forms, hard-coded as reference
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

from . import fields
from .convert import IntensityPoly, apply_conversion_rule
from .errors import ConfigError, NotFringeForm, ScanTooCoarse
from .fields import FieldExpr, FieldTerm, Source

MIN_POINTS_PER_PERIOD = 16
FIT_RTOL = 1e-6


class Model(str, Enum):
    CLASSICAL = "classical"
    CONVERTED = "converted"
    QUANTUM = "quantum"
    MONTE_CARLO = "mc"


# ---------------------------------------------------------------------------
# fringe scans
# ---------------------------------------------------------------------------

@dataclass
class FringeScan:
    """Coincidence curves over one swept parameter with per-model visibilities."""

    parameter: str
    values: np.ndarray
    curves: dict[str, np.ndarray]
    visibilities: dict[str, float]
    period: float

    @property
    def samples(self) -> list[tuple[float, ...]]:
        cols = list(self.curves.values())
        return [(float(x), *(float(c[i]) for c in cols)) for i, x in enumerate(self.values)]

    @property
    def models(self) -> list[str]:
        return list(self.curves)


def extract_visibility(x, y, period: float) -> float:
    """Fit c0 + c1 cos(2 pi x / P) + c2 sin(2 pi x / P) and return hypot(c1, c2) / c0.

    Raises NotFringeForm if the curve is not of that form.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = 2.0 * np.pi * x / period
    basis = np.column_stack([np.ones_like(w), np.cos(w), np.sin(w)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    scale = float(np.max(np.abs(y))) if y.size else 0.0
    if scale == 0.0:
        return 0.0
    if np.max(np.abs(basis @ coef - y)) > FIT_RTOL * scale:
        raise NotFringeForm("curve has harmonics beyond the fundamental of the known period")
    c0, amp = coef[0], math.hypot(coef[1], coef[2])
    if amp <= 1e-12 * scale:
        return 0.0
    if c0 <= 0 or amp > c0 * (1 + 1e-9):
        raise NotFringeForm(f"fringe amplitude {amp} exceeds mean {c0}")
    return float(min(amp / c0, 1.0))


def check_sampling(start: float, stop: float, n_points: int, period: float,
                   per_period: int = MIN_POINTS_PER_PERIOD):
    periods = abs(stop - start) / period
    needed = math.ceil(per_period * max(1.0, periods))
    if n_points < needed:
        raise ScanTooCoarse(
            f"{n_points} points over {periods:.3g} periods; need at least {needed} "
            f"({per_period} per period)"
        )


# ---------------------------------------------------------------------------
# two-place source (Ghosh-Mandel)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GhoshMandelConfig:
    """Waves from places A and B with amplitudes a_A, a_B; fringe spacing L0 (um)."""

    a_A: float = 1.0
    a_B: float = 1.0
    L0: float = 1.0
    K1: float = math.sqrt(0.5)
    K2: float = math.sqrt(0.5)

    def __post_init__(self):
        if self.L0 <= 0:
            raise ConfigError(f"L0 must be positive, got {self.L0}")
        if self.K1 <= 0 or self.K2 <= 0:
            raise ConfigError("detector scale factors K1, K2 must be positive")
        if self.a_A < 0 or self.a_B < 0:
            raise ConfigError("amplitudes a_A, a_B must be >= 0")

    def fringe_angle(self, x1: float, x2: float) -> float:
        return 2.0 * math.pi * (x1 - x2) / self.L0


def ghosh_mandel_quantum(cfg: GhoshMandelConfig, x1: float, x2: float) -> float:
    return 2.0 * cfg.K1 * cfg.K2 * (1.0 + math.cos(cfg.fringe_angle(x1, x2)))


def ghosh_mandel_visibility(cfg: GhoshMandelConfig) -> float:
    ia, ib = cfg.a_A**2, cfg.a_B**2
    denom = ia * ia + ib * ib + 2.0 * ia * ib
    return 0.0 if denom == 0 else 2.0 * ia * ib / denom


def ghosh_mandel_fields(cfg: GhoshMandelConfig, x: float) -> FieldExpr:
    """E(x) = a_A e^{i pi x/L0} + a_B e^{-i pi x/L0 + i delta}: two waves crossing at a small angle."""
    k = math.pi / cfg.L0
    return FieldExpr((FieldTerm(cfg.a_A, Source.SIGNAL, k * x),
                      FieldTerm(cfg.a_B, Source.IDLER, -k * x, True)))


def _gm_normalized(cfg: GhoshMandelConfig, x1: float, x2: float,
                   rate: Callable[[FieldExpr, FieldExpr], float]) -> float:
    # divide by the fringe mean: rate at Theta and Theta + pi average to it
    here = rate(ghosh_mandel_fields(cfg, x1), ghosh_mandel_fields(cfg, x2))
    opposite = rate(ghosh_mandel_fields(cfg, x1 + cfg.L0 / 2), ghosh_mandel_fields(cfg, x2))
    mean = 0.5 * (here + opposite)
    if mean == 0.0:
        return 0.0
    return 2.0 * cfg.K1 * cfg.K2 * here / mean


def ghosh_mandel_classical(cfg: GhoshMandelConfig, x1: float, x2: float,
                           method: str = "closed") -> float:
    """Classical joint detection rate; ``method="fields"`` derives it from the
    phase-averaged field product instead of the closed form."""
    if cfg.a_A == 0 and cfg.a_B == 0:
        raise ConfigError("a_A and a_B cannot both vanish")
    if method == "closed":
        return 2.0 * cfg.K1 * cfg.K2 * (
            1.0 + ghosh_mandel_visibility(cfg) * math.cos(cfg.fringe_angle(x1, x2)))
    if method == "fields":
        return _gm_normalized(cfg, x1, x2,
                              lambda e1, e2: fields.average_over_delta(e1, e2).value)
    raise ConfigError(f"unknown method {method!r}")


def ghosh_mandel_converted(cfg: GhoshMandelConfig, x1: float, x2: float) -> float:
    """Rule-converted classical rate, renormalized to the fringe mean 2 K1 K2 of the quantum rate."""
    return _gm_normalized(cfg, x1, x2, lambda e1, e2: apply_conversion_rule(
        classical_poly(e1, e2)).total())


def ghosh_mandel_poly(cfg: GhoshMandelConfig) -> IntensityPoly:
    """Numerator of the classical rate, (|a_A|^2 + |a_B|^2)^2 + 2|a_A|^2|a_B|^2 cos Theta."""
    ia, ib = cfg.a_A**2, cfg.a_B**2
    return IntensityPoly.from_terms([
        ("ss", ia * ia), ("ii", ib * ib), ("si", 2 * ia * ib), ("si", 2 * ia * ib, "cos"),
    ])


def ghosh_mandel_mc(cfg: GhoshMandelConfig, x1: float, x2: float, samples: int, seed: int) -> float:
    avg = fields.average_over_delta(ghosh_mandel_fields(cfg, x1), ghosh_mandel_fields(cfg, x2),
                                    "montecarlo", samples, seed).value
    mean = (cfg.a_A**2 + cfg.a_B**2) ** 2
    if mean == 0.0:
        raise ConfigError("a_A and a_B cannot both vanish")
    return 2.0 * cfg.K1 * cfg.K2 * avg / mean


# ---------------------------------------------------------------------------
# polarization eraser
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EraserConfig:
    """Half-wave plate angle phi, optional polarizers theta1 (D1), theta2 (D2).

    Case (a): no polarizers, (b): theta1 only, (c): both.
    """

    phi: float = math.pi / 2
    theta1: float | None = None
    theta2: float | None = None
    I_s: float = 1.0
    I_i: float = 1.0
    case: str | None = None

    def __post_init__(self):
        if self.theta2 is not None and self.theta1 is None:
            raise ConfigError("theta2 given without theta1")
        if self.I_s < 0 or self.I_i < 0:
            raise ConfigError("intensities must be >= 0")
        inferred = "a" if self.theta1 is None else ("b" if self.theta2 is None else "c")
        if self.case is None:
            object.__setattr__(self, "case", inferred)
        elif self.case != inferred:
            raise ConfigError(f"case ({self.case}) inconsistent with the polarizers given "
                              f"(that is case ({inferred}))")

    @property
    def A_s(self) -> float:
        return math.sqrt(self.I_s)

    @property
    def A_i(self) -> float:
        return math.sqrt(self.I_i)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def eraser_fields(cfg: EraserConfig):
    return fields.build_eraser_fields(cfg.phi, cfg.theta1, cfg.theta2, cfg.A_s, cfg.A_i)


def classical_poly(d1, d2) -> IntensityPoly:
    """Source-resolved phase-averaged coincidence product as an IntensityPoly."""
    return IntensityPoly.from_terms(fields.coincidence_terms(d1, d2).items())


def eraser_poly(cfg: EraserConfig) -> IntensityPoly:
    return classical_poly(*eraser_fields(cfg))


def eraser_classical_closed(cfg: EraserConfig) -> float:
    """Closed forms of the classical phase-averaged rates for cases (a), (b), (c)."""
    phi, t1, t2, i_s, i_i = cfg.phi, cfg.theta1, cfg.theta2, cfg.I_s, cfg.I_i
    if cfg.case == "a":
        return 0.25 * (i_s**2 + i_i**2) + 0.5 * i_s * i_i * math.sin(phi) ** 2
    if cfg.case == "b":
        return (0.25 * i_s**2 * math.cos(t1 - phi) ** 2 + 0.25 * i_i**2 * math.cos(t1) ** 2
                + 0.25 * i_s * i_i * math.sin(phi) ** 2)
    return (0.25 * i_s**2 * math.cos(t1 - phi) ** 2 * math.cos(t2 - phi) ** 2
            + 0.25 * i_i**2 * math.cos(t1) ** 2 * math.cos(t2) ** 2
            + 0.25 * i_s * i_i * math.sin(phi) ** 2 * math.sin(t1 - t2) ** 2)


def eraser_quantum(cfg: EraserConfig) -> float:
    """Quantum-optics coincidence rates for the three cases."""
    s2 = math.sin(cfg.phi) ** 2
    if cfg.case == "a":
        return 0.5 * s2
    if cfg.case == "b":
        return 0.25 * s2
    return 0.25 * s2 * math.sin(cfg.theta1 - cfg.theta2) ** 2


def eraser_coincidence(cfg: EraserConfig, model: Model | str) -> float:
    model = Model(model)
    if model is Model.CLASSICAL:
        return fields.average_over_delta(*eraser_fields(cfg)).value
    if model is Model.CONVERTED:
        return apply_conversion_rule(eraser_poly(cfg)).total()
    if model is Model.QUANTUM:
        return eraser_quantum(cfg)
    raise ConfigError("Monte Carlo needs samples and a seed; use eraser_mc")


def eraser_mc(cfg: EraserConfig, samples: int, seed: int) -> fields.PhaseAverage:
    return fields.average_over_delta(*eraser_fields(cfg), method="montecarlo",
                                     samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

GM_PARAMETERS = ("dx", "x1", "x2")
ERASER_PARAMETERS = ("phi", "theta1", "theta2")
DEFAULT_MODELS = (Model.CLASSICAL, Model.CONVERTED, Model.QUANTUM)


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def scan(experiment: GhoshMandelConfig | EraserConfig, parameter: str,
         range_: tuple[float, float], n_points: int,
         models: Sequence[Model | str] = DEFAULT_MODELS,
         samples: int = 100_000, seed: int | None = None,
         base_point: Mapping[str, float] | None = None) -> FringeScan:
    """Evaluate the chosen models over ``parameter`` and extract visibilities.

    The fringe period is known per experiment: L0 for detector separations,
    pi for the eraser angles (sin^2 terms are cos 2x fringes).  ``base_point``
    holds x1/x2 for the two-place source.
    """
    models = [Model(m) for m in models]
    if Model.MONTE_CARLO in models and seed is None:
        raise ConfigError("the Monte Carlo model needs a seed")
    start, stop = range_
    values = np.linspace(start, stop, n_points)
    base = dict(base_point or {})

    if isinstance(experiment, GhoshMandelConfig):
        if parameter not in GM_PARAMETERS:
            raise ConfigError(f"parameter {parameter!r} not in {GM_PARAMETERS}")
        period = experiment.L0
        check_sampling(start, stop, n_points, period)

        def positions(v):
            x1, x2 = base.get("x1", 0.0), base.get("x2", 0.0)
            if parameter == "dx":
                return v, 0.0
            return (v, x2) if parameter == "x1" else (x1, v)

        evaluators = {
            Model.CLASSICAL: lambda v, i: ghosh_mandel_classical(experiment, *positions(v)),
            Model.CONVERTED: lambda v, i: ghosh_mandel_converted(experiment, *positions(v)),
            Model.QUANTUM: lambda v, i: ghosh_mandel_quantum(experiment, *positions(v)),
            Model.MONTE_CARLO: lambda v, i: ghosh_mandel_mc(
                experiment, *positions(v), samples, _point_seed(seed, i)),
        }
    elif isinstance(experiment, EraserConfig):
        if parameter not in ERASER_PARAMETERS:
            raise ConfigError(f"parameter {parameter!r} not in {ERASER_PARAMETERS}")
        if getattr(experiment, parameter) is None:
            raise ConfigError(f"case ({experiment.case}) has no {parameter} to sweep")
        period = math.pi
        check_sampling(start, stop, n_points, period)

        def at(v):
            return dataclasses.replace(experiment, **{parameter: float(v)})

        evaluators = {
            Model.CLASSICAL: lambda v, i: eraser_coincidence(at(v), Model.CLASSICAL),
            Model.CONVERTED: lambda v, i: eraser_coincidence(at(v), Model.CONVERTED),
            Model.QUANTUM: lambda v, i: eraser_coincidence(at(v), Model.QUANTUM),
            Model.MONTE_CARLO: lambda v, i: eraser_mc(at(v), samples, _point_seed(seed, i)).value,
        }
    else:
        raise ConfigError(f"unsupported experiment {type(experiment).__name__}")

    curves = {m.value: np.array([evaluators[m](v, i) for i, v in enumerate(values)])
              for m in models}
    vis = {}
    for name, curve in curves.items():
        if name == Model.MONTE_CARLO.value:
            # sampling noise breaks the exact fringe-form check
            vis[name] = _noisy_visibility(values, curve, period)
        else:
            vis[name] = extract_visibility(values, curve, period)
    return FringeScan(parameter, values, curves, vis, period)


def _noisy_visibility(x, y, period: float) -> float:
    w = 2.0 * np.pi * np.asarray(x) / period
    basis = np.column_stack([np.ones_like(w), np.cos(w), np.sin(w)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    if coef[0] <= 0:
        return 0.0
    return float(min(math.hypot(coef[1], coef[2]) / coef[0], 1.0))
