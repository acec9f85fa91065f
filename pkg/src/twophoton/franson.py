"""Two unbalanced interferometers, one per photon of a down-converted pair.

Each photon takes a short or a long arm (path difference delta_L).  The pair
amplitude for arm choice XY at detector separation d = x_s - x_i is a phase
times the overlap integral I(d + offset), with offset 0 for SS and LL,
+delta_L for SL (signal short, idler long) and -delta_L for LS.  When
sigma_k * delta_L >> 1 the cross terms vanish and the coincidence rate
fringes in the pump phase k_p * delta_L.

Three coincidence models:

* narrow window    |psi_SS + psi_LL|^2 at x_s = x_i          (V = 1)
* wide window      the three exclusive timing cases B1 + B2 + B3 (V = 1/2)
* classical        k-averaged product of narrow-band intensities (V = 1/2)

Lengths in um, wavenumbers in rad/um; vacuum dispersion omega = c k is
implied, so fixing k_s + k_i = k_p also fixes the frequency sum.
"""
from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ConfigError, RegimeError
from .experiments import FringeScan, check_sampling, extract_visibility
from .spectral import (WINDOW_HALF_WIDTH, OverlapKernel, SpectralAmplitude, integrate,
                       overlap_integral, weight_transform)

SUPPRESSION_THRESHOLD = 20.0
C_UM_PER_NS = 299_792.458
MIN_POINTS_PER_PERIOD = 32
MODES = ("narrow", "wide", "classical")


class Window(Enum):
    NARROW = "narrow"
    WIDE = "wide"


@dataclass(frozen=True)
class FransonConfig:
    delta_L: float
    k_p: float
    spectral: SpectralAmplitude
    x_s: float = 0.0
    x_i: float = 0.0
    window: Window = Window.NARROW

    def __post_init__(self):
        if not (math.isfinite(self.delta_L) and self.delta_L >= 0):
            raise ConfigError(f"delta_L must be finite and >= 0, got {self.delta_L}")
        if not (math.isfinite(self.k_p) and self.k_p > 0):
            raise ConfigError(f"k_p must be positive, got {self.k_p}")
        object.__setattr__(self, "window", Window(self.window))

    @classmethod
    def from_lab_units(cls, delta_L: float, sigma_x: float, lambda_p: float,
                       **kw) -> "FransonConfig":
        """Pump wavelength and packet length in um; pair centred at k_p / 2."""
        k_p = 2.0 * math.pi / lambda_p
        return cls(delta_L, k_p, SpectralAmplitude.from_coherence_length(k_p / 2, sigma_x), **kw)

    @property
    def kernel(self) -> OverlapKernel:
        # the idler shares the signal's spectral shape, mirrored about k_p / 2
        return OverlapKernel(self.spectral, self.spectral, self.k_p)

    @property
    def fringe_phase(self) -> float:
        return self.k_p * self.delta_L

    @property
    def regime_parameter(self) -> float:
        return self.spectral.sigma_k * self.delta_L

    def in_suppression_regime(self) -> bool:
        return self.regime_parameter >= SUPPRESSION_THRESHOLD

    def replace(self, **changes) -> "FransonConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class TwoPhotonAmplitudes:
    ss: complex
    ll: complex
    sl: complex
    ls: complex

    def total(self) -> complex:
        return self.ss + self.ll + self.sl + self.ls


def check_regime(cfg: FransonConfig):
    if not cfg.in_suppression_regime():
        raise RegimeError(
            f"sigma_k * delta_L = {cfg.regime_parameter:.6g} < {SUPPRESSION_THRESHOLD}: "
            "cross-path amplitudes are not negligible"
        )


def classify_window(delta_L: float, tau_ns: float) -> Window:
    """Narrow if the distance light covers in the window is shorter than delta_L."""
    return Window.NARROW if C_UM_PER_NS * tau_ns < delta_L else Window.WIDE


def amplitudes(cfg: FransonConfig) -> TwoPhotonAmplitudes:
    """psi_SS, psi_LL, psi_SL, psi_LS at the configured detector positions (t = 0)."""
    kp, dl, xi = cfg.k_p, cfg.delta_L, cfg.x_i
    d = cfg.x_s - cfg.x_i
    kern = cfg.kernel
    ss = cmath.exp(1j * kp * xi) * overlap_integral(kern, d)
    ll = cmath.exp(-1j * kp * dl) * ss
    sl = cmath.exp(1j * kp * (xi - dl)) * overlap_integral(kern, d + dl)
    ls = cmath.exp(1j * kp * xi) * overlap_integral(kern, d - dl)
    return TwoPhotonAmplitudes(ss, ll, sl, ls)


def _require_coincident(cfg: FransonConfig):
    if not math.isclose(cfg.x_s, cfg.x_i, rel_tol=0.0, abs_tol=1e-9):
        raise ConfigError(f"detectors must sit at equal path length (x_s={cfg.x_s}, x_i={cfg.x_i})")


def _narrow(cfg: FransonConfig) -> float:
    return abs(amplitudes(cfg).total()) ** 2


def wide_window_terms(cfg: FransonConfig) -> tuple[float, float, float]:
    """C_B1, C_B2, C_B3: detector offsets x_s - x_i = 0, +delta_L, -delta_L."""
    base = cfg.replace(x_s=cfg.x_i)
    b1 = _narrow(base)
    b2 = abs(amplitudes(base.replace(x_s=cfg.x_i + cfg.delta_L)).total()) ** 2
    b3 = abs(amplitudes(base.replace(x_s=cfg.x_i - cfg.delta_L)).total()) ** 2
    return b1, b2, b3


def coincidence_narrow(cfg: FransonConfig) -> float:
    _require_coincident(cfg)
    check_regime(cfg)
    return _narrow(cfg)


def coincidence_wide(cfg: FransonConfig) -> float:
    _require_coincident(cfg)
    check_regime(cfg)
    return sum(wide_window_terms(cfg))


def coincidence(cfg: FransonConfig) -> float:
    if cfg.window is Window.NARROW:
        return coincidence_narrow(cfg)
    return coincidence_wide(cfg)


def phase_sum_harmonics(k_p: float, delta_L: float) -> dict[int, complex]:
    """The four-path sum 1 + e^{-i(k_p-k)dL} + e^{-i k dL} + e^{-i k_p dL}
    as {n: c_n} with S(k) = sum c_n e^{i n k dL}."""
    c = cmath.exp(-1j * k_p * delta_L)
    return {0: 1.0 + c, 1: c, -1: 1.0 + 0j}


def _squared_harmonics(s: dict[int, complex]) -> dict[int, complex]:
    out: dict[int, complex] = {}
    for m, a in s.items():
        for n, b in s.items():
            out[m - n] = out.get(m - n, 0j) + a * b.conjugate()
    return out


def coincidence_classical(cfg: FransonConfig, method: str = "harmonic") -> float:
    """Classical narrow-band ensemble: the average of |S(k)|^2 over k with weight
    |psi(k) psi(k_p - k)|^2, normalized to unit total weight.

    ``method="harmonic"`` splits |S|^2 into its e^{i n k dL} harmonics and takes
    each k-average with the oscillation-free contour; ``method="direct"``
    integrates the product on the real k axis as written (only practical for
    moderate delta_L).
    """
    _require_coincident(cfg)
    kern = cfg.kernel
    if method == "harmonic":
        sq = _squared_harmonics(phase_sum_harmonics(cfg.k_p, cfg.delta_L))
        total = sum(c * weight_transform(kern, n * cfg.delta_L) for n, c in sq.items())
        return float(total.real) / weight_transform(kern, 0.0).real
    if method == "direct":
        width = kern.width / math.sqrt(2.0)
        half = WINDOW_HALF_WIDTH * width
        kp, dl = cfg.k_p, cfg.delta_L

        def integrand(t):
            k = kern.center + t
            s = 1.0 + np.exp(-1j * (kp - k) * dl) + np.exp(-1j * k * dl) + np.exp(-1j * kp * dl)
            return np.abs(kern.evaluate(k)) ** 2 * np.abs(s) ** 2

        norm = integrate(lambda t: np.abs(kern.evaluate(kern.center + t)) ** 2, -half, half)
        return float(integrate(integrand, -half, half).real) / norm.real
    raise ConfigError(f"unknown method {method!r}")


_EVALUATORS = {
    "narrow": _narrow,
    "wide": lambda c: sum(wide_window_terms(c)),
    "classical": coincidence_classical,
}


def at_phase(cfg: FransonConfig, phase: float) -> FransonConfig:
    """Shift delta_L by less than one pump wavelength so k_p delta_L = phase mod 2 pi."""
    base = cfg.fringe_phase
    shift = (phase - math.fmod(base, 2.0 * math.pi)) / cfg.k_p
    return cfg.replace(delta_L=cfg.delta_L + shift)


def fringe_scan(cfg: FransonConfig, modes: Sequence[str] = MODES, n_periods: float = 2,
                n_points: int = 128, phase_start: float = 0.0,
                phases: Sequence[float] | None = None) -> FringeScan:
    """Sweep the pump phase k_p * delta_L by micro-shifts of delta_L.

    The regime check runs once against the base delta_L; the envelope is
    treated as constant over the sweep.  ``phases`` overrides the uniform grid.
    """
    _require_coincident(cfg)
    check_regime(cfg)
    unknown = set(modes) - set(MODES)
    if unknown:
        raise ConfigError(f"unknown Franson modes {sorted(unknown)}; choose from {MODES}")
    if phases is None:
        if n_periods <= 0:
            raise ConfigError("n_periods must be positive")
        check_sampling(0.0, 2.0 * math.pi * n_periods, n_points, 2.0 * math.pi,
                       MIN_POINTS_PER_PERIOD)
        values = phase_start + 2.0 * math.pi * n_periods * np.arange(n_points) / n_points
    else:
        values = np.asarray(phases, dtype=float)
        check_sampling(values.min(), values.max(), len(values), 2.0 * math.pi,
                       MIN_POINTS_PER_PERIOD)
    points = [at_phase(cfg, p) for p in values]
    curves = {m: np.array([_EVALUATORS[m](pt) for pt in points]) for m in modes}
    vis = {m: extract_visibility(values, curve, 2.0 * math.pi) for m, curve in curves.items()}
    return FringeScan("phase", values, curves, vis, 2.0 * math.pi)
