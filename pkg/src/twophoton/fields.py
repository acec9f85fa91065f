"""Classical complex fields with source tags, and averaging over the random phase.

A detected field is a coherent sum of plane-wave terms, one polarization
component at one detector.  Each term comes from a source (signal or idler),
carries a deterministic phase (pi/2 per beam-splitter reflection, geometric
phases), and may carry the shared relative random phase delta of the signal
with respect to the idler.  A detector sees one or more orthogonal components
whose intensities add.

Everything here is bilinear bookkeeping on a tiny harmonic set: an intensity
contains exp(i n delta) for n in {-1, 0, 1}, a product of two intensities n in
{-2, ..., 2}, and only n = 0 survives the average over delta.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * math.pi
SQRT_HALF = math.sqrt(0.5)


class Source(Enum):
    SIGNAL = "s"
    IDLER = "i"

    @property
    def rank(self) -> int:
        return 0 if self is Source.SIGNAL else 1

    @classmethod
    def parse(cls, letter: str) -> "Source":
        # A/B is the naming of the two-place source experiments
        aliases = {"s": cls.SIGNAL, "a": cls.SIGNAL, "i": cls.IDLER, "b": cls.IDLER}
        try:
            return aliases[letter.lower()]
        except KeyError:
            raise ConfigError(f"unknown source letter {letter!r}") from None


@dataclass(frozen=True)
class FieldTerm:
    """a * exp(i (det_phase + delta if has_random_phase)).

    A negative amplitude is stored as its modulus with pi added to the phase.
    """

    amplitude: float
    source: Source
    det_phase: float = 0.0
    has_random_phase: bool = False

    def __post_init__(self):
        amp, phase = float(self.amplitude), float(self.det_phase)
        if amp < 0:
            amp, phase = -amp, phase + math.pi
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "det_phase", phase % TWO_PI)

    @property
    def phasor(self) -> complex:
        return self.amplitude * complex(math.cos(self.det_phase), math.sin(self.det_phase))

    def value(self, delta):
        """Complex value at random phase ``delta`` (scalar or array)."""
        if self.has_random_phase:
            return self.phasor * np.exp(1j * np.asarray(delta, dtype=float))
        return self.phasor * np.ones_like(np.asarray(delta, dtype=float))

    def scaled(self, factor: float, extra_phase: float = 0.0) -> "FieldTerm":
        return FieldTerm(self.amplitude * factor, self.source,
                         self.det_phase + extra_phase, self.has_random_phase)


@dataclass(frozen=True)
class FieldExpr:
    """Coherent sum of terms: one polarization component at one detector."""

    terms: tuple[FieldTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def __add__(self, other: "FieldExpr") -> "FieldExpr":
        return FieldExpr(self.terms + other.terms)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def scaled(self, factor: float, extra_phase: float = 0.0) -> "FieldExpr":
        return FieldExpr(tuple(t.scaled(factor, extra_phase) for t in self.terms))

    def value(self, delta):
        total = np.zeros_like(np.asarray(delta, dtype=float), dtype=complex)
        for term in self.terms:
            total = total + term.value(delta)
        return total


Detector = Union[FieldExpr, Sequence[FieldExpr]]


def _components(d: Detector) -> tuple[FieldExpr, ...]:
    if isinstance(d, FieldExpr):
        return (d,)
    return tuple(d)


@dataclass(frozen=True)
class PhaseAverage:
    value: float
    method: str  # "analytic" or "montecarlo"
    stderr: float = 0.0
    samples: int | None = None
    seed: int | None = None


def intensity(d: Detector, delta):
    """Sum over components of |field|^2 at random phase ``delta``."""
    total = 0.0
    for comp in _components(d):
        total = total + np.abs(comp.value(delta)) ** 2
    if np.ndim(total) == 0:
        return float(total)
    return total


def harmonics(d: Detector) -> dict[int, complex]:
    """Intensity as a trigonometric polynomial: {n: h_n} with I = sum h_n e^{i n delta}."""
    h: dict[int, complex] = defaultdict(complex)
    for comp in _components(d):
        for a, b in itertools.product(comp.terms, repeat=2):
            n = int(a.has_random_phase) - int(b.has_random_phase)
            h[n] += a.phasor * b.phasor.conjugate()
    return dict(h)


def _analytic_average(d1: Detector, d2: Detector) -> float:
    h1, h2 = harmonics(d1), harmonics(d2)
    # mean of e^{i n delta} over a period is 1 for n == 0 and 0 otherwise
    total = sum(c * h2.get(-n, 0.0) for n, c in h1.items())
    return float(complex(total).real)


def _monte_carlo_average(d1: Detector, d2: Detector, samples: int, seed: int) -> PhaseAverage:
    rng = np.random.default_rng(seed)
    delta = rng.uniform(0.0, TWO_PI, samples)
    prod = intensity(d1, delta) * intensity(d2, delta)
    stderr = float(np.std(prod, ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
    return PhaseAverage(float(np.mean(prod)), "montecarlo", stderr, samples, seed)


def average_over_delta(d1: Detector, d2: Detector, method: str = "analytic",
                       samples: int = 1_000_000, seed: int | None = None) -> PhaseAverage:
    """(1/2pi) int I1(delta) I2(delta) d delta.

    ``method="analytic"`` keeps the constant harmonic of the product exactly;
    ``method="montecarlo"`` averages over ``samples`` uniform draws of delta
    and needs an explicit ``seed``.
    """
    if method == "analytic":
        return PhaseAverage(_analytic_average(d1, d2), "analytic")
    if method == "montecarlo":
        if seed is None:
            raise ConfigError("Monte Carlo averaging needs an explicit seed")
        if samples < 2:
            raise ConfigError("Monte Carlo averaging needs at least 2 samples")
        return _monte_carlo_average(d1, d2, samples, seed)
    raise ConfigError(f"unknown averaging method {method!r}")


def _check_random_phase_per_source(terms: Iterable[FieldTerm]):
    flags: dict[Source, bool] = {}
    for t in terms:
        if flags.setdefault(t.source, t.has_random_phase) != t.has_random_phase:
            raise ConfigError(f"source {t.source.name} carries the random phase on some terms only")


def coincidence_terms(d1: Detector, d2: Detector) -> dict[tuple[Source, ...], float]:
    """The delta-averaged coincidence product split by source content.

    Each surviving product of four amplitudes z_j z_k* w_l w_m* belongs to the
    intensity monomial obtained by halving its source counts, e.g. four signal
    amplitudes -> (s, s) ~ I_s^2, two and two -> (s, i) ~ I_s I_i.
    """
    c1 = [t for comp in _components(d1) for t in comp.terms]
    c2 = [t for comp in _components(d2) for t in comp.terms]
    _check_random_phase_per_source(c1 + c2)
    out: dict[tuple[Source, ...], complex] = defaultdict(complex)
    for comp1 in _components(d1):
        for j, k in itertools.product(comp1.terms, repeat=2):
            n1 = int(j.has_random_phase) - int(k.has_random_phase)
            p1 = j.phasor * k.phasor.conjugate()
            for comp2 in _components(d2):
                for l, m in itertools.product(comp2.terms, repeat=2):
                    if n1 + int(l.has_random_phase) - int(m.has_random_phase) != 0:
                        continue
                    counts = {s: 0 for s in Source}
                    for t in (j, k, l, m):
                        counts[t.source] += 1
                    key = tuple(s for s in Source for _ in range(counts[s] // 2))
                    out[key] += p1 * l.phasor * m.phasor.conjugate()
    return {key: float(v.real) for key, v in out.items()}


def apply_polarizer(h: FieldExpr, v: FieldExpr, theta: float) -> FieldExpr:
    """Project (H, V) onto a linear polarizer at angle theta to the horizontal."""
    # on-axis polarizers pass one component untouched (cos(pi/2) is not exactly 0)
    if theta == 0.0:
        return h
    if theta == math.pi / 2:
        return v
    return _merge(h.scaled(math.cos(theta)) + v.scaled(math.sin(theta)))


def _merge(expr: FieldExpr) -> FieldExpr:
    # same source and same random flag add coherently into one term
    acc: dict[tuple[Source, bool], complex] = {}
    for t in expr.terms:
        key = (t.source, t.has_random_phase)
        acc[key] = acc.get(key, 0j) + t.phasor
    return FieldExpr(tuple(
        FieldTerm(abs(z), src, math.atan2(z.imag, z.real) if z != 0 else 0.0, flag)
        for (src, flag), z in acc.items()
    ))


def build_eraser_fields(phi: float, theta1: float | None = None, theta2: float | None = None,
                        A_s: float = 1.0, A_i: float = 1.0) -> tuple[tuple[FieldExpr, ...], tuple[FieldExpr, ...]]:
    """Fields at D1 and D2 behind the symmetric 50:50 beam splitter.

    The half-wave plate turns the signal polarization by ``phi``; every
    reflection contributes a factor i.  D1 gets the transmitted signal and the
    reflected idler, D2 the reflected signal and the transmitted idler.  The
    random phase rides on the signal.  Without a polarizer a detector returns
    its (H, V) pair; with one it returns the single projected component.
    """
    if theta2 is not None and theta1 is None:
        raise ConfigError("theta2 given without theta1")
    r = SQRT_HALF
    quarter = math.pi / 2
    sig = Source.SIGNAL
    idl = Source.IDLER
    h1 = FieldExpr((FieldTerm(r * A_s * math.cos(phi), sig, 0.0, True),
                    FieldTerm(r * A_i, idl, quarter)))
    v1 = FieldExpr((FieldTerm(r * A_s * math.sin(phi), sig, 0.0, True),))
    h2 = FieldExpr((FieldTerm(r * A_s * math.cos(phi), sig, quarter, True),
                    FieldTerm(r * A_i, idl, 0.0)))
    v2 = FieldExpr((FieldTerm(r * A_s * math.sin(phi), sig, quarter, True),))
    d1 = (h1, v1) if theta1 is None else (apply_polarizer(h1, v1, theta1),)
    d2 = (h2, v2) if theta2 is None else (apply_polarizer(h2, v2, theta2),)
    return d1, d2
