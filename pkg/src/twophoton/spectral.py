"""One-photon spectral amplitudes and the overlap integrals of an entangled pair.

Units: wavenumbers in rad/um, lengths in um.

The two-photon amplitudes of a down-converted pair reduce to integrals of the form

    I(d) = int psi_s(k) psi_i(k_p - k) exp(i k d) dk

which oscillate violently once sigma_k * |d| is large.  On the real axis the
answer (of order exp(-sigma_k^2 d^2 / 2)) is buried under truncation and
round-off of order 1e-15, so by default the integration line is moved into the
complex plane to the stationary point of the integrand, where nothing
oscillates.  The amplitudes are entire functions of k, so the shift does not
change the value.  ``path="real"`` keeps the plain real-axis rule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import ConfigError, QuadratureNotConverged

WINDOW_HALF_WIDTH = 8.0  # integration half-window, in std-widths of the integrand
RTOL = 1e-8
MIN_INTERVALS = 32
MAX_NODES = 2**20


class Shape(Enum):
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class SpectralAmplitude:
    """Normalized spectral shape psi(k) of a one-photon packet.

    For the Gaussian shape |psi(k)|^2 is a normal density centred on ``k0``
    with standard deviation ``sigma_k``, so int |psi|^2 dk = 1.
    """

    k0: float
    sigma_k: float
    shape: Shape = Shape.GAUSSIAN

    def __post_init__(self):
        if not (math.isfinite(self.k0) and self.k0 > 0):
            raise ConfigError(f"k0 must be positive and finite, got {self.k0}")
        if not (math.isfinite(self.sigma_k) and self.sigma_k > 0):
            raise ConfigError(f"sigma_k must be positive and finite, got {self.sigma_k}")
        if self.shape is not Shape.GAUSSIAN:
            raise ConfigError(f"unsupported spectral shape {self.shape}")

    @classmethod
    def from_coherence_length(cls, k0: float, sigma_x: float) -> "SpectralAmplitude":
        """Build from the packet length, using sigma_k = 1 / (2 sigma_x)."""
        if sigma_x <= 0:
            raise ConfigError(f"sigma_x must be positive, got {sigma_x}")
        return cls(k0, 1.0 / (2.0 * sigma_x))

    @property
    def sigma_x(self) -> float:
        return 1.0 / (2.0 * self.sigma_k)

    @property
    def peak(self) -> float:
        return (2.0 * math.pi * self.sigma_k**2) ** -0.25

    @property
    def curvature(self) -> float:
        """Coefficient of (k - k0)^2 in -log psi(k)."""
        return 1.0 / (4.0 * self.sigma_k**2)

    def log_evaluate(self, k):
        """log psi(k); accepts complex k (the Gaussian is entire)."""
        return -0.25 * math.log(2.0 * math.pi * self.sigma_k**2) - self.curvature * (k - self.k0) ** 2

    def evaluate(self, k):
        return np.exp(self.log_evaluate(k))

    def norm(self) -> float:
        """int |psi(k)|^2 dk by quadrature over k0 +/- 8 sigma_k."""
        half = WINDOW_HALF_WIDTH * self.sigma_k
        return integrate(lambda t: np.abs(self.evaluate(self.k0 + t)) ** 2, -half, half).real


@dataclass(frozen=True)
class OverlapKernel:
    """The product psi_s(k) psi_i(k_p - k) that enforces k_s + k_i = k_p."""

    psi_s: SpectralAmplitude
    psi_i: SpectralAmplitude
    k_p: float

    def __post_init__(self):
        if not (math.isfinite(self.k_p) and self.k_p > 0):
            raise ConfigError(f"k_p must be positive and finite, got {self.k_p}")

    def log_product(self, k):
        return self.psi_s.log_evaluate(k) + self.psi_i.log_evaluate(self.k_p - k)

    def evaluate(self, k):
        return np.exp(self.log_product(k))

    @property
    def _gamma(self) -> float:
        return self.psi_s.curvature + self.psi_i.curvature

    @property
    def center(self) -> float:
        a, b = self.psi_s.k0, self.k_p - self.psi_i.k0
        return (self.psi_s.curvature * a + self.psi_i.curvature * b) / self._gamma

    @property
    def width(self) -> float:
        """Std-width of the product written as exp(-(k - center)^2 / (2 width^2))."""
        return 1.0 / math.sqrt(2.0 * self._gamma)


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              rtol: float = RTOL, max_nodes: int = MAX_NODES) -> complex:
    """Trapezoid rule on [a, b], doubling the node count until the relative change
    drops below ``rtol``.  ``f`` must be vectorized.

    Raises QuadratureNotConverged once more than ``max_nodes`` nodes would be needed.
    """
    n = MIN_INTERVALS
    h = (b - a) / n
    vals = f(a + h * np.arange(n + 1))
    total = h * (np.sum(vals) - 0.5 * (vals[0] + vals[-1]))
    while 2 * n + 1 <= max_nodes:
        n *= 2
        h /= 2
        mid = np.sum(f(a + h * np.arange(1, n, 2)))
        refined = 0.5 * total + h * mid
        if abs(refined - total) <= rtol * abs(refined):
            return complex(refined)
        total = refined
    raise QuadratureNotConverged(
        f"no convergence to rtol={rtol} with {max_nodes} nodes on [{a}, {b}]; "
        f"last estimate {complex(total)}"
    )


def _fourier(log_f, center: float, width: float, displacement: float, path: str) -> complex:
    # int exp(log_f(k) + i k d) dk for log_f ~ -(k - center)^2 / (2 width^2)
    if path == "shifted":
        shift = width**2 * displacement
    elif path == "real":
        shift = 0.0
    else:
        raise ConfigError(f"unknown integration path {path!r}")
    half = WINDOW_HALF_WIDTH * width

    def integrand(t):
        k = center + t + 1j * shift
        return np.exp(log_f(k) + 1j * k * displacement)

    return integrate(integrand, -half, half)


def overlap_integral(kernel: OverlapKernel, displacement: float, path: str = "shifted") -> complex:
    """I(d) = int psi_s(k) psi_i(k_p - k) exp(i k d) dk.

    This is the modulus-and-phase core of every two-photon path amplitude;
    d = x_s - x_i (+/- delta_L) picks the path combination.
    """
    if not math.isfinite(displacement):
        raise ConfigError(f"displacement must be finite, got {displacement}")
    return _fourier(kernel.log_product, kernel.center, kernel.width, displacement, path)


def weight_transform(kernel: OverlapKernel, displacement: float, path: str = "shifted") -> complex:
    """int |psi_s(k) psi_i(k_p - k)|^2 exp(i k d) dk, the k-average used by the
    classical narrow-band ensemble."""
    if not math.isfinite(displacement):
        raise ConfigError(f"displacement must be finite, got {displacement}")
    # the Gaussian log is real on the real axis, so 2*log is the continuation of |.|^2
    return _fourier(lambda k: 2.0 * kernel.log_product(k), kernel.center,
                    kernel.width / math.sqrt(2.0), displacement, path)


def suppression_ratio(kernel: OverlapKernel, delta_L: float, path: str = "shifted") -> float:
    """|I(delta_L)| / |I(0)|: how far the cross-path amplitudes are suppressed."""
    if delta_L < 0:
        raise ConfigError(f"delta_L must be >= 0, got {delta_L}")
    return abs(overlap_integral(kernel, delta_L, path)) / abs(overlap_integral(kernel, 0.0, path))
