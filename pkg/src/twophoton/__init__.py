"""Two-photon coincidence simulations: classical fields, the same-source
conversion rule, and entangled wavepackets."""
from .convert import IntensityPoly, apply_conversion_rule, visibility_of, verify_rule_on_grid
from .errors import (ConfigError, NotFringeForm, ParseError, QuadratureNotConverged,
                     RegimeError, ScanTooCoarse, TwoPhotonError)
from .experiments import (EraserConfig, FringeScan, GhoshMandelConfig, Model,
                          eraser_coincidence, scan)
from .fields import FieldExpr, FieldTerm, Source, average_over_delta, build_eraser_fields
from .franson import (FransonConfig, Window, amplitudes, coincidence_classical,
                      coincidence_narrow, coincidence_wide, fringe_scan)
from .spectral import OverlapKernel, SpectralAmplitude, overlap_integral, suppression_ratio

__version__ = "0.1.0"
