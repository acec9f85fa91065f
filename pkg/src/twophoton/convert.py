"""The same-source conversion rule as a rewrite on intensity polynomials.

A classical coincidence rate is bilinear in the source intensities.  Each
monomial is keyed by the multiset of sources it multiplies (I_s^2 -> (s, s),
I_s I_i -> (s, i)) and a free-form label that tells constant terms ("1") from
fringe-carrying ones ("cos").  The rule deletes every monomial in which one
source appears twice: a one-photon packet cannot produce two counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ConfigError, NotFringeForm, ParseError
from .fields import Source

MAX_DEGREE = 2

Key = tuple[tuple[Source, ...], str]


def _canonical_sources(sources: Iterable[Source | str]) -> tuple[Source, ...]:
    srcs = tuple(s if isinstance(s, Source) else Source.parse(s) for s in sources)
    if not 1 <= len(srcs) <= MAX_DEGREE:
        raise ConfigError(f"monomials hold 1..{MAX_DEGREE} sources, got {len(srcs)}")
    return tuple(sorted(srcs, key=lambda s: s.rank))


@dataclass(frozen=True)
class IntensityPoly:
    """Canonical sum of monomials: {(sources, label): coefficient}."""

    terms: Mapping[Key, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", dict(self.terms))

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Iterable[Source | str], float] |
                                        tuple[Iterable[Source | str], float, str]]) -> "IntensityPoly":
        """Merge (sources, coefficient[, label]) triples into canonical form."""
        merged: dict[Key, float] = {}
        for item in items:
            sources, coeff, *rest = item
            label = rest[0] if rest else "1"
            key = (_canonical_sources(sources), label)
            merged[key] = merged.get(key, 0.0) + float(coeff)
        return cls(merged)

    def __add__(self, other: "IntensityPoly") -> "IntensityPoly":
        merged = dict(self.terms)
        for key, c in other.terms.items():
            merged[key] = merged.get(key, 0.0) + c
        return IntensityPoly(merged)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, sources: Iterable[Source | str], label: str = "1") -> float:
        return self.terms.get((_canonical_sources(sources), label), 0.0)

    def total(self) -> float:
        return sum(self.terms.values())

    def labels(self) -> set[str]:
        return {label for _, label in self.terms}

    def format(self, names: tuple[str, str] = ("s", "i")) -> str:
        letter = {Source.SIGNAL: names[0], Source.IDLER: names[1]}
        if not self.terms:
            return "{}"
        parts = []
        for (sources, label), c in sorted(self.terms.items(), key=lambda kv: ([s.rank for s in kv[0][0]], kv[0][1])):
            mono = "".join(letter[s] for s in sources)
            tag = "" if label == "1" else f"*{label}"
            parts.append(f"{mono}: {c:.12g}{tag}")
        return "{" + ", ".join(parts) + "}"


def has_repeated_source(sources: Sequence[Source]) -> bool:
    return len(set(sources)) < len(sources)


def apply_conversion_rule(p: IntensityPoly) -> IntensityPoly:
    """Drop every monomial containing a product of intensities from one source."""
    return IntensityPoly({key: c for key, c in p.terms.items() if not has_repeated_source(key[0])})


def fringe_coefficients(p: IntensityPoly, modulated_label: str = "cos",
                        constant_labels: Sequence[str] = ("1",)) -> tuple[float, float]:
    extra = p.labels() - set(constant_labels) - {modulated_label}
    if extra:
        raise NotFringeForm(f"labels {sorted(extra)} are neither constant nor '{modulated_label}'")
    c0 = sum(c for (_, label), c in p.terms.items() if label in constant_labels)
    c1 = sum(c for (_, label), c in p.terms.items() if label == modulated_label)
    return c0, c1


def visibility_of(p: IntensityPoly, modulated_label: str = "cos",
                  constant_labels: Sequence[str] = ("1",)) -> float:
    """|c1| / c0 for C = c0 + c1 cos(Theta)."""
    c0, c1 = fringe_coefficients(p, modulated_label, constant_labels)
    if c1 == 0.0:
        return 0.0
    if c0 < abs(c1) * (1 - 1e-12):
        raise NotFringeForm(f"constant part {c0} does not dominate modulation {c1}")
    return min(abs(c1) / c0, 1.0)


@dataclass(frozen=True)
class GridReport:
    max_deviation: float
    n_points: int
    worst_point: Mapping | None


def verify_rule_on_grid(classical_model: Callable[[Mapping], IntensityPoly],
                        quantum_reference: Callable[[Mapping], float],
                        param_grid: Iterable[Mapping],
                        factor: Callable[[Mapping], float] | None = None) -> GridReport:
    """Max |rule(classical)/factor - quantum| over the grid.

    ``factor`` is the proportionality I_s I_i dropped by the quantum formulas;
    by default it is read from the ``I_s`` and ``I_i`` entries of each point.
    """
    if factor is None:
        factor = lambda pt: pt.get("I_s", 1.0) * pt.get("I_i", 1.0)
    worst, worst_pt, n = 0.0, None, 0
    for pt in param_grid:
        converted = apply_conversion_rule(classical_model(pt)).total() / factor(pt)
        dev = abs(converted - quantum_reference(pt))
        n += 1
        if dev > worst or worst_pt is None:
            worst, worst_pt = dev, pt
    return GridReport(worst, n, worst_pt)


def parse_poly(text: str) -> tuple[IntensityPoly, tuple[str, str]]:
    """Parse lines of ``<sources> <coefficient> [label]``; '#' starts a comment.

    Sources are letters s/i or A/B, e.g. ``AA 1``, ``AB 2 cos``.  The second
    return value is the letter pair seen, for printing back in the same naming.
    """
    items = []
    names = ("s", "i")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise ParseError(f"line {lineno}: expected '<sources> <coefficient> [label]', got {raw!r}")
        try:
            coeff = float(fields[1])
        except ValueError:
            raise ParseError(f"line {lineno}: bad coefficient {fields[1]!r}") from None
        if not math.isfinite(coeff):
            raise ParseError(f"line {lineno}: coefficient must be finite")
        if any(ch in "ABab" for ch in fields[0]):
            names = ("A", "B")
        try:
            items.append((list(fields[0]), coeff, *fields[2:]))
            _canonical_sources(fields[0])
        except ConfigError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return IntensityPoly.from_terms(items), names
