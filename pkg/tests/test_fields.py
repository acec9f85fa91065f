import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twophoton.errors import ConfigError
from twophoton.fields import (FieldExpr, FieldTerm, Source, apply_polarizer, average_over_delta,
                              build_eraser_fields, coincidence_terms, harmonics, intensity)

import oracles

S, I = Source.SIGNAL, Source.IDLER
R = 1 / math.sqrt(2)

angles = st.floats(0.0, 2 * math.pi, exclude_max=True)
amps = st.floats(0.0, 3.0)


@st.composite
def field_exprs(draw):
    # random phase tied to the signal, as in every experiment modelled here
    n = draw(st.integers(1, 4))
    terms = []
    for _ in range(n):
        src = draw(st.sampled_from([S, I]))
        terms.append(FieldTerm(draw(st.floats(-3, 3)), src, draw(angles), src is S))
    return FieldExpr(tuple(terms))


def test_negative_amplitude_folds_into_phase():
    t = FieldTerm(-2.0, S, 0.25)
    assert t.amplitude == 2.0
    assert t.det_phase == pytest.approx(0.25 + math.pi)
    assert t.phasor == pytest.approx(-2.0 * complex(math.cos(0.25), math.sin(0.25)))


def test_phase_stored_mod_two_pi():
    assert FieldTerm(1.0, S, 7 * math.pi).det_phase == pytest.approx(math.pi)


@given(amps, angles)
def test_single_term_intensity(a, delta):
    assert intensity(FieldExpr((FieldTerm(a, S, 1.3, True),)), delta) == pytest.approx(a * a)


def test_constructive_interference():
    e = FieldExpr((FieldTerm(1.5, I), FieldTerm(1.5, S, 0.0, True)))
    assert intensity(e, 0.0) == pytest.approx(9.0)


def test_case_a_horizontal_component_by_hand():
    # |e^{i delta}/sqrt2 + i/sqrt2|^2 = 1 + sin(delta)
    e = FieldExpr((FieldTerm(R, S, 0.0, True), FieldTerm(R, I, math.pi / 2)))
    for delta in np.linspace(0, 2 * np.pi, 13):
        assert intensity(e, delta) == pytest.approx(1 + math.sin(delta), abs=1e-15)
    assert intensity(e, math.pi / 2) == pytest.approx(2.0)
    mc = average_over_delta(e, FieldExpr((FieldTerm(1.0, I),)), "montecarlo", 200_000, seed=7)
    assert mc.value == pytest.approx(1.0, abs=5 * mc.stderr)


@given(field_exprs(), angles)
def test_intensity_nonnegative(e, delta):
    assert intensity(e, delta) >= 0.0


@given(field_exprs())
def test_harmonics_reproduce_intensity(e):
    h = harmonics(e)
    for delta in (0.0, 0.7, 2.9, 5.1):
        trig = sum(c * np.exp(1j * n * delta) for n, c in h.items())
        assert trig.real == pytest.approx(intensity(e, delta), abs=1e-9)
        assert set(h) <= {-1, 0, 1}


@given(field_exprs(), field_exprs())
def test_analytic_average_matches_uniform_grid(e1, e2):
    grid = oracles.uniform_delta_average(lambda d: intensity(e1, d) * intensity(e2, d), n=16)
    assert average_over_delta(e1, e2).value == pytest.approx(grid, abs=1e-9)


@given(field_exprs(), field_exprs())
def test_source_resolved_terms_sum_to_average(e1, e2):
    terms = coincidence_terms(e1, e2)
    assert sum(terms.values()) == pytest.approx(average_over_delta(e1, e2).value, abs=1e-9)
    assert all(len(k) == 2 for k in terms)


@given(field_exprs(), field_exprs())
def test_detector_swap_symmetry(e1, e2):
    assert average_over_delta(e1, e2).value == pytest.approx(average_over_delta(e2, e1).value,
                                                             abs=1e-12)


def test_mixed_random_phase_within_source_rejected():
    e = FieldExpr((FieldTerm(1, S, 0, True), FieldTerm(1, S, 0, False)))
    with pytest.raises(ConfigError):
        coincidence_terms(e, e)


# -- averaging ---------------------------------------------------------------

def test_case_a_averages():
    assert average_over_delta(*build_eraser_fields(0.0)).value == pytest.approx(0.5, abs=1e-15)
    assert average_over_delta(*build_eraser_fields(math.pi / 2)).value == pytest.approx(1.0, abs=1e-15)


def test_monte_carlo_case_a_quarter_pi():
    d1, d2 = build_eraser_fields(math.pi / 4)
    analytic = average_over_delta(d1, d2).value
    mc = average_over_delta(d1, d2, "montecarlo", 1_000_000, seed=42)
    assert mc.method == "montecarlo" and mc.seed == 42 and mc.samples == 1_000_000
    assert abs(mc.value - analytic) <= 0.005 * analytic
    assert abs(mc.value - analytic) <= 5 / math.sqrt(mc.samples) * analytic


def test_monte_carlo_reproducible():
    d1, d2 = build_eraser_fields(1.0, 0.3)
    a = average_over_delta(d1, d2, "montecarlo", 10_000, seed=5)
    b = average_over_delta(d1, d2, "montecarlo", 10_000, seed=5)
    assert a == b


def test_monte_carlo_requires_seed():
    with pytest.raises(ConfigError):
        average_over_delta(*build_eraser_fields(1.0), method="montecarlo")


@settings(max_examples=50, deadline=None)
@given(angles, st.one_of(st.none(), angles), amps, amps, st.integers(0, 2**32))
def test_monte_carlo_within_five_standard_errors(phi, theta1, a_s, a_i, seed):
    d1, d2 = build_eraser_fields(phi, theta1, None, a_s, a_i)
    analytic = average_over_delta(d1, d2).value
    mc = average_over_delta(d1, d2, "montecarlo", 20_000, seed=seed)
    # a tiny floor covers configs whose product is constant in delta
    assert abs(mc.value - analytic) <= 5 * mc.stderr + 1e-9 * (1 + analytic)


# -- polarizers ---------------------------------------------------------------

def test_polarizer_on_axes():
    h, v = build_eraser_fields(0.7)[0]
    assert apply_polarizer(h, v, 0.0) is h
    assert apply_polarizer(h, v, math.pi / 2) is v


@given(angles, angles, amps, amps)
def test_polarizer_projection_formula(phi, theta, a_s, a_i):
    # D1 components with the signal reflected and the random phase on the idler
    h = FieldExpr((FieldTerm(R * a_s * math.cos(phi), S, math.pi / 2),
                   FieldTerm(R * a_i, I, 0.0, True)))
    v = FieldExpr((FieldTerm(R * a_s * math.sin(phi), S, math.pi / 2),))
    projected = apply_polarizer(h, v, theta)
    for delta in (0.0, 1.1, 4.0):
        expected = (1j * R * a_s * math.cos(theta - phi)
                    + R * a_i * math.cos(theta) * np.exp(1j * delta))
        assert projected.value(delta) == pytest.approx(expected, abs=1e-12)


# -- eraser fields ------------------------------------------------------------

@given(angles, amps, amps, angles)
def test_beam_splitter_conserves_energy(phi, a_s, a_i, delta):
    d1, d2 = build_eraser_fields(phi, A_s=a_s, A_i=a_i)
    assert intensity(d1, delta) + intensity(d2, delta) == pytest.approx(a_s**2 + a_i**2, abs=1e-12)


@given(angles, st.one_of(st.none(), angles), st.one_of(st.none(), angles), amps, amps, angles)
def test_fields_match_hand_written(phi, theta1, theta2, a_s, a_i, delta):
    if theta1 is None:
        theta2 = None
    d1, d2 = build_eraser_fields(phi, theta1, theta2, a_s, a_i)
    i1, i2 = oracles.eraser_fields_by_hand(phi, theta1, theta2, a_s, a_i, delta)
    assert intensity(d1, delta) == pytest.approx(i1, abs=1e-12)
    assert intensity(d2, delta) == pytest.approx(i2, abs=1e-12)


@pytest.mark.parametrize("phi", np.linspace(0, math.pi, 9))
def test_case_a_closed_form(phi):
    i_s, i_i = 1.4, 0.8
    d1, d2 = build_eraser_fields(phi, A_s=math.sqrt(i_s), A_i=math.sqrt(i_i))
    assert average_over_delta(d1, d2).value == pytest.approx(oracles.case_a_rate(phi, i_s, i_i), abs=1e-12)


@pytest.mark.parametrize("phi,theta1,theta2", [(0.3, 1.2, 2.0), (1.5, 0.0, 0.4), (2.2, 2.9, 0.1)])
def test_case_c_closed_form(phi, theta1, theta2):
    d1, d2 = build_eraser_fields(phi, theta1, theta2, 1.2, 0.5)
    expected = oracles.case_c_rate(phi, theta1, theta2, 1.44, 0.25)
    assert average_over_delta(d1, d2).value == pytest.approx(expected, abs=1e-12)


def test_theta2_without_theta1():
    with pytest.raises(ConfigError):
        build_eraser_fields(0.1, None, 0.5)
