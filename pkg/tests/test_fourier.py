import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosetforge.algebra import FiniteField, ResidueRing
from cosetforge.characters import AddCharacter, MultCharacter, enumerate_mult_chars
from cosetforge.fourier import (
    GroupFunction,
    convolve,
    deconvolve,
    dft_fast,
    dft_naive,
    gauss_sum,
    idft,
    mult_char_spectrum_closed_form,
    spectrum_constant,
)

DOMAINS = [FiniteField(3), FiniteField(5), FiniteField(3, 2), FiniteField(2, 4), FiniteField(5, 2),
           ResidueRing(9), ResidueRing(15), ResidueRing(45), ResidueRing(105)]


def _rand(D, rng):
    return GroupFunction(D, rng.normal(size=D.size) + 1j * rng.normal(size=D.size))


def _loop_dft(f):
    # double loop over additive characters, no shared vectorized code
    D = f.domain
    rows = [AddCharacter(D, y) for y in range(D.size)]
    return np.array([sum(f.values[x] * psi(x) for x in range(D.size)) for psi in rows])


def test_small_examples():
    Z3 = ResidueRing(3)
    assert np.allclose(dft_fast(GroupFunction.delta(Z3)).values, [1, 1, 1])
    assert np.allclose(dft_fast(GroupFunction(Z3, np.ones(3))).values, [3, 0, 0])
    assert np.allclose(idft(GroupFunction(Z3, [3, 0, 0])).values, [1, 1, 1])
    assert np.allclose(idft(GroupFunction(Z3, np.zeros(3))).values, 0)
    assert np.allclose(dft_fast(GroupFunction.delta(FiniteField(3, 2))).values, 1)


@pytest.mark.parametrize("D", DOMAINS[:6], ids=str)
def test_naive_matches_loop_oracle(D):
    f = _rand(D, np.random.default_rng(D.size))
    assert np.allclose(dft_naive(f).values, _loop_dft(f), atol=1e-9)


@pytest.mark.parametrize("D", DOMAINS + [FiniteField(3, 5), ResidueRing(2025), FiniteField(2, 10)], ids=str)
def test_fast_matches_naive(D):
    rng = np.random.default_rng(1)
    for _ in range(5):
        f = _rand(D, rng)
        assert np.allclose(dft_fast(f).values, dft_naive(f).values, rtol=0, atol=1e-9)


def test_quadratic_f5_spectrum():
    chi = MultCharacter(FiniteField(5), 2)
    spec = dft_naive(GroupFunction.from_character(chi)).values
    assert abs(spec[0]) < 1e-12
    assert np.allclose(np.abs(spec[1:]), math.sqrt(5))
    assert np.allclose(spec[1:], np.conj(chi.values()[1:]) * math.sqrt(5))


@pytest.mark.parametrize(
    "chi,expected",
    [(MultCharacter(FiniteField(5), 2), math.sqrt(5)), (MultCharacter(FiniteField(7), 3), 1j * math.sqrt(7))],
)
def test_gauss_sum_values(chi, expected):
    p = chi.domain.p
    legendre = sum(
        (1 if pow(x, (p - 1) // 2, p) == 1 else -1) * cmath.exp(2j * math.pi * x / p) for x in range(1, p)
    )
    assert cmath.isclose(gauss_sum(chi), expected, abs_tol=1e-9)
    assert cmath.isclose(legendre, expected, abs_tol=1e-9)


def test_gauss_sum_magnitudes_f9():
    for chi in enumerate_mult_chars(FiniteField(3, 2))[1:]:
        assert abs(abs(gauss_sum(chi)) - 3) < 1e-9
    with pytest.raises(ValueError):
        gauss_sum(enumerate_mult_chars(FiniteField(3, 2))[0])


def test_closed_form_examples():
    chi = MultCharacter(FiniteField(5), 2)
    cf = mult_char_spectrum_closed_form(chi)
    assert cmath.isclose(cf.values[2], -cf.values[1])
    naive = dft_naive(GroupFunction.from_character(chi)).values
    assert cmath.isclose(naive[2] / naive[1], -1)

    chi9 = MultCharacter(ResidueRing(9), (3,))
    spec = dft_naive(GroupFunction.from_character(chi9)).values
    zeros = np.flatnonzero(np.abs(spec) < 1e-9).tolist()
    # y = 0 also vanishes since the character sums to zero
    assert zeros == [0, 1, 2, 4, 5, 7, 8]
    assert np.all(np.abs(mult_char_spectrum_closed_form(chi9).values[[1, 2, 4, 5, 7, 8]]) == 0)

    with pytest.raises(ValueError):
        mult_char_spectrum_closed_form(MultCharacter(FiniteField(5), 0))


def test_z45_spectrum_is_tensor_of_components():
    R = ResidueRing(45)
    chi = MultCharacter(R, (1, 2))
    spec = dft_naive(GroupFunction.from_character(chi)).values
    s9 = dft_naive(GroupFunction.from_character(MultCharacter(ResidueRing(9), (1,)))).values
    s5 = dft_naive(GroupFunction.from_character(MultCharacter(ResidueRing(5), (2,)))).values
    # psi_y on Z/45 restricted to the CRT factors is psi_{y * 5^{-1}} on Z/9 and psi_{y * 9^{-1}} on Z/5
    y = np.arange(45)
    expected = s9[(y * pow(5, -1, 9)) % 9] * s5[(y * pow(9, -1, 5)) % 5]
    assert np.allclose(spec, expected, atol=1e-9)


@pytest.mark.parametrize("D", DOMAINS, ids=str)
def test_closed_form_times_constant(D):
    for chi in enumerate_mult_chars(D):
        if chi.is_field and chi.is_trivial:
            continue
        lhs = spectrum_constant(chi) * mult_char_spectrum_closed_form(chi).values
        assert np.allclose(lhs, dft_naive(GroupFunction.from_character(chi)).values, rtol=0, atol=1e-9)


def test_convolution_examples():
    rng = np.random.default_rng(3)
    for D in DOMAINS[:5]:
        g = _rand(D, rng)
        assert convolve(GroupFunction.delta(D), g).allclose(g)
        s = 2
        shifted = convolve(GroupFunction.delta(D, int(D.neg_idx(s))), g)
        assert shifted.allclose(g.translate(s))


def test_deconvolve_examples():
    F5 = FiniteField(5)
    g = GroupFunction.from_character(MultCharacter(F5, 2))
    out = np.abs(deconvolve(g.translate(3), g).values)
    assert int(np.argmax(out)) == 2 and np.sum(out >= out.max() - 1e-9) == 1

    rng = np.random.default_rng(4)
    R = ResidueRing(15)
    g = _rand(R, rng)
    assert deconvolve(g, g).allclose(GroupFunction.delta(R))
    d = GroupFunction.delta(R)
    assert deconvolve(d.translate(4), d).allclose(GroupFunction.delta(R, 11))
    with pytest.raises(ValueError):
        deconvolve(g, GroupFunction(R, np.zeros(15)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(DOMAINS), st.integers(0, 2**32 - 1))
def test_round_trip(D, seed):
    f = _rand(D, np.random.default_rng(seed))
    assert idft(dft_fast(f)).allclose(f, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(DOMAINS), st.integers(0, 2**32 - 1))
def test_convolution_theorem(D, seed):
    rng = np.random.default_rng(seed)
    a, b = _rand(D, rng), _rand(D, rng)
    lhs = dft_fast(convolve(a, b)).values
    assert np.allclose(lhs, dft_fast(a).values * dft_fast(b).values, rtol=0, atol=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(DOMAINS), st.integers(0, 2**32 - 1))
def test_parseval(D, seed):
    f = _rand(D, np.random.default_rng(seed))
    lhs = np.sum(np.abs(dft_fast(f).values) ** 2)
    assert math.isclose(lhs, D.size * np.sum(np.abs(f.values) ** 2), rel_tol=1e-9)


def test_group_function_json_round_trip():
    f = _rand(ResidueRing(45), np.random.default_rng(5))
    assert GroupFunction.from_json(f.to_json()).allclose(f, atol=0)


def test_domain_mismatch_rejected():
    with pytest.raises(ValueError):
        convolve(GroupFunction.delta(FiniteField(5)), GroupFunction.delta(ResidueRing(5)))
