"""Invariant suite behind ``cosetforge verify``.

Each check runs at a reduced, fixed scale and reports pass/fail plus a
short detail string. The pytest suite covers the same properties at full
scale.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .algebra import FiniteField, ResidueRing
from .characters import AddCharacter, char_period_prime_power, enumerate_mult_chars, minimal_period
from .coset import brute_force_coset, fourier_sample_hsp, quotient_character, solve_hidden_coset
from .errors import VerificationError
from .fourier import (
    GroupFunction,
    convolve,
    dft_fast,
    dft_naive,
    mult_char_spectrum_closed_form,
    spectrum_constant,
)
from .shift import (
    ShiftInstance,
    ShiftRecoverySimulator,
    apply_pseudoinverse,
    build_shift_matrix,
    check_conditions,
    conditional_success_mass,
    pseudoinverse,
    run_shift_trials,
    simulate_shift_recovery,
    verify_diagonalization,
)

SMALL_FIELDS = [(3, 1), (5, 1), (7, 1), (2, 3), (3, 2), (5, 2), (2, 4)]
SMALL_RINGS = [9, 15, 25, 27, 45]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = []


def check(name: str):
    def register(fn):
        CHECKS.append((name, fn))
        return fn

    return register


def _random_function(domain, rng) -> GroupFunction:
    return GroupFunction(domain, rng.normal(size=domain.size) + 1j * rng.normal(size=domain.size))


def _fields():
    return [FiniteField(p, m) for p, m in SMALL_FIELDS]


def _rings():
    return [ResidueRing(n) for n in SMALL_RINGS]


@check("crt-round-trip")
def _crt():
    for n in range(3, 1000, 2):
        R = ResidueRing(n)
        for x in range(n):
            if R.crt_combine(R.crt_split(x)) != x:
                return False, f"n={n} x={x}"
    return True, "odd n < 1000, all residues"


@check("generator-order")
def _gen_order():
    for F in _fields():
        powers = F.exp_table
        if len(set(powers.tolist())) != F.q - 1 or F.pow(F.generator, F.q - 1) != F.one:
            return False, str(F)
    return True, f"{len(SMALL_FIELDS)} fields"


@check("trace-additive-and-frobenius-stable")
def _trace():
    for F in _fields():
        for x in F.elements():
            if F.trace(x ** F.p) != F.trace(x):
                return False, f"frobenius {F} {x}"
            for y in (F.element(i) for i in range(0, F.q, max(1, F.q // 7))):
                if F.trace(x + y) != (F.trace(x) + F.trace(y)) % F.p:
                    return False, f"additivity {F} {x} {y}"
    return True, "exhaustive over small fields"


@check("character-multiplicativity-and-support")
def _mult():
    for D in _fields() + _rings():
        N = D.size
        xs = np.arange(N)
        if isinstance(D, FiniteField):
            units = xs[1:]
        else:
            units = xs[np.gcd(xs, N) == 1]
        for chi in enumerate_mult_chars(D):
            v = chi.values()
            if not np.array_equal(np.abs(v) > 0.5, np.isin(xs, units)):
                return False, f"support {chi}"
            prod_idx = D.mul_idx(units[:, None], units[None, :]) if isinstance(D, FiniteField) else (
                units[:, None] * units[None, :] % N
            )
            if not np.allclose(v[prod_idx], np.outer(v[units], v[units]), atol=1e-9):
                return False, f"multiplicativity {chi}"
    return True, "all characters of small domains"


@check("period-minimality")
def _periods():
    count = 0
    for N in range(3, 250, 2):
        R = ResidueRing(N)
        if len(R.factors) != 1:
            continue
        p, e = R.factors[0]
        for chi in enumerate_mult_chars(R):
            num, _ = chi.exponents()
            if minimal_period(num) != char_period_prime_power(p, e, chi.index[0]):
                return False, f"{chi}"
            count += 1
    return True, f"{count} prime-power characters"


@check("character-orthogonality")
def _orth():
    for D in _fields() + _rings():
        M = np.array([chi.values() for chi in enumerate_mult_chars(D)])
        gram = M @ M.conj().T
        if not np.allclose(gram - np.diag(np.diag(gram)), 0, atol=1e-9):
            return False, f"mult {D}"
        A = np.array([AddCharacter(D, a).values() for a in range(D.size)])
        if not np.allclose(A @ A.conj().T, D.size * np.eye(D.size), atol=1e-9):
            return False, f"add {D}"
    return True, "multiplicative and additive"


@check("dft-oracle-equivalence")
def _dft_equiv():
    rng = np.random.default_rng(1)
    for D in _fields() + _rings() + [ResidueRing(405), FiniteField(3, 5)]:
        for _ in range(10):
            f = _random_function(D, rng)
            if not np.allclose(dft_fast(f).values, dft_naive(f).values, rtol=0, atol=1e-9):
                return False, str(D)
    return True, "10 random functions per domain"


@check("parseval")
def _parseval():
    rng = np.random.default_rng(2)
    for D in _fields() + _rings():
        f = _random_function(D, rng)
        lhs = np.sum(np.abs(dft_fast(f).values) ** 2)
        if not math.isclose(lhs, D.size * np.sum(np.abs(f.values) ** 2), rel_tol=1e-9):
            return False, str(D)
    return True, "sum |f^|^2 = |G| sum |f|^2"


@check("constant-spectrum-magnitude")
def _const_mag():
    for F in _fields():
        for chi in enumerate_mult_chars(F)[1:]:
            mags = np.abs(dft_naive(GroupFunction.from_character(chi)).values)
            if mags[0] > 1e-9 or not np.allclose(mags[1:], math.sqrt(F.q), atol=1e-9):
                return False, str(chi)
    return True, "|chi^| = sqrt(q) off psi_0"


@check("closed-form-agreement")
def _closed_form():
    for D in _fields() + _rings():
        for chi in enumerate_mult_chars(D):
            if chi.is_field and chi.is_trivial:
                continue
            lhs = spectrum_constant(chi) * mult_char_spectrum_closed_form(chi).values
            if not np.allclose(lhs, dft_naive(GroupFunction.from_character(chi)).values, rtol=0, atol=1e-9):
                return False, str(chi)
    return True, "all characters of small domains"


@check("convolution-theorem")
def _conv():
    rng = np.random.default_rng(3)
    for D in _fields() + _rings():
        a, b = _random_function(D, rng), _random_function(D, rng)
        lhs = dft_fast(convolve(a, b)).values
        if not np.allclose(lhs, dft_fast(a).values * dft_fast(b).values, rtol=0, atol=1e-9):
            return False, str(D)
    return True, "random pairs"


@check("diagonalization")
def _diag():
    rng = np.random.default_rng(4)
    for D in _fields() + _rings():
        try:
            verify_diagonalization(_random_function(D, rng))
        except VerificationError as exc:
            return False, f"{D}: {exc}"
    return True, "F^T X F = |G| diag(g^)"


@check("moore-penrose")
def _mp():
    rng = np.random.default_rng(5)
    for D in _fields() + _rings():
        spec = rng.normal(size=D.size) + 1j * rng.normal(size=D.size)
        spec[rng.random(D.size) < 0.3] = 0
        g = GroupFunction(D, np.conj(dft_fast(GroupFunction(D, np.conj(spec))).values) / D.size)
        X = build_shift_matrix(g)
        P = pseudoinverse(g)
        ok = (
            np.allclose(X @ P @ X, X, atol=1e-7)
            and np.allclose(P @ X @ P, P, atol=1e-7)
            and np.allclose(X @ P, (X @ P).conj().T, atol=1e-7)
            and np.allclose(P @ X, (P @ X).conj().T, atol=1e-7)
        )
        v = rng.normal(size=D.size) + 0j
        if not ok or not np.allclose(apply_pseudoinverse(g, v), P @ v, atol=1e-7):
            return False, str(D)
    return True, "rank-deficient spectra included"


@check("exact-conditional-success")
def _exact_success():
    for D in _fields() + _rings():
        for chi in enumerate_mult_chars(D)[1:]:
            report = check_conditions(GroupFunction.from_character(chi), chi)
            if not report.holds:
                continue
            beta = report.beta
            for s in (0, 1, D.size - 1):
                mass = conditional_success_mass(ShiftInstance.from_character(chi, s))
                if abs(mass - float(beta)) > 1e-9:
                    return False, f"{chi} s={s}"
    return True, "mass at -s equals beta"


@check("monte-carlo-consistency")
def _mc():
    F = FiniteField(5)
    chi = enumerate_mult_chars(F)[2]
    inst = ShiftInstance.from_character(chi, 3)
    N, rate = 5000, 0.64
    stats = run_shift_trials(inst, N, seed=7)
    sigma = math.sqrt(rate * (1 - rate) / N)
    return abs(stats.rate - rate) <= 4 * sigma, f"rate {stats.rate:.4f} vs 0.64 +- {4 * sigma:.4f}"


@check("query-discipline")
def _queries():
    chi = enumerate_mult_chars(FiniteField(7))[3]
    inst = ShiftInstance.from_character(chi, 2)
    sim = ShiftRecoverySimulator(inst.g, inst.f, chi)
    rng = np.random.default_rng(0)
    for k in range(1, 21):
        simulate_shift_recovery(inst, rng, simulator=sim)
        if sim.oracle.queries != k:
            return False, f"{sim.oracle.queries} oracle queries after {k} trials"
    return True, "one f query per trial"


@check("coset-structure-and-agreement")
def _cosets():
    rng = np.random.default_rng(6)
    for R in _rings():
        for chi in enumerate_mult_chars(R):
            g = GroupFunction.from_character(chi)
            s = int(rng.integers(R.n))
            f = g.translate(s)
            brute = brute_force_coset(g, f)
            if brute is None or brute.subgroup.period != chi.period:
                return False, f"brute force {chi}"
            if set(solve_hidden_coset(chi, f, rng).members) != set(brute.members):
                return False, f"solver {chi}"
    return True, "solver equals brute force"


@check("hsp-sampling-law")
def _sampling():
    rng = np.random.default_rng(8)
    total = 0
    for R in _rings():
        for chi in enumerate_mult_chars(R):
            H = fourier_sample_hsp(GroupFunction.from_character(chi).translate(1), rng)
            order = R.n // chi.period
            if any(y % order for y in H.samples):
                return False, f"{chi} sampled outside H-perp"
            total += len(H.samples)
    return True, f"{total} samples, all in H-perp"


@check("quotient-conditions")
def _quotient():
    for R in _rings():
        for chi in enumerate_mult_chars(R):
            if 0 in chi.index:
                continue
            red = quotient_character(chi)
            rep = check_conditions(GroupFunction.from_character(red), red)
            expected = math.prod(Fraction(p - 1, p) for p, _ in red.domain.factors)
            if not rep.holds or rep.alpha != expected or rep.beta != expected:
                return False, str(chi)
            if minimal_period(red.exponents()[0]) != red.domain.n:
                return False, f"{chi} reduced character still periodic"
    return True, "alpha = beta = prod(1 - 1/p) on Z/T"


def run_verification_suite(names: list[str] | None = None) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        start = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results

