"""The shift problem: recover s from f(x) = g(x + s).

Two views of the same algorithm live here. The matrix view builds
X = [g(x + y)], checks F^T X F = D with D = diag(|G| g^(psi_w)), and
inverts through the Moore-Penrose pseudoinverse X* = F D* F^T. The quantum
view is a state-vector simulation of the four-step circuit: load f into
amplitudes, Fourier transform, cancel the phase of g^, inverse transform
and measure. The inverse transform is F^dagger rather than F^T, so the
measured value is -s; the engine negates it before returning.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import TOL, MultCharacter
from .errors import CapExceeded, ConditionError, VerificationError
from .fourier import (
    GroupFunction,
    character_rows,
    fast_transform,
    inverse_transform,
    mult_char_spectrum_closed_form,
    naive_transform,
)

DENSE_CAP = 512


def _support(values: np.ndarray, tol: float = TOL) -> np.ndarray:
    return np.abs(values) > tol


def _constant_on(mags: np.ndarray, tol: float = TOL) -> bool:
    return mags.size > 0 and float(np.ptp(mags)) <= tol * max(1.0, float(mags.max()))


# -- instances and oracles -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ShiftInstance:
    g: GroupFunction
    shift: int
    f: GroupFunction
    character: MultCharacter | None = None

    def __post_init__(self):
        if not 0 <= self.shift < self.g.size:
            raise ValueError(f"shift {self.shift} is not a group element")
        if not self.f.allclose(self.g.translate(self.shift)):
            raise VerificationError("f is not the s-translate of g")

    @classmethod
    def create(cls, g: GroupFunction, shift: int, character: MultCharacter | None = None) -> "ShiftInstance":
        return cls(g, int(shift), g.translate(int(shift)), character)

    @classmethod
    def from_character(cls, chi: MultCharacter, shift: int) -> "ShiftInstance":
        return cls.create(GroupFunction.from_character(chi), shift, chi)

    @property
    def domain(self):
        return self.g.domain


class CountingOracle:
    """Black-box access to f; one batch evaluation counts as one query."""

    def __init__(self, f: GroupFunction):
        self._f = f
        self.domain = f.domain
        self.queries = 0

    def query(self) -> np.ndarray:
        self.queries += 1
        return self._f.values.copy()


class SpectrumPhaseOracle:
    """g^ up to a global constant: the closed form when a character is known, else a transform of g."""

    def __init__(self, g: GroupFunction, character: MultCharacter | None = None):
        self.closed_form = False
        if character is not None:
            try:
                self._spec = mult_char_spectrum_closed_form(character).values
                self.closed_form = True
            except ValueError:
                character = None
        if character is None:
            self._spec = fast_transform(g.domain, g.values)
        self.evaluations = 0

    def query(self) -> np.ndarray:
        self.evaluations += len(self._spec)
        return self._spec.copy()


# -- sufficient conditions -------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    condition1: bool  # |g| constant on its support
    condition2: bool  # |g^| constant on its support
    condition3: bool  # closed form for g^ available
    alpha: Fraction
    beta: Fraction

    @property
    def holds(self) -> bool:
        return self.condition1 and self.condition2

    @property
    def success_probability(self) -> Fraction:
        return self.alpha * self.beta

    def to_json(self) -> dict:
        return {
            "condition1": self.condition1,
            "condition2": self.condition2,
            "condition3": self.condition3,
            "alpha": str(self.alpha),
            "beta": str(self.beta),
        }


def check_conditions(g: GroupFunction, character: MultCharacter | None = None) -> ConditionReport:
    N = g.size
    mags = np.abs(g.values)
    supp = _support(g.values)
    g_hat = fast_transform(g.domain, g.values)
    hat_mags = np.abs(g_hat)
    hat_supp = _support(g_hat)
    closed = character is not None and SpectrumPhaseOracle(g, character).closed_form
    return ConditionReport(
        condition1=_constant_on(mags[supp]),
        condition2=_constant_on(hat_mags[hat_supp]),
        condition3=closed,
        alpha=Fraction(int(supp.sum()), N),
        beta=Fraction(int(hat_supp.sum()), N),
    )


def exact_success_probability(g: GroupFunction, character: MultCharacter | None = None) -> Fraction:
    report = check_conditions(g, character)
    if not report.holds:
        raise ConditionError(f"sufficient conditions fail: {report}")
    return report.success_probability


# -- matrix view -------------------------------------------------------------------


def _dense_guard(N: int):
    if N > DENSE_CAP:
        raise CapExceeded(f"dense path limited to |G| <= {DENSE_CAP}, got {N}")


def build_shift_matrix(g: GroupFunction) -> np.ndarray:
    """X[x, y] = g(x + y) in canonical order."""
    N = g.size
    _dense_guard(N)
    xs = np.arange(N)
    return g.values[g.domain.add_idx(xs[:, None], xs[None, :])]


def fourier_matrix(domain) -> np.ndarray:
    """F[x, y] = psi_y(x); symmetric for both supported domains."""
    _dense_guard(domain.size)
    return character_rows(domain, np.arange(domain.size)).T


def verify_diagonalization(g: GroupFunction, rtol: float = 1e-7) -> np.ndarray:
    """Compute F^T X F densely; check it is diag(|G| g^(psi_w)) and return the diagonal."""
    N = g.size
    F = fourier_matrix(g.domain)
    D = F.T @ build_shift_matrix(g) @ F
    diag = np.diag(D).copy()
    off = np.max(np.abs(D - np.diag(diag))) if N > 1 else 0.0
    if off >= rtol * N:
        raise VerificationError(f"off-diagonal mass {off:.3e} exceeds {rtol * N:.3e}")
    expected = N * naive_transform(g.domain, g.values)
    dev = np.max(np.abs(diag - expected))
    if dev >= rtol * N:
        raise VerificationError(f"diagonal deviates from |G| g^ by {dev:.3e}")
    return diag


def _diag_pinv(d: np.ndarray, N: int) -> np.ndarray:
    keep = np.abs(d) > TOL * N
    out = np.zeros_like(d)
    out[keep] = 1.0 / d[keep]
    return out


def pseudoinverse(g: GroupFunction) -> np.ndarray:
    """X* = F D* F^T, D* inverting only the nonzero diagonal entries."""
    N = g.size
    F = fourier_matrix(g.domain)
    d = N * fast_transform(g.domain, g.values)
    return F @ np.diag(_diag_pinv(d, N)) @ F.T


def apply_pseudoinverse(g: GroupFunction, v) -> np.ndarray:
    """X* v through two forward transforms; never materializes a matrix."""
    N = g.size
    d = N * fast_transform(g.domain, g.values)
    return fast_transform(g.domain, _diag_pinv(d, N) * fast_transform(g.domain, np.asarray(v, dtype=complex)))


def pseudoinverse_recovery(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """Estimate of delta_{-s}: X* f is centred on +s, so reflect it through x -> -x."""
    est = apply_pseudoinverse(g, f.values)
    return GroupFunction(f.domain, est[f.domain.neg_idx(np.arange(f.size))])


# -- state-vector simulation -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuantumState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > TOL:
            raise ValueError(f"state has squared norm {norm}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def measure(self, rng: np.random.Generator) -> int:
        """Inverse-CDF sample over canonical order."""
        cdf = np.cumsum(self.probabilities())
        return int(min(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"), len(cdf) - 1))


def quantize_phases(state: QuantumState, bits: int) -> QuantumState:
    """Round every phase to the nearest 2^bits-th root of unity."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    return QuantumState(_quantize(state.amplitudes, bits))


def _quantize(amps: np.ndarray, bits: int) -> np.ndarray:
    step = 2 * np.pi / 2**bits
    return np.abs(amps) * np.exp(1j * step * np.round(np.angle(amps) / step))


@dataclass(frozen=True)
class RecoveryOutcome:
    aborted_at_support: bool
    measured_value: int | None
    recovered_shift: int | None
    success: bool


class ShiftRecoverySimulator:
    """Reusable simulator for one (g, f) pair.

    Step 1 is a Bernoulli(alpha) support test followed by exact
    renormalization onto the support; amplitudes outside the support of g^
    are left untouched in step 3 and end up in the failure mass.
    """

    def __init__(
        self,
        g: GroupFunction,
        f: GroupFunction,
        character: MultCharacter | None = None,
        quantize_bits: int | None = None,
        strict: bool = True,
    ):
        if g.domain != f.domain:
            raise ValueError("g and f live on different domains")
        self.report = check_conditions(g, character)
        if strict and not self.report.holds:
            raise ConditionError(f"sufficient conditions fail: {self.report}")
        self.domain = g.domain
        self.oracle = CountingOracle(f)
        self.spectrum = SpectrumPhaseOracle(g, character)
        self.quantize_bits = quantize_bits
        self._neg = self.domain.neg_idx(np.arange(self.domain.size))

    def evolve(self, f_values: np.ndarray) -> QuantumState:
        """Steps 1 (post-selected) to 4, up to but excluding the final measurement."""
        N = self.domain.size
        supp = _support(f_values)
        amps = np.where(supp, np.exp(1j * np.angle(f_values)), 0)
        if self.quantize_bits:
            amps = _quantize(amps, self.quantize_bits)
        amps = amps / np.sqrt(supp.sum())
        spec = fast_transform(self.domain, amps) / np.sqrt(N)
        g_hat = self.spectrum.query()
        nz = _support(g_hat)
        spec[nz] *= np.exp(-1j * np.angle(g_hat[nz]))
        return QuantumState(inverse_transform(self.domain, spec) * np.sqrt(N))

    def run(self, rng: np.random.Generator) -> tuple[bool, int | None]:
        """One trial; returns (aborted, measured value)."""
        vals = self.oracle.query()
        alpha = float(np.mean(_support(vals)))
        if rng.random() >= alpha:
            return True, None
        return False, self.evolve(vals).measure(rng)

    def recover(self, rng: np.random.Generator) -> int | None:
        aborted, measured = self.run(rng)
        return None if aborted else int(self._neg[measured])


def pre_measurement_state(instance: ShiftInstance, quantize_bits: int | None = None) -> QuantumState:
    """The register just before the final measurement, given step 1 passed."""
    sim = ShiftRecoverySimulator(instance.g, instance.f, instance.character, quantize_bits, strict=False)
    return sim.evolve(instance.f.values)


def conditional_success_mass(instance: ShiftInstance, quantize_bits: int | None = None) -> float:
    """Probability of measuring -s once the support test has passed."""
    probs = pre_measurement_state(instance, quantize_bits).probabilities()
    return float(probs[int(instance.domain.neg_idx(instance.shift))])


def simulate_shift_recovery(
    instance: ShiftInstance,
    rng: np.random.Generator,
    quantize_bits: int | None = None,
    simulator: ShiftRecoverySimulator | None = None,
    period: int | None = None,
) -> RecoveryOutcome:
    """One trial. With ``period`` (Z/n only) any shift congruent to s mod period counts as success."""
    sim = simulator or ShiftRecoverySimulator(instance.g, instance.f, instance.character, quantize_bits)
    aborted, measured = sim.run(rng)
    if aborted:
        return RecoveryOutcome(True, None, None, False)
    recovered = int(instance.domain.neg_idx(measured))
    if period is None:
        success = recovered == instance.shift
    else:
        success = (recovered - instance.shift) % period == 0
    return RecoveryOutcome(False, measured, recovered, success)


@dataclass(frozen=True)
class TrialStats:
    trials: int
    aborts: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, derived from (seed, trial index)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def run_shift_trials(
    instance: ShiftInstance,
    trials: int,
    seed: int,
    quantize_bits: int | None = None,
    period: int | None = None,
    strict: bool = True,
) -> TrialStats:
    sim = ShiftRecoverySimulator(instance.g, instance.f, instance.character, quantize_bits, strict)
    aborts = successes = 0
    for i in range(trials):
        out = simulate_shift_recovery(instance, trial_rng(seed, i), simulator=sim, period=period)
        aborts += out.aborted_at_support
        successes += out.success
    return TrialStats(trials, aborts, successes)
