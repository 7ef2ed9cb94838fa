"""Experiment modes behind the CLI.

Every mode takes an :class:`ExperimentConfig` and returns a plain dict.
All randomness flows from ``config.seed``: the random shift comes from
``default_rng(seed)`` and trial i of a Monte Carlo run uses the stream
``SeedSequence(seed, spawn_key=(i,))``. Identical configs give identical
reports; only ``bench`` carries timings.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .algebra import FiniteField, ResidueRing
from .characters import TOL, MultCharacter, enumerate_mult_chars
from .coset import brute_force_coset, fourier_sample_hsp, solve_hidden_coset
from .errors import DomainError, VerificationError
from .fourier import (
    GroupFunction,
    dft_fast,
    deconvolve,
    gauss_sum,
    mult_char_spectrum_closed_form,
    naive_transform,
    fast_transform,
    spectrum_constant,
)
from .shift import (
    ShiftInstance,
    check_conditions,
    pre_measurement_state,
    pseudoinverse_recovery,
    run_shift_trials,
)
from .verify import run_verification_suite

MODES = ("field-shift", "zn-shift", "hsp", "coset", "gauss-table", "verify", "bench", "dump-spectrum", "deconv")
DEFAULT_BENCH_SIZES = (45, 225, 3**7, 3**4 * 5**2 * 7)

CSV_COLUMNS = {
    "field-shift": ["domain", "characterIndex", "shift", "seed", "trials", "aborts", "successes",
                    "exactAlpha", "exactBeta", "exactRate", "empiricalRate", "ci99Low", "ci99High"],
    "zn-shift": ["domain", "characterIndex", "shift", "seed", "trials", "aborts", "successes",
                 "exactAlpha", "exactBeta", "exactRate", "empiricalRate", "ci99Low", "ci99High"],
    "hsp": ["n", "characterIndex", "shift", "seed", "T", "expectedT", "sampleCount"],
    "coset": ["n", "characterIndex", "shift", "seed", "T", "representative", "members", "attempts", "agrees"],
    "gauss-table": ["characterIndex", "gaussSumRe", "gaussSumIm", "magnitude", "alpha", "beta", "period",
                    "spectrumSupport", "excluded"],
    "verify": ["name", "passed", "detail"],
    "bench": ["size", "naiveMs", "fastMs", "maxDeviation"],
    "dump-spectrum": ["y", "re", "im"],
    "deconv": ["domain", "characterIndex", "shift", "peak", "massAtPeak", "recoveredShift",
               "agreesWithPseudoinverse"],
}


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    p: int | None = None
    m: int = 1
    n: int | None = None
    char: str | None = None
    shift: str = "random"
    trials: int = 1000
    seed: int = 0
    quantize_bits: int | None = None
    confidence: int = 10
    sizes: tuple[int, ...] = DEFAULT_BENCH_SIZES
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.trials < 1:
            raise DomainError("trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.format not in ("json", "csv"):
            raise DomainError(f"unknown format {self.format!r}")


# -- config resolution -------------------------------------------------------------


def resolve_domain(config: ExperimentConfig, want: str | None = None):
    if config.p is not None and config.n is not None:
        raise DomainError("give either --p/--m or --n, not both")
    if config.p is not None and want != "ring":
        return FiniteField(config.p, config.m)
    if config.n is not None and want != "field":
        return ResidueRing(config.n)
    raise DomainError(f"mode {config.mode} needs " + {"ring": "--n", "field": "--p"}.get(want, "--p or --n"))


def resolve_character(config: ExperimentConfig, domain) -> MultCharacter:
    raw = config.char
    if isinstance(domain, FiniteField):
        if raw is None:
            return MultCharacter(domain, (domain.q - 1) // 2 if domain.p != 2 else 1)
        return MultCharacter(domain, int(raw))
    if raw is None:
        return MultCharacter(domain, (1,) * len(domain.factors))
    return MultCharacter(domain, tuple(int(part) for part in str(raw).split(",")))


def resolve_shift(config: ExperimentConfig, domain) -> int:
    if config.shift == "random":
        return int(np.random.default_rng(config.seed).integers(domain.size))
    s = int(config.shift)
    if not 0 <= s < domain.size:
        raise DomainError(f"shift {s} outside [0, {domain.size})")
    return s


def _index_json(chi: MultCharacter):
    return chi.index if chi.is_field else list(chi.index)


def _domain_label(domain) -> str:
    return f"F_{domain.p}^{domain.m}" if isinstance(domain, FiniteField) else f"Z/{domain.n}"


def wilson_interval(successes: int, trials: int, level: float = 0.99) -> tuple[float, float]:
    z = NormalDist().inv_cdf(0.5 + level / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return centre - half, centre + half


# -- modes -------------------------------------------------------------------------


def _shift_experiment(config: ExperimentConfig, want: str) -> dict:
    domain = resolve_domain(config, want)
    chi = resolve_character(config, domain)
    s = resolve_shift(config, domain)
    inst = ShiftInstance.from_character(chi, s)
    report = check_conditions(inst.g, chi)
    if not report.holds:
        raise DomainError(f"character {chi.index} violates the sufficient conditions: {report.to_json()}")
    # on Z/n a shift is only determined modulo the character's period; every coset member
    # carries mass beta, so the exact rate scales by the coset size
    period = None if chi.is_field else chi.period
    coset_size = 1 if period is None else domain.size // period
    exact = report.alpha * report.beta * coset_size
    stats = run_shift_trials(inst, config.trials, config.seed, config.quantize_bits, period=period)
    sigma = math.sqrt(float(exact) * (1 - float(exact)) / config.trials)
    lo, hi = wilson_interval(stats.successes, config.trials)
    out = {
        "mode": config.mode,
        "domain": _domain_label(domain),
        "domainSpec": domain.to_json(),
        "characterIndex": _index_json(chi),
        "shift": s,
        "seed": config.seed,
        "trials": config.trials,
        "aborts": stats.aborts,
        "successes": stats.successes,
        "exactAlpha": str(report.alpha),
        "exactBeta": str(report.beta),
        "exactRateFraction": str(exact),
        "exactRate": float(exact),
        "empiricalRate": stats.rate,
        "ci99Low": lo,
        "ci99High": hi,
        "sigma": sigma,
        "withinFourSigma": abs(stats.rate - float(exact)) <= 4 * sigma,
        "quantizeBits": config.quantize_bits,
    }
    if period is not None:
        out["period"] = period
    if config.quantize_bits:
        probs = pre_measurement_state(inst, config.quantize_bits).probabilities()
        coset = domain.neg_idx(s) if period is None else (domain.neg_idx(s) + np.arange(0, domain.size, period)) % domain.size
        out["quantizedExactRate"] = float(report.alpha) * float(np.sum(probs[coset]))
    return out


def field_shift(config: ExperimentConfig) -> dict:
    return _shift_experiment(config, "field")


def zn_shift(config: ExperimentConfig) -> dict:
    return _shift_experiment(config, "ring")


def hsp(config: ExperimentConfig) -> dict:
    ring = resolve_domain(config, "ring")
    chi = resolve_character(config, ring)
    s = resolve_shift(config, ring)
    f = GroupFunction.from_character(chi).translate(s)
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(2**32,)))
    H = fourier_sample_hsp(f, rng, config.confidence)
    order = ring.n // chi.period
    return {
        "mode": "hsp",
        "n": ring.n,
        "characterIndex": _index_json(chi),
        "shift": s,
        "seed": config.seed,
        "T": H.period,
        "expectedT": chi.period,
        "hspSamples": list(H.samples),
        "sampleCount": len(H.samples),
        "samplesInPerp": all(y % order == 0 for y in H.samples),
    }


def coset(config: ExperimentConfig) -> dict:
    ring = resolve_domain(config, "ring")
    chi = resolve_character(config, ring)
    s = resolve_shift(config, ring)
    g = GroupFunction.from_character(chi)
    f = g.translate(s)
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(2**32,)))
    answer = solve_hidden_coset(chi, f, rng, config.confidence)
    brute = brute_force_coset(g, f)
    record = answer.to_json(chi.index, config.seed)
    record.update(
        mode="coset",
        shift=s,
        bruteForceMembers=list(brute.members),
        agrees=set(brute.members) == set(answer.members),
    )
    if not record["agrees"]:
        raise VerificationError(f"solver members {answer.members} != brute force {brute.members}")
    return record


def gauss_table(config: ExperimentConfig) -> dict:
    domain = resolve_domain(config)
    rows = []
    for chi in enumerate_mult_chars(domain):
        g = GroupFunction.from_character(chi)
        report = check_conditions(g, chi)
        gs = None if chi.is_trivial else gauss_sum(chi)
        rows.append(
            {
                "characterIndex": _index_json(chi),
                "gaussSumRe": None if gs is None else gs.real,
                "gaussSumIm": None if gs is None else gs.imag,
                "magnitude": None if gs is None else abs(gs),
                "alpha": str(report.alpha),
                "beta": str(report.beta),
                "period": None if chi.is_field else chi.period,
                "spectrumSupport": int(np.sum(np.abs(fast_transform(domain, g.values)) > TOL)),
                "excluded": not report.holds,
            }
        )
    return {"mode": "gauss-table", "domain": _domain_label(domain), "domainSpec": domain.to_json(), "rows": rows}


def verify(config: ExperimentConfig) -> dict:
    results = run_verification_suite()
    rows = [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    return {"mode": "verify", "passed": all(r.passed for r in results), "rows": rows}


def bench(config: ExperimentConfig) -> dict:
    rng = np.random.default_rng(config.seed)
    rows = []
    for size in config.sizes:
        ring = ResidueRing(size)
        f = rng.normal(size=size) + 1j * rng.normal(size=size)
        fast_transform(ring, f)  # warm the index-map caches
        t0 = time.perf_counter()
        naive = naive_transform(ring, f)
        t1 = time.perf_counter()
        fast = fast_transform(ring, f)
        t2 = time.perf_counter()
        dev = float(np.max(np.abs(naive - fast)))
        if dev >= 1e-9 * max(1.0, float(np.max(np.abs(naive)))):
            raise VerificationError(f"fast transform disagrees with naive on Z/{size}: {dev:.3e}")
        rows.append({"size": size, "naiveMs": 1e3 * (t1 - t0), "fastMs": 1e3 * (t2 - t1), "maxDeviation": dev})
    return {"mode": "bench", "seed": config.seed, "rows": rows}


def dump_spectrum(config: ExperimentConfig) -> dict:
    domain = resolve_domain(config)
    chi = resolve_character(config, domain)
    spectrum = dft_fast(GroupFunction.from_character(chi))
    out = {"mode": "dump-spectrum", "character": chi.to_json(), "spectrum": spectrum.to_json()}
    if not (chi.is_field and chi.is_trivial):
        K = spectrum_constant(chi)
        out["closedForm"] = mult_char_spectrum_closed_form(chi).to_json()["values"]
        out["constant"] = [K.real, K.imag]
    return out


def deconv(config: ExperimentConfig) -> dict:
    domain = resolve_domain(config)
    chi = resolve_character(config, domain)
    s = resolve_shift(config, domain)
    g = GroupFunction.from_character(chi)
    f = g.translate(s)
    out = deconvolve(f, g)
    via_pinv = pseudoinverse_recovery(f, g)
    mags = np.abs(out.values)
    peaks = np.flatnonzero(mags >= mags.max() - TOL)
    target = int(domain.neg_idx(s))
    return {
        "mode": "deconv",
        "domain": _domain_label(domain),
        "characterIndex": _index_json(chi),
        "shift": s,
        "peak": target if target in peaks else int(peaks[0]),
        "peaks": [int(x) for x in peaks],
        "massAtPeak": float(mags[target] ** 2 / np.sum(mags**2)),
        "recoveredShift": int(domain.neg_idx(int(peaks[0]))) if len(peaks) == 1 else None,
        "agreesWithPseudoinverse": bool(out.allclose(via_pinv)),
        "output": out.to_json()["values"],
    }


RUNNERS = {
    "field-shift": field_shift,
    "zn-shift": zn_shift,
    "hsp": hsp,
    "coset": coset,
    "gauss-table": gauss_table,
    "verify": verify,
    "bench": bench,
    "dump-spectrum": dump_spectrum,
    "deconv": deconv,
}


def run_experiment(config: ExperimentConfig) -> dict:
    return RUNNERS[config.mode](config)

