"""Hidden coset problem over Z/n.

A multiplicative character of Z/n is invariant under translation by its
additive period T, so f(x) = g(x + s) only determines s modulo
H = {0, T, 2T, ...}. The solver finds T by Fourier sampling with g's
phase loaded into the amplitudes (every sample lands in H^perp, the
multiples of n/T), certifies it against the oracle, and then solves the
shift problem on Z/T where the reduced character has no periodicity left.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import ResidueRing
from .characters import TOL, MultCharacter
from .errors import CapExceeded, DomainError, SamplingBudgetExceeded, VerificationError
from .fourier import GroupFunction, fast_transform
from .shift import CountingOracle, ShiftInstance, ShiftRecoverySimulator, conditional_success_mass

DEFAULT_CONFIDENCE = 10


@dataclass(frozen=True)
class SubgroupZn:
    """H = {0, T, 2T, ...} inside Z/n, stored by its period T."""

    ring: ResidueRing
    period: int
    samples: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.period < 1 or self.ring.n % self.period:
            raise ValueError(f"period {self.period} does not divide {self.ring.n}")

    @property
    def order(self) -> int:
        return self.ring.n // self.period

    def elements(self) -> tuple[int, ...]:
        return tuple(range(0, self.ring.n, self.period))

    def in_perp(self, y: int) -> bool:
        return y % self.order == 0


@dataclass(frozen=True)
class CosetAnswer:
    representative: int
    subgroup: SubgroupZn
    attempts: int = field(default=0, compare=False)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self.representative + h for h in self.subgroup.elements())

    def to_json(self, character_index=None, seed: int | None = None) -> dict:
        idx = list(character_index) if isinstance(character_index, tuple) else character_index
        return {
            "n": self.subgroup.ring.n,
            "characterIndex": idx,
            "T": self.subgroup.period,
            "representative": self.representative,
            "members": list(self.members),
            "hspSamples": list(self.subgroup.samples),
            "attempts": self.attempts,
            "seed": seed,
        }


def _periodic(values: np.ndarray, T: int) -> bool:
    return np.allclose(np.roll(values, -T), values, rtol=0, atol=TOL)


def fourier_sample_hsp(
    f: GroupFunction | CountingOracle,
    rng: np.random.Generator,
    confidence: int = DEFAULT_CONFIDENCE,
    budget: int | None = None,
) -> SubgroupZn:
    """Estimate the stabilizer period T by phase-based Fourier sampling.

    Each round loads the phase of f onto its support (after a Bernoulli
    support test), transforms, and measures a dual index. The running gcd
    of the samples with n stops once it survives ``confidence`` further
    samples unchanged; T = n / gcd. The result is not certified here.
    """
    if confidence < 1:
        raise ValueError("confidence must be >= 1")
    oracle = f if isinstance(f, CountingOracle) else CountingOracle(f)
    ring = oracle.domain
    if not isinstance(ring, ResidueRing):
        raise TypeError("hidden subgroup sampling is implemented for Z/n")
    n = ring.n
    if budget is None:
        budget = 64 * (confidence + math.ceil(math.log2(n)))
    samples: list[int] = []
    running, stable = n, 0
    for _ in range(budget):
        vals = oracle.query()
        supp = np.abs(vals) > TOL
        if rng.random() >= supp.mean():
            continue
        amps = np.where(supp, np.exp(1j * np.angle(vals)), 0) / np.sqrt(supp.sum())
        probs = np.abs(fast_transform(ring, amps)) ** 2 / n
        cdf = np.cumsum(probs)
        y = int(min(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"), n - 1))
        samples.append(y)
        new = math.gcd(running, y)
        stable = stable + 1 if new == running and len(samples) > 1 else 0
        running = new
        if stable >= confidence:
            return SubgroupZn(ring, n // running, tuple(samples))
    raise SamplingBudgetExceeded(f"gcd did not stabilize within {budget} rounds")


def quotient_reduce(f: GroupFunction, subgroup: SubgroupZn) -> GroupFunction:
    """f'(x + H) = f(x) on Z/T, after checking f is T-periodic."""
    T = subgroup.period
    if not _periodic(f.values, T):
        raise VerificationError(f"f is not invariant under translation by {T}")
    if T == f.size:
        return f
    try:
        quotient = ResidueRing(T)
    except DomainError as exc:
        raise VerificationError(f"degenerate quotient Z/{T}") from exc
    return GroupFunction(quotient, f.values[:T])


def quotient_character(chi: MultCharacter, period: int | None = None) -> MultCharacter:
    """The character of Z/T that chi induces through x -> x mod T, T = period of chi.

    Factor r with index l and period p^j becomes index
    (l / p^(e-j)) * log_g(h) mod (p - 1) p^(j-1), where h is the unit
    generator chosen for Z/p^j and g the one for Z/p^e.
    """
    ring = chi.domain
    T = chi.period if period is None else period
    if T != chi.period:
        raise ValueError(f"{T} is not the period of {chi}")
    if T == ring.n:
        return chi
    quotient = ResidueRing(T)
    index = []
    for r, l in enumerate(chi.index):
        N = ring.moduli[r]
        qN, q_order = quotient.moduli[r], quotient.unit_orders[r]
        if l == 0:
            index.append(0)
            continue
        h_log = int(ring.log_tables[r][quotient.unit_generators[r] % N])
        index.append((l // (N // qN)) * h_log % q_order)
    return MultCharacter(quotient, tuple(index))


def _matches(f: GroupFunction, g: GroupFunction, s: int) -> bool:
    return np.allclose(f.values, g.translate(s).values, rtol=0, atol=TOL)


def solve_hidden_coset(
    chi: MultCharacter,
    f: GroupFunction,
    rng: np.random.Generator,
    confidence: int = DEFAULT_CONFIDENCE,
    hsp_rounds: int = 8,
) -> CosetAnswer:
    """All s' with f = g(. + s'), via sampling for H and a shift solve on Z/T.

    The sampled period is checked exhaustively against f and resampled if
    it fails. On the quotient, recovery is retried up to ceil(20 / p)
    times, p being the exact per-attempt success probability, and every
    candidate is checked against the full oracle before it is returned.
    """
    ring = chi.domain
    if not isinstance(ring, ResidueRing) or f.domain != ring:
        raise ValueError("chi and f must live on the same Z/n")
    g = GroupFunction.from_character(chi)
    oracle = CountingOracle(f)
    samples: list[int] = []
    for _ in range(hsp_rounds):
        H = fourier_sample_hsp(oracle, rng, confidence)
        samples.extend(H.samples)
        if H.period > 1 and _periodic(f.values, H.period):
            break
    else:
        raise VerificationError(f"no certified period after {hsp_rounds} sampling rounds")
    H = SubgroupZn(ring, H.period, tuple(samples))

    reduced_chi = quotient_character(chi, H.period)
    g_red = GroupFunction.from_character(reduced_chi)
    if not np.allclose(g_red.values, g.values[: H.period], rtol=0, atol=TOL):
        raise VerificationError("reduced character disagrees with g on coset representatives")
    f_red = quotient_reduce(f, H)

    sim = ShiftRecoverySimulator(g_red, f_red, reduced_chi, strict=False)
    if sim.report.holds:
        per_attempt = float(sim.report.success_probability)
    else:
        per_attempt = float(sim.report.alpha) * conditional_success_mass(ShiftInstance.create(g_red, 0, reduced_chi))
    cap = math.ceil(20 / per_attempt)
    for attempt in range(1, cap + 1):
        cand = sim.recover(rng)
        if cand is not None and _matches(f, g, cand):
            return CosetAnswer(cand % H.period, H, attempts=attempt)
    raise CapExceeded(f"shift recovery failed {cap} times on Z/{H.period}")


def brute_force_coset(g: GroupFunction, f: GroupFunction) -> CosetAnswer | None:
    """Every shift s' with f = g(. + s'), by exhaustive search; None when f is no translate of g.

    Also checks the solution set is a coset of a subgroup of Z/n.
    """
    ring = g.domain
    if not isinstance(ring, ResidueRing) or f.domain != ring:
        raise ValueError("g and f must live on the same Z/n")
    n = ring.n
    probe = np.arange(min(n, 16))
    hits = [
        s
        for s in range(n)
        if np.allclose(f.values[probe], g.values[(probe + s) % n], rtol=0, atol=TOL) and _matches(f, g, s)
    ]
    if not hits:
        return None
    T = math.gcd(n, *(s - hits[0] for s in hits))
    if sorted(hits) != sorted((hits[0] + k * T) % n for k in range(n // T)):
        raise VerificationError(f"shift set {hits} is not a coset")
    return CosetAnswer(hits[0] % T, SubgroupZn(ring, T))
