"""Shifted multiplicative characters over F_q and Z/n: field and ring arithmetic,
character spectra, a state-vector shift-recovery simulator and a hidden coset solver."""
from .algebra import FiniteField, FieldElement, ResidueRing, domain_from_json
from .characters import AddCharacter, MultCharacter, char_period_prime_power, enumerate_mult_chars, minimal_period
from .coset import CosetAnswer, SubgroupZn, brute_force_coset, fourier_sample_hsp, solve_hidden_coset
from .errors import CapExceeded, ConditionError, CosetForgeError, DomainError, VerificationError
from .fourier import (
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
from .shift import (
    ShiftInstance,
    ShiftRecoverySimulator,
    apply_pseudoinverse,
    check_conditions,
    conditional_success_mass,
    pseudoinverse,
    run_shift_trials,
    verify_diagonalization,
)

__all__ = [
    "AddCharacter",
    "CapExceeded",
    "ConditionError",
    "CosetAnswer",
    "CosetForgeError",
    "DomainError",
    "FieldElement",
    "FiniteField",
    "GroupFunction",
    "MultCharacter",
    "ResidueRing",
    "ShiftInstance",
    "ShiftRecoverySimulator",
    "SubgroupZn",
    "VerificationError",
    "apply_pseudoinverse",
    "brute_force_coset",
    "char_period_prime_power",
    "check_conditions",
    "conditional_success_mass",
    "convolve",
    "deconvolve",
    "dft_fast",
    "dft_naive",
    "domain_from_json",
    "enumerate_mult_chars",
    "fourier_sample_hsp",
    "gauss_sum",
    "idft",
    "minimal_period",
    "mult_char_spectrum_closed_form",
    "pseudoinverse",
    "run_shift_trials",
    "solve_hidden_coset",
    "spectrum_constant",
    "verify_diagonalization",
]
