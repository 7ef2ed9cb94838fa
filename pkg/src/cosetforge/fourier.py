"""Fourier analysis on the additive groups of F_q and Z/n.

Single transform convention, shared by every module:

    forward   f^(y) = sum_x f(x) psi_y(x)                (no conjugate, no 1/|G|)
    inverse   f(x)  = (1/|G|) sum_y f^(y) conj(psi_y(x))

Dual characters are indexed by group elements (psi_a(c) = psi_1(ac) on
fields, psi_k(x) = exp(2 pi i kx/n) on rings), so spectra and functions
share one shape. ``dft_naive`` is the literal double sum and serves as the
oracle for ``dft_fast``, which splits the group into cyclic prime-power
blocks (CRT index maps for Z/n, the F_p^m digit structure for F_q) and runs
radix-p Cooley-Tukey inside each block.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import FiniteField, ResidueRing, factorize
from .characters import TOL, TWO_PI_I, MultCharacter, char_period_prime_power

# complex entries per block of the dense character matrix
_BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """Dense complex function on a finite abelian group, canonical element order."""

    domain: FiniteField | ResidueRing
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.domain.size,):
            raise ValueError(f"expected {self.domain.size} values, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return self.domain.size

    def __len__(self):
        return self.domain.size

    def __getitem__(self, x):
        return self.values[x]

    @classmethod
    def from_character(cls, chi) -> "GroupFunction":
        return cls(chi.domain, chi.values())

    @classmethod
    def delta(cls, domain, at: int = 0) -> "GroupFunction":
        vals = np.zeros(domain.size, dtype=complex)
        vals[at] = 1.0
        return cls(domain, vals)

    def translate(self, s: int) -> "GroupFunction":
        """x -> self(x + s)."""
        idx = self.domain.add_idx(np.arange(self.size), s)
        return type(self)(self.domain, self.values[idx])

    def allclose(self, other: "GroupFunction", atol: float = TOL) -> bool:
        return self.domain == other.domain and np.allclose(self.values, other.values, rtol=0, atol=atol)

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GroupFunction":
        from .algebra import domain_from_json

        domain = domain_from_json(obj["domain"])
        return cls(domain, [complex(re, im) for re, im in obj["values"]])


class SpectrumFunction(GroupFunction):
    """Function on the dual group, entry y holding the value at psi_y."""


def _check_same_domain(a: GroupFunction, b: GroupFunction):
    if a.domain != b.domain:
        raise ValueError("functions live on different domains")


# -- naive transform ---------------------------------------------------------


def character_rows(domain, ys) -> np.ndarray:
    """Matrix with entry [i, x] = psi_{ys[i]}(x)."""
    ys = np.asarray(ys, dtype=np.int64)
    xs = np.arange(domain.size, dtype=np.int64)
    if isinstance(domain, FiniteField):
        prods = domain.mul_idx(ys[:, None], xs[None, :])
        return np.exp(TWO_PI_I * domain.trace_table[prods] / domain.p)
    n = domain.n
    return np.exp(TWO_PI_I * ((ys[:, None] * xs[None, :]) % n) / n)


def naive_transform(domain, values: np.ndarray) -> np.ndarray:
    """Literal O(|G|^2) sum over the first axis of ``values`` (shape (N,) or (N, k))."""
    values = np.asarray(values, dtype=complex)
    N = domain.size
    out = np.empty(values.shape, dtype=complex)
    block = max(1, _BLOCK_ELEMS // N)
    for start in range(0, N, block):
        ys = np.arange(start, min(N, start + block))
        out[start : start + len(ys)] = character_rows(domain, ys) @ values
    return out


def dft_naive(f: GroupFunction) -> SpectrumFunction:
    return SpectrumFunction(f.domain, naive_transform(f.domain, f.values))


# -- fast transform ----------------------------------------------------------


@lru_cache(maxsize=None)
def _dft_matrix(p: int) -> np.ndarray:
    k = np.arange(p)
    return np.exp(TWO_PI_I * (np.outer(k, k) % p) / p)


@lru_cache(maxsize=None)
def _twiddles(p: int, M: int) -> np.ndarray:
    r, k = np.arange(p)[:, None], np.arange(M)[None, :]
    return np.exp(TWO_PI_I * (r * k) / (p * M))


def _cyclic_transform(a: np.ndarray, radices: tuple[int, ...]) -> np.ndarray:
    """Transform of length prod(radices) along the last axis, decimation in time."""
    p = radices[0]
    if len(radices) == 1:
        return a @ _dft_matrix(p)
    N = a.shape[-1]
    M = N // p
    # x = r + p*j  ->  sub[..., r, j]
    sub = a.reshape(a.shape[:-1] + (M, p)).swapaxes(-1, -2)
    inner = _cyclic_transform(sub, radices[1:]) * _twiddles(p, M)
    # X[k1 + M*k2] = sum_r e(r k2 / p) inner[r, k1]
    out = np.einsum("...rk,rs->...sk", inner, _dft_matrix(p))
    return out.reshape(a.shape[:-1] + (N,))


def _radices(N: int) -> tuple[int, ...]:
    return tuple(p for p, e in factorize(N) for _ in range(e))


@lru_cache(maxsize=None)
def _ring_plan(ring: ResidueRing):
    moduli = ring.moduli
    grids = np.indices(moduli).reshape(len(moduli), -1)
    in_perm = np.zeros(grids.shape[1], dtype=np.int64)
    for row, e in zip(grids, ring._idempotents):
        in_perm = (in_perm + row * e) % ring.n
    # psi_y(x) = prod_r e(x_r * (y a_r mod N_r) / N_r) with a_r = (n/N_r)^{-1} mod N_r
    ys = np.arange(ring.n)
    coords = [(ys * pow(ring.n // N, -1, N)) % N for N in moduli]
    out_perm = np.ravel_multi_index(coords, moduli)
    return in_perm, out_perm


@lru_cache(maxsize=None)
def _field_plan(field: FiniteField) -> np.ndarray:
    ys = np.arange(field.q)
    return field.from_digits(field.digits(ys) @ field.trace_form)


def fast_transform(domain, values: np.ndarray) -> np.ndarray:
    """Forward transform along the last axis of ``values``."""
    a = np.asarray(values, dtype=complex)
    lead = a.shape[:-1]
    if isinstance(domain, FiniteField):
        p, m = domain.p, domain.m
        t = a.reshape(lead + (p,) * m)
        W = _dft_matrix(p)
        for axis in range(len(lead), len(lead) + m):
            t = np.moveaxis(np.moveaxis(t, axis, -1) @ W, -1, axis)
        return t.reshape(lead + (domain.q,))[..., _field_plan(domain)]
    in_perm, out_perm = _ring_plan(domain)
    t = a[..., in_perm].reshape(lead + domain.moduli)
    for axis, N in zip(range(len(lead), len(lead) + len(domain.moduli)), domain.moduli):
        t = np.moveaxis(_cyclic_transform(np.moveaxis(t, axis, -1), _radices(N)), -1, axis)
    return t.reshape(lead + (domain.n,))[..., out_perm]


def dft_fast(f: GroupFunction) -> SpectrumFunction:
    return SpectrumFunction(f.domain, fast_transform(f.domain, f.values))


def inverse_transform(domain, spectrum: np.ndarray) -> np.ndarray:
    # psi_y(x) = psi_x(y) on both domains, so the inverse is a conjugated forward pass
    return np.conj(fast_transform(domain, np.conj(spectrum))) / domain.size


def idft(F: GroupFunction) -> GroupFunction:
    return GroupFunction(F.domain, inverse_transform(F.domain, F.values))


# -- convolution ---------------------------------------------------------------


def convolve(a: GroupFunction, b: GroupFunction) -> GroupFunction:
    """(a * b)(x) = sum_y a(y) b(x - y), summed directly."""
    _check_same_domain(a, b)
    xs = np.arange(a.size)
    out = np.zeros(a.size, dtype=complex)
    for y in np.flatnonzero(a.values):
        out += a.values[y] * b.values[a.domain.sub_idx(xs, y)]
    return GroupFunction(a.domain, out)


def deconvolve(f: GroupFunction, g: GroupFunction, tol: float = TOL) -> GroupFunction:
    """Inverse transform of f^/g^, writing 0 wherever |g^| <= tol.

    Zeroing (rather than passing f^ through) makes this the pseudoinverse
    of the diagonal, so for f = delta_{-s} * g the output is delta_{-s}
    projected onto the support of g^.
    """
    _check_same_domain(f, g)
    g_hat = fast_transform(g.domain, g.values)
    keep = np.abs(g_hat) > tol
    if not keep.any():
        raise ValueError("g^ vanishes identically")
    f_hat = fast_transform(f.domain, f.values)
    ratio = np.zeros_like(f_hat)
    ratio[keep] = f_hat[keep] / g_hat[keep]
    return GroupFunction(f.domain, inverse_transform(f.domain, ratio))


# -- closed-form spectra of multiplicative characters ----------------------------


def _ramanujan_sum(p: int, e: int, y: np.ndarray) -> np.ndarray:
    """sum over units x of Z/p^e of exp(2 pi i xy / p^e)."""
    N = p**e
    y = y % N
    return np.where(y == 0, N - N // p, np.where(y % (N // p) == 0, -(N // p), 0)).astype(complex)


def _prime_power_pattern(ring: ResidueRing, r: int, l: int, y: np.ndarray) -> np.ndarray:
    """Spectrum of factor r's character at residues y mod p^e, up to a constant."""
    p, e = ring.factors[r]
    N, order = ring.moduli[r], ring.unit_orders[r]
    if l == 0:
        return _ramanujan_sum(p, e, y)
    d = N // char_period_prime_power(p, e, l)
    y = y % N
    quotient = np.where(y % d == 0, y // d, 0)
    t = ring.log_tables[r][quotient]
    vals = np.exp(-TWO_PI_I * ((l * t) % order) / order)
    return np.where((y % d == 0) & (t >= 0), vals, 0)


def mult_char_spectrum_closed_form(chi: MultCharacter, y: int | None = None):
    """Spectrum of chi up to one global constant.

    Fields: conj(chi(a)) at psi_a (0 at psi_0). Rings: the tensor product
    over prime-power factors of conj(chi_r(y_r / p^(e-j))) where p^(e-j)
    divides y_r and 0 elsewhere; a trivial factor contributes its exact
    Ramanujan sum instead. Returns the whole spectrum, or one entry when
    ``y`` is given. Multiply by :func:`spectrum_constant` to get dft(chi).
    """
    if chi.is_field:
        if chi.is_trivial:
            raise ValueError("the trivial field character has no closed-form phase spectrum")
        spec = np.conj(chi.values())
    else:
        ring = chi.domain
        ys = np.arange(ring.n)
        spec = np.ones(ring.n, dtype=complex)
        for r, l in enumerate(chi.index):
            spec = spec * _prime_power_pattern(ring, r, l, ys)
    if y is not None:
        return complex(spec[y])
    return SpectrumFunction(chi.domain, spec)


def gauss_sum(chi: MultCharacter) -> complex:
    """sum_x chi(x) psi_1(x); for nontrivial field characters |.| = sqrt(q)."""
    if chi.is_trivial:
        raise ValueError("Gauss sum requested for the trivial character")
    psi1 = character_rows(chi.domain, [1])[0]
    return complex(np.sum(chi.values() * psi1))


def spectrum_constant(chi: MultCharacter) -> complex:
    """Measured K with dft(chi) = K * closed form: the naive transform at the first supported index."""
    closed = mult_char_spectrum_closed_form(chi).values
    y0 = int(np.flatnonzero(np.abs(closed) > TOL)[0])
    row = character_rows(chi.domain, [y0])[0]
    return complex(np.sum(chi.values() * row) / closed[y0])
