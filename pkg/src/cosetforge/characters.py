"""Additive and multiplicative characters of F_q and Z/n.

Multiplicative characters are identified by their index, never by a
closure: on F_q, chi_k(g^l) = exp(2 pi i k l / (q - 1)); on Z/n the index
is a tuple (l_1, ..., l_k), one exponent per prime-power factor, and the
value is the product of the factor characters at x mod p_r^{e_r}. All
multiplicative characters vanish off the unit group.

Exact comparisons go through :meth:`MultCharacter.exponents`, which gives
each value as an integer numerator over a common denominator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import FieldElement, FiniteField, ResidueRing, divisors, is_prime

TOL = 1e-9
TWO_PI_I = 2j * np.pi


def _root_of_unity(num, den) -> np.ndarray:
    num = np.asarray(num)
    return np.where(num < 0, 0.0, np.exp(TWO_PI_I * (num % den) / den))


@dataclass(frozen=True)
class AddCharacter:
    """psi_a(c) = exp(2 pi i Tr(ac) / p) on F_q, psi_k(x) = exp(2 pi i kx / n) on Z/n."""

    domain: FiniteField | ResidueRing
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.domain.size:
            raise ValueError(f"additive character index {self.index} out of range")

    def _numerator(self, x: int) -> tuple[int, int]:
        if isinstance(self.domain, FiniteField):
            F = self.domain
            return F.trace(F.mul(self.index, x)), F.p
        return self.index * x % self.domain.n, self.domain.n

    def __call__(self, x) -> complex:
        if isinstance(x, FieldElement):
            if not isinstance(self.domain, FiniteField) or x.field != self.domain:
                raise ValueError("element is not in the character's domain")
        elif not 0 <= int(x) < self.domain.size:
            raise ValueError(f"{x} is not an element of the domain")
        num, den = self._numerator(x if isinstance(x, FieldElement) else int(x))
        return complex(np.exp(TWO_PI_I * num / den))

    def values(self) -> np.ndarray:
        xs = np.arange(self.domain.size)
        if isinstance(self.domain, FiniteField):
            F = self.domain
            return np.exp(TWO_PI_I * F.trace_table[F.mul_idx(self.index, xs)] / F.p)
        n = self.domain.n
        return np.exp(TWO_PI_I * (self.index * xs % n) / n)

    def to_json(self) -> dict:
        return {"domain": self.domain.to_json(), "kind": "add", "index": self.index}


@dataclass(frozen=True)
class MultCharacter:
    domain: FiniteField | ResidueRing
    index: int | tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.domain, FiniteField):
            if not isinstance(self.index, (int, np.integer)):
                raise TypeError("field characters take an integer index")
            if not 0 <= self.index < self.domain.q - 1:
                raise ValueError(f"index {self.index} out of range [0, {self.domain.q - 1})")
            object.__setattr__(self, "index", int(self.index))
            return
        idx = (self.index,) if isinstance(self.index, (int, np.integer)) else tuple(self.index)
        orders = self.domain.unit_orders
        if len(idx) != len(orders) or any(not 0 <= int(l) < o for l, o in zip(idx, orders)):
            raise ValueError(f"index {idx} out of range for unit orders {orders}")
        object.__setattr__(self, "index", tuple(int(l) for l in idx))

    @property
    def is_trivial(self) -> bool:
        return self.index == 0 if isinstance(self.index, int) else not any(self.index)

    @property
    def is_field(self) -> bool:
        return isinstance(self.domain, FiniteField)

    def exponents(self) -> tuple[np.ndarray, int]:
        """Values as ``exp(2 pi i num / den)``; ``num`` is -1 where the character is 0."""
        if self.is_field:
            F = self.domain
            logs = F.log_table
            return np.where(logs < 0, -1, (self.index * logs) % (F.q - 1)), F.q - 1
        ring = self.domain
        den = math.lcm(*ring.unit_orders)
        xs = np.arange(ring.n)
        num = np.zeros(ring.n, dtype=np.int64)
        off = np.zeros(ring.n, dtype=bool)
        for l, order, N, table in zip(self.index, ring.unit_orders, ring.moduli, ring.log_tables):
            t = table[xs % N]
            off |= t < 0
            num += (l * t % order) * (den // order)
        return np.where(off, -1, num % den), den

    def values(self) -> np.ndarray:
        return _root_of_unity(*self.exponents())

    def __call__(self, x) -> complex:
        if self.is_field:
            F = self.domain
            a = F.element(x)
            if a.is_zero:
                return 0j
            k = F.q - 1
            return complex(np.exp(TWO_PI_I * (self.index * F.discrete_log(a) % k) / k))
        ring = self.domain
        x = int(x)
        if not 0 <= x < ring.n:
            raise ValueError(f"{x} is not a residue mod {ring.n}")
        logs = ring.discrete_logs(x)
        if logs is None:
            return 0j
        phase = sum((l * t % o) / o for l, t, o in zip(self.index, logs, ring.unit_orders))
        return complex(np.exp(TWO_PI_I * (phase % 1)))

    @property
    def period(self) -> int:
        """Least additive period; on F_q the stabilizer is trivial, so q."""
        if self.is_field:
            return self.domain.q
        return char_period_ring(self.domain, self)

    def to_json(self) -> dict:
        index = self.index if self.is_field else list(self.index)
        return {"domain": self.domain.to_json(), "kind": "mult", "index": index}


def character_from_json(obj: dict):
    from .algebra import domain_from_json

    domain = domain_from_json(obj["domain"])
    if obj["kind"] == "add":
        return AddCharacter(domain, int(obj["index"]))
    if obj["kind"] == "mult":
        index = obj["index"]
        return MultCharacter(domain, index if isinstance(index, int) else tuple(index))
    raise ValueError(f"unknown character kind {obj['kind']!r}")


def char_period_prime_power(p: int, m: int, k: int) -> int:
    """Additive period p^j of chi_k on Z/p^m, where gcd(p^m, k) = p^(m-j).

    k = 0 (the trivial character extended by zero) has period p: the
    zero pattern on multiples of p is the only structure left.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"p={p} must be an odd prime")
    if m < 1:
        raise ValueError(f"m={m} must be positive")
    order = (p - 1) * p ** (m - 1)
    if not 0 <= k < order:
        raise ValueError(f"k={k} out of range [0, {order})")
    if k == 0:
        return p
    g, shared = math.gcd(p**m, k), 0
    while g > 1:
        g //= p
        shared += 1
    return p ** (m - shared)


def char_period_ring(ring: ResidueRing, chi: MultCharacter) -> int:
    if chi.domain != ring:
        raise ValueError("character belongs to a different domain")
    return math.prod(char_period_prime_power(p, e, l) for (p, e), l in zip(ring.factors, chi.index))


def minimal_period(values: Sequence, exhaustive: bool = False, atol: float = TOL) -> int:
    """Least T > 0 with values[(x + T) % N] == values[x] for every x.

    Periods of a function on Z/N form a subgroup, so the least one divides
    N; ``exhaustive=True`` scans every shift anyway.
    """
    v = np.asarray(values)
    N = len(v)
    exact = np.issubdtype(v.dtype, np.integer)
    for T in range(1, N + 1) if exhaustive else divisors(N):
        rolled = np.roll(v, -T)
        if (np.array_equal(rolled, v) if exact else np.allclose(rolled, v, atol=atol, rtol=0)):
            return T
    raise AssertionError("unreachable: N is always a period")


def enumerate_mult_chars(domain: FiniteField | ResidueRing) -> list[MultCharacter]:
    if isinstance(domain, FiniteField):
        return [MultCharacter(domain, k) for k in range(domain.q - 1)]
    return [MultCharacter(domain, idx) for idx in product(*(range(o) for o in domain.unit_orders))]


def quadratic_character(field: FiniteField) -> MultCharacter:
    if field.p == 2:
        raise ValueError("no quadratic character in characteristic 2")
    return MultCharacter(field, (field.q - 1) // 2)
