"""Exact arithmetic in F_{p^m} and Z/n.

Elements of F_{p^m} are polynomials over F_p reduced modulo a monic
irreducible polynomial. Every element has a canonical index
``sum(coeffs[i] * p**i)`` which fixes the element order used by dense
functions on the additive group. Z/n elements are plain residues.

Both domain classes are immutable after construction; lookup tables are
built lazily and cached on the instance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, DomainError, EvenModulusError

FIELD_CAP = 2**20
RING_CAP = 2**20
# single discrete logs use a full table below this size, baby-step/giant-step above
LOG_TABLE_LIMIT = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization as ascending ``(prime, exponent)`` pairs."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    out = n
    for p in prime_divisors(n):
        out = out // p * (p - 1)
    return out


# -- polynomials over F_p: tuples of coefficients, lowest degree first --------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``mod``."""
    r = [c % p for c in a]
    d = len(mod) - 1
    for k in range(len(r) - 1, d - 1, -1):
        c = r[k]
        if c:
            for i in range(d + 1):
                r[k - d + i] = (r[k - d + i] - c * mod[i]) % p
    return _poly_trim(r[:d] if len(r) > d else r)


def _monic_polys(degree: int, p: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of a degree, lower coefficients in ascending index order."""
    for idx in range(p**degree):
        coeffs = []
        for _ in range(degree):
            idx, c = divmod(idx, p)
            coeffs.append(c)
        yield tuple(coeffs) + (1,)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    m = len(poly) - 1
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        for divisor in _monic_polys(d, p):
            if not _poly_rem(poly, divisor, p):
                return False
    return True


def first_irreducible(p: int, m: int) -> tuple[int, ...]:
    for poly in _monic_polys(m, p):
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


class FiniteField:
    """The field F_q, q = p^m, with a fixed modulus and multiplicative generator.

    Construction is deterministic: the modulus is the first monic
    irreducible polynomial in ascending canonical-index order of its lower
    coefficients, and the generator is the first element (in canonical
    index order, starting at index 2) whose order is q - 1. Both can be
    pinned explicitly, in which case they are validated instead.
    """

    def __init__(
        self,
        p: int,
        m: int = 1,
        modulus: Sequence[int] | None = None,
        generator: Sequence[int] | int | None = None,
        cap: int = FIELD_CAP,
    ):
        if not is_prime(p):
            raise DomainError(f"p={p} is not prime")
        if m < 1:
            raise DomainError(f"degree m={m} must be positive")
        if p**m > cap:
            raise CapExceeded(f"q={p}^{m} exceeds cap {cap}")
        self.p = p
        self.m = m
        self.q = p**m
        if modulus is None:
            modulus = first_irreducible(p, m)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
                raise DomainError(f"modulus {modulus} is not monic of degree {m} over F_{p}")
            if not is_irreducible(modulus, p):
                raise DomainError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus_poly: tuple[int, ...] = tuple(modulus)
        self._order_primes = prime_divisors(self.q - 1) if self.q > 2 else []
        if generator is None:
            self._gen = self._find_generator()
        else:
            gen = self.element(generator).coeffs
            if not self._is_generator(gen):
                raise DomainError(f"{generator} does not generate F_{self.q}^*")
            self._gen = gen

    # -- identity --------------------------------------------------------------

    def _key(self):
        return (self.p, self.m, self.modulus_poly, self._gen)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key() == other._key()

    def __hash__(self):
        return hash(("F",) + self._key())

    def __repr__(self):
        return f"FiniteField(p={self.p}, m={self.m})"

    @property
    def size(self) -> int:
        return self.q

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return self.q - 1

    # -- element plumbing --------------------------------------------------------

    def element(self, value) -> "FieldElement":
        """Build an element from a FieldElement, a canonical index or coefficients.

        Coefficient sequences longer than m are reduced by the modulus.
        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            idx = int(value)
            if not 0 <= idx < self.q:
                raise ValueError(f"index {idx} out of range for F_{self.q}")
            return FieldElement(self, self._coeffs_of(idx))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.m:
            coeffs = _poly_rem(coeffs, self.modulus_poly, self.p)
        return FieldElement(self, tuple(coeffs) + (0,) * (self.m - len(coeffs)))

    def _coeffs_of(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            idx, c = divmod(idx, self.p)
            out.append(c)
        return tuple(out)

    def index(self, x) -> int:
        return self.element(x).index

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.m)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.m - 1))

    @property
    def generator(self) -> "FieldElement":
        return FieldElement(self, self._gen)

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.q):
            yield FieldElement(self, self._coeffs_of(i))

    # -- scalar arithmetic on coefficient tuples ---------------------------------

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        mod = self.modulus_poly
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(m):
                    prod[k - m + i] -= c * mod[i]
        return tuple(c % p for c in prod[:m])

    def _pow(self, a: tuple[int, ...], e: int) -> tuple[int, ...]:
        result = (1,) + (0,) * (self.m - 1)
        while e:
            if e & 1:
                result = self._mul(result, a)
            e >>= 1
            if e:
                a = self._mul(a, a)
        return result

    def _is_generator(self, a: tuple[int, ...]) -> bool:
        one = (1,) + (0,) * (self.m - 1)
        if not any(a):
            return False
        if self.q == 2:
            return True
        n = self.q - 1
        return self._pow(a, n) == one and all(self._pow(a, n // r) != one for r in self._order_primes)

    def _find_generator(self) -> tuple[int, ...]:
        if self.q == 2:
            return (1,)
        for idx in range(2, self.q):
            cand = self._coeffs_of(idx)
            if self._is_generator(cand):
                return cand
        raise AssertionError("unreachable: F_q^* is cyclic")

    # -- public element operations -------------------------------------------------

    def add(self, x, y) -> "FieldElement":
        a, b = self.element(x), self.element(y)
        return FieldElement(self, tuple((u + v) % self.p for u, v in zip(a.coeffs, b.coeffs)))

    def sub(self, x, y) -> "FieldElement":
        a, b = self.element(x), self.element(y)
        return FieldElement(self, tuple((u - v) % self.p for u, v in zip(a.coeffs, b.coeffs)))

    def neg(self, x) -> "FieldElement":
        return FieldElement(self, tuple(-c % self.p for c in self.element(x).coeffs))

    def mul(self, x, y) -> "FieldElement":
        return FieldElement(self, self._mul(self.element(x).coeffs, self.element(y).coeffs))

    def pow(self, x, e: int) -> "FieldElement":
        a = self.element(x)
        if e < 0:
            a, e = self.inv(a), -e
        elif e == 0:
            return self.one
        return FieldElement(self, self._pow(a.coeffs, e))

    def inv(self, x) -> "FieldElement":
        a = self.element(x)
        if a.is_zero:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(self, self._pow(a.coeffs, self.q - 2)) if self.q > 2 else a

    def trace(self, x) -> int:
        """Absolute trace sum_{k<m} x^{p^k}, returned as an integer in [0, p)."""
        a = self.element(x)
        total = self.zero
        power = a
        for _ in range(self.m):
            total = self.add(total, power)
            power = FieldElement(self, self._pow(power.coeffs, self.p))
        if any(total.coeffs[1:]):
            raise AssertionError(f"trace of {a} left F_p")
        return total.coeffs[0]

    def discrete_log(self, x) -> int:
        """The l in [0, q-1) with generator**l == x."""
        a = self.element(x)
        if a.is_zero:
            raise ValueError("discrete log of 0 is undefined")
        if self.q <= LOG_TABLE_LIMIT:
            return int(self.log_table[a.index])
        return self._bsgs(a.coeffs)

    def _bsgs(self, target: tuple[int, ...]) -> int:
        n = self.q - 1
        step = math.isqrt(n - 1) + 1
        baby = {}
        cur = self.one.coeffs
        for j in range(step):
            baby.setdefault(cur, j)
            cur = self._mul(cur, self._gen)
        giant = self._pow(self._pow(self._gen, step), n - 1)  # g^{-step}
        gamma = target
        for i in range(step + 1):
            if gamma in baby:
                return (i * step + baby[gamma]) % n
            gamma = self._mul(gamma, giant)
        raise AssertionError("unreachable: generator spans F_q^*")

    # -- vectorized index arithmetic -----------------------------------------------

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    def digits(self, idx) -> np.ndarray:
        """Coefficient digits of canonical indices, shape ``idx.shape + (m,)``."""
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._weights) % self.p

    def from_digits(self, digits) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) % self.p) @ self._weights

    def add_idx(self, a, b) -> np.ndarray:
        return self.from_digits(self.digits(a) + self.digits(b))

    def sub_idx(self, a, b) -> np.ndarray:
        return self.from_digits(self.digits(a) - self.digits(b))

    def neg_idx(self, a) -> np.ndarray:
        return self.from_digits(-self.digits(a))

    @cached_property
    def exp_table(self) -> np.ndarray:
        """Canonical indices of generator**k for k in [0, q-1)."""
        p, m = self.p, self.m
        # column j of mult holds the coefficients of generator * t^j
        mult = np.zeros((m, m), dtype=np.int64)
        basis = [0] * m
        for j in range(m):
            basis[j] = 1
            mult[:, j] = self._mul(self._gen, tuple(basis))
            basis[j] = 0
        cols = np.zeros((m, 1), dtype=np.int64)
        cols[0, 0] = 1
        step = mult
        while cols.shape[1] < self.q - 1:
            cols = np.hstack([cols, (step @ cols) % p])
            step = (step @ step) % p
        return self._weights @ cols[:, : self.q - 1]

    @cached_property
    def log_table(self) -> np.ndarray:
        """Discrete log of every canonical index; -1 marks zero."""
        table = np.full(self.q, -1, dtype=np.int64)
        table[self.exp_table] = np.arange(self.q - 1, dtype=np.int64)
        return table

    def mul_idx(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log_table[a], self.log_table[b]
        prod = self.exp_table[(la + lb) % (self.q - 1)]
        return np.where((la < 0) | (lb < 0), 0, prod)

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Trace of every element, evaluated as the literal Frobenius sum."""
        n = self.q - 1
        logs = self.log_table[1:]
        acc = np.zeros((n, self.m), dtype=np.int64)
        for k in range(self.m):
            acc += self.digits(self.exp_table[(logs * pow(self.p, k, n)) % n])
        acc %= self.p
        if acc[:, 1:].any():
            raise AssertionError("trace table left F_p")
        return np.concatenate([[0], acc[:, 0]])

    @cached_property
    def trace_form(self) -> np.ndarray:
        """Matrix B with B[i, j] = Tr(t^(i+j)), so Tr(xy) = digits(x) B digits(y)."""
        t_pows = [self.element([0] * k + [1]) for k in range(2 * self.m - 1)]
        tr = [self.trace(x) for x in t_pows]
        return np.array([[tr[i + j] for j in range(self.m)] for i in range(self.m)], dtype=np.int64)

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "kind": "field",
            "p": self.p,
            "m": self.m,
            "modulusPoly": list(self.modulus_poly),
            "generator": list(self._gen),
        }

    @classmethod
    def from_json(cls, obj: dict, cap: int = FIELD_CAP) -> "FiniteField":
        return cls(obj["p"], obj["m"], modulus=obj.get("modulusPoly"), generator=obj.get("generator"), cap=cap)


@dataclass(frozen=True)
class FieldElement:
    field: FiniteField
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        return self.field.add(self, other)

    def __radd__(self, other):
        return self.field.add(other, self)

    def __sub__(self, other):
        return self.field.sub(self, other)

    def __rsub__(self, other):
        return self.field.sub(other, self)

    def __neg__(self):
        return self.field.neg(self)

    def __mul__(self, other):
        return self.field.mul(self, other)

    def __rmul__(self, other):
        return self.field.mul(other, self)

    def __truediv__(self, other):
        return self.field.mul(self, self.field.inv(other))

    def __pow__(self, e: int):
        return self.field.pow(self, e)

    def inverse(self) -> "FieldElement":
        return self.field.inv(self)

    def trace(self) -> int:
        return self.field.trace(self)

    def __repr__(self):
        terms = [
            f"{c}" if i == 0 else (f"t^{i}" if c == 1 else f"{c}t^{i}") if i > 1 else ("t" if c == 1 else f"{c}t")
            for i, c in enumerate(self.coeffs)
            if c
        ]
        return f"F{self.field.q}({' + '.join(terms) or '0'})"


class ResidueRing:
    """Z/n for odd n >= 3, with its prime-power split and unit-group generators.

    The unit generator for each factor p^e is the least integer >= 2 whose
    multiplicative order modulo p^e is (p - 1) p^(e - 1).
    """

    def __init__(self, n: int, unit_generators: Sequence[int] | None = None, cap: int = RING_CAP):
        n = int(n)
        if n < 3:
            raise DomainError(f"n={n} must be at least 3")
        if n % 2 == 0:
            raise EvenModulusError(f"n={n} is even; (Z/2^m)^* is not cyclic")
        if n > cap:
            raise CapExceeded(f"n={n} exceeds cap {cap}")
        self.n = n
        self.factors: tuple[tuple[int, int], ...] = tuple(factorize(n))
        self.moduli: tuple[int, ...] = tuple(p**e for p, e in self.factors)
        self.unit_orders: tuple[int, ...] = tuple((p - 1) * p ** (e - 1) for p, e in self.factors)
        if unit_generators is None:
            unit_generators = tuple(self._find_generator(r) for r in range(len(self.factors)))
        else:
            unit_generators = tuple(int(g) for g in unit_generators)
            if len(unit_generators) != len(self.factors) or not all(
                self._is_generator(r, g) for r, g in enumerate(unit_generators)
            ):
                raise DomainError(f"{unit_generators} are not unit generators for Z/{n}")
        self.unit_generators: tuple[int, ...] = unit_generators
        # CRT idempotents: e_r = 1 mod N_r, 0 mod N_s for s != r
        self._idempotents = tuple((n // N) * pow(n // N, -1, N) % n for N in self.moduli)

    def _is_generator(self, r: int, g: int) -> bool:
        N, order = self.moduli[r], self.unit_orders[r]
        if math.gcd(g, N) != 1 or pow(g, order, N) != 1:
            return False
        return all(pow(g, order // q, N) != 1 for q in prime_divisors(order)) if order > 1 else True

    def _find_generator(self, r: int) -> int:
        for g in range(2, self.moduli[r] + 1):
            if self._is_generator(r, g):
                return g
        raise AssertionError("unreachable: (Z/p^e)^* is cyclic for odd p")

    def _key(self):
        return (self.n, self.unit_generators)

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and self._key() == other._key()

    def __hash__(self):
        return hash(("Z",) + self._key())

    def __repr__(self):
        return f"ResidueRing(n={self.n})"

    @property
    def size(self) -> int:
        return self.n

    def crt_split(self, x: int) -> tuple[int, ...]:
        if not 0 <= x < self.n:
            raise ValueError(f"{x} is not a residue mod {self.n}")
        return tuple(x % N for N in self.moduli)

    def crt_combine(self, parts: Sequence[int]) -> int:
        if len(parts) != len(self.moduli) or any(not 0 <= a < N for a, N in zip(parts, self.moduli)):
            raise ValueError(f"{tuple(parts)} out of range for moduli {self.moduli}")
        return sum(a * e for a, e in zip(parts, self._idempotents)) % self.n

    def is_unit(self, x: int) -> bool:
        return math.gcd(x, self.n) == 1

    @cached_property
    def log_tables(self) -> tuple[np.ndarray, ...]:
        """Per factor, the discrete log of each residue mod p^e base its generator (-1 off units)."""
        tables = []
        for N, order, g in zip(self.moduli, self.unit_orders, self.unit_generators):
            table = np.full(N, -1, dtype=np.int64)
            x = 1
            for k in range(order):
                table[x] = k
                x = x * g % N
            tables.append(table)
        return tuple(tables)

    def discrete_logs(self, x: int) -> tuple[int, ...] | None:
        """Per-factor logs of x, or None when x is not a unit."""
        logs = tuple(int(t[x % N]) for t, N in zip(self.log_tables, self.moduli))
        return None if min(logs) < 0 else logs

    def add_idx(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.n

    def sub_idx(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % self.n

    def neg_idx(self, a) -> np.ndarray:
        return (-np.asarray(a, dtype=np.int64)) % self.n

    def to_json(self) -> dict:
        return {
            "kind": "ring",
            "n": self.n,
            "factors": [list(f) for f in self.factors],
            "unitGenerators": list(self.unit_generators),
        }

    @classmethod
    def from_json(cls, obj: dict, cap: int = RING_CAP) -> "ResidueRing":
        ring = cls(obj["n"], unit_generators=obj.get("unitGenerators"), cap=cap)
        if "factors" in obj and [tuple(f) for f in obj["factors"]] != list(ring.factors):
            raise DomainError(f"factors {obj['factors']} do not match n={ring.n}")
        return ring


Domain = FiniteField | ResidueRing


def domain_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "field":
        return FiniteField.from_json(obj)
    if kind == "ring":
        return ResidueRing.from_json(obj)
    raise DomainError(f"unknown domain kind {kind!r}")
