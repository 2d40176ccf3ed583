"""The field tower F_p < k = F_q < K = k(D) with D^2 = delta.

Elements of k are plain ints in [0, q): the mixed-radix value of their
coordinates in the basis 1, y, ..., y^(t-1), constant digit least
significant.  Elements of K are pairs (re, im) meaning re + im*D.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from .scalars import CycloNum, cyclo_context

KElem = tuple[int, int]

MAX_TABLE_Q = 2187


class FieldConfigError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_rem(num: Sequence[int], den: Sequence[int], p: int) -> list[int]:
    num = [c % p for c in num]
    dd = len(den) - 1
    inv_lead = pow(den[-1], -1, p)
    for i in range(len(num) - 1, dd - 1, -1):
        coef = num[i] * inv_lead % p
        if coef:
            for j, c in enumerate(den):
                num[i - dd + j] = (num[i - dd + j] - coef * c) % p
    return num[:dd]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p by trial division with all monic g, deg g <= deg/2."""
    t = len(poly) - 1
    if t < 1 or poly[-1] % p == 0:
        return False
    for d in range(1, t // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_rem(poly, list(low) + [1], p)):
                return False
    return True


def smallest_irreducible(p: int, t: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree t, low degree first."""
    for low in itertools.product(range(p), repeat=t):
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("unreachable: irreducibles exist in every degree")


class FieldConfig:
    """k = F_p[y]/(modulus) and its quadratic extension K = k(D), D^2 = delta_sq."""

    def __init__(self, p: int, t: int, modulus: Sequence[int], delta_sq: int | None = None):
        self.p = p
        self.t = t
        self.q = p**t
        self.modulus = tuple(int(c) % p for c in modulus)
        if self.q > MAX_TABLE_Q:
            raise FieldConfigError(f"q = {self.q} exceeds the table limit {MAX_TABLE_Q}")
        self._build_tables()
        if delta_sq is None:
            delta_sq = next(a for a in range(1, self.q) if not self.is_square(a))
        self.delta_sq = int(delta_sq)
        if not 0 < self.delta_sq < self.q or self.is_square(self.delta_sq):
            raise FieldConfigError(f"delta_sq = {self.delta_sq} is not a nonsquare of k")
        self.half = self.inv(self.from_int(2))

    def __repr__(self) -> str:
        return f"FieldConfig(p={self.p}, t={self.t}, modulus={self.modulus}, delta_sq={self.delta_sq})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldConfig) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def key(self) -> tuple:
        return (self.p, self.t, self.modulus, self.delta_sq)

    # -- k = F_q ---------------------------------------------------------

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.t)]

    def from_digits(self, digits: Sequence[int]) -> int:
        if len(digits) != self.t:
            raise ValueError(f"expected {self.t} digits, got {len(digits)}")
        return sum((int(d) % self.p) * self.p**i for i, d in enumerate(digits))

    def from_int(self, n: int) -> int:
        """Image of the integer n in k."""
        return n % self.p

    def _build_tables(self) -> None:
        p, t, q = self.p, self.t, self.q
        D = np.array([self.digits(a) for a in range(q)], dtype=np.int64).reshape(q, t)
        weights = p ** np.arange(t, dtype=np.int64)
        self.add_table = ((D[:, None, :] + D[None, :, :]) % p) @ weights
        self.neg_table = ((-D) % p) @ weights
        prod = np.zeros((q, q, 2 * t - 1), dtype=np.int64)
        for i in range(t):
            for j in range(t):
                prod[:, :, i + j] += D[:, None, i] * D[None, :, j]
        for d in range(2 * t - 2, t - 1, -1):
            coef = prod[:, :, d] % p
            for j in range(t):
                prod[:, :, d - t + j] -= coef * self.modulus[j]
        self.mul_table = (prod[:, :, :t] % p) @ weights
        for tab in (self.add_table, self.neg_table, self.mul_table):
            tab.setflags(write=False)
        self._add = self.add_table.tolist()
        self._mul = self.mul_table.tolist()
        self._neg = self.neg_table.tolist()
        inv = [0] * q
        for a in range(1, q):
            row = self._mul[a]
            hits = [b for b in range(1, q) if row[b] == 1]
            if len(hits) != 1:
                raise FieldConfigError(f"modulus {self.modulus} is reducible over F_{p}")
            inv[a] = hits[0]
        self._inv = inv
        # absolute trace k -> F_p, as an int in [0, p)
        trace = []
        for a in range(q):
            s, x = 0, a
            for _ in range(t):
                s = self._add[s][x]
                x = self.pow(x, p)
            assert s < p
            trace.append(s)
        self.trace_table = np.array(trace, dtype=np.int64)
        self._trace = trace

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in k")
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        while e:
            if e & 1:
                result = self._mul[result][a]
            a = self._mul[a][a]
            e >>= 1
        return result

    def trace(self, a: int) -> int:
        return self._trace[a]

    def is_square(self, a: int) -> bool:
        return a == 0 or self.pow(a, (self.q - 1) // 2) == 1

    def k_elements(self) -> range:
        return range(self.q)

    def basis(self, l: int) -> int:
        """The basis element e_l = y^(l-1) of k over F_p, l = 1..t."""
        if not 1 <= l <= self.t:
            raise ValueError(f"basis index {l} out of range 1..{self.t}")
        return self.p ** (l - 1)

    # -- K = k(D) --------------------------------------------------------

    def K_elements(self) -> Iterator[KElem]:
        """All of K in index order (re varies fastest)."""
        for im in range(self.q):
            for re in range(self.q):
                yield (re, im)

    def K_index(self, z: KElem) -> int:
        return z[0] + self.q * z[1]

    def K_add(self, z: KElem, w: KElem) -> KElem:
        return (self._add[z[0]][w[0]], self._add[z[1]][w[1]])

    def K_sub(self, z: KElem, w: KElem) -> KElem:
        return (self.sub(z[0], w[0]), self.sub(z[1], w[1]))

    def K_neg(self, z: KElem) -> KElem:
        return (self._neg[z[0]], self._neg[z[1]])

    def K_mul(self, z: KElem, w: KElem) -> KElem:
        mul, add = self._mul, self._add
        a, b = z
        c, d = w
        re = add[mul[a][c]][mul[self.delta_sq][mul[b][d]]]
        im = add[mul[a][d]][mul[b][c]]
        return (re, im)

    def K_conj(self, z: KElem) -> KElem:
        return (z[0], self._neg[z[1]])

    def K_norm(self, z: KElem) -> int:
        a, b = z
        return self.sub(self._mul[a][a], self._mul[self.delta_sq][self._mul[b][b]])

    def K_inv(self, z: KElem) -> KElem:
        nz = self.K_norm(z)
        if nz == 0:
            raise ZeroDivisionError("inverse of 0 in K")
        c = self.K_conj(z)
        ninv = self._inv[nz]
        return (self._mul[c[0]][ninv], self._mul[c[1]][ninv])

    def K_pow(self, z: KElem, e: int) -> KElem:
        if e < 0:
            return self.K_pow(self.K_inv(z), -e)
        result = (1, 0)
        while e:
            if e & 1:
                result = self.K_mul(result, z)
            z = self.K_mul(z, z)
            e >>= 1
        return result

    @property
    def Delta(self) -> KElem:
        return (0, 1)

    # -- additive character ---------------------------------------------

    def psi0_exp(self, z: KElem) -> int:
        """Exponent e with psi0(z) = zeta_p^e; psi0(a + bD) = zeta_p^Tr(a)."""
        return self._trace[z[0]]

    def psi0(self, z: KElem) -> CycloNum:
        return cyclo_context(self.p).root_of_unity(self.psi0_exp(z))

    def norm_character_sum(self, lam: int) -> CycloNum:
        """Sum over z in K of psi0(N(lam*z)), by direct summation."""
        counts = [0] * self.p
        for z in self.K_elements():
            counts[self.psi0_exp((self.K_norm((self._mul[lam][z[0]], self._mul[lam][z[1]])), 0))] += 1
        return cyclo_context(self.p).from_exponent_counts(counts)

    # -- serialization --------------------------------------------------

    def k_to_json(self, a: int) -> list[int]:
        return self.digits(a)

    def k_from_json(self, obj) -> int:
        if isinstance(obj, int):
            return self.from_int(obj)
        return self.from_digits(obj)

    def K_to_json(self, z: KElem) -> dict:
        return {"re": self.digits(z[0]), "im": self.digits(z[1])}

    def K_from_json(self, obj: dict) -> KElem:
        return (self.k_from_json(obj["re"]), self.k_from_json(obj["im"]))

    def to_json(self) -> dict:
        return {"p": self.p, "t": self.t, "q": self.q, "modulus": list(self.modulus),
                "delta_sq": self.digits(self.delta_sq)}


def field_config(
    p: int,
    t: int = 1,
    modulus: Sequence[int] | None = None,
    delta_sq: int | Sequence[int] | None = None,
) -> FieldConfig:
    """Build a field tower; omitted choices default to the least admissible one."""
    if p % 2 == 0 or not is_prime(p):
        raise FieldConfigError(f"p = {p} must be an odd prime")
    if t < 1:
        raise FieldConfigError(f"t = {t} must be positive")
    if modulus is None:
        modulus = smallest_irreducible(p, t)
    else:
        modulus = [int(c) % p for c in modulus]
        if len(modulus) == t:
            modulus = modulus + [1]
        if len(modulus) != t + 1 or modulus[-1] != 1:
            raise FieldConfigError(f"modulus must be monic of degree {t}")
        if not is_irreducible(modulus, p):
            raise FieldConfigError(f"modulus {modulus} is reducible over F_{p}")
    if delta_sq is not None and not isinstance(delta_sq, int):
        delta_sq = sum((int(d) % p) * p**i for i, d in enumerate(delta_sq))
    return FieldConfig(p, t, modulus, delta_sq)
