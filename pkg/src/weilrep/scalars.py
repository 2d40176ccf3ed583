"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(deg-1) modulo the
m-th cyclotomic polynomial, so two values are equal exactly when their
coefficient tuples agree.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


class ConductorMismatch(ValueError):
    """Raised when values from different cyclotomic fields are combined."""


def _poly_divmod(num: list[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    # integer polynomials, low degree first; den monic
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        coef = num[i]
        if coef:
            quot[i - dd] = coef
            for j, c in enumerate(den):
                num[i - dd + j] -= coef * c
    rem = num[:dd] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError(f"conductor must be positive, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            assert not any(rem)
    return tuple(poly)


class CycloContext:
    """Read-only data for Q(zeta_m): Phi_m and reduction tables."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError(f"conductor must be positive, got {m}")
        self.m = m
        self.phi = cyclotomic_polynomial(m)
        self.deg = len(self.phi) - 1
        # x^j mod Phi_m for every j that a product of two reduced values can reach
        span = max(m, 2 * self.deg - 1)
        powers = np.zeros((span, self.deg), dtype=np.int64)
        cur = [1] + [0] * (self.deg - 1)
        for j in range(span):
            powers[j] = cur
            # multiply by x and reduce
            top = cur[-1]
            cur = [0] + cur[:-1]
            for i in range(self.deg):
                cur[i] -= top * self.phi[i]
        self.powers = powers
        self.powers.setflags(write=False)
        # roots[e] = canonical coefficients of zeta^e
        self.roots = powers[:m].copy()
        self.roots.setflags(write=False)
        # shifts[e] is the matrix of multiplication by zeta^e on coefficient vectors
        shifts = np.zeros((m, self.deg, self.deg), dtype=np.int64)
        for e in range(m):
            for k in range(self.deg):
                shifts[e, :, k] = powers[(e + k) % m]
        self.shifts = shifts
        self.shifts.setflags(write=False)

    def __repr__(self) -> str:
        return f"CycloContext(m={self.m}, deg={self.deg})"

    def zero(self) -> CycloNum:
        return CycloNum(self.m, (Fraction(0),) * self.deg)

    def one(self) -> CycloNum:
        return self.rational(1)

    def rational(self, r: int | Fraction) -> CycloNum:
        return CycloNum(self.m, (Fraction(r),) + (Fraction(0),) * (self.deg - 1))

    def root_of_unity(self, e: int) -> CycloNum:
        return CycloNum(self.m, tuple(Fraction(int(c)) for c in self.roots[e % self.m]))

    def from_exponent_counts(self, counts: Iterable[int]) -> CycloNum:
        """Sum_e counts[e] * zeta^e."""
        vec = np.asarray(list(counts), dtype=object) @ self.roots.astype(object)
        return CycloNum(self.m, tuple(Fraction(int(c)) for c in vec))

    def reduce(self, poly: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        """Reduce an arbitrary polynomial in zeta to canonical coefficients."""
        out = [Fraction(0)] * self.deg
        for j, c in enumerate(poly):
            if c:
                row = self.powers[j] if j < len(self.powers) else self.roots[j % self.m]
                for i in range(self.deg):
                    if row[i]:
                        out[i] += c * int(row[i])
        return tuple(out)


@lru_cache(maxsize=None)
def cyclo_context(m: int) -> CycloContext:
    return CycloContext(m)


def root_of_unity(ctx: CycloContext | int, e: int) -> CycloNum:
    if isinstance(ctx, int):
        ctx = cyclo_context(ctx)
    return ctx.root_of_unity(e)


@dataclass(frozen=True)
class CycloNum:
    """An element of Q(zeta_m) in canonical power-basis form."""

    m: int
    coeffs: tuple[Fraction, ...]

    @property
    def ctx(self) -> CycloContext:
        return cyclo_context(self.m)

    def _coerce(self, other) -> CycloNum:
        if isinstance(other, CycloNum):
            if other.m != self.m:
                raise ConductorMismatch(f"conductors {self.m} and {other.m} differ")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.rational(other)
        return NotImplemented

    def __add__(self, other) -> CycloNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNum(self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycloNum:
        return CycloNum(self.m, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> CycloNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> CycloNum:
        return (-self) + other

    def __mul__(self, other) -> CycloNum:
        if isinstance(other, (int, Fraction)):
            return CycloNum(self.m, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        deg = len(self.coeffs)
        conv = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
        return CycloNum(self.m, self.ctx.reduce(conv))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if not isinstance(other, CycloNum):
            return NotImplemented
        if other.m != self.m:
            raise ConductorMismatch(f"conductors {self.m} and {other.m} differ")
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.m, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def inverse(self) -> CycloNum:
        """Field inverse, by solving the multiplication-matrix system over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        deg = len(self.coeffs)
        ctx = self.ctx
        # column k of M = self * zeta^k
        cols = []
        for k in range(deg):
            basis = [Fraction(0)] * deg
            basis[k] = Fraction(1)
            cols.append((self * CycloNum(self.m, tuple(basis))).coeffs)
        mat = [[cols[k][i] for k in range(deg)] + [Fraction(int(i == 0))] for i in range(deg)]
        for col in range(deg):
            piv = next(r for r in range(col, deg) if mat[r][col] != 0)
            mat[col], mat[piv] = mat[piv], mat[col]
            pv = mat[col][col]
            mat[col] = [x / pv for x in mat[col]]
            for r in range(deg):
                if r != col and mat[r][col] != 0:
                    f = mat[r][col]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
        return CycloNum(ctx.m, tuple(mat[i][deg] for i in range(deg)))

    def __truediv__(self, other) -> CycloNum:
        if isinstance(other, (int, Fraction)):
            return CycloNum(self.m, tuple(a / other for a in self.coeffs))
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int) -> CycloNum:
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> CycloNum:
        """Complex conjugation zeta -> zeta^-1."""
        ctx = self.ctx
        poly = [Fraction(0)] * ctx.m
        for k, c in enumerate(self.coeffs):
            poly[(-k) % ctx.m] += c
        return CycloNum(self.m, ctx.reduce(poly))

    def embed(self, m2: int) -> CycloNum:
        return embed_conductor(self, m2)

    def to_complex(self) -> complex:
        return sum(
            (float(c) * cmath.exp(2j * math.pi * k / self.m) for k, c in enumerate(self.coeffs) if c),
            0j,
        )

    def to_json(self, float_render: bool = False) -> dict:
        out = {"m": self.m, "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]}
        if float_render:
            z = self.to_complex()
            out["float"] = {"re": z.real, "im": z.imag}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> CycloNum:
        m = int(obj["m"])
        coeffs = tuple(Fraction(int(n), int(d)) for n, d in obj["coeffs"])
        if len(coeffs) != cyclo_context(m).deg:
            raise ValueError(f"expected {cyclo_context(m).deg} coefficients for m={m}")
        return cls(m, coeffs)

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = "z" if k == 1 else f"z^{k}"
                terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def embed_conductor(a: CycloNum, m2: int) -> CycloNum:
    """Image of a under zeta_m -> zeta_m2^(m2/m)."""
    if m2 % a.m:
        raise ConductorMismatch(f"{a.m} does not divide {m2}")
    if m2 == a.m:
        return a
    ctx2 = cyclo_context(m2)
    r = m2 // a.m
    poly = [Fraction(0)] * m2
    for k, c in enumerate(a.coeffs):
        poly[(k * r) % m2] += c
    return CycloNum(m2, ctx2.reduce(poly))
