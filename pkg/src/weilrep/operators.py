"""Exact linear operators on C^N with entries in Q(zeta_m).

Two storage forms:

* ``Monomial(perm, exps)`` sends e_j to zeta^exps[j] e_perm[j]; a diagonal
  operator is the case perm = identity.
* ``Dense(num, den)`` stores the matrix as an integer tensor of shape
  (deg, N, N): entry (r, c) is sum_k num[k, r, c] zeta^k / den, in the power
  basis modulo Phi_m.  Stored reduced (gcd of everything is 1, den > 0), so
  equality is a plain array comparison.

Operators act on column vectors; entry (row, col) = (target, source).
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

from .scalars import ConductorMismatch, CycloNum, cyclo_context

_INT64_SAFE = 2**62


def _as_int_array(a: np.ndarray) -> np.ndarray:
    """Downcast an object array of ints to int64 when every entry fits."""
    if a.dtype != object:
        return a
    if a.size == 0:
        return a.astype(np.int64)
    hi = max(abs(int(v)) for v in a.flat)
    return a.astype(np.int64) if hi < _INT64_SAFE else a


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.flat)
    return int(np.abs(a).max())


def _normalize(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    if den < 0:
        num, den = -num, -den
    if num.dtype == object:
        g = reduce(math.gcd, (int(v) for v in num.flat), den)
    else:
        g = math.gcd(int(np.gcd.reduce(num, axis=None)) if num.size else 0, den)
    if g > 1:
        num = num // g
        den //= g
    return _as_int_array(num), den


def _poly_matmul(A: np.ndarray, B: np.ndarray, m: int) -> np.ndarray:
    """Product of (deg, N, K) and (deg, K, L) coefficient tensors in Q(zeta_m)."""
    ctx = cyclo_context(m)
    deg = ctx.deg
    P = ctx.powers[: 2 * deg - 1]
    bound = _absmax(A) * _absmax(B) * A.shape[2] * deg * max(_absmax(P), 1) * (2 * deg - 1)
    if bound >= _INT64_SAFE:
        A, B, P = A.astype(object), B.astype(object), P.astype(object)
    acc = [None] * (2 * deg - 1)
    for i in range(deg):
        for j in range(deg):
            term = A[i] @ B[j]
            acc[i + j] = term if acc[i + j] is None else acc[i + j] + term
    return np.tensordot(P.T, np.stack(acc), axes=(1, 0))


def _shift_columns(T: np.ndarray, exps: np.ndarray, m: int) -> np.ndarray:
    """Multiply column j of a (deg, N, K) tensor by zeta^exps[j]."""
    S = cyclo_context(m).shifts[exps % m]
    if T.dtype == object:
        S = S.astype(object)
    return np.einsum("jlk,krj->lrj", S, T)


def _shift_rows(T: np.ndarray, exps: np.ndarray, m: int) -> np.ndarray:
    S = cyclo_context(m).shifts[exps % m]
    if T.dtype == object:
        S = S.astype(object)
    return np.einsum("rlk,krj->lrj", S, T)


def _field_map(m: int, images: list[int], m2: int) -> np.ndarray:
    """Matrix sending power-basis coefficients in Q(zeta_m) to Q(zeta_m2), zeta^k -> zeta2^images[k]."""
    roots2 = cyclo_context(m2).roots
    return np.stack([roots2[e % m2] for e in images], axis=1)


class Operator:
    dim: int
    m: int

    def __matmul__(self, other: Operator) -> Operator:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch {self.dim} vs {other.dim}")
        if self.m != other.m:
            raise ConductorMismatch(f"conductors {self.m} and {other.m} differ")
        return _product(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        if self.dim != other.dim or self.m != other.m:
            return False
        if isinstance(self, Monomial) and isinstance(other, Monomial):
            return bool(np.array_equal(self.perm, other.perm) and np.array_equal(self.exps, other.exps))
        a, b = self.to_dense(), other.to_dense()
        return a.den == b.den and bool(np.array_equal(a.num, b.num))

    __hash__ = None

    def entry(self, row: int, col: int) -> CycloNum:
        return self.to_dense().entry(row, col)


class Monomial(Operator):
    """e_j -> zeta_m^exps[j] e_perm[j]."""

    def __init__(self, perm, exps, m: int):
        self.perm = np.asarray(perm, dtype=np.int64)
        self.exps = np.asarray(exps, dtype=np.int64) % m
        self.dim = len(self.perm)
        self.m = m
        if self.exps.shape != self.perm.shape:
            raise ValueError("perm and exps must have equal length")

    @classmethod
    def identity(cls, dim: int, m: int) -> Monomial:
        return cls(np.arange(dim), np.zeros(dim, dtype=np.int64), m)

    @classmethod
    def diagonal(cls, exps, m: int) -> Monomial:
        exps = np.asarray(exps, dtype=np.int64)
        return cls(np.arange(len(exps)), exps, m)

    @property
    def form(self) -> str:
        return "diagonal" if np.array_equal(self.perm, np.arange(self.dim)) else "monomial"

    def __repr__(self) -> str:
        return f"Monomial(dim={self.dim}, m={self.m}, form={self.form})"

    def to_dense(self) -> Dense:
        ctx = cyclo_context(self.m)
        num = np.zeros((ctx.deg, self.dim, self.dim), dtype=np.int64)
        num[:, self.perm, np.arange(self.dim)] = ctx.roots[self.exps].T
        return Dense(num, 1, self.m, normalized=True)

    def embed(self, m2: int) -> Monomial:
        if m2 % self.m:
            raise ConductorMismatch(f"{self.m} does not divide {m2}")
        return Monomial(self.perm, self.exps * (m2 // self.m), m2)

    def adjoint(self) -> Monomial:
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.dim)
        exps = np.empty_like(self.exps)
        exps[self.perm] = -self.exps
        return Monomial(inv, exps, self.m)

    def trace(self) -> CycloNum:
        fixed = self.perm == np.arange(self.dim)
        counts = np.bincount(self.exps[fixed], minlength=self.m)
        return cyclo_context(self.m).from_exponent_counts(int(v) for v in counts)

    def to_json(self, float_render: bool = False) -> dict:
        root = cyclo_context(self.m).root_of_unity
        entries = [root(int(e)).to_json(float_render) for e in self.exps]
        if self.form == "diagonal":
            return {"dim": self.dim, "form": "diagonal", "m": self.m, "entries": entries}
        return {"dim": self.dim, "form": "monomial", "m": self.m,
                "targets": self.perm.tolist(), "entries": entries}


class Dense(Operator):
    def __init__(self, num: np.ndarray, den: int, m: int, normalized: bool = False):
        deg = cyclo_context(m).deg
        if num.ndim != 3 or num.shape[0] != deg or num.shape[1] != num.shape[2]:
            raise ValueError(f"expected a ({deg}, N, N) tensor, got {num.shape}")
        if not normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self.dim = num.shape[1]
        self.m = m

    form = "dense"

    def __repr__(self) -> str:
        return f"Dense(dim={self.dim}, m={self.m}, den={self.den})"

    def to_dense(self) -> Dense:
        return self

    def entry(self, row: int, col: int) -> CycloNum:
        from fractions import Fraction

        return CycloNum(self.m, tuple(Fraction(int(v), self.den) for v in self.num[:, row, col]))

    def embed(self, m2: int) -> Dense:
        if m2 % self.m:
            raise ConductorMismatch(f"{self.m} does not divide {m2}")
        if m2 == self.m:
            return self
        r = m2 // self.m
        E = _field_map(self.m, [k * r for k in range(self.num.shape[0])], m2)
        return Dense(np.tensordot(E, self.num, axes=(1, 0)), self.den, m2)

    def adjoint(self) -> Dense:
        """Conjugate transpose (zeta -> zeta^-1 entrywise)."""
        C = _field_map(self.m, [-k for k in range(self.num.shape[0])], self.m)
        if self.num.dtype == object:
            C = C.astype(object)
        conj = np.tensordot(C, self.num, axes=(1, 0))
        return Dense(np.ascontiguousarray(conj.transpose(0, 2, 1)), self.den, self.m)

    def trace(self) -> CycloNum:
        from fractions import Fraction

        diag = np.trace(self.num, axis1=1, axis2=2)
        return CycloNum(self.m, tuple(Fraction(int(v), self.den) for v in diag))

    def to_json(self, float_render: bool = False) -> dict:
        rows = [[self.entry(r, c).to_json(float_render) for c in range(self.dim)] for r in range(self.dim)]
        return {"dim": self.dim, "form": "dense", "m": self.m, "rows": rows}


def _product(A: Operator, B: Operator) -> Operator:
    m = A.m
    if isinstance(A, Monomial) and isinstance(B, Monomial):
        return Monomial(A.perm[B.perm], B.exps + A.exps[B.perm], m)
    if isinstance(A, Dense) and isinstance(B, Monomial):
        # column j of A B is zeta^e_j times column perm[j] of A
        return Dense(_shift_columns(A.num[:, :, B.perm], B.exps, m), A.den, m, normalized=True)
    if isinstance(A, Monomial) and isinstance(B, Dense):
        out = np.empty_like(B.num)
        out[:, A.perm, :] = _shift_rows(B.num, A.exps, m)
        return Dense(out, B.den, m, normalized=True)
    return Dense(_poly_matmul(A.num, B.num, m), A.den * B.den, m)


class FunctionVector:
    """A vector in C^N with entries in Q(zeta_m), stored like a one-column Dense."""

    def __init__(self, num: np.ndarray, den: int, m: int, normalized: bool = False):
        if not normalized:
            num, den = _normalize(num, den)
        self.num = num  # (deg, N)
        self.den = den
        self.m = m
        self.dim = num.shape[1]

    @classmethod
    def basis(cls, dim: int, index: int, m: int) -> FunctionVector:
        num = np.zeros((cyclo_context(m).deg, dim), dtype=np.int64)
        num[0, index] = 1
        return cls(num, 1, m, normalized=True)

    @classmethod
    def constant(cls, dim: int, value: CycloNum) -> FunctionVector:
        den = math.lcm(*(c.denominator for c in value.coeffs))
        col = np.array([int(c * den) for c in value.coeffs], dtype=object)
        return cls(_as_int_array(np.repeat(col[:, None], dim, axis=1)), den, value.m)

    @classmethod
    def from_entries(cls, entries: list[CycloNum]) -> FunctionVector:
        m = entries[0].m
        den = math.lcm(*(c.denominator for e in entries for c in e.coeffs))
        num = np.array([[int(c * den) for c in e.coeffs] for e in entries], dtype=object).T
        return cls(_as_int_array(num), den, m)

    def entries(self) -> list[CycloNum]:
        from fractions import Fraction

        return [CycloNum(self.m, tuple(Fraction(int(v), self.den) for v in col)) for col in self.num.T]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionVector):
            return NotImplemented
        return (self.m == other.m and self.den == other.den
                and bool(np.array_equal(self.num, other.num)))

    __hash__ = None

    def __repr__(self) -> str:
        return f"FunctionVector(dim={self.dim}, m={self.m})"

    def is_zero(self) -> bool:
        return not np.any(self.num)


def apply(op: Operator, v: FunctionVector) -> FunctionVector:
    if op.dim != v.dim:
        raise ValueError(f"dimension mismatch {op.dim} vs {v.dim}")
    if op.m != v.m:
        raise ConductorMismatch(f"conductors {op.m} and {v.m} differ")
    if isinstance(op, Monomial):
        out = np.empty_like(v.num)
        out[:, op.perm] = _shift_rows(v.num[:, :, None], op.exps, op.m)[:, :, 0]
        return FunctionVector(out, v.den, v.m, normalized=True)
    prod = _poly_matmul(op.num, v.num[:, :, None], op.m)[:, :, 0]
    return FunctionVector(prod, op.den * v.den, op.m)
