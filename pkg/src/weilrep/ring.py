"""The involutive ring A_n = K[x]/(x^n) with (sum a_i x^i)* = sum (-1)^i conj(a_i) x^i."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .fields import FieldConfig, KElem

MAX_TABLE_SIZE = 729


class NonUnitError(ValueError):
    pass


class ResourceGuardError(RuntimeError):
    """A requested computation exceeds the configured size budget."""


@dataclass(frozen=True, eq=False)
class RingElem:
    ring: RingConfig
    coeffs: tuple[KElem, ...]

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElem) and self.coeffs == other.coeffs and self.ring == other.ring

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: RingElem) -> RingElem:
        return self.ring.add(self, other)

    def __sub__(self, other: RingElem) -> RingElem:
        return self.ring.sub(self, other)

    def __neg__(self) -> RingElem:
        return self.ring.neg(self)

    def __mul__(self, other: RingElem) -> RingElem:
        return self.ring.mul(self, other)

    def star(self) -> RingElem:
        return self.ring.involution(self)

    def inverse(self) -> RingElem:
        return self.ring.inv(self)

    def is_unit(self) -> bool:
        return self.coeffs[0] != (0, 0)

    def is_zero(self) -> bool:
        return all(c == (0, 0) for c in self.coeffs)

    def is_symmetric(self) -> bool:
        return self.star() == self

    def is_antisymmetric(self) -> bool:
        return self.star() == -self

    @property
    def index(self) -> int:
        return self.ring.index_of(self)

    def __pow__(self, e: int) -> RingElem:
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def to_json(self) -> dict:
        return {"coeffs": [self.ring.field.K_to_json(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        return f"RingElem({self.ring.format(self)!r})"

    def __str__(self) -> str:
        return self.ring.format(self)


class RingConfig:
    """A_n over a given field tower, with bit-exact indexing of its q^(2n) elements."""

    def __init__(self, field: FieldConfig, n: int):
        if n < 1:
            raise ValueError(f"n = {n} must be positive")
        self.field = field
        self.n = n
        self.q = field.q
        self.size = self.q ** (2 * n)

    def __repr__(self) -> str:
        return f"RingConfig({self.field!r}, n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RingConfig) and other.n == self.n and other.field == self.field

    def __hash__(self) -> int:
        return hash((self.field, self.n))

    # -- construction ---------------------------------------------------

    def elem(self, coeffs: Sequence[KElem]) -> RingElem:
        coeffs = tuple((int(a), int(b)) for a, b in coeffs)
        if len(coeffs) > self.n:
            if any(c != (0, 0) for c in coeffs[self.n:]):
                raise ValueError("coefficients beyond x^(n-1) must vanish")
            coeffs = coeffs[: self.n]
        coeffs = coeffs + ((0, 0),) * (self.n - len(coeffs))
        for a, b in coeffs:
            if not (0 <= a < self.q and 0 <= b < self.q):
                raise ValueError(f"coefficient {(a, b)} outside k x k")
        return RingElem(self, coeffs)

    def const(self, z: KElem) -> RingElem:
        return self.elem([z])

    def scalar(self, a: int) -> RingElem:
        """The element a of k, viewed in A_n."""
        return self.elem([(a, 0)])

    @cached_property
    def zero(self) -> RingElem:
        return self.elem([])

    @cached_property
    def one(self) -> RingElem:
        return self.elem([(1, 0)])

    @cached_property
    def Delta(self) -> RingElem:
        return self.elem([(0, 1)])

    @cached_property
    def half(self) -> RingElem:
        return self.scalar(self.field.half)

    def monomial(self, z: KElem, i: int) -> RingElem:
        if i >= self.n:
            return self.zero
        return self.elem([(0, 0)] * i + [z])

    @cached_property
    def x(self) -> RingElem:
        return self.monomial((1, 0), 1)

    # -- arithmetic -----------------------------------------------------

    def add(self, a: RingElem, b: RingElem) -> RingElem:
        F = self.field
        return RingElem(self, tuple(F.K_add(u, v) for u, v in zip(a.coeffs, b.coeffs)))

    def sub(self, a: RingElem, b: RingElem) -> RingElem:
        F = self.field
        return RingElem(self, tuple(F.K_sub(u, v) for u, v in zip(a.coeffs, b.coeffs)))

    def neg(self, a: RingElem) -> RingElem:
        F = self.field
        return RingElem(self, tuple(F.K_neg(u) for u in a.coeffs))

    def mul(self, a: RingElem, b: RingElem) -> RingElem:
        F, n = self.field, self.n
        out = [(0, 0)] * n
        ac, bc = a.coeffs, b.coeffs
        for i in range(n):
            if ac[i] == (0, 0):
                continue
            for j in range(n - i):
                if bc[j] != (0, 0):
                    out[i + j] = F.K_add(out[i + j], F.K_mul(ac[i], bc[j]))
        return RingElem(self, tuple(out))

    def involution(self, a: RingElem) -> RingElem:
        F = self.field
        return RingElem(
            self,
            tuple(F.K_conj(c) if i % 2 == 0 else F.K_neg(F.K_conj(c)) for i, c in enumerate(a.coeffs)),
        )

    def inv(self, a: RingElem) -> RingElem:
        """Inverse computed degree by degree from the constant term."""
        F = self.field
        if not a.is_unit():
            raise NonUnitError(f"{self.format(a)} is not invertible")
        a0inv = F.K_inv(a.coeffs[0])
        b = [a0inv]
        for i in range(1, self.n):
            s = (0, 0)
            for j in range(1, i + 1):
                s = F.K_add(s, F.K_mul(a.coeffs[j], b[i - j]))
            b.append(F.K_neg(F.K_mul(a0inv, s)))
        return RingElem(self, tuple(b))

    # -- predicates and enumeration ---------------------------------------

    def is_symmetric(self, a: RingElem) -> bool:
        return a.is_symmetric()

    def is_antisymmetric(self, a: RingElem) -> bool:
        return a.is_antisymmetric()

    def index_of(self, a: RingElem) -> int:
        q = self.q
        idx = 0
        for re_, im in reversed(a.coeffs):
            idx = idx * q * q + re_ + q * im
        return idx

    def elem_at(self, i: int) -> RingElem:
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} outside [0, {self.size})")
        q = self.q
        coeffs = []
        for _ in range(self.n):
            i, z = divmod(i, q * q)
            coeffs.append((z % q, z // q))
        return RingElem(self, tuple(coeffs))

    def __iter__(self) -> Iterator[RingElem]:
        return (self.elem_at(i) for i in range(self.size))

    def enumerate(self, kind: str = "all") -> Iterator[RingElem]:
        """Elements of the requested kind, in index order."""
        masks = {
            "all": None,
            "units": self.unit_mask,
            "sym": self.sym_mask,
            "asym": self.asym_mask,
            "sym_units": self.sym_mask & self.unit_mask,
            "asym_units": self.asym_mask & self.unit_mask,
        }
        if kind not in masks:
            raise ValueError(f"unknown kind {kind!r}")
        mask = masks[kind]
        if mask is None:
            return iter(self)
        return (self.elem_at(int(i)) for i in np.flatnonzero(mask))

    def sym_elements(self) -> Iterator[RingElem]:
        """Symmetric elements by their parametrization (no full scan): a_2i in k, a_2i+1 in Dk."""
        q, n = self.q, self.n
        for i in range(q**n):
            coeffs = []
            for deg in range(n):
                i, v = divmod(i, q)
                coeffs.append((v, 0) if deg % 2 == 0 else (0, v))
            yield RingElem(self, tuple(coeffs))

    def asym_elements(self) -> Iterator[RingElem]:
        q, n = self.q, self.n
        for i in range(q**n):
            coeffs = []
            for deg in range(n):
                i, v = divmod(i, q)
                coeffs.append((0, v) if deg % 2 == 0 else (v, 0))
            yield RingElem(self, tuple(coeffs))

    def unit_count(self) -> int:
        q, n = self.q, self.n
        return (q * q - 1) * q ** (2 * (n - 1))

    # -- vectorized tables ------------------------------------------------

    def _guard(self, limit: int, what: str) -> None:
        if self.size > limit:
            raise ResourceGuardError(f"{what} needs |A_n| <= {limit}, got {self.size}")

    @cached_property
    def coeff_array(self) -> np.ndarray:
        """Shape (size, n, 2): coefficient components of every element, in index order."""
        q, n = self.q, self.n
        idx = np.arange(self.size, dtype=np.int64)
        out = np.empty((self.size, n, 2), dtype=np.int64)
        for deg in range(n):
            z = idx % (q * q)
            idx = idx // (q * q)
            out[:, deg, 0] = z % q
            out[:, deg, 1] = z // q
        out.setflags(write=False)
        return out

    def indices_of(self, arr: np.ndarray) -> np.ndarray:
        """Inverse of coeff_array for an array of shape (..., n, 2)."""
        q = self.q
        z = arr[..., 0] + q * arr[..., 1]
        weights = (q * q) ** np.arange(self.n, dtype=np.int64)
        return z @ weights

    def vec_mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Elementwise ring product of broadcastable (..., n, 2) coefficient arrays."""
        F = self.field
        M, Ad = F.mul_table, F.add_table
        n = self.n
        X, Y = np.broadcast_arrays(X, Y)
        out = np.zeros(X.shape, dtype=np.int64)
        dsq = F.delta_sq
        for i in range(n):
            a, b = X[..., i, 0], X[..., i, 1]
            for j in range(n - i):
                c, d = Y[..., j, 0], Y[..., j, 1]
                re_ = Ad[M[a, c], M[dsq, M[b, d]]]
                im = Ad[M[a, d], M[b, c]]
                out[..., i + j, 0] = Ad[out[..., i + j, 0], re_]
                out[..., i + j, 1] = Ad[out[..., i + j, 1], im]
        return out

    def vec_star(self, X: np.ndarray) -> np.ndarray:
        neg = self.field.neg_table
        out = np.array(X, dtype=np.int64, copy=True)
        out[..., 1] = neg[out[..., 1]]
        out[..., 1::2, :] = neg[out[..., 1::2, :]]
        return out

    def vec_neg(self, X: np.ndarray) -> np.ndarray:
        return self.field.neg_table[X]

    @cached_property
    def neg_index(self) -> np.ndarray:
        return self.indices_of(self.vec_neg(self.coeff_array))

    @cached_property
    def star_index(self) -> np.ndarray:
        return self.indices_of(self.vec_star(self.coeff_array))

    @cached_property
    def unit_mask(self) -> np.ndarray:
        c0 = self.coeff_array[:, 0, :]
        return (c0[:, 0] != 0) | (c0[:, 1] != 0)

    @cached_property
    def sym_mask(self) -> np.ndarray:
        return self.star_index == np.arange(self.size)

    @cached_property
    def asym_mask(self) -> np.ndarray:
        return self.star_index == self.neg_index

    @cached_property
    def add_table(self) -> np.ndarray:
        self._guard(MAX_TABLE_SIZE, "the addition table")
        C = self.coeff_array
        S = self.field.add_table[C[:, None], C[None, :]]
        return self.indices_of(S)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._guard(MAX_TABLE_SIZE, "the multiplication table")
        C = self.coeff_array
        return self.indices_of(self.vec_mul(C[:, None], C[None, :]))

    def mul_by(self, a: RingElem) -> np.ndarray:
        """Index map b -> index_of(b*a) over all b, without the full table."""
        A = np.array(a.coeffs, dtype=np.int64)
        return self.indices_of(self.vec_mul(self.coeff_array, A))

    # -- text and JSON ----------------------------------------------------

    def format(self, a: RingElem) -> str:
        F = self.field
        terms = []

        def kstr(v: int) -> str:
            return str(v) if F.t == 1 else "[" + ",".join(map(str, F.digits(v))) + "]"

        for i, (re_, im) in enumerate(a.coeffs):
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            parts = []
            if re_:
                parts.append(kstr(re_))
            if im:
                parts.append("D" if im == 1 else f"{kstr(im)}*D")
            if not parts:
                continue
            coef = parts[0] if len(parts) == 1 else "(" + "+".join(parts) + ")"
            if not mono:
                terms.append(coef)
            elif coef == "1":
                terms.append(mono)
            else:
                terms.append(f"{coef}*{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> RingElem:
        """Parse polynomial text such as "1+2*D*x+x^2" or "[1,2]*x" (D stands for Delta)."""
        F = self.field
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty element text")
        terms = _split_top(s, "+-", keep=True)
        total = self.zero
        for term in terms:
            sign = 1
            while term and term[0] in "+-":
                if term[0] == "-":
                    sign = -sign
                term = term[1:]
            z: KElem = (1, 0)
            deg = 0
            for factor in _split_top(term, "*"):
                if factor.startswith("(") and factor.endswith(")"):
                    inner = self.parse(factor[1:-1])
                    if any(c != (0, 0) for c in inner.coeffs[1:]):
                        raise ValueError(f"parenthesized factor {factor!r} must be a constant")
                    z = F.K_mul(z, inner.coeffs[0])
                elif re.fullmatch(r"\d+", factor):
                    z = F.K_mul(z, (F.from_int(int(factor)), 0))
                elif re.fullmatch(r"\[[\d,]+\]", factor):
                    z = F.K_mul(z, (F.from_digits([int(d) for d in factor[1:-1].split(",")]), 0))
                elif factor == "D":
                    z = F.K_mul(z, (0, 1))
                elif m := re.fullmatch(r"x(?:\^(\d+))?", factor):
                    deg += int(m.group(1) or 1)
                else:
                    raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            if sign < 0:
                z = F.K_neg(z)
            total = total + self.monomial(z, deg)
        return total

    def from_json(self, obj) -> RingElem:
        if isinstance(obj, str):
            return self.parse(obj)
        coeffs = obj["coeffs"] if isinstance(obj, dict) else obj
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return RingElem(self, tuple(self.field.K_from_json(c) for c in coeffs))


def _split_top(s: str, seps: str, keep: bool = False) -> list[str]:
    """Split s at separator characters outside brackets and parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch in seps and depth == 0 and (i > start or not keep):
            parts.append(s[start:i])
            start = i if keep else i + 1
    parts.append(s[start:])
    return parts
