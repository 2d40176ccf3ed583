"""The unitary group U = {a in A_n : a a* = 1} and its cyclic decomposition.

U splits as the norm-one circle of K (constants, cyclic of order q+1)
times U0 = {u in U : u_0 = 1}.  An element of U0 is determined by one free
k-component per degree: the real part in odd degrees and the D-part in
even degrees, the other component being forced by u u* = 1.  Those free
components are the normal-form parameters lambda_1..lambda_(n-1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .fields import KElem
from .ring import ResourceGuardError, RingConfig, RingElem
from .scalars import CycloNum, cyclo_context
from .weil_data import WeilDatum

ENUMERATE_LIMIT = 10**5
EXPAND_LIMIT = 10**4


class NotUnitaryError(ValueError):
    pass


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class CyclicFactor:
    generator: RingElem
    order: int
    label: tuple  # ("Circle",) or ("H", i, l) or ("Generic", k)

    def label_str(self) -> str:
        if self.label[0] == "H":
            return f"H({self.label[1]},{self.label[2]})"
        if self.label[0] == "Generic":
            return f"Generic({self.label[1]})"
        return "Circle"

    def to_json(self) -> dict:
        return {"label": self.label_str(), "order": self.order, "generator": self.generator.to_json()}


@dataclass(frozen=True)
class UCharacter:
    exponents: tuple[int, ...]

    def to_json(self) -> list[int]:
        return list(self.exponents)


def is_unitary(a: RingElem) -> bool:
    return a * a.star() == a.ring.one


def multiplicative_order(a: RingElem, limit: int | None = None) -> int:
    one = a.ring.one
    x, k = a, 1
    while x != one:
        x = x * a
        k += 1
        if limit is not None and k > limit:
            raise ValueError(f"{a} has order above {limit}")
    return k


def _free_solve(ring: RingConfig, target: RingElem, free: Sequence[int]) -> RingElem:
    """The b with b_0 = 1 and b b* = target, given target_0 = 1 and the free components.

    In degree k the equation reads b_k + (-1)^k conj(b_k) = rhs_k, which fixes
    the D-part of b_k for odd k and the real part for even k; the other part is
    taken from free[k-1].
    """
    F = ring.field
    coeffs: list[KElem] = [(1, 0)]
    for k in range(1, ring.n):
        rest = (0, 0)
        for j in range(1, k):
            term = F.K_mul(coeffs[j], F.K_conj(coeffs[k - j]))
            if (k - j) % 2:
                term = F.K_neg(term)
            rest = F.K_add(rest, term)
        rhs = F.K_sub(target.coeffs[k], rest)
        fixed = F.mul(F.half, rhs[1] if k % 2 else rhs[0])
        coeffs.append((free[k - 1], fixed) if k % 2 else (fixed, free[k - 1]))
    return ring.elem(coeffs)


def free_parameters(a: RingElem) -> list[int]:
    """The free k-component of each degree 1..n-1 (real part if odd, D-part if even)."""
    return [c[0] if k % 2 else c[1] for k, c in enumerate(a.coeffs) if k > 0]


class UnitaryGroup:
    """U for a fixed ring, with its decomposition and characters."""

    def __init__(self, ring: RingConfig, force: bool = False):
        self.ring = ring
        self.field = ring.field
        self.p = ring.field.p
        self.force = force

    def __repr__(self) -> str:
        return f"UnitaryGroup({self.ring!r})"

    @property
    def expected_order(self) -> int:
        return (self.ring.q + 1) * self.ring.q ** (self.ring.n - 1)

    # -- enumeration --------------------------------------------------------

    @cached_property
    def indices(self) -> np.ndarray:
        """Ring indices of U in increasing order, by a vectorized scan of A_n."""
        R = self.ring
        if R.size > ENUMERATE_LIMIT and not self.force:
            raise ResourceGuardError(f"enumerating U needs q^(2n) <= {ENUMERATE_LIMIT}, got {R.size}")
        C = R.coeff_array
        prod = R.vec_mul(C, R.vec_star(C))
        one = np.zeros((R.n, 2), dtype=np.int64)
        one[0, 0] = 1
        return np.flatnonzero(np.all(prod == one, axis=(1, 2)))

    def elements(self) -> list[RingElem]:
        return [self.ring.elem_at(int(i)) for i in self.indices]

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, a: RingElem) -> bool:
        return is_unitary(a)

    # -- the circle and U0 ------------------------------------------------

    @cached_property
    def circle_generator(self) -> CyclicFactor:
        """First norm-one constant, in index order, of order q + 1."""
        F, R = self.field, self.ring
        q = R.q
        for z in F.K_elements():
            if F.K_norm(z) != 1:
                continue
            g = R.const(z)
            if multiplicative_order(g, q + 1) == q + 1:
                return CyclicFactor(g, q + 1, ("Circle",))
        raise AssertionError("the norm-one circle is cyclic of order q+1")

    def u0_membership(self, a: RingElem) -> tuple[bool, list[int]]:
        """Whether a unitary a lies in U0, with its normal-form parameters."""
        if not is_unitary(a):
            raise NotUnitaryError(f"{a} is not unitary")
        if a.coeffs[0] != (1, 0):
            return False, []
        return True, free_parameters(a)

    def u0_from_parameters(self, lams: Sequence[int]) -> RingElem:
        if len(lams) != self.ring.n - 1:
            raise ValueError(f"expected {self.ring.n - 1} parameters")
        return _free_solve(self.ring, self.ring.one, lams)

    def h_generator(self, i: int, l: int) -> CyclicFactor:
        """Generator of H_{i,l}: leading term e_l x^i (i odd) or e_l D x^i (i even)."""
        R, p = self.ring, self.p
        if not 1 <= i <= R.n - 1:
            raise ValueError(f"degree i = {i} must lie in 1..{R.n - 1}")
        if i % p == 0:
            raise ValueError(f"degree i = {i} must be coprime to p = {p}")
        free = [0] * (R.n - 1)
        free[i - 1] = self.field.basis(l)
        z = _free_solve(R, R.one, free)
        j = h_order_exponent(i, R.n, p)
        order = multiplicative_order(z, p**j)
        if order != p**j:
            raise DecompositionError(f"H({i},{l}) has order {order}, expected {p**j}")
        return CyclicFactor(z, order, ("H", i, l))

    def h_factors(self) -> list[CyclicFactor]:
        R = self.ring
        return [self.h_generator(i, l) for i in range(1, R.n) if i % self.p for l in range(1, R.field.t + 1)]

    # -- the full decomposition --------------------------------------------

    @cached_property
    def uses_h_basis(self) -> bool:
        return math.gcd(self.ring.n, self.p) == 1

    @cached_property
    def factors(self) -> list[CyclicFactor]:
        circle = self.circle_generator
        if self.uses_h_basis:
            return [circle] + self.h_factors()
        return [circle] + self._generic_u0_factors()

    def cyclic_decomposition(self) -> list[CyclicFactor]:
        return list(self.factors)

    def _generic_u0_factors(self) -> list[CyclicFactor]:
        """Greedy basis of the abelian p-group U0: take an element of largest order
        modulo the span so far whose own order equals that order, until U0 is covered."""
        R = self.ring
        u0 = [u for u in self.elements() if u.coeffs[0] == (1, 0)]
        span = {R.one.coeffs}
        factors = []
        while len(span) < len(u0):
            best, best_ord = None, 1
            for y in u0:
                k, x = 1, y
                while x.coeffs not in span:
                    x = x * y
                    k += 1
                if k > best_ord and multiplicative_order(y) == k:
                    best, best_ord = y, k
            powers = [R.one]
            for _ in range(best_ord - 1):
                powers.append(powers[-1] * best)
            span = {(R.elem(s) * pw).coeffs for s in span for pw in powers}
            factors.append(CyclicFactor(best, best_ord, ("Generic", len(factors) + 1)))
        return factors

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(f.order for f in self.factors))

    @cached_property
    def _log_table(self) -> dict[tuple, tuple[int, ...]]:
        """Map from element coefficients to its exponent tuple against the factors."""
        R = self.ring
        total = math.prod(f.order for f in self.factors)
        if total > EXPAND_LIMIT and not self.force:
            raise ResourceGuardError(f"expanding U needs |U| <= {EXPAND_LIMIT}, got {total}")
        powers = []
        for f in self.factors:
            row = [R.one]
            for _ in range(f.order - 1):
                row.append(row[-1] * f.generator)
            powers.append(row)
        table: dict[tuple, tuple[int, ...]] = {}
        for exps in itertools.product(*(range(f.order) for f in self.factors)):
            x = R.one
            for row, e in zip(powers, exps):
                x = x * row[e]
            table.setdefault(x.coeffs, exps)
        return table

    def discrete_log(self, u: RingElem) -> tuple[int, ...]:
        try:
            return self._log_table[u.coeffs]
        except KeyError:
            raise NotUnitaryError(f"{u} is not in U") from None

    # -- characters ------------------------------------------------------------

    def characters(self) -> list[UCharacter]:
        return [UCharacter(e) for e in itertools.product(*(range(f.order) for f in self.factors))]

    def char_exponent(self, lam: UCharacter, u: RingElem, m: int | None = None) -> int:
        """e with Lambda(u) = zeta_m^e; m defaults to exp(U)."""
        m = m or self.exponent
        if m % self.exponent:
            raise ValueError(f"conductor {m} is not a multiple of exp(U) = {self.exponent}")
        exps = self.discrete_log(u)
        return sum(l * e * (m // f.order) for l, e, f in zip(lam.exponents, exps, self.factors)) % m

    def char_value(self, lam: UCharacter, u: RingElem, m: int | None = None) -> CycloNum:
        m = m or self.exponent
        return cyclo_context(m).root_of_unity(self.char_exponent(lam, u, m))

    # -- verification ------------------------------------------------------------

    def verify(self, datum: WeilDatum | None = None) -> list[dict]:
        R, p = self.ring, self.p
        report = []
        elems = self.indices
        report.append({"check": "order", "passed": len(elems) == self.expected_order,
                       "value": int(len(elems)), "expected": self.expected_order})

        table = self._log_table
        bij = len(table) == len(elems) and set(table) == {R.elem_at(int(i)).coeffs for i in elems}
        report.append({"check": "reconstruction_bijective", "passed": bool(bij),
                       "product_of_orders": math.prod(f.order for f in self.factors)})

        subgroups = []
        for f in self.factors:
            s, x = set(), R.one
            for _ in range(f.order):
                s.add(x.coeffs)
                x = x * f.generator
            subgroups.append(s)
        clash = next(((a, b) for a, b in itertools.combinations(range(len(subgroups)), 2)
                      if len(subgroups[a] & subgroups[b]) != 1), None)
        report.append({"check": "pairwise_trivial_intersections", "passed": clash is None,
                       "counterexample": None if clash is None else [self.factors[k].label_str() for k in clash]})

        if self.uses_h_basis:
            bad = []
            for f in self.factors[1:]:
                _, i, _ = f.label
                j = h_order_exponent(i, R.n, p)
                in_interval = R.n // p**j < i <= R.n // p ** (j - 1)
                if f.order != p**j or not in_interval:
                    bad.append(f.label_str())
            report.append({"check": "h_order_rule", "passed": not bad, "counterexample": bad or None})
            per_l = {}
            for f in self.factors[1:]:
                per_l[f.label[2]] = per_l.get(f.label[2], 0) + round(math.log(f.order, p))
            ok = all(v == R.n - 1 for v in per_l.values()) and len(per_l) == (R.field.t if R.n > 1 else 0)
            report.append({"check": "order_exponent_sum", "passed": ok, "per_l": per_l, "expected": R.n - 1})
            alpha_bad = [f.label_str() for f in self.factors[1:] if not _alpha2_ok(R, f)]
            report.append({"check": "alpha2_rule", "passed": not alpha_bad, "counterexample": alpha_bad or None})
        else:
            report.append({"check": "generic_fallback", "passed": True,
                           "note": "n divisible by p: U0 basis found by greedy search"})

        if datum is not None:
            report.append(self.verify_gamma_invariance(datum))
        return report

    def verify_gamma_invariance(self, datum: WeilDatum) -> dict:
        """gamma(b, u m) = gamma(b, m) for all antisymmetric b, all m and all u in U."""
        R = self.ring
        C = R.coeff_array
        perms = [R.indices_of(R.vec_mul(C[int(u)], C)) for u in self.indices]
        checked = 0
        for b in R.asym_elements():
            g = datum.gamma_all(b)
            for u, perm in zip(self.indices, perms):
                checked += R.size
                bad = np.flatnonzero(g[perm] != g)
                if len(bad):
                    return {"check": "gamma_invariance", "passed": False, "checked": checked,
                            "counterexample": {"b": b.to_json(), "u": R.elem_at(int(u)).to_json(),
                                               "m": R.elem_at(int(bad[0])).to_json()}}
        return {"check": "gamma_invariance", "passed": True, "checked": checked}


def h_order_exponent(i: int, n: int, p: int) -> int:
    """Least j with i p^j >= n."""
    j = 0
    while i * p**j < n:
        j += 1
    return j


def _alpha2_ok(R: RingConfig, f: CyclicFactor) -> bool:
    _, i, _ = f.label
    if 2 * i >= R.n:
        return True
    F = R.field
    a1 = f.generator.coeffs[i]
    return f.generator.coeffs[2 * i] == F.K_mul((F.half, 0), F.K_mul(a1, a1))


# -- the norm equation b b* = s ---------------------------------------------------


def solve_norm_equation(s: RingElem) -> RingElem:
    """A b with b b* = s for a symmetric unit s.

    The constant term is the first z in K (index order) with N(z) = s_0; the
    tail is solved degree by degree with the free components set to zero.
    """
    if not (s.is_symmetric() and s.is_unit()):
        raise ValueError(f"{s} is not a symmetric unit")
    R, F = s.ring, s.ring.field
    s0 = s.coeffs[0][0]
    z = next(w for w in F.K_elements() if F.K_norm(w) == s0)
    tail = s * R.scalar(F.inv(s0))
    return R.const(z) * _free_solve(R, tail, [0] * (R.n - 1))


def antisymmetric_orbit_check(ring: RingConfig) -> dict:
    """Whether {b D b* : b a unit} is exactly the set of antisymmetric units."""
    R = ring
    C = R.coeff_array[R.unit_mask]
    D = np.array(R.Delta.coeffs, dtype=np.int64)
    img = set(R.indices_of(R.vec_mul(R.vec_mul(C, D), R.vec_star(C))).tolist())
    target = set(np.flatnonzero(R.asym_mask & R.unit_mask).tolist())
    return {"check": "antisymmetric_orbit", "passed": img == target,
            "orbit_size": len(img), "antisymmetric_units": len(target)}
