"""The Weil datum (M = A_n, chi, gamma, c) with trivial alpha.

All character values are p-th roots of unity, so internally they are
handled as exponents mod p; the public evaluators return CycloNum values.

The additive character of K applied to the top coefficient depends on the
parity of n: for even n it is psi0 (trivial on Dk), for odd n it is
z -> psi0(D*z) (trivial on k).  Either way psi(z + z*) = 1 for every z,
which is what makes chi(v, m) = chi(m, v)^-1 hold.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import cached_property

import numpy as np

from .fields import KElem
from .ring import MAX_TABLE_SIZE, RingConfig, RingElem
from .scalars import CycloNum, cyclo_context


class NotAntisymmetricError(ValueError):
    pass


class WeilDatum:
    """Characters psi, chi, gamma and the constant c for A_n."""

    def __init__(self, ring: RingConfig):
        self.ring = ring
        self.field = ring.field
        self.p = ring.field.p
        self.n = ring.n
        self.c = Fraction((-1) ** ring.n, ring.q**ring.n)
        self.ctx = cyclo_context(self.p)

    def __repr__(self) -> str:
        return f"WeilDatum({self.ring!r})"

    alpha = staticmethod(lambda t: 1)

    # -- scalar evaluators ------------------------------------------------

    def top_exp(self, z: KElem) -> int:
        F = self.field
        if self.n % 2 == 0:
            return F.psi0_exp(z)
        return F.psi0_exp(F.K_mul(F.Delta, z))

    def psi_exp(self, a: RingElem) -> int:
        return self.top_exp(a.coeffs[-1])

    def chi_exp(self, a: RingElem, b: RingElem) -> int:
        return self.psi_exp(a.star() * b)

    def gamma_exp(self, t: RingElem, m: RingElem) -> int:
        if not t.is_antisymmetric():
            raise NotAntisymmetricError(f"gamma needs an antisymmetric first argument, got {t}")
        return self.chi_exp(-(self.ring.half * t * m), m)

    def psi(self, a: RingElem) -> CycloNum:
        return self.ctx.root_of_unity(self.psi_exp(a))

    def chi(self, a: RingElem, b: RingElem) -> CycloNum:
        return self.ctx.root_of_unity(self.chi_exp(a, b))

    def gamma(self, t: RingElem, m: RingElem) -> CycloNum:
        return self.ctx.root_of_unity(self.gamma_exp(t, m))

    # -- vectorized evaluators ---------------------------------------------

    def top_exp_vec(self, Z: np.ndarray) -> np.ndarray:
        """top_exp over an array (..., 2) of K elements."""
        F = self.field
        if self.n % 2 == 0:
            return F.trace_table[Z[..., 0]]
        return F.trace_table[F.mul_table[F.delta_sq, Z[..., 1]]]

    @cached_property
    def psi_all(self) -> np.ndarray:
        return self.top_exp_vec(self.ring.coeff_array[:, -1, :])

    def chi_row(self, a: RingElem) -> np.ndarray:
        """chi_exp(a, b) for every b in index order."""
        R = self.ring
        prod = R.vec_mul(np.array(a.star().coeffs, dtype=np.int64), R.coeff_array)
        return self.top_exp_vec(prod[:, -1, :])

    def gamma_all(self, t: RingElem) -> np.ndarray:
        """gamma_exp(t, m) for every m in index order."""
        if not t.is_antisymmetric():
            raise NotAntisymmetricError(f"gamma needs an antisymmetric first argument, got {t}")
        R = self.ring
        C = R.coeff_array
        s = np.array((-(R.half * t)).coeffs, dtype=np.int64)
        left = R.vec_star(R.vec_mul(s, C))
        return self.top_exp_vec(R.vec_mul(left, C)[:, -1, :])

    @cached_property
    def chi_table(self) -> np.ndarray:
        """chi_exp(a, b) at [index a, index b]; needs the ring multiplication table."""
        R = self.ring
        return self.psi_all[R.mul_table[R.star_index[:, None], np.arange(R.size)[None, :]]]

    # -- Gauss sums ----------------------------------------------------------

    def gauss_sum(self, t: RingElem) -> CycloNum:
        """Sum of gamma(t, y) over all y in A_n, exhaustively."""
        if not (t.is_antisymmetric() and t.is_unit()):
            raise NotAntisymmetricError(f"gauss_sum needs an antisymmetric unit, got {t}")
        counts = np.bincount(self.gamma_all(t), minlength=self.p)
        return self.ctx.from_exponent_counts(int(v) for v in counts)

    def expected_gauss_sum(self) -> int:
        """(-1)^n q^n, which equals alpha(t)/c."""
        return (-1) ** self.n * self.ring.q**self.n

    # -- conditions (a)-(h) --------------------------------------------------

    def check_data_conditions(self, sample_size: int = 2000, seed: int = 0,
                              exhaustive_limit: int = MAX_TABLE_SIZE) -> list[dict]:
        if self.ring.size <= exhaustive_limit:
            return _check_exhaustive(self)
        return _check_sampled(self, sample_size, seed)


def _entry(cond: str, passed: bool, mode: str, checked: int, detail=None) -> dict:
    out = {"condition": cond, "passed": bool(passed), "mode": mode, "checked": int(checked)}
    if detail is not None:
        out["counterexample" if not passed else "witness"] = detail
    return out


def _first_bad(mask: np.ndarray):
    bad = np.argwhere(~mask)
    return None if len(bad) == 0 else [int(v) for v in bad[0]]


def _check_exhaustive(D: WeilDatum) -> list[dict]:
    R, p = D.ring, D.p
    N = R.size
    X = D.chi_table
    M, Ad, S = R.mul_table, R.add_table, R.star_index
    idx = np.arange(N)
    units = np.flatnonzero(R.unit_mask)
    asym = np.flatnonzero(R.asym_mask)
    asym_units = np.flatnonzero(R.asym_mask & R.unit_mask)
    report = []

    # (a) bi-additivity in both arguments
    bad, checked = None, 0
    for a in idx:
        left = X[Ad[a][:, None], idx[None, :]] == (X[a][None, :] + X) % p
        right = X[a][Ad] == (X[a][:, None] + X[a][None, :]) % p
        checked += 2 * N * N
        if not (left.all() and right.all()):
            bad = {"a": int(a), "first_failure": _first_bad(left & right)}
            break
    report.append(_entry("a", bad is None, "exhaustive", checked, bad))

    # (b) chi(m t, v) = chi(m, v t*)
    bad, checked = None, 0
    for t in units:
        ok = X[M[:, t]] == X[:, M[:, S[t]]]
        checked += N * N
        if not ok.all():
            bad = {"t": int(t), "m_v": _first_bad(ok)}
            break
    report.append(_entry("b", bad is None, "exhaustive", checked, bad))

    # (c) chi(v, m) = chi(m, v)^-1
    ok = (X + X.T) % p == 0
    report.append(_entry("c", ok.all(), "exhaustive", N * N, None if ok.all() else _first_bad(ok)))

    # (d) non-degeneracy: every a != 0 has a b with chi(a, b) != 1
    witnesses, missing = {}, None
    for a in idx[1:]:
        hits = np.flatnonzero(X[a] != 0)
        if len(hits) == 0:
            missing = int(a)
            break
        witnesses[int(a)] = int(hits[0])
    report.append(_entry("d", missing is None, "exhaustive", N - 1,
                         {"a": missing} if missing is not None else {"count": len(witnesses)}))

    gamma = {int(b): D.gamma_all(R.elem_at(int(b))) for b in asym}

    # (e) gamma(b, m t) = gamma(t b t*, m)
    bad, checked = None, 0
    for b in asym:
        for t in units:
            tbt = M[M[t, b], S[t]]
            ok = gamma[int(b)][M[:, t]] == gamma[int(tbt)]
            checked += N
            if not ok.all():
                bad = {"b": int(b), "t": int(t), "m": int(np.flatnonzero(~ok)[0])}
                break
        if bad:
            break
    report.append(_entry("e", bad is None, "exhaustive", checked, bad))

    # (f) gamma(t, m + z) = gamma(t, m) gamma(t, z) chi(m, z t)
    bad, checked = None, 0
    for t in asym:
        g = gamma[int(t)]
        ok = g[Ad] == (g[:, None] + g[None, :] + X[idx[:, None], M[idx[None, :], t]]) % p
        checked += N * N
        if not ok.all():
            bad = {"t": int(t), "m_z": _first_bad(ok)}
            break
    report.append(_entry("f", bad is None, "exhaustive", checked, bad))
    # constraint c^2 |M| = 1 attached to (f)
    report.append(_entry("f_constant", D.c * D.c * N == 1, "exact", 1))

    # (g) gamma(b + b', m) = gamma(b, m) gamma(b', m)
    bad, checked = None, 0
    for b in asym:
        for b2 in asym:
            ok = gamma[int(Ad[b, b2])] == (gamma[int(b)] + gamma[int(b2)]) % p
            checked += N
            if not ok.all():
                bad = {"b": int(b), "b2": int(b2)}
                break
        if bad:
            break
    report.append(_entry("g", bad is None, "exhaustive", checked, bad))

    # (h) sum_m gamma(t, m) = alpha(t) / c for antisymmetric units t
    target = D.ctx.rational(1 / D.c)
    bad = None
    for t in asym_units:
        val = D.ctx.from_exponent_counts(int(v) for v in np.bincount(gamma[int(t)], minlength=p))
        if val != target:
            bad = {"t": int(t), "value": str(val)}
            break
    report.append(_entry("h", bad is None, "exhaustive", len(asym_units), bad))
    return report


def _check_sampled(D: WeilDatum, sample_size: int, seed: int) -> list[dict]:
    from .group import random_asym, random_elem, random_unit

    R, p = D.ring, D.p
    rng = random.Random(seed)
    report = []

    def run(cond, trial):
        for i in range(sample_size):
            bad = trial()
            if bad is not None:
                report.append(_entry(cond, False, "sampled", i + 1, bad))
                return
        report.append(_entry(cond, True, "sampled", sample_size))

    def el():
        return random_elem(R, rng)

    def a_():
        a, a2, b = el(), el(), el()
        if D.chi_exp(a + a2, b) != (D.chi_exp(a, b) + D.chi_exp(a2, b)) % p or \
                D.chi_exp(b, a + a2) != (D.chi_exp(b, a) + D.chi_exp(b, a2)) % p:
            return {"a": str(a), "a2": str(a2), "b": str(b)}

    def b_():
        m, v, t = el(), el(), random_unit(R, rng)
        if D.chi_exp(m * t, v) != D.chi_exp(m, v * t.star()):
            return {"m": str(m), "v": str(v), "t": str(t)}

    def c_():
        m, v = el(), el()
        if (D.chi_exp(m, v) + D.chi_exp(v, m)) % p:
            return {"m": str(m), "v": str(v)}

    def d_():
        a = el()
        if a.is_zero():
            return None
        if not D.chi_row(a).any():
            return {"a": str(a)}

    def e_():
        b, m, t = random_asym(R, rng), el(), random_unit(R, rng)
        if D.gamma_exp(b, m * t) != D.gamma_exp(t * b * t.star(), m):
            return {"b": str(b), "m": str(m), "t": str(t)}

    def f_():
        t, m, z = random_asym(R, rng), el(), el()
        if D.gamma_exp(t, m + z) != (D.gamma_exp(t, m) + D.gamma_exp(t, z) + D.chi_exp(m, z * t)) % p:
            return {"t": str(t), "m": str(m), "z": str(z)}

    def g_():
        b, b2, m = random_asym(R, rng), random_asym(R, rng), el()
        if D.gamma_exp(b + b2, m) != (D.gamma_exp(b, m) + D.gamma_exp(b2, m)) % p:
            return {"b": str(b), "b2": str(b2), "m": str(m)}

    for cond, trial in zip("abcdefg", (a_, b_, c_, d_, e_, f_, g_)):
        run(cond, trial)
        if cond == "f":
            report.append(_entry("f_constant", D.c * D.c * R.size == 1, "exact", 1))
    target = D.ctx.rational(1 / D.c)
    samples = [random_asym(R, rng, unit=True) for _ in range(min(sample_size, 20))]
    bad = next(({"t": str(t)} for t in samples if D.gauss_sum(t) != target), None)
    report.append(_entry("h", bad is None, "sampled", len(samples), bad))
    return report


def nondegeneracy_witness(D: WeilDatum, a: RingElem) -> RingElem | None:
    """The witness b = z x^(n-i-1), i the lowest nonzero degree of a, z scanned over K."""
    if a.is_zero():
        return None
    R = D.ring
    i = next(k for k, c in enumerate(a.coeffs) if c != (0, 0))
    for z in R.field.K_elements():
        b = R.monomial(z, R.n - i - 1)
        if D.chi_exp(a, b) != 0:
            return b
    return None
