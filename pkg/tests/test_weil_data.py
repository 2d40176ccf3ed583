"""The datum is checked against a from-scratch float model: K = F_p(D) as
integer pairs, products by naive convolution, and the additive character
z -> exp(2 pi i Tr(theta z)/p) read off the top coefficient, where theta = 1
for even n and theta = D for odd n."""

import cmath
import itertools
import math
from fractions import Fraction

import pytest

from weilrep.weil_data import NotAntisymmetricError, WeilDatum, nondegeneracy_witness
from conftest import make_ring


class FloatModel:
    def __init__(self, p, delta, n):
        self.p, self.delta, self.n = p, delta, n

    def kmul(self, z, w):
        p, d = self.p, self.delta
        return ((z[0] * w[0] + d * z[1] * w[1]) % p, (z[0] * w[1] + z[1] * w[0]) % p)

    def mul(self, a, b):
        out = [(0, 0)] * self.n
        for i, j in itertools.product(range(self.n), repeat=2):
            if i + j < self.n:
                z = self.kmul(a[i], b[j])
                out[i + j] = ((out[i + j][0] + z[0]) % self.p, (out[i + j][1] + z[1]) % self.p)
        return out

    def star(self, a):
        p = self.p
        return [((-1) ** i * c[0] % p, (-1) ** (i + 1) * c[1] % p) for i, c in enumerate(a)]

    def psi(self, a):
        top = a[-1]
        if self.n % 2:
            top = self.kmul((0, 1), top)
        return cmath.exp(2j * math.pi * top[0] / self.p)

    def chi(self, a, b):
        return self.psi(self.mul(self.star(a), b))

    def gamma(self, t, m):
        half = (self.p + 1) // 2
        s = self.mul([((-half * c[0]) % self.p, (-half * c[1]) % self.p) for c in t], m)
        return self.chi(s, m)


def model(R):
    assert R.field.t == 1
    return FloatModel(R.field.p, R.field.delta_sq, R.n)


def close(z, w):
    return abs(z - w) < 1e-9


@pytest.mark.parametrize("cfg", [(3, 1, 1), (3, 1, 2), (5, 1, 1)])
def test_characters_match_float_model(cfg):
    R = make_ring(*cfg)
    D, M = WeilDatum(R), model(R)
    elems = list(R)
    for a in elems:
        for b in elems[:: max(1, len(elems) // 20)]:
            assert close(D.chi(a, b).to_complex(), M.chi(list(a.coeffs), list(b.coeffs)))
    for t in R.asym_elements():
        for m in elems:
            assert close(D.gamma(t, m).to_complex(), M.gamma(list(t.coeffs), list(m.coeffs)))


def test_gamma_closed_form(R32):
    # gamma(t, m) = psi(t m* m / 2)
    D = WeilDatum(R32)
    for t in R32.asym_elements():
        for m in R32:
            assert D.gamma_exp(t, m) == D.psi_exp(R32.half * t * m.star() * m)


def test_vectorized_evaluators_agree(R32):
    D = WeilDatum(R32)
    for a in list(R32)[::7]:
        assert D.chi_row(a).tolist() == [D.chi_exp(a, b) for b in R32]
    for t in R32.asym_elements():
        assert D.gamma_all(t).tolist() == [D.gamma_exp(t, m) for m in R32]


def test_examples(R31, R32):
    z = lambda e: R31.field.psi0(((e % 3), 0))  # zeta_3^e
    D1, D2 = WeilDatum(R31), WeilDatum(R32)
    assert D2.psi(R32.zero) == 1
    assert all(D2.psi(R32.const(c)) == 1 for c in R32.field.K_elements())
    assert D2.psi(R32.x) == z(1)
    Dl = R31.Delta
    assert D1.chi(R31.zero, Dl) == 1
    # chi(1, D) = psi0(D * D) = psi0(2) and chi(D, D) = psi0(D * 1) = 1
    assert D1.chi(R31.one, Dl) == z(2)
    assert D1.chi(Dl, Dl) == 1
    # gamma(D, 1) = psi0(D * D / 2) = psi0(1)
    assert D1.gamma(Dl, R31.one) == z(1)
    assert D1.gamma(Dl, R31.zero) == 1 and D1.gamma(R31.zero, Dl) == 1


def test_constant_c():
    for n in (1, 2, 3):
        D = WeilDatum(make_ring(3, 1, n))
        assert D.c == Fraction((-1) ** n, 3**n)
        assert D.c ** 2 * D.ring.size == 1


def test_gamma_needs_antisymmetric(R32):
    D = WeilDatum(R32)
    with pytest.raises(NotAntisymmetricError):
        D.gamma(R32.one, R32.one)
    with pytest.raises(NotAntisymmetricError):
        D.gauss_sum(R32.Delta * R32.x)  # antisymmetric but not a unit


@pytest.mark.parametrize("cfg, value", [((3, 1, 1), -3), ((3, 1, 2), 9), ((3, 1, 3), -27), ((3, 2, 1), -9),
                                        ((5, 1, 2), 25)])
def test_gauss_sums(cfg, value):
    R = make_ring(*cfg)
    D = WeilDatum(R)
    assert D.expected_gauss_sum() == value
    for t in R.asym_elements():
        if t.is_unit():
            assert D.gauss_sum(t) == value


def test_gauss_sum_by_float_model(R32):
    M = model(R32)
    total = sum(M.gamma(list(R32.Delta.coeffs), list(m.coeffs)) for m in R32)
    assert close(total, 9)


@pytest.mark.parametrize("cfg", [(3, 1, 1), (3, 1, 2), (3, 2, 1), (5, 1, 1)])
def test_conditions_exhaustive(cfg):
    report = WeilDatum(make_ring(*cfg)).check_data_conditions()
    assert [r["condition"] for r in report] == ["a", "b", "c", "d", "e", "f", "f_constant", "g", "h"]
    for r in report:
        assert r["passed"], r


def test_conditions_sampled(R32):
    report = WeilDatum(R32).check_data_conditions(sample_size=200, seed=4, exhaustive_limit=0)
    assert all(r["passed"] for r in report)
    assert {r["mode"] for r in report} == {"sampled", "exact"}


def test_condition_c_would_fail_for_a_character_seeing_both_parts(R31):
    # psi0(a + bD) = zeta^(a+b) breaks chi(v, m) = chi(m, v)^-1: the reason the
    # top character must kill either k or Dk
    M = model(R31)
    M.psi = lambda a: cmath.exp(2j * math.pi * (a[-1][0] + a[-1][1]) / 3)
    bad = [(a, b) for a in R31 for b in R31
           if not close(M.chi(list(a.coeffs), list(b.coeffs)) * M.chi(list(b.coeffs), list(a.coeffs)), 1)]
    assert bad


def test_nondegeneracy_witness(R32):
    D = WeilDatum(R32)
    b = nondegeneracy_witness(D, R32.x)
    assert all(c == (0, 0) for c in b.coeffs[1:])  # b = z x^0
    assert D.chi_exp(R32.x, b) != 0
    for a in R32:
        if not a.is_zero():
            assert D.chi_exp(a, nondegeneracy_witness(D, a)) != 0


def test_character_rows_are_distinct(R31):
    D = WeilDatum(R31)
    rows = {tuple(D.chi_row(a).tolist()) for a in R31}
    assert len(rows) == R31.size
