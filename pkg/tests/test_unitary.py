import pytest

from weilrep.ring import ResourceGuardError
from weilrep.unitary import (NotUnitaryError, UCharacter, UnitaryGroup,
                             antisymmetric_orbit_check, h_order_exponent, multiplicative_order,
                             solve_norm_equation)
from weilrep.weil_data import WeilDatum
from conftest import make_ring


@pytest.mark.parametrize("cfg", [(3, 1, 1), (3, 1, 2), (3, 1, 3), (3, 2, 1), (5, 1, 2)])
def test_enumeration_matches_brute_force(cfg):
    R = make_ring(*cfg)
    U = UnitaryGroup(R)
    brute = [a.index for a in R if a * a.star() == R.one]
    assert U.indices.tolist() == brute
    assert len(U) == U.expected_order


@pytest.mark.parametrize("cfg", [(3, 1, 4), (3, 2, 2)])
def test_order_formula_larger(cfg):
    U = UnitaryGroup(make_ring(*cfg))
    assert len(U) == U.expected_order


def test_circle_generator():
    R = make_ring(3, 1, 2)
    f = UnitaryGroup(R).circle_generator
    assert f.order == 4 and f.label == ("Circle",)
    assert f.generator * f.generator == -R.one
    assert R.field.K_norm(f.generator.coeffs[0]) == 1
    assert UnitaryGroup(make_ring(3, 2, 1)).circle_generator.order == 10


def test_u0_membership():
    R = make_ring(3, 1, 2)
    U = UnitaryGroup(R)
    assert U.u0_membership(R.one) == (True, [0])
    for b in range(3):
        assert U.u0_membership(R.one + R.scalar(b) * R.x) == (True, [b])
    assert U.u0_membership(U.circle_generator.generator)[0] is False
    with pytest.raises(NotUnitaryError):
        U.u0_membership(R.parse("1+D"))


@pytest.mark.parametrize("cfg", [(3, 1, 2), (3, 1, 4), (3, 2, 2), (5, 1, 3)])
def test_u0_parameters_are_a_bijection(cfg):
    R = make_ring(*cfg)
    U = UnitaryGroup(R)
    u0 = [u for u in U.elements() if u.coeffs[0] == (1, 0)]
    assert len(u0) == R.q ** (R.n - 1)
    params = {tuple(U.u0_membership(u)[1]) for u in u0}
    assert len(params) == len(u0)
    for u in u0:
        assert U.u0_from_parameters(U.u0_membership(u)[1]) == u


def test_h_generator_examples():
    R = make_ring(3, 1, 2)
    f = UnitaryGroup(R).h_generator(1, 1)
    assert f.generator == R.one + R.x and f.order == 3
    R4 = make_ring(3, 1, 4)
    U4 = UnitaryGroup(R4)
    assert U4.h_generator(1, 1).order == 9
    assert U4.h_generator(2, 1).order == 3
    g = U4.h_generator(2, 1).generator
    assert g.coeffs[2] == (0, 1)  # leading term D x^2 for even degree
    with pytest.raises(ValueError):
        U4.h_generator(3, 1)
    with pytest.raises(ValueError):
        U4.h_generator(4, 1)


def test_alpha2_is_half_alpha1_squared():
    R = make_ring(5, 2, 5)
    U = UnitaryGroup(R, force=True)
    F = R.field
    for i in (1, 2):
        for l in (1, 2):
            z = U.h_generator(i, l).generator
            a1 = z.coeffs[i]
            assert z.coeffs[2 * i] == F.K_mul((F.half, 0), F.K_mul(a1, a1))
            assert z * z.star() == R.one


def test_h_order_rule():
    assert h_order_exponent(1, 4, 3) == 2
    assert h_order_exponent(2, 4, 3) == 1
    assert h_order_exponent(1, 2, 3) == 1
    # the interval form needs n coprime to p
    for n in (m for m in range(2, 30) if m % 3):
        for i in range(1, n):
            if i % 3:
                j = h_order_exponent(i, n, 3)
                assert n // 3**j < i <= n // 3 ** (j - 1)


@pytest.mark.parametrize("cfg, labels", [
    ((3, 1, 1), [("Circle", 4)]),
    ((3, 1, 2), [("Circle", 4), ("H(1,1)", 3)]),
    ((3, 2, 2), [("Circle", 10), ("H(1,1)", 3), ("H(1,2)", 3)]),
    ((3, 1, 4), [("Circle", 4), ("H(1,1)", 9), ("H(2,1)", 3)]),
])
def test_decomposition_examples(cfg, labels):
    U = UnitaryGroup(make_ring(*cfg))
    assert [(f.label_str(), f.order) for f in U.factors] == labels
    for f in U.factors:
        assert multiplicative_order(f.generator) == f.order


@pytest.mark.parametrize("cfg", [(3, 1, 1), (3, 1, 2), (3, 1, 4), (3, 2, 1), (3, 2, 2), (5, 1, 3)])
def test_verify_report(cfg):
    R = make_ring(*cfg)
    datum = WeilDatum(R) if R.size <= 81 else None
    for r in UnitaryGroup(R).verify(datum):
        assert r["passed"], r


def test_generic_fallback_when_p_divides_n():
    R = make_ring(3, 1, 3)
    U = UnitaryGroup(R)
    assert not U.uses_h_basis
    assert [f.label[0] for f in U.factors] == ["Circle", "Generic", "Generic"]
    assert all(r["passed"] for r in U.verify())


def test_characters_and_values():
    R = make_ring(3, 1, 1)
    U = UnitaryGroup(R)
    chars = U.characters()
    assert len(chars) == len(U) == 4
    g = U.circle_generator.generator
    for lam in chars:
        assert U.char_value(lam, R.one) == 1
        # values are powers of i
        assert U.char_value(lam, g) ** 4 == 1
    assert U.char_value(UCharacter((1,)), g) == U.char_value(UCharacter((1,)), g, 4)
    trivial = UCharacter((0,))
    assert all(U.char_value(trivial, u) == 1 for u in U.elements())
    with pytest.raises(NotUnitaryError):
        U.discrete_log(R.Delta + R.one)


def test_characters_are_homomorphisms():
    R = make_ring(3, 2, 2)
    U = UnitaryGroup(R)
    elems = U.elements()
    for lam in U.characters()[::7]:
        for a in elems[::5]:
            for b in elems[::11]:
                lhs = U.char_exponent(lam, a * b)
                assert lhs == (U.char_exponent(lam, a) + U.char_exponent(lam, b)) % U.exponent


@pytest.mark.parametrize("cfg", [(3, 1, 1), (3, 1, 2), (3, 2, 2)])
def test_norm_equation(cfg):
    R = make_ring(*cfg)
    for s in R.enumerate("sym_units"):
        b = solve_norm_equation(s)
        assert b * b.star() == s
    assert solve_norm_equation(R.one) == R.one
    with pytest.raises(ValueError):
        solve_norm_equation(R.Delta)


def test_norm_equation_example():
    R = make_ring(3, 1, 2)
    s = R.parse("1+D*x")
    b = solve_norm_equation(s)
    assert b * b.star() == s


@pytest.mark.parametrize("n", [1, 2])
def test_antisymmetric_units_form_one_orbit(n):
    assert antisymmetric_orbit_check(make_ring(3, 1, n))["passed"]


@pytest.mark.parametrize("n", [1, 2])
def test_gamma_invariance(n):
    R = make_ring(3, 1, n)
    assert UnitaryGroup(R).verify_gamma_invariance(WeilDatum(R))["passed"]


def test_guard():
    with pytest.raises(ResourceGuardError):
        UnitaryGroup(make_ring(3, 1, 6)).indices
