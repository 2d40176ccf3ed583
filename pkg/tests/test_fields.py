import itertools

import pytest

from weilrep.fields import FieldConfigError, field_config, is_irreducible, smallest_irreducible


def naive_poly_mulmod(a, b, mod, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    t = len(mod) - 1
    for d in range(len(prod) - 1, t - 1, -1):
        c = prod[d] % p
        for j in range(t + 1):
            prod[d - t + j] -= c * mod[j]
    return [c % p for c in prod[:t]]


@pytest.mark.parametrize("p, t", [(3, 1), (3, 2), (5, 2), (3, 3)])
def test_tables_match_polynomial_arithmetic(p, t):
    F = field_config(p, t)
    for a, b in itertools.product(range(F.q), repeat=2):
        da, db = F.digits(a), F.digits(b)
        assert F.digits(F.add(a, b)) == [(x + y) % p for x, y in zip(da, db)]
        assert F.digits(F.mul(a, b)) == naive_poly_mulmod(da, db, F.modulus, p)


def test_default_choices():
    assert field_config(3, 1).delta_sq == 2
    F9 = field_config(3, 2)
    assert F9.modulus == (1, 0, 1)  # y^2 + 1
    assert not F9.is_square(F9.delta_sq)
    assert smallest_irreducible(2 + 1, 2) == (1, 0, 1)


def test_irreducibility():
    assert is_irreducible((1, 0, 1), 3)
    assert not is_irreducible((2, 0, 1), 3)  # y^2 - 1
    with pytest.raises(FieldConfigError):
        field_config(3, 2, modulus=[2, 0, 1])


@pytest.mark.parametrize("bad", [2, 4, 9, 1])
def test_rejects_bad_primes(bad):
    with pytest.raises(FieldConfigError):
        field_config(bad)


def test_rejects_square_delta():
    with pytest.raises(FieldConfigError):
        field_config(5, 1, delta_sq=4)


@pytest.mark.parametrize("p, t", [(3, 1), (3, 2), (5, 1)])
def test_K_is_a_field(p, t):
    F = field_config(p, t)
    for z in F.K_elements():
        if z != (0, 0):
            assert F.K_mul(z, F.K_inv(z)) == (1, 0)
        assert F.K_norm(z) == F.K_mul(z, F.K_conj(z))[0]
        assert F.K_mul(z, F.K_conj(z))[1] == 0
    assert F.K_mul(F.Delta, F.Delta) == (F.delta_sq, 0)


def test_trace_is_additive_and_frobenius_invariant():
    F = field_config(3, 2)
    for a, b in itertools.product(range(F.q), repeat=2):
        assert F.trace(F.add(a, b)) == (F.trace(a) + F.trace(b)) % 3
    assert all(F.trace(F.pow(a, 3)) == F.trace(a) for a in range(F.q))
    assert F.trace(1) == 2  # Tr(1) = t mod p


def test_psi0_is_trivial_on_D_part_only():
    F = field_config(3, 1)
    assert F.psi0_exp((1, 0)) == 1
    assert F.psi0_exp((0, 1)) == 0
    assert any(F.psi0_exp((a, 0)) for a in range(F.q))


@pytest.mark.parametrize("p, t", [(3, 1), (3, 2), (5, 1)])
def test_norm_character_sum(p, t):
    F = field_config(p, t)
    q = F.q
    assert F.norm_character_sum(0) == q * q
    for lam in range(1, q):
        assert F.norm_character_sum(lam) == -q


def test_json_round_trip():
    F = field_config(3, 2)
    for z in F.K_elements():
        assert F.K_from_json(F.K_to_json(z)) == z
