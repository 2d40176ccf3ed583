import cmath
import math

import pytest

from weilrep.decomposition import Decomposition, dims_summary
from weilrep.operators import Monomial
from weilrep.representation import WeilRepresentation
from weilrep.unitary import UCharacter
from weilrep.weil_data import WeilDatum
from conftest import make_ring


def decomposition(*cfg):
    return Decomposition(WeilRepresentation(WeilDatum(make_ring(*cfg))))


@pytest.fixture(scope="module")
def dec1():
    return decomposition(3, 1, 1)


@pytest.fixture(scope="module")
def dec2():
    return decomposition(3, 1, 2)


def brute_orbits(R, units):
    seen, orbits = set(), []
    for a in R:
        if a.index in seen:
            continue
        orb = {(u * a).index for u in units}
        seen |= orb
        orbits.append(orb)
    return orbits


@pytest.mark.parametrize("cfg", [(3, 1, 1), (3, 1, 2), (3, 2, 1)])
def test_orbits_match_brute_force(cfg):
    dec = decomposition(*cfg)
    R = dec.ring
    brute = brute_orbits(R, dec.U.elements())
    orbits = dec.u_orbits()
    assert sorted(len(o) for o in brute) == sorted(o.size for o in orbits)
    assert sum(o.size for o in orbits) == R.size
    for o in orbits:
        assert o.size * len(o.stabilizer) == len(dec.U)
        assert all((u * o.representative) == o.representative for u in o.stabilizer)


def test_orbit_examples(dec1):
    orbits = dec1.u_orbits()
    assert len(orbits) == 3
    zero = orbits[0]
    assert zero.representative.is_zero() and zero.size == 1 and len(zero.stabilizer) == 4
    assert sorted(o.size for o in orbits) == [1, 4, 4]


def character_formula_dim(dec, lam):
    # dim W_Lambda = (1/|U|) sum_u conj(Lambda(u)) #{a : u a = a}
    R = dec.ring
    total = 0
    for u in dec.U.elements():
        fixed = sum(1 for a in R if u * a == a)
        total += fixed * cmath.exp(-2j * math.pi * dec.U.char_exponent(lam, u) / dec.U.exponent)
    return total / len(dec.U)


@pytest.mark.parametrize("cfg", [(3, 1, 1), (3, 1, 2), (3, 2, 1)])
def test_dims_match_character_formula(cfg):
    dec = decomposition(*cfg)
    report = dec.isotypic_report()
    assert report["passed"] and report["total"] == dec.ring.size
    for row in report["dims"]:
        assert abs(character_formula_dim(dec, UCharacter(tuple(row["lambda"]))) - row["dim"]) < 1e-9


def test_dims_at_smallest_config(dec1):
    report = dec1.isotypic_report()
    assert dims_summary(report) == [3, 2, 2, 2]
    assert dec1.dim_W(UCharacter((0,))) == 3


@pytest.mark.parametrize("fixture", ["dec1", "dec2"])
def test_projectors(fixture, request):
    dec = request.getfixturevalue(fixture)
    for lam in dec.U.characters():
        r = dec.verify_projector(lam)
        assert r["passed"], r
    assert dec.verify_projector_sum()


def test_projector_image_is_homogeneous(dec1):
    # (T_u P f)(a) = Lambda(u) (P f)(a): T_u P = Lambda(u) P
    R = dec1.ring
    m = dec1.conductor
    act = dec1._action
    for lam in dec1.U.characters():
        P = dec1.projector(lam)
        for k, u in enumerate(dec1.U.elements()):
            T = Monomial(act[k], [0] * R.size, m).adjoint()
            scaled = P @ Monomial.diagonal([dec1.U.char_exponent(lam, u, m)] * R.size, m)
            assert T @ P == scaled


def test_invariance_exhaustive_n1(dec1):
    out = dec1.verify_all_invariance()
    assert out["passed"] and out["mode"] == "exhaustive"


def test_invariance_sampled_n2(dec2):
    out = dec2.verify_all_invariance(sample_size=3, seed=5)
    assert out["passed"] and out["checked"] == 12 * 7


def test_trivial_character_commutes_with_w(dec1):
    assert dec1.conductor == 12
    assert dec1.verify_invariance(UCharacter((0,)), dec1.rep.op_w())
