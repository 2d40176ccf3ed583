import random
from fractions import Fraction

import numpy as np
import pytest

from weilrep.operators import Dense, FunctionVector, Monomial, apply
from weilrep.scalars import ConductorMismatch, cyclo_context


def random_monomial(rng, dim, m, diagonal=False):
    perm = list(range(dim))
    if not diagonal:
        rng.shuffle(perm)
    return Monomial(perm, [rng.randrange(m) for _ in range(dim)], m)


def random_dense(rng, dim, m, den=6):
    deg = cyclo_context(m).deg
    num = np.array([[[rng.randint(-4, 4) for _ in range(dim)] for _ in range(dim)] for _ in range(deg)],
                   dtype=np.int64)
    return Dense(num, den, m)


def as_matrix(op):
    return [[op.entry(r, c) for c in range(op.dim)] for r in range(op.dim)]


def naive_product(A, B, m):
    n = len(A)
    zero = cyclo_context(m).zero()
    return [[sum((A[r][k] * B[k][c] for k in range(n)), zero) for c in range(n)] for r in range(n)]


@pytest.mark.parametrize("m", [3, 4, 12])
def test_products_match_naive_matrices(m):
    rng = random.Random(m)
    dim = 5
    makers = [lambda: random_monomial(rng, dim, m), lambda: random_monomial(rng, dim, m, True),
              lambda: random_dense(rng, dim, m)]
    for make_a in makers:
        for make_b in makers:
            A, B = make_a(), make_b()
            assert as_matrix(A @ B) == naive_product(as_matrix(A), as_matrix(B), m)


def test_monomial_action_on_basis():
    m = 5
    op = Monomial([2, 0, 1], [1, 2, 3], m)
    ctx = cyclo_context(m)
    out = apply(op, FunctionVector.basis(3, 0, m)).entries()
    assert out == [ctx.zero(), ctx.zero(), ctx.root_of_unity(1)]
    assert op.form == "monomial"
    assert Monomial.diagonal([1, 2], m).form == "diagonal"
    assert op.to_dense() == op


def test_apply_matches_matrix():
    rng = random.Random(5)
    m = 12
    for op in (random_dense(rng, 4, m), random_monomial(rng, 4, m)):
        vals = [cyclo_context(m).root_of_unity(rng.randrange(m)) * Fraction(rng.randint(1, 5), 3)
                for _ in range(4)]
        v = FunctionVector.from_entries(vals)
        M = as_matrix(op)
        expect = [sum((M[r][c] * vals[c] for c in range(4)), cyclo_context(m).zero()) for r in range(4)]
        assert apply(op, v).entries() == expect


def test_adjoint():
    rng = random.Random(2)
    for op in (random_dense(rng, 4, 12), random_monomial(rng, 4, 12)):
        M, Mh = as_matrix(op), as_matrix(op.adjoint())
        assert all(Mh[r][c] == M[c][r].conjugate() for r in range(4) for c in range(4))
    U = random_monomial(rng, 6, 7)
    assert U @ U.adjoint() == Monomial.identity(6, 7)


def test_embedding():
    rng = random.Random(3)
    A = random_dense(rng, 3, 3)
    E = A.embed(12)
    assert all(E.entry(r, c) == A.entry(r, c).embed(12) for r in range(3) for c in range(3))
    B = random_monomial(rng, 3, 4)
    assert B.embed(12).to_dense() == B.to_dense().embed(12)
    with pytest.raises(ConductorMismatch):
        A.embed(4)
    with pytest.raises(ConductorMismatch):
        A @ B


def test_canonical_form_makes_equality_exact():
    num = np.zeros((2, 2, 2), dtype=np.int64)
    num[0] = [[2, 0], [0, 2]]
    assert Dense(num, 2, 3) == Monomial.identity(2, 3)
    assert Dense(-num, -2, 3) == Monomial.identity(2, 3)
    assert Dense(num, 4, 3) != Monomial.identity(2, 3)


def test_large_entries_fall_back_to_python_ints():
    big = 2**40
    num = np.zeros((1, 2, 2), dtype=np.int64)
    num[0] = [[big, 1], [1, big]]
    A = Dense(num, 1, 1)
    P = A @ A @ A
    assert P.num.dtype == object
    assert P.entry(0, 0).coeffs[0] == big**3 + 3 * big


def test_trace():
    m = 4
    op = Monomial([0, 2, 1, 3], [1, 0, 0, 2], m)
    ctx = cyclo_context(m)
    assert op.trace() == ctx.root_of_unity(1) + ctx.root_of_unity(2)
    assert op.to_dense().trace() == op.trace()


def test_json_forms():
    op = Monomial([1, 0], [0, 1], 3)
    obj = op.to_json()
    assert obj["form"] == "monomial" and obj["targets"] == [1, 0]
    assert Monomial.diagonal([0, 1], 3).to_json()["form"] == "diagonal"
    dense = op.to_dense().to_json(float_render=True)
    assert dense["form"] == "dense" and len(dense["rows"]) == 2 and "float" in dense["rows"][0][1]
