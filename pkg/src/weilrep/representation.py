"""The Weil representation rho of SL*^1(2, A_n) on C^{A_n}.

Basis vector e_a sits at index ring.index_of(a).  The generators act by

    rho(u(b)) e_a = gamma(b, a) e_a
    rho(h(t)) e_a = e_{a t^-1}
    rho(w)    e_a = c * sum_b chi(a, b) e_b

and rho(g) is the product along the Bruhat word of g.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import group as G
from .group import GroupElem, Token
from .operators import Dense, FunctionVector, Monomial, Operator, apply
from .ring import MAX_TABLE_SIZE, ResourceGuardError, RingElem
from .scalars import cyclo_context
from .weil_data import WeilDatum

__all__ = ["WeilRepresentation", "apply", "FunctionVector", "Operator"]


def _run(fn: Callable, items: Iterable, threads: int) -> list:
    """Map fn over items, in order, optionally on a thread pool."""
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class WeilRepresentation:
    def __init__(self, datum: WeilDatum):
        self.datum = datum
        self.ring = datum.ring
        self.dim = datum.ring.size
        self.m = datum.p
        self._cache: dict[tuple, Operator] = {}

    def __repr__(self) -> str:
        return f"WeilRepresentation({self.ring!r})"

    # -- generators -------------------------------------------------------

    def identity(self) -> Monomial:
        return Monomial.identity(self.dim, self.m)

    def op_u(self, b: RingElem) -> Monomial:
        if not b.is_antisymmetric():
            raise G.InvalidTokenError(f"u(b) needs an antisymmetric element, got {b}")
        return Monomial.diagonal(self.datum.gamma_all(b), self.m)

    def op_h(self, t: RingElem) -> Monomial:
        if not t.is_unit():
            raise G.InvalidTokenError(f"h(t) needs a unit, got {t}")
        R = self.ring
        tinv = np.array(t.inverse().coeffs, dtype=np.int64)
        perm = R.indices_of(R.vec_mul(R.coeff_array, tinv))
        return Monomial(perm, np.zeros(self.dim, dtype=np.int64), self.m)

    @cached_property
    def _w(self) -> Dense:
        if self.dim > MAX_TABLE_SIZE:
            raise ResourceGuardError(f"dense operators need q^(2n) <= {MAX_TABLE_SIZE}, got {self.dim}")
        D = self.datum
        ctx = cyclo_context(self.m)
        E = D.chi_table.T  # E[b, a] = chi_exp(a, b)
        sign = 1 if D.c > 0 else -1
        num = sign * np.ascontiguousarray(ctx.roots[E].transpose(2, 0, 1))
        return Dense(num, D.c.denominator, self.m, normalized=True)

    def op_w(self) -> Dense:
        return self._w

    def token_op(self, tok: Token) -> Operator:
        if tok.kind == "W":
            return self._w
        key = (tok.kind, tok.arg.coeffs)
        op = self._cache.get(key)
        if op is None:
            op = self.op_h(tok.arg) if tok.kind == "H" else self.op_u(tok.arg)
            self._cache[key] = op
        return op

    # -- rho ----------------------------------------------------------------

    def rho_word(self, word: Sequence[Token]) -> Operator:
        # monomial factors compose structurally; only W densifies
        op = self.identity()
        for tok in word:
            op = op @ self.token_op(tok)
        return op

    def rho(self, g: GroupElem) -> Operator:
        return self.rho_word(G.bruhat_factorize(g))

    def apply(self, op: Operator, v: FunctionVector) -> FunctionVector:
        return apply(op, v)

    def basis_vector(self, a: RingElem) -> FunctionVector:
        return FunctionVector.basis(self.dim, a.index, self.m)

    # -- verification -----------------------------------------------------

    def verify_operator_relations(self, sample_size: int = 200, seed: int = 0, threads: int = 1) -> list[dict]:
        """The six presentation relations, checked as exact operator identities."""
        report = []
        for name, (mode, instances) in G.relation_instances(self.ring, sample_size, seed).items():
            instances = list(instances)

            def check(args, name=name):
                lhs, rhs = G.relation_sides(name, args, self.ring)
                return self.rho_word(lhs) == self.rho_word(rhs)

            results = _run(check, instances, threads)
            bad = next((i for i, ok in enumerate(results) if not ok), None)
            failure = None
            if bad is not None:
                lhs, rhs = G.relation_sides(name, instances[bad], self.ring)
                failure = {"args": [a.to_json() for a in instances[bad]],
                           "lhs": G.word_to_json(lhs), "rhs": G.word_to_json(rhs)}
            report.append({"relation": name, "passed": bad is None, "mode": mode,
                           "checked": len(results) if bad is None else bad + 1, "counterexample": failure})
        return report

    def verify_homomorphism(self, pairs: int = 200, seed: int = 0, exhaustive: bool | None = None,
                            threads: int = 1) -> dict:
        """rho(g1 g2) = rho(g1) rho(g2); exhaustive over the group when it is tiny."""
        R = self.ring
        if exhaustive is None:
            exhaustive = R.size <= 9
        if exhaustive:
            elems = list(G.enumerate_group(R))
            table = {_key(g): self.rho(g) for g in elems}
            work = [(g1, g2) for g1 in elems for g2 in elems]

            def check(pair):
                g1, g2 = pair
                return table[_key(g1)] @ table[_key(g2)] == table[_key(g1 @ g2)]
        else:
            rng = random.Random(seed)
            work = [(G.random_member(R, rng), G.random_member(R, rng)) for _ in range(pairs)]

            def check(pair):
                g1, g2 = pair
                return self.rho(g1) @ self.rho(g2) == self.rho(g1 @ g2)

        results = _run(check, work, threads)
        bad = next((i for i, ok in enumerate(results) if not ok), None)
        out = {"check": "homomorphism", "passed": bad is None, "mode": "exhaustive" if exhaustive else "sampled",
               "checked": len(results) if bad is None else bad + 1, "counterexample": None}
        if bad is not None:
            g1, g2 = work[bad]
            out["counterexample"] = {"g1": g1.to_json(), "g2": g2.to_json()}
        return out

    def verify_well_defined(self, words: int = 100, seed: int = 0, threads: int = 1) -> dict:
        """rho of a random word equals rho of the canonical factorization of its product."""
        R = self.ring
        rng = random.Random(seed)
        work = [G.random_word(R, rng) for _ in range(words)]

        def check(word):
            return self.rho_word(word) == self.rho(G.eval_word(word, R))

        results = _run(check, work, threads)
        bad = next((i for i, ok in enumerate(results) if not ok), None)
        return {"check": "well_defined", "passed": bad is None, "mode": "sampled",
                "checked": len(results) if bad is None else bad + 1,
                "counterexample": None if bad is None else {"word": G.word_to_json(work[bad])}}

    def verify_unitarity(self) -> dict:
        W = self._w
        ok_w = W @ W.adjoint() == self.identity()
        scalar_ok = self.datum.c ** 2 * self.dim == 1
        trace_ok = self.identity().trace() == self.dim
        return {"check": "unitarity", "passed": bool(ok_w and scalar_ok and trace_ok),
                "w_times_adjoint_is_identity": bool(ok_w), "c_squared_dim_is_one": bool(scalar_ok),
                "trace_identity_is_dim": bool(trace_ok)}


def _key(g: GroupElem) -> tuple:
    return (g.a.coeffs, g.b.coeffs, g.c.coeffs, g.d.coeffs)
