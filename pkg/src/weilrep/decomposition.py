"""Splitting C^{A_n} into the Lambda-homogeneous spaces
W_Lambda = {f : f(u a) = Lambda(u) f(a) for all u in U}.

Dimensions come from orbit/stabilizer data: an orbit contributes one
dimension to W_Lambda exactly when Lambda is trivial on its stabilizer.
Projectors are dense and built only on request.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .group import random_asym, random_unit
from .operators import Dense, Monomial, Operator
from .representation import WeilRepresentation, _run
from .ring import MAX_TABLE_SIZE, ResourceGuardError, RingElem
from .scalars import cyclo_context
from .unitary import UCharacter, UnitaryGroup


@dataclass(frozen=True)
class Orbit:
    representative: RingElem
    size: int
    stabilizer: tuple[RingElem, ...]

    def to_json(self) -> dict:
        return {"representative": self.representative.to_json(), "size": self.size,
                "stabilizer": [u.to_json() for u in self.stabilizer]}


class Decomposition:
    def __init__(self, rep: WeilRepresentation, unitary: UnitaryGroup | None = None):
        self.rep = rep
        self.ring = rep.ring
        self.U = unitary or UnitaryGroup(rep.ring)
        self.conductor = math.lcm(rep.m, self.U.exponent)
        self._projectors: dict[tuple, Dense] = {}

    # -- orbits ----------------------------------------------------------------

    @cached_property
    def _action(self) -> np.ndarray:
        """act[k, a] = index of u_k * a, u_k running over U in index order."""
        R = self.ring
        C = R.coeff_array
        return np.stack([R.indices_of(R.vec_mul(C[int(u)], C)) for u in self.U.indices])

    def u_orbits(self) -> list[Orbit]:
        R = self.ring
        act = self._action
        seen = np.zeros(R.size, dtype=bool)
        orbits = []
        for a in range(R.size):
            if seen[a]:
                continue
            members = np.unique(act[:, a])
            seen[members] = True
            stab = tuple(R.elem_at(int(u)) for u, img in zip(self.U.indices, act[:, a]) if img == a)
            orbits.append(Orbit(R.elem_at(a), len(members), stab))
        return orbits

    # -- dimensions --------------------------------------------------------------

    def dim_W(self, lam: UCharacter, orbits: list[Orbit] | None = None) -> int:
        orbits = orbits if orbits is not None else self.u_orbits()
        return sum(all(self.U.char_exponent(lam, u) == 0 for u in o.stabilizer) for o in orbits)

    def isotypic_report(self) -> dict:
        orbits = self.u_orbits()
        rows = [{"lambda": lam.to_json(), "dim": self.dim_W(lam, orbits)} for lam in self.U.characters()]
        total = sum(r["dim"] for r in rows)
        return {"dims": rows, "total": total, "expected_total": self.ring.size,
                "passed": total == self.ring.size, "orbit_count": len(orbits),
                "orbit_stabilizer_ok": all(o.size * len(o.stabilizer) == len(self.U) for o in orbits)}

    # -- projectors --------------------------------------------------------------

    def projector(self, lam: UCharacter) -> Dense:
        """(1/|U|) sum_u Lambda(u)^-1 T_u, with (T_u f)(a) = f(u a)."""
        key = tuple(lam.exponents)
        if key in self._projectors:
            return self._projectors[key]
        R, m = self.ring, self.conductor
        if R.size > MAX_TABLE_SIZE:
            raise ResourceGuardError(f"projectors need q^(2n) <= {MAX_TABLE_SIZE}, got {R.size}")
        act = self._action
        roots = cyclo_context(m).roots
        num = np.zeros((roots.shape[1], R.size, R.size), dtype=np.int64)
        rows = np.arange(R.size)
        for k, u in enumerate(self.U.indices):
            e = -self.U.char_exponent(lam, R.elem_at(int(u)), m) % m
            # row a of T_u has its 1 in column u a
            num[:, rows, act[k]] += roots[e][:, None]
        P = Dense(num, len(self.U), m)
        self._projectors[key] = P
        return P

    def verify_projector(self, lam: UCharacter, dim: int | None = None) -> dict:
        P = self.projector(lam)
        dim = self.dim_W(lam) if dim is None else dim
        idem = P @ P == P
        tr = P.trace()
        return {"lambda": lam.to_json(), "idempotent": bool(idem), "trace": str(tr), "dim": dim,
                "passed": bool(idem and tr == dim)}

    def verify_projector_sum(self) -> bool:
        den = len(self.U)
        total = sum(P.num * (den // P.den) for P in map(self.projector, self.U.characters()))
        return bool(Dense(total, den, self.conductor) == Monomial.identity(self.ring.size, self.conductor))

    def generator_operators(self, sample_size: int | None = None, seed: int = 0) -> list[tuple[str, Operator]]:
        """op_w plus op_h(t), op_u(s): every argument, or a seeded sample of each kind."""
        R, rep = self.ring, self.rep
        if sample_size is None:
            units = list(R.enumerate("units"))
            asym = list(R.asym_elements())
        else:
            rng = random.Random(seed)
            units = [random_unit(R, rng) for _ in range(sample_size)]
            asym = [random_asym(R, rng) for _ in range(sample_size)]
        ops = [("W", rep.op_w())]
        ops += [(f"H({t})", rep.op_h(t)) for t in units]
        ops += [(f"U({s})", rep.op_u(s)) for s in asym]
        return ops

    def verify_invariance(self, lam: UCharacter, op: Operator) -> bool:
        """op P_Lambda = P_Lambda op, with op lifted to the projector's conductor."""
        P = self.projector(lam)
        g = op.embed(self.conductor)
        return g @ P == P @ g

    def verify_all_invariance(self, sample_size: int | None = None, seed: int = 0, threads: int = 1) -> dict:
        ops = self.generator_operators(sample_size, seed)
        work = [(lam, name, op) for lam in self.U.characters() for name, op in ops]
        results = _run(lambda item: self.verify_invariance(item[0], item[2]), work, threads)
        bad = next((i for i, ok in enumerate(results) if not ok), None)
        return {"check": "invariance", "passed": bad is None,
                "mode": "exhaustive" if sample_size is None else "sampled",
                "checked": len(results) if bad is None else bad + 1,
                "counterexample": None if bad is None else
                {"lambda": work[bad][0].to_json(), "generator": work[bad][1]}}


def dims_summary(report: dict) -> list[int]:
    return sorted((r["dim"] for r in report["dims"]), reverse=True)
