"""SL*^1(2, A_n): membership, generators, Bruhat words and the presentation check."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .ring import RingConfig, RingElem, ResourceGuardError

ENUMERATE_LIMIT = 100


class NotAMemberError(ValueError):
    pass


class InvalidTokenError(ValueError):
    pass


@dataclass(frozen=True)
class GroupElem:
    """The matrix [[a, b], [c, d]] over A_n."""

    a: RingElem
    b: RingElem
    c: RingElem
    d: RingElem

    @property
    def ring(self) -> RingConfig:
        return self.a.ring

    def __matmul__(self, other: GroupElem) -> GroupElem:
        return mul(self, other)

    def star(self) -> GroupElem:
        return GroupElem(self.a.star(), self.c.star(), self.b.star(), self.d.star())

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in "abcd"}

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def matrix(a: RingElem, b: RingElem, c: RingElem, d: RingElem) -> GroupElem:
    return GroupElem(a, b, c, d)


def identity(ring: RingConfig) -> GroupElem:
    return GroupElem(ring.one, ring.zero, ring.zero, ring.one)


def det_star(g: GroupElem) -> RingElem:
    return g.a * g.d.star() + g.b * g.c.star()


def is_member(g: GroupElem) -> bool:
    a, b, c, d = g.a, g.b, g.c, g.d
    return (
        det_star(g) == g.ring.one
        and a.star() * c == -(c.star() * a)
        and a * b.star() == -(b * a.star())
        and b.star() * d == -(d.star() * b)
        and c * d.star() == -(d * c.star())
    )


def gen_h(t: RingElem) -> GroupElem:
    if not t.is_unit():
        raise InvalidTokenError(f"h(t) needs a unit, got {t}")
    R = t.ring
    return GroupElem(t, R.zero, R.zero, t.star().inverse())


def gen_u(s: RingElem) -> GroupElem:
    if not s.is_antisymmetric():
        raise InvalidTokenError(f"u(s) needs an antisymmetric element, got {s}")
    R = s.ring
    return GroupElem(R.one, s, R.zero, R.one)


def gen_w(ring: RingConfig) -> GroupElem:
    return GroupElem(ring.zero, ring.one, ring.one, ring.zero)


def mul(g: GroupElem, h: GroupElem) -> GroupElem:
    return GroupElem(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def inv(g: GroupElem) -> GroupElem:
    # g^-1 = J g* J for members
    return GroupElem(g.d.star(), g.b.star(), g.c.star(), g.a.star())


# -- Bruhat words ------------------------------------------------------------


class Token(NamedTuple):
    kind: str  # "H", "U" or "W"
    arg: RingElem | None = None

    def to_json(self):
        return "W" if self.kind == "W" else {self.kind: self.arg.to_json()}

    def __str__(self) -> str:
        return "W" if self.kind == "W" else f"{self.kind}({self.arg})"


def H(t: RingElem) -> Token:
    return Token("H", t)


def U(s: RingElem) -> Token:
    return Token("U", s)


W = Token("W")

BruhatWord = list  # of Token


def token_matrix(tok: Token, ring: RingConfig) -> GroupElem:
    if tok.kind == "H":
        return gen_h(tok.arg)
    if tok.kind == "U":
        return gen_u(tok.arg)
    if tok.kind == "W":
        return gen_w(ring)
    raise InvalidTokenError(f"unknown token kind {tok.kind!r}")


def eval_word(word: Sequence[Token], ring: RingConfig) -> GroupElem:
    g = identity(ring)
    for tok in word:
        g = g @ token_matrix(tok, ring)
    return g


def bruhat_factorize(g: GroupElem) -> list[Token]:
    """Canonical word in h, u, w whose product is g."""
    if not is_member(g):
        raise NotAMemberError(f"{g} is not in SL*^1(2, A_n)")
    a, b, c, d = g.a, g.b, g.c, g.d
    if c.is_zero():
        ainv = a.inverse()
        return [H(a), U(ainv * b)]
    if c.is_unit():
        return [H(c.star().inverse()), U(c.star() * a), W, U(c.inverse() * d)]
    # c nonzero and not a unit: the first column is unimodular so a is a unit
    ainv = a.inverse()
    return [W, H(a.star().inverse()), U(a.star() * c), W, U(ainv * b)]


def factorization_case(g: GroupElem) -> int:
    if g.c.is_zero():
        return 1
    return 2 if g.c.is_unit() else 3


def word_to_json(word: Sequence[Token]) -> list:
    return [tok.to_json() for tok in word]


def word_from_json(obj: list, ring: RingConfig) -> list[Token]:
    word = []
    for item in obj:
        if item == "W":
            word.append(W)
        elif isinstance(item, dict) and len(item) == 1:
            (kind, val), = item.items()
            if kind not in ("H", "U"):
                raise InvalidTokenError(f"unknown token kind {kind!r}")
            word.append(Token(kind, ring.from_json(val)))
        else:
            raise InvalidTokenError(f"malformed token {item!r}")
    return word


def group_from_json(obj, ring: RingConfig) -> GroupElem:
    """Accepts {"a","b","c","d"} or a nested [[a, b], [c, d]] list."""
    if isinstance(obj, dict) and set(obj) >= set("abcd"):
        entries = [obj[k] for k in "abcd"]
    elif isinstance(obj, list) and len(obj) == 2 and all(isinstance(r, list) and len(r) == 2 for r in obj):
        entries = [x for row in obj for x in row]
    else:
        raise ValueError(f"expected a 2x2 matrix, got {obj!r}")
    return GroupElem(*(ring.from_json(x) for x in entries))


# -- random sampling ---------------------------------------------------------


def random_elem(ring: RingConfig, rng: random.Random) -> RingElem:
    return ring.elem_at(rng.randrange(ring.size))


def random_unit(ring: RingConfig, rng: random.Random) -> RingElem:
    q = ring.q
    c0 = rng.randrange(1, q * q)
    rest = rng.randrange(ring.size // (q * q))
    return ring.elem_at(c0 + q * q * rest)


def random_asym(ring: RingConfig, rng: random.Random, unit: bool = False) -> RingElem:
    q, n = ring.q, ring.n
    coeffs = []
    for deg in range(n):
        v = rng.randrange(1 if unit and deg == 0 else 0, q)
        coeffs.append((0, v) if deg % 2 == 0 else (v, 0))
    return ring.elem(coeffs)


def random_word(ring: RingConfig, rng: random.Random, max_len: int = 8) -> list[Token]:
    word = []
    for _ in range(rng.randint(0, max_len)):
        kind = rng.choice("HUW")
        if kind == "H":
            word.append(H(random_unit(ring, rng)))
        elif kind == "U":
            word.append(U(random_asym(ring, rng)))
        else:
            word.append(W)
    return word


def random_member(ring: RingConfig, rng: random.Random, max_len: int = 8) -> GroupElem:
    return eval_word(random_word(ring, rng, max_len), ring)


# -- orders and enumeration -------------------------------------------------


def group_order(ring: RingConfig) -> int:
    q, n = ring.q, ring.n
    return (q * q - 1) * q ** (4 * n - 3) * (q + 1)


def _column_pairs(ring: RingConfig) -> np.ndarray:
    """Index pairs (a, c) with a*c = -c*a."""
    M, S, Ng = ring.mul_table, ring.star_index, ring.neg_index
    N = ring.size
    a = np.arange(N)[:, None]
    c = np.arange(N)[None, :]
    ok = M[S[a], c] == Ng[M[S[c], a]]
    return np.argwhere(ok)


def first_column_orbits(ring: RingConfig) -> dict:
    """Sizes of O1 (a unit) and O2 (c unit, a not) among unimodular first columns."""
    ring._guard(ENUMERATE_LIMIT * 10, "first-column enumeration")
    units = ring.unit_mask
    pairs = _column_pairs(ring)
    o1 = int(np.sum(units[pairs[:, 0]]))
    o2 = int(np.sum(~units[pairs[:, 0]] & units[pairs[:, 1]]))
    q, n = ring.q, ring.n
    base = (q * q - 1) * q ** (2 * (n - 1))
    return {
        "O1": o1,
        "O2": o2,
        "O1_formula": base * q**n,
        "O2_formula": base * q ** (n - 1),
        "total_formula": (q * q - 1) * q ** (3 * n - 3) * (q + 1),
    }


def enumerate_group(ring: RingConfig, force: bool = False) -> Iterator[GroupElem]:
    """Every member, each exactly once, by filtering 2x2 matrices column by column."""
    if ring.size > ENUMERATE_LIMIT and not force:
        raise ResourceGuardError(f"enumerate_group needs q^(2n) <= {ENUMERATE_LIMIT}, got {ring.size}")
    M, S, Ng, Ad = ring.mul_table, ring.star_index, ring.neg_index, ring.add_table
    one = ring.one.index
    N = ring.size
    b = np.arange(N)[:, None]
    d = np.arange(N)[None, :]
    for ai, ci in _column_pairs(ring):
        ok = Ad[M[ai, S[d]], M[b, S[ci]]] == one
        ok &= M[ai, S[b]] == Ng[M[b, S[ai]]]
        ok &= M[S[b], d] == Ng[M[S[d], b]]
        ok &= M[ci, S[d]] == Ng[M[d, S[ci]]]
        if not ok.any():
            continue
        a, c = ring.elem_at(int(ai)), ring.elem_at(int(ci))
        for bi, di in np.argwhere(ok):
            yield GroupElem(a, ring.elem_at(int(bi)), c, ring.elem_at(int(di)))


# -- presentation relations --------------------------------------------------

RELATIONS = ("R1", "R2", "R3", "R4", "R5", "R6")


def _domain(sets: Sequence[list], sample_size: int, rng: random.Random):
    total = 1
    for s in sets:
        total *= len(s)
    if total <= sample_size:
        return "exhaustive", itertools.product(*sets)
    return "sampled", (tuple(rng.choice(s) for s in sets) for _ in range(sample_size))


def relation_instances(ring: RingConfig, sample_size: int, seed: int) -> dict:
    """Arguments for each relation: exhaustive when small enough, else a seeded sample."""
    rng = random.Random(seed)
    units = list(ring.enumerate("units")) if ring.size <= 10**5 else None
    asym = list(ring.asym_elements())
    asym_units = [s for s in asym if s.is_unit()]
    if units is None:
        units = [random_unit(ring, rng) for _ in range(sample_size)]
    return {
        "R1": _domain([units, units], sample_size, rng),
        "R2": _domain([asym, asym], sample_size, rng),
        "R3": _domain([units, asym], sample_size, rng),
        "R4": ("exhaustive", iter([()])),
        "R5": _domain([units], sample_size, rng),
        "R6": _domain([asym_units], sample_size, rng),
    }


def relation_sides(name: str, args: tuple, ring: RingConfig) -> tuple[list[Token], list[Token]]:
    """Left and right words of a presentation relation instance."""
    if name == "R1":
        t1, t2 = args
        return [H(t1), H(t2)], [H(t1 * t2)]
    if name == "R2":
        s1, s2 = args
        return [U(s1), U(s2)], [U(s1 + s2)]
    if name == "R3":
        t, s = args
        return [H(t), U(s)], [U(t * s * t.star()), H(t)]
    if name == "R4":
        return [W, W], []
    if name == "R5":
        (t,) = args
        return [H(t), W], [W, H(t.star().inverse())]
    if name == "R6":
        (t,) = args
        ti = t.inverse()
        return [W, U(ti), W, U(-t), W, U(ti)], [H(-t)]
    raise KeyError(name)


def verify_presentation(ring: RingConfig, sample_size: int = 10_000, seed: int = 0) -> list[dict]:
    """Check the six defining relations as 2x2 matrix identities."""
    report = []
    for name, (mode, instances) in relation_instances(ring, sample_size, seed).items():
        checked, failure = 0, None
        for args in instances:
            lhs, rhs = relation_sides(name, args, ring)
            checked += 1
            if eval_word(lhs, ring) != eval_word(rhs, ring):
                failure = {"args": [a.to_json() for a in args], "lhs": word_to_json(lhs), "rhs": word_to_json(rhs)}
                break
        report.append({"relation": name, "passed": failure is None, "mode": mode, "checked": checked,
                       "counterexample": failure})
    return report
