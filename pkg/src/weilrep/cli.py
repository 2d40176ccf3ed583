"""weilrep command-line interface.

Exit status: 0 when everything requested succeeded, 1 when a verification
failed (the report carries a counterexample), 2 on usage or configuration
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import group as G
from .decomposition import Decomposition
from .fields import FieldConfigError, field_config
from .group import NotAMemberError
from .representation import WeilRepresentation
from .ring import ResourceGuardError, RingConfig
from .unitary import UCharacter, UnitaryGroup, antisymmetric_orbit_check, solve_norm_equation
from .weil_data import WeilDatum

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    p: int
    t: int
    n: int
    modulus: list[int] | None
    delta_sq: list[int] | None
    seed: int
    sample_size: int
    output: str | None
    float_render: bool
    threads: int
    force: bool

    def ring(self) -> RingConfig:
        if self.n < 1:
            raise UsageError(f"n = {self.n} must be positive")
        return RingConfig(field_config(self.p, self.t, self.modulus, self.delta_sq), self.n)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace("[", "").replace("]", "").split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("WEILREP_THREADS", "1")))
    except ValueError:
        return 1


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--p", type=int, default=3, help="odd prime (default 3)")
    g.add_argument("--t", type=int, default=1, help="degree of k = F_q over F_p (default 1)")
    g.add_argument("--n", type=int, default=1, help="truncation degree of A_n (default 1)")
    g.add_argument("--modulus", type=_int_list, help="monic irreducible for k, low degree first")
    g.add_argument("--delta-sq", type=_int_list, help="nonsquare of k as F_p digits, low first")
    g.add_argument("--seed", type=int, default=0, help="seed for every sampled check (default 0)")
    g.add_argument("--sample-size", type=int, default=200, help="samples per sampled check (default 200)")
    g.add_argument("--output", help="write the JSON report here instead of stdout")
    g.add_argument("--float", dest="float_render", action="store_true", help="add float renderings")
    g.add_argument("--threads", type=int, default=None, help="worker threads (env WEILREP_THREADS)")
    g.add_argument("--force", action="store_true", help="override size guards")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="weilrep", description="Weil representations of SL*^1(2, A_n).")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sub.add_parser("info", parents=[common], help="cardinalities and group orders")

    sp = sub.add_parser("factorize", parents=[common], help="Bruhat word of a group element")
    sp.add_argument("--matrix", required=True, help='JSON {"a":..,"b":..,"c":..,"d":..}')

    sp = sub.add_parser("rho", parents=[common], help="the operator rho(g)")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--word", help='JSON word, e.g. ["W", {"H": "D"}, {"U": "D*x"}]')
    src.add_argument("--matrix", help="JSON group element")

    sp = sub.add_parser("gauss", parents=[common], help="sum of gamma(t, y) over A_n")
    sp.add_argument("--t-elem", required=True, help="antisymmetric unit, e.g. D")

    sp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    sp.add_argument("suite", choices=["presentation", "data", "rho", "unitary", "all"])
    sp.add_argument("--pairs", type=int, default=200, help="random pairs for the homomorphism check")

    sp = sub.add_parser("unitary", parents=[common], help="the unitary group and its decomposition")
    sp.add_argument("--characters", action="store_true", help="include the character list")

    sp = sub.add_parser("decompose", parents=[common], help="dimensions of the homogeneous spaces")
    sp.add_argument("--verify", action="store_true", help="check projectors and invariance")
    sp.add_argument("--projector", type=_int_list, help="export the projector of this character")

    sp = sub.add_parser("export", parents=[common], help="write operators or tables to a file")
    sp.add_argument("what", choices=["w", "characters", "decomposition", "projector"])
    sp.add_argument("--lambda", dest="lam", type=_int_list, help="character exponents for 'projector'")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        p=args.p, t=args.t, n=args.n, modulus=args.modulus, delta_sq=args.delta_sq,
        seed=args.seed, sample_size=args.sample_size, output=args.output,
        float_render=args.float_render,
        threads=args.threads if args.threads is not None else _default_threads(),
        force=args.force,
    )


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


# -- commands ---------------------------------------------------------------------


def cmd_info(cfg: RunConfig, args) -> tuple[dict, bool]:
    R = cfg.ring()
    q, n = R.q, R.n
    out = {
        "field": R.field.to_json(),
        "n": n,
        "ring_size": R.size,
        "units_formula": (q * q - 1) * q ** (2 * (n - 1)),
        "symmetric_formula": q**n,
        "antisymmetric_formula": q**n,
        "group_order": G.group_order(R),
        "U_order": (q + 1) * q ** (n - 1),
        "c": str(WeilDatum(R).c),
    }
    if R.size <= 10**5 or cfg.force:
        out["units"] = int(R.unit_mask.sum())
        out["symmetric"] = int(R.sym_mask.sum())
        out["antisymmetric"] = int(R.asym_mask.sum())
        U = UnitaryGroup(R, force=cfg.force)
        out["U_factors"] = [{"label": f.label_str(), "order": f.order} for f in U.factors]
    return out, True


def cmd_factorize(cfg: RunConfig, args) -> tuple[dict, bool]:
    R = cfg.ring()
    g = G.group_from_json(_json_arg(args.matrix), R)
    word = G.bruhat_factorize(g)
    ok = G.eval_word(word, R) == g
    return {"matrix": g.to_json(), "case": G.factorization_case(g), "word": G.word_to_json(word),
            "word_text": " ".join(str(tok) for tok in word), "round_trip": ok}, ok


def cmd_rho(cfg: RunConfig, args) -> tuple[dict, bool]:
    R = cfg.ring()
    rep = WeilRepresentation(WeilDatum(R))
    if args.word is not None:
        word = G.word_from_json(_json_arg(args.word), R)
    else:
        word = G.bruhat_factorize(G.group_from_json(_json_arg(args.matrix), R))
    op = rep.rho_word(word)
    return {"word": G.word_to_json(word), "operator": op.to_json(cfg.float_render)}, True


def cmd_gauss(cfg: RunConfig, args) -> tuple[dict, bool]:
    R = cfg.ring()
    D = WeilDatum(R)
    t = R.parse(args.t_elem)
    value = D.gauss_sum(t)
    expected = D.expected_gauss_sum()
    z = value.to_complex()
    return {"t": R.format(t), "exact": str(value), "float": {"re": z.real, "im": z.imag},
            "expected": str(expected), "passed": value == expected}, value == expected


def _suite_presentation(cfg, R) -> list[dict]:
    return G.verify_presentation(R, sample_size=max(cfg.sample_size, 10_000), seed=cfg.seed)


def _suite_data(cfg, R) -> list[dict]:
    return WeilDatum(R).check_data_conditions(sample_size=cfg.sample_size, seed=cfg.seed)


def _suite_rho(cfg, R, pairs: int) -> list[dict]:
    rep = WeilRepresentation(WeilDatum(R))
    out = rep.verify_operator_relations(cfg.sample_size, cfg.seed, cfg.threads)
    out.append(rep.verify_homomorphism(pairs, cfg.seed, threads=cfg.threads))
    out.append(rep.verify_well_defined(100, cfg.seed, cfg.threads))
    out.append(rep.verify_unitarity())
    return out


def _suite_unitary(cfg, R) -> list[dict]:
    U = UnitaryGroup(R, force=cfg.force)
    out = U.verify(WeilDatum(R) if R.size <= 729 or cfg.force else None)
    out.append(antisymmetric_orbit_check(R))
    bad = next((s for s in R.enumerate("sym_units") if (lambda b: b * b.star() != s)(solve_norm_equation(s))),
               None)
    out.append({"check": "norm_equation", "passed": bad is None,
                "counterexample": None if bad is None else bad.to_json()})
    return out


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, bool]:
    R = cfg.ring()
    suites = ["presentation", "data", "rho", "unitary"] if args.suite == "all" else [args.suite]
    report = {}
    for name in suites:
        if name == "presentation":
            report[name] = _suite_presentation(cfg, R)
        elif name == "data":
            report[name] = _suite_data(cfg, R)
        elif name == "rho":
            report[name] = _suite_rho(cfg, R, args.pairs)
        else:
            report[name] = _suite_unitary(cfg, R)
    passed = all(item["passed"] for items in report.values() for item in items)
    return {"config": _config_json(cfg, R), "passed": passed, "suites": report}, passed


def cmd_unitary(cfg: RunConfig, args) -> tuple[dict, bool]:
    R = cfg.ring()
    U = UnitaryGroup(R, force=cfg.force)
    report = U.verify()
    out = {"order": len(U), "expected_order": U.expected_order, "exponent": U.exponent,
           "factors": [f.to_json() for f in U.factors], "verification": report}
    if args.characters:
        out["characters"] = [lam.to_json() for lam in U.characters()]
    return out, all(r["passed"] for r in report)


def _decomposition(cfg: RunConfig) -> Decomposition:
    R = cfg.ring()
    return Decomposition(WeilRepresentation(WeilDatum(R)), UnitaryGroup(R, force=cfg.force))


def _character(dec: Decomposition, exps) -> UCharacter:
    if exps is None or len(exps) != len(dec.U.factors):
        raise UsageError(f"a character needs {len(dec.U.factors)} exponents")
    return UCharacter(tuple(e % f.order for e, f in zip(exps, dec.U.factors)))


def cmd_decompose(cfg: RunConfig, args) -> tuple[dict, bool]:
    dec = _decomposition(cfg)
    out = dec.isotypic_report()
    out["factors"] = [{"label": f.label_str(), "order": f.order} for f in dec.U.factors]
    passed = out["passed"] and out["orbit_stabilizer_ok"]
    if args.verify:
        projs = [dec.verify_projector(lam) for lam in dec.U.characters()]
        sample = None if dec.ring.size <= 9 else min(cfg.sample_size, 5)
        inv = dec.verify_all_invariance(sample, cfg.seed, cfg.threads)
        out["projectors"] = projs
        out["projector_sum_is_identity"] = dec.verify_projector_sum()
        out["invariance"] = inv
        passed = passed and all(p["passed"] for p in projs) and inv["passed"] and out["projector_sum_is_identity"]
    if args.projector is not None:
        out["projector"] = dec.projector(_character(dec, args.projector)).to_json(cfg.float_render)
    return out, passed


def cmd_export(cfg: RunConfig, args) -> tuple[dict, bool]:
    if cfg.output is None:
        raise UsageError("export needs --output")
    R = cfg.ring()
    if args.what == "w":
        return WeilRepresentation(WeilDatum(R)).op_w().to_json(cfg.float_render), True
    if args.what == "characters":
        U = UnitaryGroup(R, force=cfg.force)
        return {"factors": [f.to_json() for f in U.factors],
                "characters": [lam.to_json() for lam in U.characters()]}, True
    dec = _decomposition(cfg)
    if args.what == "decomposition":
        return {"orbits": [o.to_json() for o in dec.u_orbits()], **dec.isotypic_report()}, True
    return dec.projector(_character(dec, args.lam)).to_json(cfg.float_render), True


def _config_json(cfg: RunConfig, R: RingConfig) -> dict:
    return {"field": R.field.to_json(), "n": R.n, "seed": cfg.seed, "sample_size": cfg.sample_size}


COMMANDS = {
    "info": cmd_info,
    "factorize": cmd_factorize,
    "rho": cmd_rho,
    "gauss": cmd_gauss,
    "verify": cmd_verify,
    "unitary": cmd_unitary,
    "decompose": cmd_decompose,
    "export": cmd_export,
}


def _emit(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = _config(args)
    try:
        result, passed = COMMANDS[args.command](cfg, args)
    except (UsageError, FieldConfigError, ResourceGuardError, NotAMemberError, G.InvalidTokenError,
            ValueError, KeyError) as exc:
        print(f"weilrep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(result, cfg.output)
    return EXIT_OK if passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
