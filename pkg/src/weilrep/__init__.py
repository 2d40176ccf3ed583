"""Exact Weil representations of SL*^1(2, A_n), A_n = K[x]/(x^n) over a quadratic extension K of F_q."""

from .decomposition import Decomposition
from .fields import FieldConfig, field_config
from .group import GroupElem, bruhat_factorize, eval_word, group_order, is_member
from .operators import Dense, FunctionVector, Monomial, Operator, apply
from .representation import WeilRepresentation
from .ring import RingConfig, RingElem
from .scalars import CycloNum, cyclo_context, root_of_unity
from .unitary import CyclicFactor, UCharacter, UnitaryGroup, solve_norm_equation
from .weil_data import WeilDatum

__all__ = [
    "CycloNum", "CyclicFactor", "Decomposition", "Dense", "FieldConfig", "FunctionVector", "GroupElem",
    "Monomial", "Operator", "RingConfig", "RingElem", "UCharacter", "UnitaryGroup", "WeilDatum",
    "WeilRepresentation", "apply", "bruhat_factorize", "cyclo_context", "eval_word", "field_config",
    "group_order", "is_member", "root_of_unity", "solve_norm_equation",
]
