"""
Split ı quantum group identities: ı-divided powers, the ı Serre relation
family and its adjoint form, and finite-dimensional module checks.
"""

from .report import VerificationReport, Check
from .idivided import IDividedSpec, idiv, idiv_of, t_component
from .adjoint import ad, verify_relation_family, verify_iserre, verify_serre_lusztig, verify_mixed
from .repmod import Matrix, Rep, module_L, tensor, tensor_power, act

__all__ = [
    "VerificationReport",
    "Check",
    "IDividedSpec",
    "idiv",
    "idiv_of",
    "t_component",
    "ad",
    "verify_relation_family",
    "verify_iserre",
    "verify_serre_lusztig",
    "verify_mixed",
    "Matrix",
    "Rep",
    "module_L",
    "tensor",
    "tensor_power",
    "act",
]
