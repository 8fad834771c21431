"""Exact q-expansion arithmetic for Eisenstein congruences of weight-2 newforms."""

from .eisenstein import DeltaChoice, build_eisenstein, e_series, eis_coeff
from .exactnum import Rational, Residue
from .hecke import HeckeOp, check_eigen, sturm_bound
from .lowering import classify_r3, is_special, lower_level, synth_special
from .newform import NewformData, WeierstrassCurve, extend_coeffs, newform_from_curve, torsion_order
from .qseries import QExpansion
from .verifier import CertificateRequest, certify, cusp_order

__version__ = "0.1.0"

__all__ = [
    "CertificateRequest", "DeltaChoice", "HeckeOp", "NewformData", "QExpansion", "Rational",
    "Residue", "WeierstrassCurve", "build_eisenstein", "certify", "check_eigen", "classify_r3",
    "cusp_order", "e_series", "eis_coeff", "extend_coeffs", "is_special", "lower_level",
    "newform_from_curve", "sturm_bound", "synth_special", "torsion_order",
]
