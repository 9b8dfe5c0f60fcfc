"""Exact determinants and inverses of circulant matrices built from Horadam sequences."""

from .circulant import Circulant, conv_mul, from_params, materialize
from .closed_form import HessenbergScalars, bidiag_inverse, det_eq3, det_via_gn, scalars
from .errors import (
    DegenerateCaseError,
    HoracircError,
    NumericallySingularError,
    RepeatedRootError,
    SingularMatrixError,
)
from .exact_arith import QuadExt, demote, quad_arith, rat_arith
from .horadam import PRESETS, HoradamParams, binet, preset, seq
from .oracle import bareiss_det, dft_det, dft_eigenvalues, dft_inverse, gauss_inverse

__version__ = "0.1.0"
