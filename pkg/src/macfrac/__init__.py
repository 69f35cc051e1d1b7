"""Continuous-order Maclaurin transform, Euler-Maclaurin corrections, and reconstruction."""

from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    MacfracError,
    NumericalError,
    RangeError,
    TruncationError,
    UnsupportedError,
)
from .kernel import KernelSlice, closed_form_kernel_derivative, kernel_derivative_at_zero, kernel_eval
from .mpnum import PrecisionContext, precision
from .operator import (
    ReconstructionResult,
    correction_series,
    correction_term,
    maclaurin_sum,
    reconstruct_point,
    transform,
)
from .quadrature import QuadratureResult, integrate_segment, integrate_semi_infinite
from .report import GridReport, mean_absolute_errors, sweep_grid, write_csv, write_svg
from .spectra import Atom, OrderSpectrum, builtin_spectrum, domain_check, reference_value, spectrum_eval

__version__ = "0.1.0"
