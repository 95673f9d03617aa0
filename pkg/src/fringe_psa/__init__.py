"""Nonlinear-reference phase-stepping algorithms for chirped temporal fringes."""

from .errors import *  # noqa: F401,F403
from .fringe_model import (
    FringeParams,
    FringeSequence,
    NoiseModel,
    PhaseShiftProfile,
    add_awgn,
    make_profile,
    quadratic,
    synthesize,
    wrap_phase,
)
from .psa_design import (
    Psa,
    Window,
    build_linear_psa,
    build_nonlinear_psa,
    custom_window,
    design_linear_reference,
    design_window,
    gaussian_window,
    square_window,
    zero_leakage_residuals,
)
from .spectral import (
    FtfSpectrum,
    SpectrumReport,
    evaluate_ftf,
    fringe_spectrum,
    ftf,
    harmonic_response,
    quadrature_check,
)
from .demod_analysis import (
    DemodResult,
    SnrReport,
    SweepResult,
    demodulate,
    measure_piston,
    monte_carlo_phase_variance,
    phase_error_sweep,
    predict_piston,
    snr,
)

__version__ = "0.1.0"
