"""Frequency transfer functions, fringe spectra and quadrature metrics.

Spectra are evaluated directly as ``sum_n x_n exp(-1j n w)`` on a uniform
grid over [-pi, pi] with both endpoints included. PSAs have at most a few
hundred taps, so no FFT is involved.

The FTF of a PSA is taken on the conjugated coefficients, giving
``H(w) = sum_n w_n exp(1j*total_phase[n]) exp(-1j n w)``. A good quadrature
filter passes the positive side (0, pi) and is zero on [-pi, 0].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from .errors import EmptySpectrum, GridTooCoarse, LengthMismatch, ZeroNormalizer
from .fringe_model import FringeSequence, PhaseShiftProfile, _frozen
from .psa_design import Psa

MIN_GRID = 64
DEFAULT_GRID = 2048
PARSEVAL_GRID = 4096


@dataclass(frozen=True, eq=False)
class FtfSpectrum:
    omegas: np.ndarray
    values: np.ndarray
    source: str = ""

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def __len__(self):
        return len(self.omegas)


@dataclass(frozen=True)
class SpectrumReport:
    negative_side_max: float
    positive_side_max: float
    dc_value: float
    leakage_ratio: float

    def as_dict(self):
        return {
            "negative_side_max": self.negative_side_max,
            "positive_side_max": self.positive_side_max,
            "dc_value": self.dc_value,
            "leakage_ratio": self.leakage_ratio,
        }


def frequency_grid(grid_size: int) -> np.ndarray:
    if grid_size < MIN_GRID:
        raise GridTooCoarse(f"grid needs at least {MIN_GRID} points, got {grid_size}")
    g = np.linspace(-np.pi, np.pi, int(grid_size))
    # exact antisymmetry, so odd grids hold w = 0 exactly
    return (g - g[::-1]) / 2


def dtft(x, omegas) -> np.ndarray:
    """``sum_n x[n] exp(-1j n w)`` at each ``w`` in ``omegas``."""
    x = np.asarray(x)
    omegas = np.asarray(omegas, dtype=float)
    return np.exp(-1j * np.outer(omegas, np.arange(len(x)))) @ x


def evaluate_ftf(psa: Psa, omegas) -> np.ndarray:
    """FTF of ``psa`` at arbitrary frequencies."""
    return dtft(np.conj(psa.coefficients), omegas)


def ftf(psa: Psa, grid_size: int = DEFAULT_GRID) -> FtfSpectrum:
    omegas = frequency_grid(grid_size)
    return FtfSpectrum(_frozen(omegas), _frozen(evaluate_ftf(psa, omegas), complex), psa.describe())


def fringe_spectrum(fringes: FringeSequence, grid_size: int = DEFAULT_GRID) -> FtfSpectrum:
    """Finite-sample spectrum of the fringe intensities."""
    omegas = frequency_grid(grid_size)
    values = dtft(np.asarray(fringes.samples, dtype=float), omegas)
    return FtfSpectrum(_frozen(omegas), _frozen(values, complex), f"{len(fringes)}-sample fringes")


def _value_at_zero(spec: FtfSpectrum) -> complex:
    # even grids straddle w = 0; interpolate between the two neighbours
    om, h = spec.omegas, spec.values
    k = int(np.searchsorted(om, 0.0))
    if k < len(om) and om[k] == 0.0:
        return complex(h[k])
    if k == 0 or k == len(om):
        return complex(h[min(k, len(om) - 1)])
    t = (0.0 - om[k - 1]) / (om[k] - om[k - 1])
    return complex((1 - t) * h[k - 1] + t * h[k])


def quadrature_check(spec: FtfSpectrum) -> SpectrumReport:
    """How well an FTF approximates a one-sided quadrature filter.

    The negative side is every grid point with ``w <= 0``; the positive side
    is ``0 < w < pi`` (``w = pi`` aliases ``-pi``). ``dc_value`` is
    ``|H(0)|``, linearly interpolated when 0 is not on the grid.
    ``leakage_ratio`` is NaN when the positive side is identically zero.
    """
    if len(spec) == 0:
        raise EmptySpectrum("spectrum has no samples")
    om = np.asarray(spec.omegas)
    mag = np.abs(spec.values)
    neg = mag[om <= 0]
    pos = mag[(om > 0) & (om < np.pi)]
    neg_max = float(neg.max()) if neg.size else 0.0
    pos_max = float(pos.max()) if pos.size else 0.0
    ratio = neg_max / pos_max if pos_max > 0 else float("nan")
    return SpectrumReport(neg_max, pos_max, abs(_value_at_zero(spec)), ratio)


def harmonic_response(psa: Psa, profile: PhaseShiftProfile,
                      harmonics: Iterable[int]) -> List[Tuple[int, float]]:
    """Normalized PSA response to the k-th harmonic of the carrier.

    For each ``k`` returns ``(k, |sum_n c_n exp(1j k total_phase[n])| / F)``
    where ``F`` is the same quantity at ``k = 1``. For a nonlinear-reference
    PSA ``F = |sum(w)|``.
    """
    if len(psa) != profile.n_steps:
        raise LengthMismatch(f"{len(psa)}-step PSA against a {profile.n_steps}-step profile")
    tp = profile.total_phase
    c = psa.coefficients
    fundamental = abs(np.sum(c * np.exp(1j * tp)))
    if fundamental == 0:
        raise ZeroNormalizer("PSA has zero response at the fundamental")
    out = []
    for k in harmonics:
        k = int(k)
        if k == 0:
            raise ValueError("harmonic orders must be nonzero")
        out.append((k, float(abs(np.sum(c * np.exp(1j * k * tp))) / fundamental)))
    return out


def trapezoid_energy(spec: FtfSpectrum) -> float:
    """Trapezoid-rule integral of ``|H(w)|**2`` over the grid."""
    return float(np.trapezoid(np.abs(spec.values) ** 2, spec.omegas))
