"""Demodulation, spurious piston, phase-error sweeps and SNR.

A linear-reference PSA that satisfies both zero-leakage conditions on
nonlinear fringes still returns ``phi + piston`` with
``piston = arg(sum(d_n exp(1j*delta[n])))``. A nonlinear-reference PSA
under the same conditions returns ``phi`` exactly.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    LengthMismatch,
    LowAmplitude,
    NonpositiveInputs,
    NotLinearReference,
    ZeroSum,
)
from .fringe_model import (
    FringeParams,
    FringeSequence,
    NoiseModel,
    PhaseShiftProfile,
    _frozen,
    add_awgn,
    synthesize,
    wrap_phase,
)
from .psa_design import Psa

AMPLITUDE_FLOOR_RTOL = 1e-9
ZERO_SUM_TOL = 1e-12
MIN_PROBES = 16
MIN_TRIALS = 100
THREADS_ENV = "FRINGE_PSA_THREADS"


@dataclass(frozen=True)
class DemodResult:
    analytic: complex
    phase: float
    amplitude: float

    @classmethod
    def from_analytic(cls, z: complex) -> "DemodResult":
        z = complex(z)
        return cls(z, wrap_phase(np.angle(z)), abs(z))


@dataclass(frozen=True, eq=False)
class SweepResult:
    phis: np.ndarray
    errors: np.ndarray
    peak_abs_error: float


@dataclass(frozen=True)
class SnrReport:
    """Signal energy, filtered-noise energy and their ratio.

    ``noise_energy`` integrates the filtered density over [-pi, pi] without
    the ``1/(2 pi)`` factor, so it is ``2 pi`` times the variance of the
    noise in the analytic signal (``analytic_noise_variance``).
    """

    signal_energy: float
    noise_energy: float
    snr: float

    @property
    def analytic_noise_variance(self) -> float:
        return self.noise_energy / (2 * np.pi)

    @property
    def linearized_phase_variance(self) -> float:
        """Small-noise phase variance ``sigma_z**2 / (2 |A|**2)``."""
        return self.analytic_noise_variance / (2 * self.signal_energy)

    def as_dict(self):
        return {
            "signal_energy": self.signal_energy,
            "noise_energy": self.noise_energy,
            "snr": self.snr,
            "linearized_phase_variance": self.linearized_phase_variance,
        }


def _check_lengths(psa, n):
    if len(psa) != n:
        raise LengthMismatch(f"{len(psa)}-step PSA against {n} samples")


def demodulate(psa: Psa, fringes: FringeSequence,
               amplitude_floor: Optional[float] = None) -> DemodResult:
    """Apply ``psa`` to ``fringes``: analytic signal ``sum(c_n * I(n))``.

    Parameters
    ----------
    psa : Psa
    fringes : FringeSequence
    amplitude_floor : float, optional
        Smallest acceptable ``|analytic|``. Defaults to
        ``1e-9 * sum(|c_n|) * max(|I(n)|)``.

    Raises
    ------
    LowAmplitude
        If the analytic signal is below the floor, or the fringes were
        generated with zero modulation (no phase to recover, whatever the
        background leakage leaves in the sum).
    """
    samples = np.asarray(fringes.samples, dtype=float)
    _check_lengths(psa, len(samples))
    if fringes.params.modulation == 0:
        raise LowAmplitude("fringes have zero modulation; phase is undefined")
    z = complex(np.dot(psa.coefficients, samples))
    if amplitude_floor is None:
        amplitude_floor = AMPLITUDE_FLOOR_RTOL * np.sum(np.abs(psa.coefficients)) * np.max(np.abs(samples))
    # `not >=` so that a zero floor with a zero signal also raises
    if not abs(z) >= amplitude_floor or abs(z) == 0:
        raise LowAmplitude(f"analytic signal magnitude {abs(z):.3e} is below floor {amplitude_floor:.3e}")
    return DemodResult.from_analytic(z)


def _require_linear(psa: Psa):
    if not psa.is_linear or psa.d_complex is None:
        raise NotLinearReference("piston prediction needs a linear-reference PSA")


def predict_piston(psa: Psa, profile: PhaseShiftProfile) -> float:
    """Spurious piston ``arg(sum(d_n exp(1j*delta[n])))`` of a linear-reference PSA."""
    _require_linear(psa)
    _check_lengths(psa, profile.n_steps)
    s = np.sum(psa.d_complex * np.exp(1j * profile.delta))
    if abs(s) < ZERO_SUM_TOL * max(1.0, np.sum(np.abs(psa.d_complex))):
        raise ZeroSum("sum(d_n exp(i delta_n)) vanishes; piston undefined")
    return wrap_phase(np.angle(s))


def measure_piston(psa: Psa, profile: PhaseShiftProfile, params: FringeParams) -> float:
    """Phase offset actually produced on noiseless fringes, ``wrap(phase - phi)``."""
    _require_linear(psa)
    res = demodulate(psa, synthesize(profile, params))
    return wrap_phase(res.phase - params.phi)


def phase_error_sweep(psa: Psa, profile: PhaseShiftProfile, params: FringeParams,
                      n_probe: int = 256) -> SweepResult:
    """Demodulation error ``wrap(phi - phase)`` for ``phi`` uniform over [0, 2 pi].

    ``params`` supplies the background and modulation; its ``phi`` is
    ignored.
    """
    if n_probe < MIN_PROBES:
        raise ValueError(f"need at least {MIN_PROBES} probes, got {n_probe}")
    _check_lengths(psa, profile.n_steps)
    phis = np.linspace(0.0, 2 * np.pi, int(n_probe))
    errors = np.empty_like(phis)
    for i, phi in enumerate(phis):
        res = demodulate(psa, synthesize(profile, params.with_phi(phi)))
        errors[i] = wrap_phase(phi - res.phase)
    return SweepResult(_frozen(phis), _frozen(errors), float(np.max(np.abs(errors))))


def snr(psa: Psa, profile: PhaseShiftProfile, b: float, n0: float) -> SnrReport:
    """Signal-to-noise ratio of the analytic signal under white noise.

    The signal energy is ``(b/2)**2 |sum(d_n exp(-1j*delta[n]))|**2`` for a
    linear reference and ``(b/2)**2 (sum w_n)**2`` for a nonlinear one. The
    noise energy ``(n0/2) * integral |H|**2`` is evaluated exactly through
    Parseval as ``(n0/2) * 2 pi * sum |c_n|**2``.
    """
    if not (b > 0 and n0 > 0):
        raise NonpositiveInputs(f"b and n0 must be > 0, got b={b!r}, n0={n0!r}")
    _check_lengths(psa, profile.n_steps)
    if psa.is_linear:
        gain = abs(np.sum(psa.d_complex * np.exp(-1j * profile.delta)))
    else:
        gain = abs(np.sum(psa.coefficients * np.exp(1j * profile.total_phase)))
    signal = (b / 2) ** 2 * gain**2
    noise = (n0 / 2) * 2 * np.pi * float(np.sum(np.abs(psa.coefficients) ** 2))
    return SnrReport(float(signal), float(noise), float(signal / noise))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def trial_seeds(seed: int, trials: int) -> np.ndarray:
    """Independent per-trial 64-bit seeds derived from ``seed``."""
    return np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint64)


def monte_carlo_phase_variance(psa: Psa, profile: PhaseShiftProfile, params: FringeParams,
                               noise: NoiseModel, trials: int = 1000,
                               workers: Optional[int] = None) -> float:
    """Sample variance of demodulated-phase errors over independent noise draws.

    Trial ``t`` uses noise seeded with the ``t``-th seed of
    :func:`trial_seeds`, so the result does not depend on ``workers``.
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials, got {trials}")
    clean = synthesize(profile, params)
    seeds = trial_seeds(noise.seed, trials)

    def run(seed):
        noisy = add_awgn(clean, NoiseModel(noise.n0, int(seed)))
        return wrap_phase(demodulate(psa, noisy).phase - params.phi)

    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        errors = np.array([run(s) for s in seeds])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            errors = np.array(list(pool.map(run, seeds)))
    # centre on the circular mean so a bias near +-pi does not split the cloud
    centre = np.angle(np.mean(np.exp(1j * errors)))
    return float(np.var(wrap_phase(errors - centre), ddof=1))
