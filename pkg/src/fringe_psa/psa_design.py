"""Windows and phase-stepping algorithm (PSA) coefficient sets.

A PSA is a set of complex coefficients ``c_n`` and its analytic signal is
``sum(c_n * I(n))``. Demodulation always uses the conjugate reference:

* linear reference:    ``c_n = d_n * exp(-1j * omega0 * n)``
* nonlinear reference: ``c_n = w_n * exp(-1j * (omega0 * n + delta[n]))``

With the nonlinear reference locked to the fringe carrier, the wanted term
of the analytic signal is ``(b/2) * exp(1j*phi) * sum(w)`` with no extra
phase offset, provided the background and conjugate terms cancel.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    InfeasibleConstraints,
    InvalidOmega0,
    LengthMismatch,
    NonpositiveG,
    TooFewSteps,
)
from .fringe_model import MIN_STEPS, PhaseShiftProfile, _frozen

TYPICAL_MAX_G = 1.0
# singular values below this fraction of the largest count as zero
RANK_RTOL = 1e-10
FEASIBILITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Window:
    """Real weights ``w_n`` with a tag describing where they came from.

    ``kind`` is one of ``"square"``, ``"gaussian"``, ``"designed"`` or
    ``"custom"``. ``steep`` flags Gaussian windows with ``g >= 1``.
    """

    weights: np.ndarray
    kind: str = "custom"
    g: Optional[float] = None
    steep: bool = False

    def __len__(self):
        return len(self.weights)

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))


def square_window(n_steps: int) -> Window:
    if n_steps < MIN_STEPS:
        raise TooFewSteps(f"need at least {MIN_STEPS} steps, got {n_steps}")
    return Window(_frozen(np.ones(int(n_steps))), kind="square")


def gaussian_window(n_steps: int, g: float) -> Window:
    """Gaussian window ``exp(-g * (n - (N-1)/2)**2)``.

    Values of ``g`` at or above 1 are accepted but the window comes back
    with ``steep=True`` and a :class:`UserWarning` is issued, since such a
    window is nearly a single tap.
    """
    if n_steps < MIN_STEPS:
        raise TooFewSteps(f"need at least {MIN_STEPS} steps, got {n_steps}")
    g = float(g)
    if not g > 0:
        raise NonpositiveG(f"Gaussian sharpness must be > 0, got {g!r}")
    steep = g >= TYPICAL_MAX_G
    if steep:
        warnings.warn(f"Gaussian sharpness g={g} is outside the usual range g < 1", stacklevel=2)
    m = np.arange(n_steps) - 0.5 * (n_steps - 1)
    return Window(_frozen(np.exp(-g * m**2)), kind="gaussian", g=g, steep=steep)


def custom_window(weights: Sequence[float]) -> Window:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(w) < MIN_STEPS:
        raise TooFewSteps(f"need at least {MIN_STEPS} weights")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("custom window weights must be finite and nonnegative")
    return Window(_frozen(w), kind="custom")


@dataclass(frozen=True, eq=False)
class Psa:
    """Demodulation coefficients plus how they were built.

    ``reference_kind`` is ``"linear"`` or ``"nonlinear"``. Linear-reference
    PSAs keep their free coefficients in ``d_complex``; nonlinear-reference
    PSAs keep the profile whose carrier they follow.
    """

    coefficients: np.ndarray
    reference_kind: str
    omega0: float
    profile: Optional[PhaseShiftProfile] = None
    window: Optional[Window] = None
    d_complex: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.coefficients)

    @property
    def is_linear(self) -> bool:
        return self.reference_kind == "linear"

    def describe(self) -> str:
        win = self.window.kind if self.window is not None else "custom"
        return f"{self.reference_kind}-reference {len(self)}-step PSA, {win} window"


def build_nonlinear_psa(profile: PhaseShiftProfile, window: Window) -> Psa:
    if len(window) != profile.n_steps:
        raise LengthMismatch(f"{len(window)} weights for a {profile.n_steps}-step profile")
    c = window.weights * np.exp(-1j * profile.total_phase)
    return Psa(_frozen(c, complex), "nonlinear", profile.omega0, profile=profile, window=window)


def build_linear_psa(omega0: float, d, window: Optional[Window] = None) -> Psa:
    """Linear-reference PSA ``c_n = d_n * exp(-1j*omega0*n)``.

    ``d`` may be complex. Pass ``window`` only as provenance when ``d`` is a
    window's weights.
    """
    omega0 = float(omega0)
    if not 0.0 < omega0 < np.pi:
        raise InvalidOmega0(f"omega0={omega0!r} is outside (0, pi)")
    d = np.asarray(d, dtype=complex)
    if d.ndim != 1:
        raise LengthMismatch("d must be one-dimensional")
    c = d * np.exp(-1j * omega0 * np.arange(len(d)))
    return Psa(_frozen(c, complex), "linear", omega0, window=window, d_complex=_frozen(d, complex))


def zero_leakage_residuals(psa: Psa, profile: PhaseShiftProfile):
    """Background and conjugate-term sums that must vanish for clean demodulation.

    Expanding ``sum(c_n * I(n))`` for ``I = a + b cos(phi + total_phase)``
    gives ``a * dc + (b/2) e^{i phi} * gain + (b/2) e^{-i phi} * conj`` with
    ``dc = sum(c_n)`` and ``conj = sum(c_n * exp(-1j * total_phase[n]))``.

    For a linear reference these are ``sum(d_n exp(-i w0 n))`` and
    ``sum(d_n exp(-i(2 w0 n + delta_n)))``. For a nonlinear reference the
    conjugate sum is ``sum(w_n exp(-2i (w0 n + delta_n)))``: the nonlinearity
    enters twice because both reference and conjugate carrier follow it.

    Returns
    -------
    (complex, complex)
        ``(dc_residual, conjugate_residual)``.
    """
    if len(psa) != profile.n_steps:
        raise LengthMismatch(f"{len(psa)}-step PSA against a {profile.n_steps}-step profile")
    c = psa.coefficients
    dc = np.sum(c)
    conj = np.sum(c * np.exp(-1j * profile.total_phase))
    return complex(dc), complex(conj)


def _null_space(rows: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the null space of ``rows``."""
    _, s, vh = np.linalg.svd(rows)
    rank = int(np.sum(s > RANK_RTOL * s[0])) if s.size and s[0] > 0 else 0
    return vh[rank:].conj().T


def _project_ones(rows: np.ndarray, n_steps: int) -> np.ndarray:
    basis = _null_space(rows)
    ones = np.ones(n_steps)
    x = basis @ (basis.conj().T @ ones)
    if np.linalg.norm(x) <= FEASIBILITY_TOL * np.sqrt(n_steps):
        raise InfeasibleConstraints("projection of the flat window onto the constraint set is zero")
    return x


def _leakage_rows(profile: PhaseShiftProfile) -> np.ndarray:
    # real weights: each complex condition gives two real equations
    background = np.exp(-1j * profile.total_phase)
    conjugate = np.exp(-2j * profile.total_phase)
    return np.vstack([background.real, background.imag, conjugate.real, conjugate.imag])


def design_window(profile: PhaseShiftProfile, n_steps: Optional[int] = None) -> Window:
    """Real window that kills both leakage terms of the nonlinear-reference PSA.

    The result is the orthogonal projection of the flat window onto the set
    of real weights satisfying both zero-leakage conditions, rescaled so its
    largest weight is 1. Four real constraints need at least five weights;
    shorter profiles are only accepted when the flat window already works.

    Raises
    ------
    TooFewSteps
        ``n_steps < 5`` and the flat window is not already feasible.
    InfeasibleConstraints
        The flat window is orthogonal to the feasible set.
    """
    if n_steps is None:
        n_steps = profile.n_steps
    if n_steps != profile.n_steps:
        raise LengthMismatch(f"n_steps={n_steps} does not match the {profile.n_steps}-step profile")
    rows = _leakage_rows(profile)
    if n_steps < 5:
        if np.max(np.abs(rows @ np.ones(n_steps))) < FEASIBILITY_TOL * n_steps:
            return Window(_frozen(np.ones(n_steps)), kind="designed")
        raise TooFewSteps("designing a window needs at least 5 steps")
    w = _project_ones(rows, n_steps)
    w = w / np.max(np.abs(w))
    if w.sum() < 0:
        w = -w
    return Window(_frozen(w), kind="designed")


def design_linear_reference(profile: PhaseShiftProfile) -> Psa:
    """Linear-reference PSA whose complex ``d`` cancels both leakage terms.

    Same construction as :func:`design_window` but over complex ``d``; the
    two conditions are the background sum ``sum(d exp(-i w0 n))`` and the
    conjugate sum ``sum(d exp(-i(2 w0 n + delta)))``. Such a PSA still
    carries a spurious piston ``arg(sum(d exp(i delta)))``.
    """
    n = profile.n
    rows = np.vstack([
        np.exp(-1j * profile.omega0 * n),
        np.exp(-1j * (2 * profile.omega0 * n + profile.delta)),
    ])
    d = _project_ones(rows, profile.n_steps)
    d = d / np.max(np.abs(d))
    return build_linear_psa(profile.omega0, d)
