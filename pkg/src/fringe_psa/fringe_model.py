"""Phase-shift profiles, fringe synthesis and additive white Gaussian noise.

Samples are taken at integer instants ``t = n`` for ``n = 0 .. N-1``. The
carrier phase at sample ``n`` is ``omega0 * n + delta[n]`` where ``delta`` is
the phase-shifter nonlinearity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    DerivativeOutOfRange,
    InvalidOmega0,
    InvalidParams,
    LengthMismatch,
    NegativeDensity,
    TooFewSteps,
)

MIN_STEPS = 3

DeltaSpec = Union[None, Polynomial, Sequence[float], np.ndarray]


def wrap_phase(x):
    """Wrap angles to the half-open interval (-pi, pi]."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def quadratic(epsilon2: float) -> Polynomial:
    """Nonlinearity ``epsilon2 * n**2``, the usual open-loop piezo model."""
    return Polynomial([0.0, 0.0, float(epsilon2)])


@dataclass(frozen=True, eq=False)
class PhaseShiftProfile:
    """Sampled carrier phase ``omega0*n + delta[n]``.

    Build instances with :func:`make_profile`, which runs the validity checks.
    ``delta`` is always held as explicit samples with ``delta[0] == 0``.
    """

    n_steps: int
    omega0: float
    delta: np.ndarray
    total_phase: np.ndarray

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_steps)

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.total_phase)

    @property
    def is_linear(self) -> bool:
        return not np.any(self.delta)


def make_profile(omega0: float, delta_spec: DeltaSpec, n_steps: int) -> PhaseShiftProfile:
    """Build and validate a phase-shift profile.

    Parameters
    ----------
    omega0 : float
        Linear carrier frequency in rad/sample, must lie in (0, pi).
    delta_spec : Polynomial, sequence of float or None
        Either a polynomial in ``n`` (see :func:`quadratic`) or ``n_steps``
        tabulated samples. ``None`` means a purely linear carrier.
    n_steps : int
        Number of temporal samples ``N``.

    Returns
    -------
    PhaseShiftProfile

    Raises
    ------
    InvalidOmega0
        If ``omega0`` is outside (0, pi).
    DerivativeOutOfRange
        If some increment ``total_phase[n+1] - total_phase[n]`` is not in
        the open interval (0, pi). The offending index is on the exception.
    LengthMismatch
        If tabulated samples do not have ``n_steps`` entries.
    """
    n_steps = int(n_steps)
    if n_steps < MIN_STEPS:
        raise TooFewSteps(f"need at least {MIN_STEPS} steps, got {n_steps}")
    omega0 = float(omega0)
    if not 0.0 < omega0 < np.pi:
        raise InvalidOmega0(f"omega0={omega0!r} is outside (0, pi)")

    n = np.arange(n_steps, dtype=float)
    if delta_spec is None:
        delta = np.zeros(n_steps)
    elif isinstance(delta_spec, Polynomial):
        delta = delta_spec(n)
    else:
        delta = np.asarray(delta_spec, dtype=float)
        if delta.shape != (n_steps,):
            raise LengthMismatch(
                f"expected {n_steps} nonlinearity samples, got shape {delta.shape}"
            )
    if not np.all(np.isfinite(delta)):
        raise InvalidParams("nonlinearity samples must be finite")
    # a constant offset in delta is indistinguishable from the measured phase
    delta = delta - delta[0]
    total = omega0 * n + delta

    inc = np.diff(total)
    bad = np.flatnonzero(~((inc > 0.0) & (inc < np.pi)))
    if bad.size:
        raise DerivativeOutOfRange(bad[0], inc[bad[0]])

    return PhaseShiftProfile(
        n_steps=n_steps,
        omega0=omega0,
        delta=_frozen(delta),
        total_phase=_frozen(total),
    )


@dataclass(frozen=True)
class FringeParams:
    """Background ``a``, modulation ``b`` and measured phase ``phi``.

    ``phi`` may be given unwrapped; it is stored wrapped to (-pi, pi].
    """

    background: float = 1.0
    modulation: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        a, b = float(self.background), float(self.modulation)
        if not (np.isfinite(a) and np.isfinite(b) and np.isfinite(self.phi)):
            raise InvalidParams("fringe parameters must be finite")
        if a < 0 or b < 0:
            raise InvalidParams(f"background and modulation must be >= 0, got a={a}, b={b}")
        object.__setattr__(self, "background", a)
        object.__setattr__(self, "modulation", b)
        object.__setattr__(self, "phi", wrap_phase(self.phi))

    def with_phi(self, phi: float) -> "FringeParams":
        return FringeParams(self.background, self.modulation, phi)


@dataclass(frozen=True)
class NoiseModel:
    """White Gaussian noise of flat two-sided density ``n0 / 2``.

    The per-sample variance is ``n0 / 2``. Samples are drawn from numpy's
    PCG64 generator seeded with ``seed``, so a given seed always reproduces
    the same noise on a given numpy version.
    """

    n0: float
    seed: int = 0

    def __post_init__(self):
        if not self.n0 >= 0:
            raise NegativeDensity(f"noise density must be >= 0, got {self.n0!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParams("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "n0", float(self.n0))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def variance(self) -> float:
        return self.n0 / 2.0


@dataclass(frozen=True, eq=False)
class FringeSequence:
    samples: np.ndarray
    profile: PhaseShiftProfile
    params: FringeParams
    noise: Optional[NoiseModel] = field(default=None)

    def __post_init__(self):
        if len(self.samples) != self.profile.n_steps:
            raise LengthMismatch(
                f"{len(self.samples)} samples for a {self.profile.n_steps}-step profile"
            )

    def __len__(self):
        return len(self.samples)


def synthesize(profile: PhaseShiftProfile, params: FringeParams) -> FringeSequence:
    """Noiseless fringes ``a + b*cos(phi + total_phase[n])``."""
    samples = params.background + params.modulation * np.cos(params.phi + profile.total_phase)
    return FringeSequence(_frozen(samples), profile, params)


def add_awgn(fringes: FringeSequence, noise: NoiseModel) -> FringeSequence:
    """Return a copy of ``fringes`` with seeded white Gaussian noise added.

    The input sequence is left untouched. With ``noise.n0 == 0`` the samples
    are returned unchanged.
    """
    if not noise.n0 >= 0:
        raise NegativeDensity(f"noise density must be >= 0, got {noise.n0!r}")
    if noise.n0 == 0:
        samples = fringes.samples
    else:
        rng = np.random.default_rng(noise.seed)
        samples = fringes.samples + rng.normal(0.0, np.sqrt(noise.variance), len(fringes))
    return FringeSequence(_frozen(samples), fringes.profile, fringes.params, noise)
