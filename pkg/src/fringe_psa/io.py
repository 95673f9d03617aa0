"""CSV import/export with round-trip float formatting."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .fringe_model import FringeParams, FringeSequence, _frozen, make_profile

PROFILE_COLUMNS = ("n", "delta", "total_phase", "intensity")
PSA_COLUMNS = ("n", "weight", "re_c", "im_c")
SPECTRUM_COLUMNS = ("omega", "re", "im", "abs")
SWEEP_COLUMNS = ("phi", "error")


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_rows(path, header, rows):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def write_fringes_csv(path, fringes: FringeSequence):
    p = fringes.profile
    rows = zip(range(p.n_steps), p.delta, p.total_phase, fringes.samples)
    return write_rows(path, PROFILE_COLUMNS, rows)


def read_fringes_csv(path, omega0: float, params: FringeParams = FringeParams()) -> FringeSequence:
    """Load a fringe CSV written by :func:`write_fringes_csv`.

    The profile is rebuilt from the ``delta`` column, so it goes through the
    usual validation. ``omega0`` is not stored in the file.
    """
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != PROFILE_COLUMNS:
            raise ValueError(f"expected columns {PROFILE_COLUMNS}, got {reader.fieldnames}")
        rows = list(reader)
    delta = [float(r["delta"]) for r in rows]
    samples = [float(r["intensity"]) for r in rows]
    profile = make_profile(omega0, delta, len(rows))
    return FringeSequence(_frozen(samples), profile, params)


def write_psa_csv(path, psa):
    c = psa.coefficients
    if psa.is_linear:
        weights = np.abs(psa.d_complex)
    else:
        weights = (c * np.exp(1j * psa.profile.total_phase)).real
    rows = zip(range(len(c)), weights, c.real, c.imag)
    return write_rows(path, PSA_COLUMNS, rows)


def write_spectrum_csv(path, spec):
    v = spec.values
    return write_rows(path, SPECTRUM_COLUMNS, zip(spec.omegas, v.real, v.imag, np.abs(v)))


def write_sweep_csv(path, sweep):
    return write_rows(path, SWEEP_COLUMNS, zip(sweep.phis, sweep.errors))
