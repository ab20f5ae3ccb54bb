"""Numerics for the quadratic Szego equation on the circle.

States are 1-D complex numpy arrays of nonnegative Fourier modes.
"""

import json

from ._core import (
    SzegoError,
    TravelingWaveSpec,
    build_profile,
    build_steady,
    compose_zN,
    conserved,
    evaluate,
    functional_j,
    h2_eigenvalues,
    integrate,
    is_steady,
    k2_eigenvalues,
    residual_traveling,
    rhs,
    standing_wave_arc,
    v3_derive,
    v3_embed,
    v3_rhs,
    verify_flow_commutation,
    verify_standing,
)
from . import _core


def spectral_report(u, tol=1e-10):
    return json.loads(_core._spectral_report(u, tol))


def verify_lax(u, block=64):
    return json.loads(_core._verify_lax(u, block))


def verify_au_minus_d(u, varpi, tol=1e-8):
    return json.loads(_core._verify_au_minus_d(u, varpi, tol))


def instability_probe(r=0.25, gamma=1e-2, dt=1e-4, t_final=50.0):
    return json.loads(_core._instability_probe(r, gamma, dt, t_final))


def steady_grid(n=50):
    return json.loads(_core._steady_grid(n))


def gn_sweep(samples=10000, equality=100, seed=42, max_trunc=32):
    return json.loads(_core._gn_sweep(samples, equality, seed, max_trunc))


def certify(quick=True, seed=42):
    """Acceptance criteria as a list of {"id", "name", "pass", "detail", "metrics"}."""
    return json.loads(_core._certify(quick, seed))


__all__ = [
    "SzegoError",
    "TravelingWaveSpec",
    "build_profile",
    "build_steady",
    "certify",
    "compose_zN",
    "conserved",
    "evaluate",
    "functional_j",
    "gn_sweep",
    "h2_eigenvalues",
    "instability_probe",
    "integrate",
    "is_steady",
    "k2_eigenvalues",
    "residual_traveling",
    "rhs",
    "spectral_report",
    "standing_wave_arc",
    "steady_grid",
    "v3_derive",
    "v3_embed",
    "v3_rhs",
    "verify_au_minus_d",
    "verify_flow_commutation",
    "verify_lax",
    "verify_standing",
]
