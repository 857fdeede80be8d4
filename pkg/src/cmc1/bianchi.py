"""Explicit CMC-1 surface in the upper half-space from a holomorphic ``f``.

With ``D = |f'|^2 + Re(f' conj(f'') conj(tau)) + |f''|^2 (|tau|^2 + 1) / 4``::

    x + i y = f - (|f'|^2 f' tau + (1 + |tau|^2)/2 * f'^2 conj(f'')) / D
    z       = |f'|^3 / D

This is the "-" envelope of the Calò congruence ``[(Re f, Im f, R), R]``;
:func:`bicalo_via_congruence` recomputes it along that route.
"""

from __future__ import annotations

import numpy as np

from .congruence import calo_congruence_sample, envelope, radius_partials
from .errors import ZeroDerivative
from .grid import (
    Domain,
    HalfSpacePoint,
    SurfaceGrid,
    degeneracy_classify,
    sample_grid,
)

__all__ = [
    "bicalo_denominator",
    "bianchi_calo_point",
    "bicalo_grid",
    "bicalo_via_congruence",
    "degeneracy_classify",
    "denominator_identity_residual",
]


def _denominator(f1, f2, tau):
    return (np.abs(f1) ** 2 + (f1 * np.conj(f2) * np.conj(tau)).real
            + np.abs(f2) ** 2 * (np.abs(tau) ** 2 + 1) / 4)


def bicalo_kernel(f, f1, f2, tau):
    """Array form of the parametrization; returns ``(xyz, bad)``."""
    D = _denominator(f1, f2, tau)
    m2 = np.abs(f1) ** 2
    w = m2 * (f1 * tau) + (1 + np.abs(tau) ** 2) / 2 * (f1 * f1 * np.conj(f2))
    xy = f - w / D
    z = np.abs(f1) ** 3 / D
    return np.stack([xy.real, xy.imag, z], axis=-1), ~(D > 0)


def bicalo_denominator(fj, tau) -> float:
    """Denominator ``D``; equals ``(|f'|^2 + |grad R|^2) / (1 + |tau|^2)``."""
    return float(_denominator(fj.d1, fj.d2, complex(tau)))


def denominator_identity_residual(fj, tau) -> float:
    """``|D (1 + |tau|^2) - (|f'|^2 + |grad R|^2)|`` with the radius gradient
    taken from the congruence side."""
    tau = complex(tau)
    R_u, R_v = radius_partials(fj, tau)
    lhs = bicalo_denominator(fj, tau) * (1 + abs(tau) ** 2)
    return abs(lhs - (abs(fj.d1) ** 2 + R_u**2 + R_v**2))


def bianchi_calo_point(fj, tau) -> HalfSpacePoint:
    if abs(fj.d1) < 1e-14:
        raise ZeroDerivative(f"f'(tau) = {fj.d1!r} vanishes")
    xyz, _ = bicalo_kernel(complex(fj.val), complex(fj.d1), complex(fj.d2), complex(tau))
    return HalfSpacePoint(*map(float, xyz))


def bicalo_grid(e, domain: Domain) -> SurfaceGrid:
    return sample_grid(e, domain, bicalo_kernel, "bianchi")


def bicalo_via_congruence(e, tau, branch=0.0) -> HalfSpacePoint:
    """The "-" envelope of the Calò congruence, computed from first principles."""
    s = calo_congruence_sample(e, tau, "support", branch)
    return HalfSpacePoint(*map(float, envelope(s, "-")))
