"""Null-curve matrix of Small's representation with ``g = tau``, and its
projection to the upper half-space model.

With ``p = sqrt(f')`` and ``q = f'' / (2 f'^(3/2))``::

    omega = [[p - f q,  f (1/p + tau q) - tau p],
             [-q,       1/p + tau q            ]]

has unit determinant.  The half-space point only depends on ``omega`` up to
sign, so the square-root branch is irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrix, ZeroDerivative
from .grid import Domain, HalfSpacePoint, SurfaceGrid, sample_grid

MIN_NORM2 = 1e-300


@dataclass(frozen=True)
class NullCurveMatrix:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def det(self):
        return self.alpha * self.delta - self.beta * self.gamma

    def __neg__(self):
        return NullCurveMatrix(-self.alpha, -self.beta, -self.gamma, -self.delta)

    def to_array(self):
        return np.array([[self.alpha, self.beta], [self.gamma, self.delta]])

    def hermitian(self):
        """``omega @ conj(omega).T``, the point in the hermitian model."""
        w = self.to_array()
        return w @ w.conj().T


def _entries(f, f1, f2, tau, sign=1.0):
    p = sign * np.sqrt(f1)
    q = f2 / (2 * f1 * p)
    inv_p = 1 / p
    alpha = p - f * q
    beta = f * (inv_p + tau * q) - tau * p
    gamma = -q
    delta = inv_p + tau * q
    return alpha, beta, gamma, delta


def small_matrix(fj, tau, sqrt_sign=1) -> NullCurveMatrix:
    """``sqrt_sign = -1`` selects the other branch of ``sqrt(f')``."""
    if abs(fj.d1) < 1e-14:
        raise ZeroDerivative(f"f'(tau) = {fj.d1!r} vanishes")
    entries = _entries(complex(fj.val), complex(fj.d1), complex(fj.d2), complex(tau),
                       float(sqrt_sign))
    return NullCurveMatrix(*map(complex, entries))


def _project(alpha, beta, gamma, delta):
    # rescale the bottom row so |gamma|^2 + |delta|^2 cannot overflow
    s = np.maximum(np.abs(gamma), np.abs(delta))
    with np.errstate(all="ignore"):
        gs, ds = gamma / s, delta / s
        norm2 = np.abs(gs) ** 2 + np.abs(ds) ** 2
        xy = (alpha * np.conj(gs) + beta * np.conj(ds)) / norm2 / s
        z = 1 / s / s / norm2
    return xy, z


def to_upper_half_space(w: NullCurveMatrix) -> HalfSpacePoint:
    """``x + iy = (alpha conj(gamma) + beta conj(delta)) / n``, ``z = 1/n``
    with ``n = |gamma|^2 + |delta|^2``."""
    s = max(abs(w.gamma), abs(w.delta))
    norm = s * np.hypot(abs(w.gamma) / s, abs(w.delta) / s) if s else 0.0
    if not np.isfinite(norm) or norm <= np.sqrt(MIN_NORM2):
        raise InvalidMatrix(f"cannot project: |gamma|^2 + |delta|^2 out of range ({w!r})")
    xy, z = _project(w.alpha, w.beta, w.gamma, w.delta)
    point = HalfSpacePoint(float(np.real(xy)), float(np.imag(xy)), float(z))
    if not all(np.isfinite(point)) or not point.z > 0:
        raise InvalidMatrix(f"projection of {w!r} overflows or underflows")
    return point


def small_kernel(f, f1, f2, tau):
    with np.errstate(all="ignore"):
        xy, z = _project(*_entries(f, f1, f2, tau))
    return np.stack([xy.real, xy.imag, z], axis=-1), ~(np.isfinite(z) & (z > 0))


def small_grid(e, domain: Domain) -> SurfaceGrid:
    return sample_grid(e, domain, small_kernel, "small")


def small_point(fj, tau) -> HalfSpacePoint:
    return to_upper_half_space(small_matrix(fj, tau))
