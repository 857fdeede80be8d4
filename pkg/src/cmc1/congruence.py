"""Sphere congruences with their envelopes, plus the Calò isometric pair.

A congruence ``[X, R]`` is a two-parameter family of spheres with centers on
the surface ``X(u, v)`` and radii ``R(u, v)``.  Its envelopes are

    xi = X - R * (Delta(X, R) +/- sqrt(1 - |grad R|^2) * N)

where ``Delta(X, R)`` is the surface gradient of ``R`` and ``|grad R|^2`` is
measured in the metric of ``X``.

From a holomorphic ``f`` the Calò pair consists of the support surface
``S = (Re f, Im f, R)`` and the rolled surface
``S~ = |f'| (u, v, (|tau|^2 - 1) / 2)`` with ``R = (1 + |tau|^2) |f'| / 2``.
The two are isometric, ``|S~| = R``, and the "+" envelope of ``[S, R]`` is the
plane ``z = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateChart, NoRealEnvelope, ZeroDerivative
from .expr import eval_jet

ZERO_DERIVATIVE_TOL = 1e-14
DEGENERATE_TOL = 1e-14
TANGENCY_BAND = 1e-12


@dataclass(frozen=True)
class CongruenceSample:
    """Center and radius with their first partials at one parameter value."""

    X: np.ndarray
    X_u: np.ndarray
    X_v: np.ndarray
    R: float
    R_u: float
    R_v: float

    @classmethod
    def of(cls, X, X_u, X_v, R, R_u, R_v):
        vec = lambda a: np.asarray(a, dtype=float).reshape(3)  # noqa: E731
        return cls(vec(X), vec(X_u), vec(X_v), float(R), float(R_u), float(R_v))


class MetricData(NamedTuple):
    g11: float
    g12: float
    g22: float
    A11: float
    A12: float
    A22: float
    N: np.ndarray


class BeltramiAngles(NamedTuple):
    cos_omega1: float
    cos_omega2: float
    cos_sigma: float


class CaloPairSample(NamedTuple):
    tau: complex
    S_tilde: np.ndarray
    S: np.ndarray
    R: float


def metric_data(s: CongruenceSample) -> MetricData:
    """First fundamental form of the surface of centers with its inverse.

    Also returns the unit normal ``X_u x X_v / |X_u x X_v|``.
    """
    cross = np.cross(s.X_u, s.X_v)
    area = np.linalg.norm(cross)
    scale = np.linalg.norm(s.X_u) * np.linalg.norm(s.X_v)
    if not area > DEGENERATE_TOL * scale or scale == 0:
        raise DegenerateChart("surface of centers is singular: X_u and X_v are parallel")
    g11 = s.X_u @ s.X_u
    g12 = s.X_u @ s.X_v
    g22 = s.X_v @ s.X_v
    det = g11 * g22 - g12 * g12
    return MetricData(g11, g12, g22, g22 / det, -g12 / det, g11 / det, cross / area)


def gradient_squared(s: CongruenceSample, md: MetricData | None = None) -> float:
    """``|grad R|^2`` in the metric of the surface of centers."""
    md = md or metric_data(s)
    return s.R_u**2 * md.A11 + 2 * s.R_u * s.R_v * md.A12 + s.R_v**2 * md.A22


def radius_gradient(s: CongruenceSample, md: MetricData | None = None) -> np.ndarray:
    """Tangent vector ``Delta(X, R)``, the surface gradient of ``R``."""
    md = md or metric_data(s)
    a = md.A11 * s.R_u + md.A12 * s.R_v
    b = md.A12 * s.R_u + md.A22 * s.R_v
    return a * s.X_u + b * s.X_v


def _normal_component(s, md):
    d1 = gradient_squared(s, md)
    if d1 > 1 + TANGENCY_BAND:
        raise NoRealEnvelope(f"|grad R|^2 = {d1!r} exceeds 1")
    return np.sqrt(max(0.0, 1.0 - d1))


def _sign(sign):
    if sign in ("+", 1):
        return 1.0
    if sign in ("-", -1):
        return -1.0
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def envelope(s: CongruenceSample, sign) -> np.ndarray:
    """Point of the envelope selected by ``sign`` ("+" or "-").

    For a Calò congruence "+" is the plane ``z = 0`` and "-" is the CMC-1
    surface.  Raises NoRealEnvelope when ``|grad R|^2 > 1``.
    """
    md = metric_data(s)
    c = _normal_component(s, md)
    return s.X - s.R * (radius_gradient(s, md) + _sign(sign) * c * md.N)


def beltrami_angles(s: CongruenceSample) -> BeltramiAngles:
    """Cosines of the angles between the unit vector toward the "+" envelope
    contact point and ``X_u``, ``X_v``, ``N``."""
    md = metric_data(s)
    c = _normal_component(s, md)
    return BeltramiAngles(s.R_u / np.sqrt(md.g11), s.R_v / np.sqrt(md.g22), c)


def calo_radius(fj, tau) -> float:
    return (1 + abs(tau) ** 2) / 2 * abs(fj.d1)


def _require_derivative(fj):
    if abs(fj.d1) < ZERO_DERIVATIVE_TOL:
        raise ZeroDerivative(f"f'(tau) = {fj.d1!r} vanishes")


def rolled_point(fj, tau) -> np.ndarray:
    m = abs(fj.d1)
    return m * np.array([tau.real, tau.imag, (abs(tau) ** 2 - 1) / 2])


def support_point(fj, tau) -> np.ndarray:
    return np.array([fj.val.real, fj.val.imag, calo_radius(fj, tau)])


def calo_pair(fj, tau) -> CaloPairSample:
    """Rolled surface ``S~`` and support surface ``S`` at ``tau``."""
    _require_derivative(fj)
    tau = complex(tau)
    return CaloPairSample(tau, rolled_point(fj, tau), support_point(fj, tau),
                          calo_radius(fj, tau))


def radius_partials(fj, tau):
    """``(R_u, R_v)`` of the Calò radius, from the jet of ``f``."""
    m = abs(fj.d1)
    w = fj.d1 * np.conj(fj.d2)
    k = (1 + abs(tau) ** 2) / (2 * m)
    return tau.real * m + k * w.real, tau.imag * m + k * w.imag


def fd_step(tau) -> float:
    return 1e-6 * (1 + abs(tau))


def surface_partials(point, tau, h=None):
    """Central differences of ``point(tau)`` along ``u`` and ``v``."""
    h = fd_step(tau) if h is None else h
    du = (point(tau + h) - point(tau - h)) / (2 * h)
    dv = (point(tau + 1j * h) - point(tau - 1j * h)) / (2 * h)
    return du, dv


def calo_congruence_sample(e, tau, which="support", branch=0.0) -> CongruenceSample:
    """Congruence ``[S, R]`` ("support") or ``[S~, R]`` ("rolled") at ``tau``.

    Support partials are exact (Cauchy-Riemann plus the jet of ``f``); the
    rolled surface involves ``|f'|``, so its partials are central differences.
    """
    tau = complex(tau)
    fj = eval_jet(e, tau, branch)
    _require_derivative(fj)
    R = calo_radius(fj, tau)
    R_u, R_v = radius_partials(fj, tau)
    if which == "support":
        d = fj.d1
        return CongruenceSample.of(support_point(fj, tau), (d.real, d.imag, R_u),
                                   (-d.imag, d.real, R_v), R, R_u, R_v)
    if which == "rolled":
        point = lambda t: rolled_point(eval_jet(e, t, branch), t)  # noqa: E731
        X_u, X_v = surface_partials(point, tau)
        return CongruenceSample.of(rolled_point(fj, tau), X_u, X_v, R, R_u, R_v)
    raise ValueError(f"which must be 'support' or 'rolled', got {which!r}")


def first_form(point, tau, h=None):
    """``(E, F, G)`` of a parametrized surface by central differences."""
    du, dv = surface_partials(point, tau, h)
    return np.array([du @ du, du @ dv, dv @ dv])


def projection_metric_defect(e, tau, branch=0.0, h=None) -> float:
    """Conformality defect of the central projection of the rolled surface.

    The metric of ``R * S~/|S~|`` (that is, ``R^2`` times the round metric
    pulled back by the central projection) must be ``|f'|^2 (du^2 + dv^2)``,
    the metric of the orthogonal projection of the support surface.  Returns
    ``max(|m12|, |m11 - m22|) / mean(m11, m22)``.
    """
    tau = complex(tau)
    R = calo_radius(eval_jet(e, tau, branch), tau)

    def direction(t):
        p = rolled_point(eval_jet(e, t, branch), t)
        return p / np.linalg.norm(p)

    m11, m12, m22 = R**2 * first_form(direction, tau, h)
    mean = (m11 + m22) / 2
    return max(abs(m12), abs(m11 - m22)) / mean
