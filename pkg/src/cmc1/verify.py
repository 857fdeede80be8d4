"""Finite-difference differential geometry on surface grids.

Everything here differentiates sampled points, never the analytic jets used to
generate them.  Conventions:

* ``H_euclid = (G L - 2 F M + E N) / (2 (E G - F^2))`` with ``L = X_uu . n``
  etc., so a round sphere with inward normal has ``H_euclid = +1``.
* In the upper half-space model ``H_hyp = z H_euclid + n_z``; of the two
  orientations the one with ``H_hyp >= 0`` is reported.
* The hyperbolic Gauss map sends a point to the ideal endpoint of the
  geodesic leaving it along the oriented normal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bianchi import bicalo_kernel
from .errors import BoundaryNode, DegenerateChart, EmptyGrid, VerticalEscape
from .expr import eval_jet_masked
from .grid import (
    HalfSpacePoint,
    SurfaceGrid,
    degeneracy_classify,
    degenerate_message,
    immersed_mask,
    stencil_ok,
)
from .small import small_kernel

KERNELS = {"bianchi": bicalo_kernel, "small": small_kernel}


@dataclass(frozen=True)
class FormsSample:
    E: float
    F: float
    G: float
    L: float
    M: float
    N2: float
    normal: np.ndarray
    H_euclid: float


@dataclass(frozen=True)
class Tolerances:
    h: float = 5e-4
    gauss: float = 1e-6
    conformality: float = 1e-4
    equivalence: float = 1e-9


@dataclass
class CheckResult:
    name: str
    max_residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.max_residual < self.tolerance)

    def to_dict(self):
        return {"name": self.name, "max_residual": self.max_residual,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class VerificationReport:
    grid_id: str
    max_h_deviation: float
    max_gauss_residual: float
    max_conformality_defect: float
    holes: int
    interior_nodes: int
    checks: list = field(default_factory=list)
    max_h_deviation_plain: float = float("nan")

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


# -- stencils ----------------------------------------------------------------

def _shift(P, a, b):
    """``P[i + a, j + b]`` with NaN where the index leaves the grid."""
    out = np.full_like(P, np.nan)
    n0, n1 = P.shape[:2]
    src0 = slice(max(a, 0), n0 + min(a, 0))
    dst0 = slice(max(-a, 0), n0 + min(-a, 0))
    src1 = slice(max(b, 0), n1 + min(b, 0))
    dst1 = slice(max(-b, 0), n1 + min(-b, 0))
    out[dst0, dst1] = P[src0, src1]
    return out


def _forms(points, spacing, stride=1):
    """Arrays ``(E, F, G, L, M, N2, n, H_euclid)`` over the whole grid using
    3-point stencils of width ``stride``; NaN where a stencil is incomplete."""
    hr, ht = spacing[0] * stride, spacing[1] * stride
    s = stride
    P = points
    Pr1, Pr0 = _shift(P, s, 0), _shift(P, -s, 0)
    Pt1, Pt0 = _shift(P, 0, s), _shift(P, 0, -s)
    X_r = (Pr1 - Pr0) / (2 * hr)
    X_t = (Pt1 - Pt0) / (2 * ht)
    X_rr = (Pr1 - 2 * P + Pr0) / hr**2
    X_tt = (Pt1 - 2 * P + Pt0) / ht**2
    X_rt = (_shift(P, s, s) - _shift(P, s, -s) - _shift(P, -s, s)
            + _shift(P, -s, -s)) / (4 * hr * ht)
    with np.errstate(all="ignore"):
        n = np.cross(X_r, X_t)
        n = n / np.linalg.norm(n, axis=-1, keepdims=True)
        E = np.einsum("...k,...k", X_r, X_r)
        F = np.einsum("...k,...k", X_r, X_t)
        G = np.einsum("...k,...k", X_t, X_t)
        L = np.einsum("...k,...k", X_rr, n)
        M = np.einsum("...k,...k", X_rt, n)
        N2 = np.einsum("...k,...k", X_tt, n)
        H = (G * L - 2 * F * M + E * N2) / (2 * (E * G - F * F))
    return E, F, G, L, M, N2, n, H


def fundamental_forms(g: SurfaceGrid, node, stride=1) -> FormsSample:
    """First and second fundamental forms at an interior node of ``g``.

    Partials are taken along the grid coordinates ``(r, theta)``.  Raises
    BoundaryNode when the stencil block touches the edge or a hole.
    """
    i, j = node
    if not stencil_ok(g.holes, stride)[i, j]:
        raise BoundaryNode(f"node {node} lacks a full stencil of reach {stride}")
    lo0, lo1 = i - stride, j - stride
    block = g.points[lo0:i + stride + 1, lo1:j + stride + 1]
    E, F, G, L, M, N2, n, H = (a[stride, stride] for a in _forms(block, g.domain.spacing, stride))
    if not E * G - F * F > 0:
        raise DegenerateChart(f"E G - F^2 <= 0 at node {node}")
    return FormsSample(float(E), float(F), float(G), float(L), float(M), float(N2),
                       np.array(n, dtype=float), float(H))


def _signed_h(z, H_euclid, n):
    return z * H_euclid + n[..., 2]


def hyperbolic_mean_curvature(fs: FormsSample, z: float) -> float:
    return abs(_signed_h(z, fs.H_euclid, fs.normal))


def cmc_normal(fs: FormsSample, z: float) -> np.ndarray:
    """The unit normal for which ``H_hyp >= 0``."""
    return fs.normal if _signed_h(z, fs.H_euclid, fs.normal) >= 0 else -fs.normal


def hyperbolic_gauss_map(p: HalfSpacePoint, n) -> complex:
    """Ideal endpoint of the geodesic leaving ``p`` in Euclidean direction ``n``."""
    x, y, z = p
    nx, ny, nz = (float(c) for c in n)
    if nz >= 1 - 1e-12:
        raise VerticalEscape("normal points straight up: endpoint at infinity")
    return complex(x, y) + z * complex(nx, ny) / (1 - nz)


def _gauss_arrays(points, n):
    with np.errstate(all="ignore"):
        return (points[..., 0] + 1j * points[..., 1]
                + points[..., 2] * (n[..., 0] + 1j * n[..., 1]) / (1 - n[..., 2]))


# -- grid fields -------------------------------------------------------------

def mean_curvature_field(g: SurfaceGrid, extrapolate=True):
    """``(H_hyp, n)`` at every node, NaN where the stencil is incomplete.

    With ``extrapolate`` the widths-1 and -2 estimates are combined as
    ``(4 H_1 - H_2) / 3``, cancelling the leading ``h^2`` error term; ``n``
    is likewise extrapolated.  Returned normals are oriented so that
    ``H_hyp >= 0``.
    """
    P = np.where(g.holes[..., None], np.nan, g.points)
    z = P[..., 2]
    *_, n1, He1 = _forms(P, g.domain.spacing, 1)
    H = _signed_h(z, He1, n1)
    n = n1
    if extrapolate:
        *_, n2, He2 = _forms(P, g.domain.spacing, 2)
        H = (4 * H - _signed_h(z, He2, n2)) / 3
        n = (4 * n1 - n2) / 3
        with np.errstate(all="ignore"):
            n = n / np.linalg.norm(n, axis=-1, keepdims=True)
    sign = np.where(H < 0, -1.0, 1.0)
    return H * sign, n * sign[..., None]


def interior_mask(g: SurfaceGrid, reach=2):
    """Non-hole nodes with a full stencil of ``reach`` and rank-2 Jacobian."""
    return stencil_ok(g.holes, reach) & immersed_mask(g)


def _require_immersed(g):
    if degeneracy_classify(g) == "point_degenerate":
        raise EmptyGrid(degenerate_message(g))
    mask = interior_mask(g)
    if not mask.any():
        raise EmptyGrid("no immersed interior nodes")
    return mask


def gauss_map_field(g: SurfaceGrid, normals=None):
    """Hyperbolic Gauss map at every node from grid normals (NaN elsewhere)."""
    if normals is None:
        _, normals = mean_curvature_field(g)
    P = np.where(g.holes[..., None], np.nan, g.points)
    return _gauss_arrays(P, normals)


def local_gauss_map(g: SurfaceGrid, e, mask, step=1e-5):
    """Gauss map at ``mask`` nodes with normals from fine central differences
    of the surface map itself (step ``step (1 + |tau|)`` in ``u`` and ``v``).

    Orientation follows the grid's CMC-1 normal.
    """
    kernel = KERNELS[g.method]
    tau = g.tau[mask]
    theta = np.broadcast_to(g.theta, g.shape)[mask]
    h = step * (1 + np.abs(tau))

    def surface(t):
        jet, _ = eval_jet_masked(e, t, branch=theta)
        with np.errstate(all="ignore"):
            xyz, _ = kernel(jet.val, jet.d1, jet.d2, t)
        return xyz

    X_u = (surface(tau + h) - surface(tau - h)) / (2 * h)[:, None]
    X_v = (surface(tau + 1j * h) - surface(tau - 1j * h)) / (2 * h)[:, None]
    n = np.cross(X_u, X_v)
    n /= np.linalg.norm(n, axis=-1, keepdims=True)
    _, grid_n = mean_curvature_field(g, extrapolate=False)
    flip = np.einsum("ik,ik->i", n, grid_n[mask]) < 0
    n[flip] *= -1
    return _gauss_arrays(g.points[mask], n)


def _reference_values(g, reference):
    if callable(reference):
        return np.vectorize(reference, otypes=[complex])(g.tau)
    return np.asarray(reference, dtype=complex)


def _cr(W, g):
    """Discrete Cauchy-Riemann residual ``W_theta - i r W_r`` and the local
    derivative scale ``|W_theta| + r |W_r|``."""
    hr, ht = g.domain.spacing
    r = g.r[:, None]
    W_r = (_shift(W, 1, 0) - _shift(W, -1, 0)) / (2 * hr)
    W_t = (_shift(W, 0, 1) - _shift(W, 0, -1)) / (2 * ht)
    return W_t - 1j * r * W_r, np.abs(W_t) + r * np.abs(W_r)


def conformality_defect(g: SurfaceGrid, reference, gauss=None) -> float:
    """Cauchy-Riemann defect of ``tau -> G(X(tau))`` relative to ``reference``.

    ``reference`` is a callable ``tau -> complex`` or an array of values at
    the nodes.  The same difference operator is applied to both, so the
    stencil's own truncation error cancels; the result is normalized by the
    reference's local derivative scale.
    """
    mask = _require_immersed(g)
    W = gauss_map_field(g) if gauss is None else gauss
    W = np.where(mask, W, np.nan)
    F = np.where(mask, _reference_values(g, reference), np.nan)
    cr_w, _ = _cr(W, g)
    cr_f, scale = _cr(F, g)
    with np.errstate(all="ignore"):
        defect = np.abs(cr_w - cr_f) / scale
    finite = np.isfinite(defect)
    if not finite.any():
        raise EmptyGrid("no node has a complete Cauchy-Riemann stencil")
    return float(defect[finite].max())


def max_h_deviation(g: SurfaceGrid, extrapolate=True) -> float:
    mask = _require_immersed(g)
    H, _ = mean_curvature_field(g, extrapolate)
    return float(np.nanmax(np.abs(H[mask] - 1)))


def verify_grid(g: SurfaceGrid, e, tolerances: Tolerances | None = None) -> VerificationReport:
    """Check ``H_hyp = 1``, ``G = f`` and conformality of the Gauss map over
    the immersed interior nodes of ``g`` (generated from expression ``e``)."""
    tol = tolerances or Tolerances()
    mask = _require_immersed(g)
    H, _ = mean_curvature_field(g)
    H_plain, _ = mean_curvature_field(g, extrapolate=False)
    f_ref, bad = eval_jet_masked(e, g.tau, branch=np.broadcast_to(g.theta, g.shape))
    mask = mask & ~bad
    if not mask.any():
        raise EmptyGrid("no usable interior nodes")
    h_dev = float(np.max(np.abs(H[mask] - 1)))
    gauss = np.full(g.shape, np.nan, dtype=complex)
    gauss[mask] = local_gauss_map(g, e, mask)
    g_res = float(np.max(np.abs(gauss[mask] - f_ref.val[mask])))
    conf = conformality_defect(g, f_ref.val, gauss)
    checks = [CheckResult("mean_curvature", h_dev, tol.h),
              CheckResult("gauss_map", g_res, tol.gauss),
              CheckResult("conformality", conf, tol.conformality)]
    return VerificationReport(
        grid_id=f"{g.expression}|{g.method}|{g.domain.n_r}x{g.domain.n_theta}",
        max_h_deviation=h_dev, max_gauss_residual=g_res, max_conformality_defect=conf,
        holes=g.hole_count, interior_nodes=int(mask.sum()), checks=checks,
        max_h_deviation_plain=float(np.max(np.abs(H_plain[mask] - 1))),
    )


def route_deviation(a: SurfaceGrid, b: SurfaceGrid) -> float:
    """Largest pointwise distance between two grids on their common nodes."""
    both = ~a.holes & ~b.holes
    if not both.any():
        raise EmptyGrid("grids share no nodes")
    return float(np.linalg.norm(a.points[both] - b.points[both], axis=-1).max())


def timed(fn, *args, **kwargs):
    """``(result, elapsed_ms)``."""
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter() - t0) * 1e3
