"""Sampled surfaces over polar grids ``tau = r exp(i theta)``.

Radii run over the closed interval ``[r_min, r_max]``; angles over the
half-open ``[theta_min, theta_max)`` and may span several turns.  Every node
is evaluated with its branch cut rotated to point away from the node's own
angle, so ``log`` and fractional powers continue across sheets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import EmptyGrid
from .expr import eval_jet_masked, to_source

ZERO_DERIVATIVE_TOL = 1e-14
POINT_DIAMETER_TOL = 1e-10
RANK_TOL = 1e-8


class HalfSpacePoint(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class Domain:
    r_min: float
    r_max: float
    theta_min: float
    theta_max: float
    n_r: int
    n_theta: int

    def __post_init__(self):
        if not (0 <= self.r_min < self.r_max):
            raise ValueError(f"need 0 <= r_min < r_max, got {self.r_min}, {self.r_max}")
        if not self.theta_min < self.theta_max:
            raise ValueError("need theta_min < theta_max")
        if self.n_r < 2 or self.n_theta < 2:
            raise ValueError("need at least 2 nodes in each direction")

    @property
    def radii(self):
        return np.linspace(self.r_min, self.r_max, self.n_r)

    @property
    def angles(self):
        step = (self.theta_max - self.theta_min) / self.n_theta
        return self.theta_min + step * np.arange(self.n_theta)

    @property
    def spacing(self):
        """``(dr, dtheta)``."""
        return ((self.r_max - self.r_min) / (self.n_r - 1),
                (self.theta_max - self.theta_min) / self.n_theta)

    def refined(self):
        """Same region with both spacings halved."""
        return Domain(self.r_min, self.r_max, self.theta_min, self.theta_max,
                      2 * (self.n_r - 1) + 1, 2 * self.n_theta)

    def mesh(self):
        """``(r, theta)`` arrays of shape ``(n_r, n_theta)``."""
        return np.meshgrid(self.radii, self.angles, indexing="ij")

    def to_dict(self):
        return {"r_min": self.r_min, "r_max": self.r_max, "theta_min": self.theta_min,
                "theta_max": self.theta_max, "n_r": self.n_r, "n_theta": self.n_theta}


@dataclass(frozen=True, eq=False)
class SurfaceGrid:
    """Surface samples on a polar grid; ``holes`` marks nodes with no point.

    ``points`` has shape ``(n_r, n_theta, 3)``; entries under a hole are zero
    and carry no meaning.
    """

    domain: Domain
    tau: np.ndarray
    points: np.ndarray
    holes: np.ndarray
    method: str
    expression: str | None = None
    meta: dict = field(default_factory=dict)

    @property
    def r(self):
        return self.domain.radii

    @property
    def theta(self):
        return self.domain.angles

    @property
    def shape(self):
        return self.holes.shape

    @property
    def hole_count(self):
        return int(self.holes.sum())

    @property
    def node_count(self):
        return int(self.holes.size - self.holes.sum())

    def point(self, i, j):
        """HalfSpacePoint at node ``(i, j)``, or None for a hole."""
        if self.holes[i, j]:
            return None
        return HalfSpacePoint(*map(float, self.points[i, j]))

    def valid_points(self):
        return self.points[~self.holes]

    @classmethod
    def from_points(cls, domain, points, holes=None, method="synthetic", expression=None):
        r, theta = domain.mesh()
        points = np.asarray(points, dtype=float)
        if holes is None:
            holes = np.zeros(points.shape[:2], dtype=bool)
        return cls(domain, r * np.exp(1j * theta), points, np.asarray(holes, bool),
                   method, expression)


def sample_grid(e, domain: Domain, kernel, method: str) -> SurfaceGrid:
    """Evaluate ``kernel(f, f', f'', tau) -> (xyz, bad)`` at every node.

    Nodes where the expression is singular, ``f'`` vanishes, or the kernel
    fails become holes.  Raises EmptyGrid if nothing survives.
    """
    r, theta = domain.mesh()
    tau = r * np.exp(1j * theta)
    jet, bad = eval_jet_masked(e, tau, branch=theta)
    with np.errstate(all="ignore"):
        bad |= np.abs(jet.d1) < ZERO_DERIVATIVE_TOL
        xyz, kernel_bad = kernel(jet.val, jet.d1, jet.d2, tau)
        bad |= kernel_bad | ~np.all(np.isfinite(xyz), axis=-1) | ~(xyz[..., 2] > 0)
    xyz = np.where(bad[..., None], 0.0, xyz)
    if bad.all():
        raise EmptyGrid("every grid node is a hole")
    return SurfaceGrid(domain, tau, xyz, bad, method, to_source(e))


def grid_jacobian(points, domain):
    """Central-difference partials along ``r`` and ``theta`` at interior nodes.

    Returns ``(X_r, X_theta)`` of shape ``(n_r - 2, n_theta - 2, 3)``.
    """
    hr, ht = domain.spacing
    X_r = (points[2:, 1:-1] - points[:-2, 1:-1]) / (2 * hr)
    X_t = (points[1:-1, 2:] - points[1:-1, :-2]) / (2 * ht)
    return X_r, X_t


def stencil_ok(holes, reach=1):
    """Mask of nodes whose full ``(2 reach + 1)^2`` block is hole-free.

    Boundary rows and columns within ``reach`` are always excluded.
    """
    n0, n1 = holes.shape
    ok = np.zeros_like(holes)
    if n0 <= 2 * reach or n1 <= 2 * reach:
        return ok
    inner = np.ones((n0 - 2 * reach, n1 - 2 * reach), dtype=bool)
    for a in range(-reach, reach + 1):
        for b in range(-reach, reach + 1):
            inner &= ~holes[reach + a:n0 - reach + a, reach + b:n1 - reach + b]
    ok[reach:n0 - reach, reach:n1 - reach] = inner
    return ok


def immersed_mask(g: SurfaceGrid):
    """Interior nodes at which the difference Jacobian has rank two."""
    ok = stencil_ok(g.holes, 1)
    X_r, X_t = grid_jacobian(g.points, g.domain)
    J = np.stack([X_r, X_t], axis=-1)
    sv = np.linalg.svd(J, compute_uv=False)
    rank2 = sv[..., 1] > RANK_TOL * sv[..., 0]
    mask = np.zeros_like(ok)
    mask[1:-1, 1:-1] = rank2
    return ok & mask


def image_diameter(g: SurfaceGrid):
    pts = g.valid_points()
    return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))


def degeneracy_classify(g: SurfaceGrid) -> str:
    """One of "point_degenerate", "immersed" or "mixed"."""
    if g.node_count < 4:
        raise EmptyGrid(f"only {g.node_count} usable nodes")
    pts = g.valid_points()
    if image_diameter(g) < POINT_DIAMETER_TOL * (1 + np.linalg.norm(pts.mean(axis=0))):
        return "point_degenerate"
    interior = stencil_ok(g.holes, 1)
    if interior.any() and np.array_equal(immersed_mask(g), interior):
        return "immersed"
    return "mixed"


def describe_point(p):
    """``(x, y, z)`` with 12 significant digits and no negative zeros."""
    coords = (float(np.round(c, 12)) + 0.0 for c in p)
    return "({:.12g}, {:.12g}, {:.12g})".format(*coords)


def degenerate_message(g: SurfaceGrid):
    return "degenerate: image is a single point " + describe_point(g.valid_points().mean(axis=0))
