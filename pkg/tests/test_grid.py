import numpy as np
import pytest

from cmc1.errors import EmptyGrid
from cmc1.grid import (
    Domain,
    SurfaceGrid,
    degeneracy_classify,
    degenerate_message,
    describe_point,
    immersed_mask,
    stencil_ok,
)


def test_domain_validation():
    with pytest.raises(ValueError):
        Domain(2, 1, 0, 1, 4, 4)
    with pytest.raises(ValueError):
        Domain(-1, 1, 0, 1, 4, 4)
    with pytest.raises(ValueError):
        Domain(0, 1, 1, 1, 4, 4)
    with pytest.raises(ValueError):
        Domain(0, 1, 0, 1, 1, 4)


def test_angles_are_half_open():
    d = Domain(0.5, 2, 0, 2 * np.pi, 3, 4)
    assert d.radii.tolist() == [0.5, 1.25, 2.0]
    assert d.angles == pytest.approx([0, np.pi / 2, np.pi, 3 * np.pi / 2])
    assert d.spacing == pytest.approx((0.75, np.pi / 2))


def test_refined_halves_spacing():
    d = Domain(0.5, 2, 0, 2 * np.pi, 64, 64)
    fine = d.refined()
    assert (fine.n_r, fine.n_theta) == (127, 128)
    assert np.allclose(np.array(fine.spacing) * 2, d.spacing)
    assert np.allclose(fine.radii[::2], d.radii) and np.allclose(fine.angles[::2], d.angles)


def test_stencil_mask():
    holes = np.zeros((6, 7), dtype=bool)
    holes[2, 3] = True
    ok = stencil_ok(holes, 1)
    assert not ok[0].any() and not ok[:, -1].any()
    assert not ok[1:4, 2:5].any()
    assert ok[4, 1] and ok[1, 1]
    assert stencil_ok(holes, 2)[2:4, 2:5].sum() == 0
    assert not stencil_ok(np.zeros((2, 2), bool), 1).any()


def _plane(domain, height=1.0):
    r, theta = domain.mesh()
    return np.stack([r * np.cos(theta), r * np.sin(theta), np.full_like(r, height)], axis=-1)


def test_plane_is_immersed():
    d = Domain(0.5, 1, 0, 1, 8, 8)
    g = SurfaceGrid.from_points(d, _plane(d))
    assert degeneracy_classify(g) == "immersed"
    assert immersed_mask(g)[1:-1, 1:-1].all()


def test_partly_collapsed_grid_is_mixed():
    d = Domain(0.5, 1, 0, 1, 8, 8)
    pts = _plane(d)
    pts[:4] = [0.2, 0.3, 1.0]
    g = SurfaceGrid.from_points(d, pts)
    assert degeneracy_classify(g) == "mixed"


def test_point_image():
    d = Domain(0.5, 1, 0, 1, 4, 4)
    g = SurfaceGrid.from_points(d, np.broadcast_to([1.0, -0.0, 2.0], (4, 4, 3)))
    assert degeneracy_classify(g) == "point_degenerate"
    assert degenerate_message(g) == "degenerate: image is a single point (1, 0, 2)"


def test_point_formatting():
    assert describe_point((1 + 1e-15, -1e-14, 0.5)) == "(1, 0, 0.5)"
    assert describe_point((1.25, 2, 3)) == "(1.25, 2, 3)"


def test_too_few_nodes():
    d = Domain(0.5, 1, 0, 1, 2, 2)
    holes = np.array([[False, True], [True, True]])
    g = SurfaceGrid.from_points(d, np.ones((2, 2, 3)), holes)
    with pytest.raises(EmptyGrid):
        degeneracy_classify(g)


def test_grid_accessors():
    d = Domain(0.5, 1, 0, 1, 3, 2)
    holes = np.zeros((3, 2), bool)
    holes[1, 1] = True
    g = SurfaceGrid.from_points(d, _plane(d, 2.0), holes)
    assert g.shape == (3, 2) and g.hole_count == 1 and g.node_count == 5
    assert g.point(1, 1) is None and g.point(0, 0) == (0.5, 0, 2)
    assert len(g.valid_points()) == 5
