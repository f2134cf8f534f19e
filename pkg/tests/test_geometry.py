import numpy as np
import pytest

from binn import geometry as geo
from binn.quadrature import gauss_legendre, integrate_regular

BC = geo.dirichlet(lambda x: 0.0)


def test_circle_builder_counts_and_half_arc():
    b = geo.circle_boundary((0, 0), 1.0, 40, BC)
    assert len(b) == 40
    for seg in b:
        assert abs(seg.half_arc - np.pi / 40) < 1e-15
    b.check_chaining()


def test_line_segment_point_and_normal():
    # domain above the segment: traversal left-to-right keeps it on the left
    seg = geo.LineSegment((0, 0), (2, 0), BC)
    x, jac, n = seg.point(0.0)
    assert np.allclose(x, (1, 0))
    assert abs(jac - 1.0) < 1e-15
    assert np.allclose(n, (0, -1))


def test_unit_circle_normals_radial():
    b = geo.circle_boundary((0, 0), 1.0, 8, BC)
    for seg in b:
        for xi in (-0.7, 0.0, 0.4):
            x, jac, n = seg.point(xi)
            assert np.allclose(n, x, atol=1e-14)
            assert abs(jac - seg.half_arc) < 1e-15


def test_clockwise_circle_normals_point_inward():
    b = geo.circle_boundary((0, 0), 1.5, 8, BC, clockwise=True)
    for seg in b:
        x, _, n = seg.point(0.3)
        assert np.allclose(n, -x / np.linalg.norm(x), atol=1e-14)


def test_closed_loop_normal_integral_vanishes():
    rule = gauss_legendre(10)
    for b in (geo.circle_boundary((0.3, -0.2), 1.0, 24, BC),
              geo.polygon_boundary([(0, 0), (2, 0), (2, 2), (0, 2)], 5, [BC] * 4),
              geo.flower_boundary(100, BC)):
        total = np.zeros(2)
        for seg in b:
            total += integrate_regular(seg, lambda x, n: n, rule)
        assert np.linalg.norm(total) < 1e-10


def test_circle_circumference():
    rule = gauss_legendre(10)
    for r in (1.0, 1.5):
        b = geo.circle_boundary((0, 0), r, 24, BC)
        length = sum(integrate_regular(s, lambda x, n: 1.0, rule) for s in b)
        assert abs(length - 2 * np.pi * r) < 1e-10


def test_normal_perpendicular_to_tangent():
    rule = gauss_legendre(10)
    b = geo.flower_boundary(25, BC)
    h = 1e-7
    for seg in b:
        for xi in rule.nodes:
            x, jac, n = seg.point(xi)
            xp = seg.point(min(xi + h, 1.0))[0]
            xm = seg.point(max(xi - h, -1.0))[0]
            tangent = (xp - xm) / np.linalg.norm(xp - xm)
            assert abs(np.dot(n, tangent)) < 1e-6
            assert abs(np.linalg.norm(n) - 1.0) < 1e-12


def test_flower_geometry():
    b = geo.flower_boundary(100, BC)
    assert len(b) == 100
    assert abs(b.total_length() - 5 * np.pi) < 1e-12
    b.check_chaining()
    # petal tips lie at apothem + radius from the origin
    apothem = np.cos(np.pi / 5) / np.sin(np.pi / 5)
    tips = [s.point(0.0)[0] for s in b.segments[::20]]
    radii = [np.linalg.norm(t) for t in tips]
    assert max(radii) <= apothem + 1.0 + 1e-9


def test_flower_rejects_uneven_split():
    with pytest.raises(ValueError):
        geo.flower_boundary(99, BC)


def test_polygon_per_edge_counts():
    b = geo.polygon_boundary([(0, -1), (2, -1), (2, 1), (0, 1)], [4, 3, 4, 3],
                             [BC] * 4)
    assert len(b) == 14
    b.check_chaining()


def test_halfplane_patch_normal():
    b = geo.halfplane_patch(1.0, 20, BC)
    assert len(b) == 20
    for seg in b:
        _, jac, n = seg.point(0.0)
        assert np.allclose(n, (-1, 0))
        assert abs(jac - 0.05) < 1e-15


def test_degenerate_geometry_rejected():
    with pytest.raises(ValueError):
        geo.LineSegment((1, 1), (1, 1), BC)
    with pytest.raises(ValueError):
        geo.circle_boundary((0, 0), -1.0, 8, BC)
    with pytest.raises(ValueError):
        geo.ArcSegment((0, 0), 1.0, 0.5, 0.5, BC)


def test_segment_distance():
    seg = geo.LineSegment((0, 0), (2, 0), BC)
    assert abs(seg.distance((1.0, 0.5)) - 0.5) < 1e-14
    assert abs(seg.distance((3.0, 0.0)) - 1.0) < 1e-14
    arc = geo.ArcSegment((0, 0), 1.0, 0.0, np.pi / 2, BC)
    assert abs(arc.distance((2.0, 0.0)) - 1.0) < 1e-14
    assert abs(arc.distance((0.0, -1.0)) - np.sqrt(2)) < 1e-12


def test_build_boundary_from_dict():
    b = geo.build_boundary({
        "shape": "circle", "radius": 1.0, "segments": 12,
        "bc": {"tag": "dirichlet", "value": 1.0},
    })
    assert len(b) == 12
    assert b.segments[0].bc.tag == geo.DIRICHLET
    assert b.segments[0].bc.value(np.zeros(2)) == 1.0
    with pytest.raises(ValueError):
        geo.build_boundary({"shape": "blob"})
