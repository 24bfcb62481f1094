import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hororadon import disk
from hororadon.errors import DomainViolation
from hororadon.lie import a_elem, iwasawa_su11, k_elem, kan_product, n_elem

angle = st.floats(0, 2 * math.pi, exclude_max=True)
small = st.floats(-1.0, 1.0)


@st.composite
def points(draw, rmax=0.8):
    r = draw(st.floats(0, rmax))
    return r * complex(np.exp(1j * draw(angle)))


@st.composite
def group_elements(draw):
    return kan_product(draw(angle), draw(small), draw(small))


def poisson(x, beta):
    """Independent oracle for d nu^x / d nu^o."""
    return (1 - abs(x) ** 2) / abs(x - np.exp(1j * beta)) ** 2


def test_mobius_examples():
    assert disk.mobius(a_elem(0.8), 0j) == pytest.approx(math.tanh(0.8), abs=1e-15)
    assert disk.mobius(n_elem(1.0), 0j) == pytest.approx(0.5 - 0.5j, abs=1e-15)
    assert isinstance(disk.mobius(a_elem(0.1), disk.DiskPoint(0.3)), disk.DiskPoint)
    assert isinstance(disk.mobius(a_elem(0.1), disk.BoundaryPoint(1.0)), disk.BoundaryPoint)


@given(group_elements(), group_elements(), points())
def test_mobius_group_law(g, h, z):
    assert abs(disk.mobius(g, disk.mobius(h, z)) - disk.mobius(g @ h, z)) < 1e-12


@given(group_elements(), st.floats(0, 2 * math.pi))
def test_mobius_preserves_unit_circle(g, beta):
    assert abs(abs(disk.mobius(g, np.exp(1j * beta))) - 1) < 1e-13


def test_borel_section_rejects_points_off_the_disk():
    with pytest.raises(DomainViolation):
        disk.borel_section(0.9 + 0.9j)


def test_disk_point_domain():
    with pytest.raises(DomainViolation):
        disk.DiskPoint(1.0)
    with pytest.raises(DomainViolation):
        disk.DiskPoint(0.6 + 0.8j)
    assert disk.BoundaryPoint(-0.5).beta == pytest.approx(2 * math.pi - 0.5)


def test_distances():
    assert disk.hyperbolic_distance_to_origin(math.tanh(1.0)) == pytest.approx(1.0, abs=1e-14)
    assert disk.hyperbolic_distance_to_origin(0.5) == pytest.approx(0.5 * math.log(3), abs=1e-15)


@given(group_elements(), points(0.7), points(0.7))
def test_mobius_is_an_isometry(g, x, y):
    d = disk.hyperbolic_distance(x, y)
    assert abs(disk.hyperbolic_distance(disk.mobius(g, x), disk.mobius(g, y)) - d) < 1e-10


@given(points(0.95))
def test_borel_section_lies_in_NA_and_hits_x(z):
    g = disk.borel_section(z)
    assert abs(np.sin(iwasawa_su11(g).theta)) < 1e-12
    assert abs(disk.mobius(g, 0j) - z) < 1e-12


def test_borel_section_examples():
    np.testing.assert_allclose(disk.borel_section(disk.ORIGIN).matrix, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(disk.borel_section(math.tanh(0.7)).matrix, a_elem(0.7).matrix, atol=1e-12)
    s, t = disk.na_coordinates(disk.mobius(n_elem(2.0) @ a_elem(-0.3), 0j))
    assert (s, t) == (pytest.approx(2.0, abs=1e-12), pytest.approx(-0.3, abs=1e-12))


def test_composite_distance_examples():
    for beta in (0.0, 1.0, 4.0):
        assert abs(disk.composite_distance(0j, 0j, beta)) < 1e-15
    for t in (-1.0, 0.3, 2.0):
        assert disk.composite_distance(0j, math.tanh(t), 0.0) == pytest.approx(t, abs=1e-12)


@given(points(), points(), points(), angle)
def test_composite_distance_cocycle_and_antisymmetry(x, y, z, b):
    A = disk.composite_distance
    assert abs(A(x, y, b) - A(x, z, b) - A(z, y, b)) < 1e-10
    assert abs(A(x, y, b) + A(y, x, b)) < 1e-10


@given(points(), points(), angle, group_elements())
def test_composite_distance_g_invariance(x, y, b, g):
    gb = disk.boundary_action(g, b)
    lhs = disk.composite_distance(x, y, b)
    rhs = disk.composite_distance(disk.mobius(g, x), disk.mobius(g, y), gb)
    assert abs(lhs - rhs) < 1e-10


@given(points(), angle)
def test_composite_distance_vectorized_matches_scalar(z, beta):
    assert abs(disk.composite_distance_origin_z(z, beta) - disk.composite_distance(0j, z, beta)) < 1e-12


@given(group_elements(), group_elements(), angle)
def test_boundary_action_is_mobius_and_a_group_action(g, h, b):
    gb = disk.boundary_action(g, b)
    assert abs(gb.z - disk.mobius(g, np.exp(1j * b))) < 1e-12
    lhs = disk.boundary_action(g, disk.boundary_action(h, b))
    assert abs(lhs.z - disk.boundary_action(g @ h, b).z) < 1e-12
    assert abs(np.exp(1j * disk.boundary_action_array(g, np.array([b]))[0]) - gb.z) < 1e-12


def test_rotation_acts_on_boundary_by_double_angle():
    assert disk.boundary_action(k_elem(0.37), 0.0).beta == pytest.approx(0.74, abs=1e-14)
    for g in (a_elem(0.9), n_elem(-1.3)):
        assert abs(np.sin(disk.boundary_action(g, 0.0).beta / 2)) < 1e-12


@given(points(0.7), angle)
def test_kappa_x_lies_in_stabilizer_of_x(x, theta):
    kx = disk.kappa_x(x, k_elem(theta))
    assert abs(disk.mobius(kx, x) - x) < 1e-10


@given(points(0.9), angle)
def test_boundary_density_is_poisson_kernel(x, beta):
    assert abs(disk.boundary_density(x, beta) - poisson(x, beta)) < 1e-9 * poisson(x, beta)


@given(points(0.7))
def test_boundary_measure_has_mass_one(x):
    assert abs(disk.boundary_integral(lambda b: np.ones_like(b), 512, x) - 1) < 1e-8


@given(group_elements(), points(0.6), st.lists(st.floats(-1, 1), min_size=5, max_size=5))
def test_boundary_measure_transformation_rules(g, x, coeffs):
    def F(b):
        return sum(c * np.exp(1j * (m - 2) * b) for m, c in enumerate(coeffs))

    gi = g.inverse()
    pulled = lambda b: F(disk.boundary_action_array(gi, b))  # noqa: E731
    quasi = disk.boundary_integral(lambda b: F(b) * np.exp(-2 * disk.h_o_of_gk(g, b)), 1024)
    assert abs(disk.boundary_integral(pulled, 1024) - quasi) < 1e-8
    dual = disk.boundary_integral(F, 1024, disk.mobius(gi, x))
    assert abs(disk.boundary_integral(pulled, 1024, x) - dual) < 1e-8


def test_n_orbit_of_origin_is_a_circle_through_0_and_1():
    s = np.linspace(-30, 30, 601)
    z = disk.mobius_coeffs(1 + 1j * s, -1j * s, 0j)
    np.testing.assert_allclose(np.abs(z - 0.5) ** 2, 0.25, atol=1e-12)


@pytest.mark.parametrize("beta,center", [(0.0, 0.5), (math.pi, -0.5), (math.pi / 2, 0.5j)])
def test_basic_horocycle_circles(beta, center):
    c = disk.horocycle_params_to_circle(disk.HorocycleParam(disk.BoundaryPoint(beta), 0.0))
    assert abs(c.center - center) < 1e-12
    assert c.radius == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("tau", [-1.0, 0.0, 1.0])
def test_horocycle_family_is_tangent_at_base_point(tau):
    c = disk.horocycle_params_to_circle(disk.HorocycleParam(disk.BoundaryPoint(0.0), tau))
    assert abs(abs(c.center) + c.radius - 1) < 1e-10
    assert abs(c.distance(math.tanh(tau))) < 1e-12
    assert abs(c.distance(1.0)) < 1e-12


def test_euclidean_circle_requires_tangency():
    with pytest.raises(ValueError):
        disk.EuclideanCircle(0.2, 0.5)
    with pytest.raises(ValueError):
        disk.EuclideanCircle(0.5, 0.0)


@given(points(0.6), angle, st.floats(-1.5, 1.5), st.floats(-2, 2))
def test_horocycle_points_are_members_and_on_the_circle(x, beta, tau, s):
    h = disk.HorocycleParam(disk.BoundaryPoint(beta), tau)
    z = disk.horocycle_point(h, x, s)
    assume(abs(z) < 1 - 1e-6)
    assert disk.horocycle_membership(z, h, x)
    circle = disk.horocycle_params_to_circle(h, x)
    assert abs(circle.distance(z)) < 1e-9
    inward = (circle.center - z) / abs(circle.center - z)
    assert not disk.horocycle_membership(z + 1e-3 * inward, h, x)


@given(points(0.6), points(0.6), angle, st.floats(-1, 1), group_elements(), st.floats(-1.5, 1.5))
def test_group_action_and_rereferencing(x, y, beta, tau, g, s):
    h = disk.HorocycleParam(disk.BoundaryPoint(beta), tau)
    z = disk.horocycle_point(h, x, s)
    assume(abs(z) < 1 - 1e-6)
    moved = disk.horocycle_group_action(g, h, x)
    gz = disk.mobius(g, z)
    assert abs(disk.composite_distance(moved.reference, gz, moved.param.b) - moved.param.tau) < 1e-9
    h_y = disk.rereference_horocycle(h, x, y)
    assert abs(disk.composite_distance(y, z, h_y.b) - h_y.tau) < 1e-9
    assert abs(disk.rereference_horocycle(h_y, y, x).tau - tau) < 1e-10
