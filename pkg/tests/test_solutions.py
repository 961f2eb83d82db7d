import math

import numpy as np
import pytest

from invariant_schemes.errors import ConfigError, DomainError
from invariant_schemes.models import Model
from invariant_schemes.solutions import (
    BurgersExact,
    ConstantField,
    HeatExact,
    burgers_exact,
    heat_exact,
    initial_level,
    node_count,
)

# fourth-order central differences
D = 1e-3


def d_dx(f, x, t):
    return (-f(x + 2 * D, t) + 8 * f(x + D, t) - 8 * f(x - D, t) + f(x - 2 * D, t)) / (12 * D)


def d_dt(f, x, t):
    return (-f(x, t + 2 * D) + 8 * f(x, t + D) - 8 * f(x, t - D) + f(x, t - 2 * D)) / (12 * D)


def d_dxx(f, x, t):
    return (-f(x + 2 * D, t) + 16 * f(x + D, t) - 30 * f(x, t) + 16 * f(x - D, t) - f(x - 2 * D, t)) / (12 * D * D)


def heat_residual(f, x, t):
    u = f(x, t)
    return d_dt(f, x, t) - d_dxx(f, x, t) - u * math.log(u)


def test_heat_examples():
    assert heat_exact(HeatExact(0.0), 0.0, 3.7) == pytest.approx(math.exp(0.5), rel=1e-15)
    assert heat_exact(HeatExact(0.0), 2.0, 0.0) == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_heat_steady_is_time_independent():
    x = np.linspace(-5, 5, 11)
    assert np.array_equal(HeatExact(0.0)(x, 0.0), HeatExact(0.0)(x, 1.0))


def test_heat_solves_pde():
    rng = np.random.default_rng(0)
    for _ in range(100):
        c, x, t = rng.uniform(-1, 1), rng.uniform(-5, 5), rng.uniform(-1, 1)
        f = HeatExact(c)
        assert abs(heat_residual(lambda a, b: float(f(a, b)), x, t)) <= 1e-6 * max(1.0, float(f(x, t)))


def test_heat_group_image_solves_pde():
    """Pushing the graph of a solution through the symmetry group yields another solution."""
    rng = np.random.default_rng(1)
    for _ in range(20):
        l1, l2, l3, l4 = rng.uniform(-1, 1, 4)
        c = rng.uniform(-1, 1)
        base = HeatExact(c)

        def image(X, T):
            t = T - l1
            et = math.exp(t)
            x = X - 2 * l3 * et - l2
            return math.exp(float(base.log_u(x, t)) - l3 * et * x - l3 * l3 * et * et + l4 * et)

        X, T = rng.uniform(-3, 3), rng.uniform(-1, 1)
        assert abs(heat_residual(image, X, T)) <= 1e-6 * max(1.0, image(X, T))


def test_burgers_examples():
    sol = BurgersExact(0.0, 1.0)
    for t in (0.5, 1.0, 2.0):
        assert burgers_exact(sol, 0.0, t) == 0.0
    assert burgers_exact(sol, 1.0, 1.0) == 1.0


def test_burgers_solves_pde():
    rng = np.random.default_rng(3)
    for _ in range(100):
        c1, c2 = rng.uniform(-1, 1), rng.uniform(1, 2)
        x, t = rng.uniform(-5, 5), rng.uniform(1, 2)
        f = BurgersExact(c1, c2)
        g = lambda a, b: float(f(a, b))  # noqa: E731
        u = g(x, t)
        res = d_dt(g, x, t) + u / t + u * d_dx(g, x, t) + d_dxx(g, x, t)
        assert abs(res) <= 1e-8


def test_burgers_affine_in_x():
    x = np.linspace(0, 10, 21)
    u = BurgersExact(0.3, 1.2)(x, 1.3)
    np.testing.assert_allclose(np.diff(u, 2), 0.0, atol=1e-14)


def test_burgers_domain_errors():
    with pytest.raises(DomainError):
        BurgersExact()(1.0, 0.0)
    with pytest.raises(DomainError, match="pole"):
        BurgersExact(0.0, 1.0)(1.0, math.exp(-1.0))


def test_constant_field_broadcasts():
    out = ConstantField(1.0)(np.arange(4.0), 0.5)
    assert out.shape == (4,) and np.all(out == 1.0)


def test_initial_level_heat():
    lv = initial_level(Model.HEAT_LOG, HeatExact(0.0), -5.0, 5.0, 0.15, 0.0)
    assert len(lv.x) == 67
    assert lv.x[-1] == pytest.approx(4.9, abs=1e-12)
    assert lv.is_uniform()
    np.testing.assert_allclose(lv.u, HeatExact(0.0)(lv.x, 0.0))


def test_initial_level_burgers():
    lv = initial_level(Model.SPHERICAL_BURGERS, BurgersExact(), 0.0, 10.0, 0.5, 1.0)
    assert len(lv.x) == 21 and lv.t == 1.0
    assert lv.x[-1] == 10.0


def test_node_count_forgives_roundoff():
    assert node_count(0.0, 0.3, 0.1) == 4
    assert node_count(-5.0, 5.0, 0.15) == 67


def test_initial_level_errors():
    with pytest.raises(ConfigError):
        initial_level(Model.HEAT_LOG, HeatExact(), 0.0, 1.0, 2.0, 0.0)
    with pytest.raises(ConfigError):
        initial_level(Model.HEAT_LOG, HeatExact(), 1.0, 1.0, 0.1, 0.0)
    with pytest.raises(ConfigError):
        initial_level(Model.HEAT_LOG, HeatExact(), 0.0, 1.0, -0.1, 0.0)
    with pytest.raises(DomainError):
        initial_level(Model.HEAT_LOG, ConstantField(0.0), 0.0, 1.0, 0.1, 0.0)
