import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invariant_schemes.errors import DomainError
from invariant_schemes.grid import Node, Stencil
from invariant_schemes.group_action import (
    BurgersGroupElement,
    HeatGroupElement,
    act_on_stencil,
    analytic_heat_invariants,
    burgers_act,
    burgers_frame,
    burgers_invariants,
    heat_act,
    heat_frame,
    heat_invariants,
    heat_log_slope,
    invariantize,
)
from invariant_schemes.harness.audit import random_burgers_stencil, random_heat_stencil

unit = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
heat_elements = st.builds(HeatGroupElement, unit, unit, unit, unit)
burgers_elements = st.builds(BurgersGroupElement, unit, unit, unit)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def close(a, b, tol=1e-8):
    return abs(a - b) <= tol * (1 + abs(b))


def heat_stencil(xs, t, us, x01, t01, u01):
    return Stencil.from_points({(-1, 0): (xs[0], t, us[0]), (0, 0): (xs[1], t, us[1]),
                                (1, 0): (xs[2], t, us[2]), (0, 1): (x01, t01, u01)})


# --- actions ----------------------------------------------------------------------


def test_heat_identity_and_time_translation():
    p = Node((0, 0), 0.3, 0.2, 1.7)
    assert heat_act(HeatGroupElement(), p) == p
    q = heat_act(HeatGroupElement(l1=1.0), p)
    assert (q.x, q.t, q.u) == (0.3, 1.2, pytest.approx(1.7, rel=1e-15))


def test_heat_boost_example():
    q = heat_act(HeatGroupElement(l3=0.1), Node((0, 0), 1.0, 0.0, math.e))
    assert q.x == pytest.approx(1.2)
    assert q.t == 0.0
    assert math.log(q.u) == pytest.approx(0.89, abs=1e-14)


def test_heat_action_needs_positive_u():
    with pytest.raises(DomainError):
        heat_act(HeatGroupElement(), Node((0, 0), 0.0, 0.0, 0.0))


def test_burgers_identity_scaling_and_example():
    p = Node((0, 0), 0.7, 2.0, -0.4)
    assert burgers_act(BurgersGroupElement(), p) == p
    q = burgers_act(BurgersGroupElement(l2=0.5), p)
    s = math.exp(0.5)
    assert (q.x, q.t, q.u) == pytest.approx((s * 0.7, s * s * 2.0, -0.4 / s), rel=1e-15)
    r = burgers_act(BurgersGroupElement(1.0, 0.0, 2.0), Node((0, 0), 0.0, 1.0, 0.0))
    assert (r.x, r.t, r.u) == (1.0, 1.0, 2.0)


def test_burgers_action_needs_positive_t():
    with pytest.raises(DomainError):
        burgers_act(BurgersGroupElement(), Node((0, 0), 0.0, 0.0, 1.0))


# --- frames -----------------------------------------------------------------------


def test_heat_frame_on_cross_section_is_identity():
    st_ = heat_stencil((-0.1, 0.0, 0.1), 0.0, (1.2, 1.0, 1.2), 0.0, 0.01, 1.0)
    assert heat_frame(st_).params() == (0.0, 0.0, 0.0, 0.0)


def test_heat_frame_time_only():
    st_ = heat_stencil((-0.1, 0.0, 0.1), 2.0, (1.2, 1.0, 1.2), 0.0, 2.01, 1.0)
    assert heat_frame(st_).params() == pytest.approx((-2.0, 0.0, 0.0, 0.0), abs=1e-15)


@settings(max_examples=200)
@given(seed=seeds)
def test_heat_cross_section_property(seed):
    st_ = random_heat_stencil(np.random.default_rng(seed))
    moved = act_on_stencil(heat_act, heat_frame(st_), st_)
    p = moved[0, 0]
    assert abs(p.x) <= 1e-10 and abs(p.t) <= 1e-10 and abs(math.log(p.u)) <= 1e-10
    assert abs(heat_log_slope(moved)) <= 1e-10


def test_burgers_frame_examples():
    assert burgers_frame(Node((0, 0), 0.0, 1.0, 0.0)).params() == (0.0, 0.0, 0.0)
    g = burgers_frame(Node((0, 0), 2.0, 4.0, 3.0))
    assert g.params() == pytest.approx((-(2 - 12 * math.log(4)) / 2, math.log(0.5), -12.0), rel=1e-15)
    q = burgers_act(g, Node((0, 0), 2.0, 4.0, 3.0))
    assert (q.x, q.t, q.u) == pytest.approx((0.0, 1.0, 0.0), abs=1e-12)
    assert burgers_frame(Node((0, 0), 0.8, 1.0, -0.3)).params() == (-0.8, 0.0, 0.3)


def test_burgers_frame_needs_positive_t():
    with pytest.raises(DomainError):
        burgers_frame(Node((0, 0), 0.0, -1.0, 0.0))


@settings(max_examples=200)
@given(x=st.floats(-5, 5), t=st.floats(0.1, 10), u=st.floats(-5, 5))
def test_burgers_cross_section_property(x, t, u):
    p = Node((0, 0), x, t, u)
    q = burgers_act(burgers_frame(p), p)
    assert abs(q.x) <= 1e-10 and abs(q.t - 1.0) <= 1e-10 and abs(q.u) <= 1e-10


# --- heat invariants --------------------------------------------------------------


def test_heat_invariants_of_unit_field():
    inv = heat_invariants(heat_stencil((-0.15, 0.0, 0.15), 0.0, (1, 1, 1), 0.0, 0.001, 1.0))
    assert (inv.I_d, inv.J_d, inv.iota_x01) == (0.0, 0.0, 0.0)


def test_heat_invariants_closed_form_by_hand():
    lu = (0.2, 0.5, 0.3, 0.45)
    sigma, tau = 0.02, 0.01
    st_ = heat_stencil((-0.1, 0.0, 0.15), 0.3, np.exp(lu[:3]), sigma, 0.3 + tau, math.exp(lu[3]))
    inv = heat_invariants(st_)
    g = (lu[2] - lu[0]) / 0.25
    e = math.exp(tau)
    assert inv.g == pytest.approx(g, rel=1e-12)
    assert inv.I_d == pytest.approx((lu[3] - e * lu[1]) / tau - sigma / tau * e * g + (e - e * e) / tau * g * g, rel=1e-9)
    assert inv.iota_x01 == pytest.approx(sigma + 2 * (e - 1) * g, rel=1e-12)


@pytest.mark.parametrize("h", [0.1, 0.05, 0.025])
def test_heat_invariants_consistent_on_steady_solution(h):
    def log_u(x):
        return -x * x / 4 + 0.5

    tau = h * h
    g = (log_u(h) - log_u(-h)) / (2 * h)  # 0 by symmetry
    sigma = 2 * (1 - math.exp(tau)) * g
    st_ = heat_stencil((-h, 0.0, h), 0.0, np.exp([log_u(-h), log_u(0), log_u(h)]), sigma, tau, math.exp(log_u(sigma)))
    inv = heat_invariants(st_)
    I, J = analytic_heat_invariants(0.0, 0.0, 0.0)
    assert inv.J_d == pytest.approx(J, rel=1e-12)
    assert abs(inv.I_d - I) <= 2 * tau
    assert abs(inv.I_d - inv.J_d) <= 2 * tau


def test_heat_invariants_require_forward_time():
    st_ = heat_stencil((-0.1, 0.0, 0.1), 0.0, (1, 1, 1), 0.0, -0.01, 1.0)
    with pytest.raises(DomainError, match="tau"):
        heat_invariants(st_)


def test_heat_invariants_require_flat_time():
    st_ = Stencil.from_points({(-1, 0): (-0.1, 0.001, 1.0), (0, 0): (0.0, 0.0, 1.0),
                               (1, 0): (0.1, 0.0, 1.0), (0, 1): (0.0, 0.01, 1.0)})
    with pytest.raises(DomainError, match="flat"):
        heat_invariants(st_)


@settings(max_examples=200)
@given(seed=seeds, g=heat_elements)
def test_heat_invariants_are_invariant(seed, g):
    st_ = random_heat_stencil(np.random.default_rng(seed))
    a = heat_invariants(st_)
    b = heat_invariants(act_on_stencil(heat_act, g, st_))
    for name in ("I_d", "J_d", "iota_x01"):
        assert close(getattr(b, name), getattr(a, name)), name


@settings(max_examples=100)
@given(seed=seeds)
def test_heat_invariants_equal_invariantized_coordinates(seed):
    """On the cross-section ``I_d`` is ``ln U01 / τ``, ``J_d`` is the second
    difference and ``iota_x01`` the position of the moved next-level node."""
    st_ = random_heat_stencil(np.random.default_rng(seed))
    inv = heat_invariants(st_)
    moved = invariantize(lambda s: s, st_, heat_frame, heat_act)
    assert close(inv.I_d, math.log(moved[0, 1].u) / inv.tau, 1e-9)
    assert close(inv.iota_x01, moved[0, 1].x, 1e-9)
    assert close(inv.J_d, heat_invariants(moved).J_d, 1e-9)
    # idempotence: invariants evaluated on the cross-section are unchanged
    again = heat_invariants(moved)
    assert close(again.I_d, inv.I_d, 1e-9) and close(again.iota_x01, inv.iota_x01, 1e-9)


def test_analytic_heat_invariants_examples():
    assert analytic_heat_invariants(1.3, 0.4, 0.0) == pytest.approx((-0.5, -0.5), abs=1e-15)
    I, J = analytic_heat_invariants(0.0, 0.0, 1.0)
    assert I == pytest.approx(-0.5, abs=1e-15) and J == -0.5


def test_analytic_i_minus_j_vanishes_on_family():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        x, t, c = rng.uniform(-5, 5), rng.uniform(-1, 1), rng.uniform(-1, 1)
        I, J = analytic_heat_invariants(x, t, c)
        assert abs(I - J) <= 1e-12


# --- Burgers invariants -----------------------------------------------------------


def burgers_stencil(f, x00, t00, h, tau, sigma):
    pts = {(-1, 0): (x00 - h, t00), (0, 0): (x00, t00), (1, 0): (x00 + h, t00), (0, 1): (x00 + sigma, t00 + tau)}
    return Stencil.from_points({k: (x, t, f(x, t)) for k, (x, t) in pts.items()})


def test_burgers_invariants_zero_field():
    inv = burgers_invariants(burgers_stencil(lambda x, t: 0.0, 0.5, 1.0, 0.5, 0.001, 0.03))
    assert inv.I_d == 0.0
    assert inv.mesh_form == pytest.approx(0.03, rel=1e-12)
    assert inv.iota_x01 == pytest.approx(0.03, rel=1e-12)  # t00 = 1


def test_burgers_invariant_forms_by_hand():
    vals = {(-1, 0): 0.3, (0, 0): 0.5, (1, 0): 0.9, (0, 1): 0.52}
    pts = {(-1, 0): (0.8, 1.5), (0, 0): (1.0, 1.5), (1, 0): (1.3, 1.5), (0, 1): (1.02, 1.51)}
    st_ = Stencil.from_points({k: (*pts[k], vals[k]) for k in pts})
    inv = burgers_invariants(st_)
    u_x = (0.9 - 0.3) / 0.5
    u_xx = 2 * ((0.9 - 0.5) / 0.3 - (0.5 - 0.3) / 0.2) / 0.5
    u_t = (0.02 - 0.02 * u_x) / 0.01
    assert inv.u_x_d == pytest.approx(u_x, rel=1e-12)
    assert inv.u_xx_d == pytest.approx(u_xx, rel=1e-12)
    assert inv.u_t_d == pytest.approx(u_t, rel=1e-9)
    assert inv.residual_form == pytest.approx(u_t + 0.5 / 1.5 + 0.5 * u_x + u_xx, rel=1e-9)
    assert inv.mesh_form == pytest.approx(0.02 - 0.5 * 1.5 * math.log(1.51 / 1.5), rel=1e-9)


@pytest.mark.parametrize("tau", [4e-3, 2e-3, 1e-3])
def test_burgers_residual_consistent_on_exact_solution(tau):
    def f(x, t):
        return x / (t * (1 + math.log(t)))

    x00, t00 = 2.0, 1.2
    sigma = f(x00, t00) * t00 * math.log((t00 + tau) / t00)
    inv = burgers_invariants(burgers_stencil(f, x00, t00, 0.5, tau, sigma))
    assert abs(inv.iota_x01) <= 1e-15
    assert abs(inv.I_d) <= 5 * tau
    assert abs(inv.residual_form) <= 5 * tau


@settings(max_examples=200)
@given(seed=seeds, g=burgers_elements)
def test_burgers_invariants_are_invariant(seed, g):
    st_ = random_burgers_stencil(np.random.default_rng(seed))
    a = burgers_invariants(st_)
    b = burgers_invariants(act_on_stencil(burgers_act, g, st_))
    assert close(b.I_d, a.I_d)
    assert close(b.iota_x01, a.iota_x01)


def test_burgers_simplified_forms_are_relative_invariants():
    """Scaling multiplies the coordinate forms by powers of ``e^{l2}``."""
    st_ = random_burgers_stencil(np.random.default_rng(9))
    s = 0.7
    a = burgers_invariants(st_)
    b = burgers_invariants(act_on_stencil(burgers_act, BurgersGroupElement(l2=s), st_))
    assert b.residual_form == pytest.approx(math.exp(-3 * s) * a.residual_form, rel=1e-9)
    assert b.mesh_form == pytest.approx(math.exp(s) * a.mesh_form, rel=1e-9)
    assert not close(b.residual_form, a.residual_form)


@settings(max_examples=100)
@given(seed=seeds)
def test_burgers_invariants_equal_invariantized_coordinates(seed):
    st_ = random_burgers_stencil(np.random.default_rng(seed))
    inv = burgers_invariants(st_)
    moved = invariantize(lambda s: s, st_, lambda s: burgers_frame(s[0, 0]), burgers_act)
    assert close(inv.iota_x01, moved[0, 1].x, 1e-9)
    again = burgers_invariants(moved)
    assert close(again.I_d, inv.I_d, 1e-9)
    # on the cross-section the simplified residual is the invariant itself
    assert close(again.residual_form, inv.I_d, 1e-9)
