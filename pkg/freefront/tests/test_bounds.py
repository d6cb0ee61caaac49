import math

import numpy as np
import pytest

from freefront.core.bounds import check_gamma_membership, compute_bounds
from freefront.core.stepper import run
from freefront.model import CustomReaction, InitialProfile
from freefront.utils.validation import kernel_floor


def bounds_for(cfg):
    return compute_bounds(cfg, kernel_floor(cfg.kernel, cfg.h0))


def test_k3_example(make_config):
    """h0=1, L=2, d2=1, |v0'|=1, k2=1 gives k3=1."""
    reaction = CustomReaction(
        rate1=lambda t, x, u, v: 0.0 * u,
        rate2=lambda t, x, u, v: 0.0 * v,
        lipschitz_fn=lambda c1, c2: 2.0,
        lipschitz_x_fn=lambda c1, c2: 0.0,
    )
    cfg = make_config(reaction=reaction, v0=InitialProfile("parabola", 0.5, 1.0))
    bounds = bounds_for(cfg)
    assert bounds.k2 == 1.0
    assert bounds.L == 2.0
    assert bounds.k3 == pytest.approx(1.0, abs=1e-3)


def test_speed_ceiling_example(make_bounds):
    """R(0) = mu k3 + 2(h0 rho k1 + mu k3) = 5."""
    bounds = make_bounds(mu=1.0, rho=1.0, k1=1.0, k3=1.0, h0=1.0)
    assert bounds.R(0.0) == pytest.approx(5.0)
    assert bounds.R(1.0) > bounds.R(0.0)


def test_standard_constants(make_config):
    """Closed-form constants of the competition configuration."""
    bounds = bounds_for(make_config())
    assert bounds.k1 == 1.0
    assert bounds.k2 == 1.0
    assert bounds.L == 4.0
    assert bounds.k3 == pytest.approx(math.sqrt(2.0))
    assert bounds.eps0 == pytest.approx(0.0625)
    assert bounds.M == pytest.approx(2.0 + 0.0625 / 4.0)
    assert bounds.T0 == pytest.approx(bounds.eps0 / (4.0 * (2.0 * bounds.k3 + bounds.M)))
    assert bounds.flags == ()


@pytest.mark.parametrize("kind", ["competition", "prey_predator"])
def test_constant_chain(make_config, kind):
    """0 < rho c0 <= rho h0 k1 < Rbar <= R(t) on [0, T0]."""
    bounds = bounds_for(make_config(kind))
    assert 0 < bounds.rho_c0 <= bounds.rho * bounds.h0 * bounds.k1 < bounds.Rbar
    assert 0 < bounds.rho_c0_star <= bounds.rho * bounds.h0 * bounds.k1
    for t in np.linspace(0.0, bounds.T0, 5):
        assert bounds.Rbar <= bounds.R(t)
    assert 0 < bounds.eps0 < min(0.125, 8.0 * bounds.mu * bounds.k3 / (bounds.rho * bounds.k1))


def test_bounds_dominate_data(make_config):
    """k1 and k2 dominate the initial data; k1 grows with it."""
    small = bounds_for(make_config())
    large = bounds_for(make_config(u0=InitialProfile("bump", 3.0, 1.0)))
    assert large.k1 >= 3.0
    assert large.k1 >= small.k1
    assert large.k3 >= small.k3


def test_prey_predator_crowding_level(make_config):
    """Theta(k1) = 1 + c k1 drives k2 for the prey-predator model."""
    bounds = bounds_for(make_config("prey_predator"))
    assert bounds.k2 == 2.0


def test_compact_bump_disables_floor(make_config):
    """Initial data vanishing near both fronts give rho c0 = 0."""
    def inner(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) < 0.5, np.cos(np.pi * x), 0.0)

    bounds = bounds_for(make_config(u0=inner))
    assert bounds.rho_c0 == 0.0
    assert bounds.rho_c0_star == 0.0
    assert "front_floor_zero" in bounds.flags
    assert not bounds.front_floor_enabled


def test_degenerate_coefficients(heat_config):
    """mu = rho = 0 is flagged and T0 is unbounded."""
    bounds = bounds_for(heat_config())
    assert {"mu_zero", "rho_zero", "front_floor_zero"} <= set(bounds.flags)
    assert math.isinf(bounds.T0)
    assert bounds.Rbar == 0.0
    assert math.isinf(bounds.growth_bound(1.0))
    assert bounds.to_dict()["T0"] is None


def test_gamma_membership_on_run(make_config):
    """Short standard run stays inside the admissible front set."""
    cfg = make_config(T=0.05, snapshots=2)
    bounds = bounds_for(cfg)
    report = check_gamma_membership(run(cfg, bounds), bounds, window_end=0.05)
    conditions = report["conditions"]
    assert not report["informational"]
    assert conditions["hdot_ceiling"]["holds"]
    assert conditions["gdot_ceiling"]["holds"]
    assert conditions["width_linear"]["holds"]
    assert conditions["hdot_floor"]["holds"]


def test_gamma_membership_degenerate(heat_config):
    """Stationary fronts are reported as an expected degeneration."""
    cfg = heat_config(T=0.01)
    bounds = bounds_for(cfg)
    report = check_gamma_membership(run(cfg, bounds), bounds)
    assert report["informational"]
    assert "rho_zero" in report["reason"]


def test_gamma_membership_within_t0(make_config):
    """Up to T0 the fronts stay in the box and the width below M."""
    cfg = make_config(T=0.004, dt=2.5e-4, snapshots=16)
    bounds = bounds_for(cfg)
    assert bounds.T0 < cfg.T
    traj = run(cfg, bounds)
    report = check_gamma_membership(traj, bounds)
    assert report["window"][1] == pytest.approx(bounds.T0)
    assert not report["informational"]
    for name in ("width_M", "front_box", "gdot_floor", "hdot_floor", "width_linear"):
        assert report["conditions"][name]["holds"], name

    envelope = traj.report["checks"]["lower_envelope"]
    assert envelope["holds"]
    assert traj.report["checks"]["strict_positivity"]["holds"]
