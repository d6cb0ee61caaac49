import itertools
import math

import numpy as np
import pytest

from freefront.core.bounds import compute_bounds
from freefront.core.stepper import advance_step, front_speeds, initial_state, run, select_dt
from freefront.exceptions import CFLViolatedError, ConfigError, InvariantBreachedError
from freefront.interfaces import FrontPair, ReferenceGrid, SimState
from freefront.model import InitialProfile, create_kernel
from freefront.utils.validation import kernel_floor

STANDARD_SUITE = list(itertools.product(
    ("competition", "prey_predator"), ("uniform", "tent", "truncated_gaussian")
))


def bounds_for(cfg):
    return compute_bounds(cfg, kernel_floor(cfg.kernel, cfg.h0))


def test_front_speeds_zero_state(make_bounds):
    """No population, no flux: both fronts stand still."""
    state = SimState(0.0, FrontPair(-1.0, 1.0), np.zeros(21), np.zeros(21))
    assert front_speeds(state, create_kernel("tent"), make_bounds()) == (0.0, 0.0)


def test_front_speeds_stefan_term(make_bounds):
    """rho = 0, v_x(h) = -1, mu = 1 gives h' = 1."""
    y = ReferenceGrid(21).nodes
    z = 0.5 * (1.0 - y ** 2)
    state = SimState(0.0, FrontPair(-1.0, 1.0), np.zeros(21), z)
    gdot, hdot = front_speeds(state, create_kernel("tent"), make_bounds(mu=1.0, rho=0.0))
    assert hdot == pytest.approx(1.0, abs=1e-12)
    assert gdot == pytest.approx(-1.0, abs=1e-12)


def test_front_speeds_nonlocal_term(make_bounds):
    """mu = 0, wide uniform kernel, u = k1: h' = rho times the outflow integral."""
    kernel = create_kernel("uniform", a=10.0)
    fp = FrontPair(-1.0, 1.0)
    state = SimState(0.0, fp, np.ones(101), np.zeros(101))
    gdot, hdot = front_speeds(state, kernel, make_bounds(mu=0.0, rho=1.0))

    x = np.linspace(fp.g, fp.h, 10001)
    dx = x[1] - x[0]
    outflow = kernel.tail_mass(fp.h - x)
    weights = np.full(x.size, dx)
    weights[0] = weights[-1] = 0.5 * dx
    expected = float(np.sum(weights * outflow))
    assert expected == pytest.approx(0.9, rel=1e-6)
    assert hdot == pytest.approx(expected, rel=1e-4)
    assert gdot == pytest.approx(-expected, rel=1e-4)


def test_zero_data_is_a_fixed_point(make_config):
    """Zero initial data: one Picard pass, nothing moves."""
    cfg = make_config(
        u0=InitialProfile("bump", 0.0, 1.0), v0=InitialProfile("bump", 0.0, 1.0), dt=0.01,
    )
    bounds = bounds_for(cfg)
    state = initial_state(cfg, bounds)
    nxt = advance_step(state, cfg, bounds)
    assert nxt.picard_iters == 1
    assert nxt.t == pytest.approx(0.01)
    assert (nxt.fronts.g, nxt.fronts.h) == (-1.0, 1.0)
    assert np.all(nxt.w == 0.0)
    assert np.all(nxt.z == 0.0)


def test_select_dt_matches_formula(make_config):
    """0.45 / (d1 + L + max|zeta| / dy)."""
    cfg = make_config()
    bounds = bounds_for(cfg)
    state = initial_state(cfg, bounds)
    fp = state.fronts
    max_zeta = 2.0 * max(abs(fp.hdot), abs(fp.gdot)) / fp.width
    expected = 0.45 / (cfg.d1 + bounds.L + max_zeta / ReferenceGrid(cfg.N).spacing)
    assert select_dt(state, cfg, bounds) == pytest.approx(expected)


def test_picard_residuals_contract(make_config):
    """The coupled loop converges within the iteration budget."""
    cfg = make_config(picard_tol=0.0, picard_max=8)
    bounds = bounds_for(cfg)
    state = initial_state(cfg, bounds)
    nxt = advance_step(state, cfg, bounds, dt=0.5 * select_dt(state, cfg, bounds))
    assert nxt.residual < 1e-8
    assert nxt.fronts.h > state.fronts.h


def test_picard_contraction_recorded(make_config):
    """Default tolerance: several passes whose residuals shrink geometrically."""
    cfg = make_config()
    bounds = bounds_for(cfg)
    state = initial_state(cfg, bounds)
    dt = 0.5 * select_dt(state, cfg, bounds)
    nxt = advance_step(state, cfg, bounds, dt=dt)
    assert nxt.picard_iters >= 2
    assert 0.0 < nxt.contraction <= 0.9
    assert advance_step(state, cfg.with_updates(picard_max=1), bounds, dt=dt).contraction == 0.0


def test_picard_max_zero_rejected(make_config):
    """Without a single Picard pass there is no step to take."""
    cfg = make_config(picard_max=0)
    bounds = bounds_for(cfg)
    with pytest.raises(ConfigError) as excinfo:
        advance_step(initial_state(cfg, bounds), cfg, bounds, dt=1e-3)
    assert excinfo.value.details["key"] == "picard.max"


def test_single_pass_close_to_coupled(make_config):
    """picard_max = 1 and the converged loop differ by O(dt^2) per step."""
    cfg = make_config()
    bounds = bounds_for(cfg)
    state = initial_state(cfg, bounds)
    gaps = []
    for dt in (2e-3, 1e-3):
        explicit = advance_step(state, cfg.with_updates(picard_max=1), bounds, dt=dt)
        coupled = advance_step(state, cfg.with_updates(picard_tol=0.0), bounds, dt=dt)
        gaps.append(abs(explicit.fronts.h - coupled.fronts.h))
    assert gaps[1] < gaps[0]
    assert gaps[1] <= 0.5 * gaps[0]


def test_fixed_dt_violation_propagates(make_config):
    """A fixed unstable dt stops the run."""
    with pytest.raises(CFLViolatedError):
        run(make_config(dt=10.0, T=20.0))


def test_invariant_breach_is_raised(make_config, make_bounds):
    """Ceilings below the data trip the monitor."""
    cfg = make_config(dt=1e-3, T=1e-3)
    tight = make_bounds(k1=0.1, k2=0.1, L=4.0)
    with pytest.raises(InvariantBreachedError) as excinfo:
        advance_step(initial_state(cfg, tight), cfg, tight)
    assert excinfo.value.invariant == "w<=k1"


def test_heat_mode_decay(heat_config):
    """Frozen fronts, no reaction: v decays like exp(-d2 (pi/2)^2 t)."""
    cfg = heat_config(dt=1e-5)
    traj = run(cfg)
    final = traj.final
    assert final.t == pytest.approx(cfg.T)
    assert traj.g[-1] == -1.0 and traj.h[-1] == 1.0
    expected = math.exp(-(math.pi / 2.0) ** 2 * cfg.T) * np.cos(math.pi * final.x / 2.0)
    assert np.max(np.abs(final.z - expected)) <= 1e-3 * np.max(expected)
    assert np.all(final.w == 0.0)
    assert not traj.report["checks"]["flux_positive"]["hard"]


def test_last_step_lands_on_horizon(make_config):
    """The final step is adjusted so the run ends exactly at T."""
    cfg = make_config(T=0.0123, dt=1e-3, snapshots=4)
    traj = run(cfg)
    assert traj.t[-1] == cfg.T
    assert traj.steps in (12, 13)
    assert [s.t for s in traj.snapshots][0] == 0.0
    assert traj.snapshots[-1].t == cfg.T


@pytest.fixture(scope="module")
def suite_runs(make_config):
    runs = {}
    for kind, family in STANDARD_SUITE:
        cfg = make_config(kind, family)
        bounds = compute_bounds(cfg, kernel_floor(cfg.kernel, cfg.h0))
        runs[(kind, family)] = (cfg, bounds, run(cfg, bounds))
    return runs


@pytest.mark.parametrize("case", STANDARD_SUITE, ids=lambda case: "-".join(case))
def test_standard_suite_hard_monitors(suite_runs, case):
    """Every hard monitor holds on the standard configurations."""
    cfg, bounds, traj = suite_runs[case]
    report = traj.report
    assert report["ok"], report["hard_failures"]
    for name in ("front_monotonicity", "speed_ceiling", "flux_bound", "flux_positive", "growth_bound"):
        assert report["checks"][name]["holds"], name
        assert report["checks"][name]["hard"], name
    assert min(traj.flux[1:]) > 0 and min(traj.flux_left[1:]) > 0
    assert max(max(traj.flux), max(traj.flux_left)) <= bounds.k3 * 1.05


@pytest.mark.parametrize("case", STANDARD_SUITE, ids=lambda case: "-".join(case))
def test_standard_suite_symmetry(suite_runs, case):
    """Even data keep g = -h and even fields at every recorded time."""
    cfg, bounds, traj = suite_runs[case]
    h = np.asarray(traj.h)
    g = np.asarray(traj.g)
    assert np.max(np.abs(g + h)) <= 1e-8 * cfg.h0
    symmetry = traj.report["checks"]["symmetry"]
    assert symmetry["max_front_offset"] <= 1e-8 * cfg.h0
    assert symmetry["max_w_asymmetry"] <= 1e-8 * bounds.k1
    assert symmetry["max_z_asymmetry"] <= 1e-8 * bounds.k2
    assert np.allclose(traj.flux, traj.flux_left, rtol=1e-8, atol=1e-12)


@pytest.mark.parametrize("case", STANDARD_SUITE, ids=lambda case: "-".join(case))
def test_standard_suite_fields(suite_runs, case):
    """Densities stay within [0, k] and the fronts keep spreading."""
    cfg, bounds, traj = suite_runs[case]
    for snap in traj.snapshots:
        assert snap.w.min() >= 0.0 and snap.z.min() >= 0.0
        assert snap.w.max() <= bounds.k1 * (1.0 + 1e-6) + 1e-13
        assert snap.z.max() <= bounds.k2 * (1.0 + 1e-6) + 1e-13
    assert np.all(np.diff(traj.h) > 0)
    assert np.all(np.diff(traj.g) < 0)
    width = traj.h[-1] - traj.g[-1]
    assert width <= bounds.growth_bound(cfg.T) * 1.05


@pytest.mark.parametrize("case", STANDARD_SUITE, ids=lambda case: "-".join(case))
def test_standard_suite_picard(suite_runs, case):
    """Picard residuals contract with ratio <= 0.9 and converge within 8 passes."""
    cfg, bounds, traj = suite_runs[case]
    picard = traj.report["picard"]
    assert picard["converged_fraction"] >= 0.99
    assert picard["max_iters"] <= 8
    assert picard["max_contraction"] <= 0.9
    assert picard["contracting_fraction"] == 1.0
    iters = np.asarray(traj.picard_iters[1:])
    assert np.mean(iters <= 8) >= 0.99
