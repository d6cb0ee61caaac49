"""Shared fixtures: the standard suite and the degenerate heat problem."""
import pytest

from freefront.interfaces import AprioriBounds
from freefront.model import (
    CustomReaction,
    InitialProfile,
    ProblemConfig,
    ProfileShape,
    create_kernel,
    create_reaction,
)


def build_config(kind: str = "competition", family: str = "tent", **changes) -> ProblemConfig:
    """Standard configuration: a=1, d1=d2=mu=rho=h0=1, a=b=c=1, bumps of amplitude 0.5."""
    cfg = ProblemConfig(
        d1=1.0,
        d2=1.0,
        mu=1.0,
        rho=1.0,
        h0=1.0,
        u0=InitialProfile(ProfileShape.BUMP, 0.5, 1.0),
        v0=InitialProfile(ProfileShape.BUMP, 0.5, 1.0),
        kernel=create_kernel(family, a=1.0),
        reaction=create_reaction(kind, a=1.0, b=1.0, c=1.0),
        T=2.0,
        N=201,
        allow_nonlipschitz_kernel=(family == "uniform"),
    )
    return cfg.with_updates(**changes) if changes else cfg


def build_heat_config(**changes) -> ProblemConfig:
    """mu = rho = 0, no reaction, u0 = 0, v0 = cos(pi x / 2)."""
    cfg = ProblemConfig(
        d1=1.0,
        d2=1.0,
        mu=0.0,
        rho=0.0,
        h0=1.0,
        u0=InitialProfile(ProfileShape.BUMP, 0.0, 1.0),
        v0=InitialProfile(ProfileShape.BUMP, 1.0, 1.0),
        kernel=create_kernel("tent", a=1.0),
        reaction=CustomReaction.zero(),
        T=0.1,
        N=201,
        dt=1e-4,
        theta_scheme=1.0,
        snapshots=10,
    )
    return cfg.with_updates(**changes) if changes else cfg


def build_bounds(**changes) -> AprioriBounds:
    values = dict(
        k1=1.0, k2=1.0, L=4.0, Lstar=0.0, k3=1.0, eps0=0.1, M=2.025, T0=0.01,
        Rbar=3.0, rho_c0=0.0, rho_c0_star=0.0, h0=1.0, mu=1.0, rho=1.0,
    )
    values.update(changes)
    return AprioriBounds(**values)


@pytest.fixture(scope="session")
def make_config():
    return build_config


@pytest.fixture(scope="session")
def heat_config():
    return build_heat_config


@pytest.fixture(scope="session")
def make_bounds():
    return build_bounds
