from __future__ import annotations

import dataclasses

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from noonsim.channels import LbsParams
from noonsim.cli import load_config

settings.register_profile(
    "suite",
    max_examples=60,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("suite")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture
def default_cfg():
    """Packaged default configuration (tabulated arm values, visibility 0.78)."""
    return load_config()


@pytest.fixture
def unit_visibility_cfg(default_cfg):
    """Default parameters with ideal two-photon interference."""
    return dataclasses.replace(default_cfg, visibility=1.0)


@pytest.fixture
def ideal_cfg(default_cfg):
    """Lossless arms, symmetric half-absorbing beamsplitter, unit visibility."""
    return dataclasses.replace(
        default_cfg,
        t_p1=0.0,
        t_q1=0.0,
        t_p2=0.0,
        t_q2=0.0,
        t_p3=0.0,
        t_q3=0.0,
        lbs=LbsParams(r=0.5, t=0.5),
        visibility=1.0,
        alpha_tabulated=None,
    )
