from __future__ import annotations

import pytest

from bayesborrow import (
    GammaMixtureHyperparams,
    HistoricalSource,
    load_bundled,
)


@pytest.fixture(scope="session")
def alzheimers():
    """Seven-source reference scenario with the resolved hyperparameters (endpoint 1010)."""
    return load_bundled("alzheimers.scenario.json")


@pytest.fixture(scope="session")
def alzheimers_stated():
    """Same sources with the commonly quoted hyperparameters (endpoint 101)."""
    return load_bundled("alzheimers_stated.scenario.json")


@pytest.fixture(scope="session")
def configs():
    """The four five-source benchmark configurations."""
    return {name: load_bundled(f"config_{name}.scenario.json") for name in "abcd"}


@pytest.fixture(scope="session")
def two_source():
    return load_bundled("two_source_demo.scenario.json")


@pytest.fixture()
def default_hyper():
    return GammaMixtureHyperparams()  # a01=1.01, b01=1.01, a02=1e6, b02=1, c0=0.05


@pytest.fixture()
def steep_hyper():
    """The two-source demo parameterization: discounting endpoint 11."""
    return GammaMixtureHyperparams(a01=1.1, b01=1.1, a02=1.0e6, b02=1.0, c0=0.05)


@pytest.fixture()
def source_01():
    return HistoricalSource(id="s1", theta=1.0, tau_sq=0.1)
