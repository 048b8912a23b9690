import math

import pytest

from decoyattack import BobParams, EveParams, QuadratureConfig, SourceParams


@pytest.fixture
def source():
    """Canonical source: signal 0.48, decoy 0.10, 10-degree phase window."""
    return SourceParams(mu=0.48, nu=0.10, delta=math.radians(10.0))


@pytest.fixture
def eve():
    """Ideal eavesdropper hardware, threshold 1.5."""
    return EveParams(y0e=0.0, eta_e=1.0, kappa_e=1.0, lambda_e=1.0, x0=1.5)


@pytest.fixture
def bob():
    """Canonical receiver: Y0=1.7e-6, eta_bob=0.045, f=1.22."""
    return BobParams(y0=1.7e-6, eta_bob=0.045, f_ec=1.22)


@pytest.fixture
def quad():
    return QuadratureConfig(phi_nodes=64)
