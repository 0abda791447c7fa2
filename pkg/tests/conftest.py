from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from zhukit.enveloping import ModeAlgebra
from zhukit.lca import current_sl2, virasoro
from zhukit.vertex import VertexAlgebra

settings.register_profile("zhukit", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("zhukit")


@pytest.fixture(scope="session")
def vir_alg():
    return ModeAlgebra(virasoro())


@pytest.fixture(scope="session")
def sl2_alg():
    return ModeAlgebra(current_sl2())


@pytest.fixture(scope="session")
def vir_va():
    return VertexAlgebra(virasoro())


@pytest.fixture(scope="session")
def sl2_va():
    return VertexAlgebra(current_sl2())
