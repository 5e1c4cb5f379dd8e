from __future__ import annotations

import numpy as np
import pytest

from fradex import _pykernels

try:
    from fradex import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

KERNEL_MODULES = [pytest.param(_pykernels, id="numpy")]
if _compiled is not None:
    KERNEL_MODULES.append(pytest.param(_compiled, id="cython"))


@pytest.fixture(params=KERNEL_MODULES)
def kernel_module(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
