from __future__ import annotations

import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nurbs_inverse import Backend, global_inverse, load_fixture  # noqa: E402

FIXTURE_NAMES = ("quadratic", "cubic", "quartic", "quintic")


@functools.lru_cache(maxsize=None)
def curve(name, backend=Backend.EXACT):
    return load_fixture(name, backend)


@functools.lru_cache(maxsize=None)
def inverse(name, backend=Backend.EXACT):
    if backend is Backend.EXACT:
        return global_inverse(curve(name))
    return inverse(name).to_backend(Backend.FLOAT)


@pytest.fixture(params=FIXTURE_NAMES)
def fixture_name(request):
    return request.param
