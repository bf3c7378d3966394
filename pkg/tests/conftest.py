import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ellipticj import cache as cachemod


@pytest.fixture
def fresh_cache():
    """Empty process-wide caches for the duration of one test."""
    saved = dict(cachemod._registry)
    cachemod.reset()
    yield cachemod.default_cache
    cachemod.reset()
    cachemod._registry.update(saved)
