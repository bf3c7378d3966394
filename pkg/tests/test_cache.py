import random
import struct
from fractions import Fraction

import pytest

from ellipticj import cache as cachemod
from ellipticj.cache import Cache, CacheConflictError, CacheFormatError, PhiKey, SigmaKey
from ellipticj.constraints import symbolic_parse
from ellipticj.tau import tau_general


def test_fresh_lookup_absent():
    assert Cache(3).lookup(SigmaKey(3, 1, (0, 0, 4, 0))) is None


def test_store_lookup_round_trip():
    c = Cache(3)
    k = SigmaKey(3, 1, (0, 0, 4, 0))
    c.store(k, 2)
    c.store(k, 2)
    assert c.lookup(k) == 2
    with pytest.raises(CacheConflictError):
        c.store(k, 3)


def test_phi_conflict_and_types():
    c = Cache(3)
    k = PhiKey(3, 2, 1, 1, (0, 0, 7, 0))
    c.store(k, Fraction(24))
    c.store(k, 24)
    assert c.lookup(k) == 24
    with pytest.raises(CacheConflictError):
        c.store(k, Fraction(1, 2))
    with pytest.raises(TypeError):
        c.store(SigmaKey(3, 1, (0, 0, 4, 0)), Fraction(2))
    with pytest.raises(ValueError):
        c.store(SigmaKey(4, 1, (0, 0, 4, 0, 0)), 2)


def _random_cache(seed, size, n=3):
    rng = random.Random(seed)
    c = Cache(n)
    for _ in range(size):
        counts = (0,) + tuple(rng.randint(0, 40) for _ in range(n))
        if rng.random() < 0.5:
            c.store(SigmaKey(n, rng.randint(1, 12), counts), rng.randint(-10**45, 10**45))
        else:
            num = rng.randint(-10**30, 10**30)
            den = rng.randint(1, 10**12)
            c.store(PhiKey(n, rng.randint(1, 12), rng.randint(0, 5), rng.randint(0, n), counts), Fraction(num, den))
    return c


def test_save_load_empty(tmp_path):
    path = tmp_path / "empty.bin"
    Cache(2).save(path)
    loaded = Cache.load(path)
    assert loaded.n == 2 and len(loaded.sigma) == 0 and len(loaded.phi) == 0


def test_save_load_random(tmp_path):
    c = _random_cache(1, 2000)
    path = tmp_path / "c.bin"
    c.save(path)
    loaded = Cache.load(path)
    assert dict(loaded.sigma.items()) == dict(c.sigma.items())
    assert dict(loaded.phi.items()) == dict(c.phi.items())
    for k, v in c.sigma.items():
        assert loaded.lookup(k) == v


def test_byte_identical_resave(tmp_path):
    c = _random_cache(2, 500)
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    c.save(a)
    Cache.load(a).save(b)
    assert a.read_bytes() == b.read_bytes()


def test_insertion_order_irrelevant():
    c1 = _random_cache(3, 300)
    c2 = Cache(3)
    for table_src, table_dst in ((c1.sigma, c2.sigma), (c1.phi, c2.phi)):
        for k, v in reversed(list(table_src.items())):
            table_dst.store(k, v)
    assert cachemod.encode(c1) == cachemod.encode(c2)


def test_many_stores_all_present():
    rng = random.Random(11)
    c = Cache(4)
    expected = {}
    for _ in range(100_000):
        k = SigmaKey(4, rng.randint(1, 10), (0, 0, rng.randint(0, 30), rng.randint(0, 30), rng.randint(0, 30)))
        v = expected.setdefault(k, rng.randint(0, 10**20))
        c.store(k, v)
    assert len(c.sigma) == len(expected)
    assert all(c.lookup(k) == v for k, v in expected.items())


def test_truncated_file(tmp_path):
    path = tmp_path / "c.bin"
    _random_cache(4, 50).save(path)
    data = path.read_bytes()
    for cut in (len(data) - 1, len(data) // 2, 10):
        path.write_bytes(data[:cut])
        with pytest.raises(CacheFormatError, match="checksum"):
            Cache.load(path)


def _resign(body: bytes) -> bytes:
    import hashlib

    return body + hashlib.sha256(body).digest()


def test_version_mismatch(tmp_path):
    data = cachemod.encode(_random_cache(5, 10))
    body = bytearray(data[:-32])
    struct.pack_into("<I", body, 8, cachemod.VERSION + 1)
    path = tmp_path / "v.bin"
    path.write_bytes(_resign(bytes(body)))
    with pytest.raises(CacheFormatError, match="version"):
        Cache.load(path)


def test_bad_magic_and_malformed_records():
    body = bytearray(cachemod.encode(Cache(3))[:-32])
    body[0:8] = b"NOTACACH"
    with pytest.raises(CacheFormatError, match="magic"):
        cachemod.decode(_resign(bytes(body)))

    # header claims one sigma record but the payload is empty
    body = bytearray(cachemod.encode(Cache(3))[:-32])
    struct.pack_into("<Q", body, 16, 1)
    with pytest.raises(CacheFormatError, match="malformed"):
        cachemod.decode(_resign(bytes(body)))

    # trailing garbage after the declared records
    body = cachemod.encode(Cache(3))[:-32] + b"\x00"
    with pytest.raises(CacheFormatError, match="trailing"):
        cachemod.decode(_resign(body))


def test_warm_cache_saves_work(tmp_path, fresh_cache):
    c = symbolic_parse("p:1,l:17", 3)
    cold = fresh_cache(3)
    cold_value = tau_general(3, 5, c, cache=cold)
    path = tmp_path / "p3.bin"
    cold.save(path)

    warm = Cache.load(path)
    warm_value = tau_general(3, 5, c, cache=warm)
    assert warm_value == cold_value
    assert cold.stats.sigma_evals > 0
    assert warm.stats.sigma_evals < cold.stats.sigma_evals
    assert warm.stats.sigma_evals == 0 and warm.stats.phi_evals == 0
