import logging

from wreathgrowth.backends import free_group, grigorchuk_backend
from wreathgrowth.cache import (MAGIC, Cache, ball_from_payload, ball_to_payload, cache_key, digest,
                                series_from_payload, series_to_payload)
from wreathgrowth.growth import enumerate_ball
from wreathgrowth.series import Series, parry_wreath_series, cyclic_series


def test_ball_roundtrip(tmp_path):
    rec = enumerate_ball(free_group(2), 6)
    c = Cache(tmp_path)
    c.save("k", ball_to_payload(rec))
    back = ball_from_payload(c.load("k"))
    assert back.spheres == rec.spheres == [1, 4, 12, 36, 108, 324, 972]
    assert back.radius == 6 and not back.weighted


def test_weighted_ball_roundtrip(tmp_path):
    rec = enumerate_ball(grigorchuk_backend().with_weights({"a": 0.25}), 2, weighted=True)
    c = Cache(tmp_path)
    c.save("w", ball_to_payload(rec))
    assert ball_from_payload(c.load("w")).spheres == rec.spheres


def test_series_roundtrip(tmp_path):
    s = parry_wreath_series(cyclic_series(2, 10), 0, 1)
    c = Cache(tmp_path)
    c.save("s", series_to_payload(s))
    assert series_from_payload(c.load("s")) == s
    half = Series([1, 0.5], 3)
    assert series_from_payload(series_to_payload(half)) == half


def test_keys():
    a = cache_key("ball", {"group": "grigorchuk:fsa", "radius": 3, "weights": {"a": 1}})
    b = cache_key("ball", {"group": "grigorchuk:fsa", "radius": 3, "weights": {"a": 2}})
    assert a != b
    assert a == cache_key("ball", {"weights": {"a": 1}, "radius": 3, "group": "grigorchuk:fsa"})
    assert cache_key("ball", {"r": 1}, version=2) != cache_key("ball", {"r": 1}, version=1)
    assert "-v2-" in cache_key("ball", {"r": 1}, version=2)
    assert digest({"x": [1, 2]}) == digest({"x": [1, 2]})


def test_version_bump_invalidates(tmp_path):
    Cache(tmp_path, version=1).save("k", {"x": 1})
    assert Cache(tmp_path, version=1).load("k") == {"x": 1}
    assert Cache(tmp_path, version=2).load("k") is None
    assert not (tmp_path / "k.wgc").exists()


def test_corrupt_file_is_recomputed(tmp_path, caplog):
    c = Cache(tmp_path)
    p = c.save("k", {"x": 1})
    blob = bytearray(p.read_bytes())
    blob[-2] ^= 0xFF
    p.write_bytes(bytes(blob))
    calls = []

    def compute():
        calls.append(1)
        return {"x": 2}

    with caplog.at_level(logging.WARNING, logger="wreathgrowth.cache"):
        payload, hit = c.get_or_compute("k", compute)
    assert (payload, hit, calls) == ({"x": 2}, False, [1])
    assert any("corrupt" in r.getMessage() for r in caplog.records)
    assert c.get_or_compute("k", compute) == ({"x": 2}, True)
    p.write_bytes(b"junk")
    assert c.load("k") is None
    p.write_bytes(MAGIC)
    assert c.load("k") is None


def test_home_is_expanded(monkeypatch, tmp_path):
    monkeypatch.setenv("HOME", str(tmp_path))
    assert Cache("~/wg").root == tmp_path / "wg"
