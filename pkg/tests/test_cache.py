import logging

from posetsat.cache import OutcomeCache, default_path, make_key, stable_json


def test_key_ignores_dict_order():
    assert make_key({"a": 1, "b": [1, 2]}) == make_key({"b": [1, 2], "a": 1})
    assert make_key({"a": 1}) != make_key({"a": 2})
    assert stable_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("POSETSAT_CACHE", str(tmp_path / "x.jsonl"))
    assert default_path() == tmp_path / "x.jsonl"
    assert OutcomeCache().path == tmp_path / "x.jsonl"


def test_put_get_and_reload(tmp_path):
    path = tmp_path / "sub" / "c.jsonl"
    cache = OutcomeCache(path)
    assert cache.get({"n": 1}) is None
    cache.put({"n": 1}, {"value": 3})
    assert cache.get({"n": 1}) == {"value": 3}
    again = OutcomeCache(path)
    assert again.get({"n": 1}) == {"value": 3} and len(again) == 1


def test_later_lines_win(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = OutcomeCache(path)
    cache.put({"n": 1}, {"value": 3})
    cache.put({"n": 1}, {"value": 4})
    assert OutcomeCache(path).get({"n": 1}) == {"value": 4}
    assert len(path.read_text().splitlines()) == 2


def test_torn_line_is_skipped(tmp_path, caplog):
    path = tmp_path / "c.jsonl"
    cache = OutcomeCache(path)
    cache.put({"n": 1}, {"value": 3})
    with path.open("a") as fh:
        fh.write('{"key": "abc", "outc')  # simulated crash mid-append
    with caplog.at_level(logging.WARNING):
        reloaded = OutcomeCache(path)
    assert "corrupt" in caplog.text
    assert reloaded.get({"n": 1}) == {"value": 3}
    # the next append starts on a fresh line, so it survives a reload
    reloaded.put({"n": 2}, {"value": 5})
    final = OutcomeCache(path)
    assert final.get({"n": 2}) == {"value": 5} and final.get({"n": 1}) == {"value": 3}
