import pytest

from kblinker.config import (
    LinkerConfig,
    REQUEST_KEYS,
    ServiceConfig,
    apply_overrides,
    load_config,
    read_properties,
)
from kblinker.errors import InvalidValue


def test_defaults():
    cfg = load_config(properties_path=None, environ={})
    linker = cfg.linker
    assert linker.algorithm == "hits"
    assert linker.depth == 2
    assert linker.ngram_distance == 3
    assert linker.popularity is False
    assert linker.context is False
    assert linker.acronym is False
    assert linker.common_entities is False
    assert linker.heuristic_expansion is True
    assert linker.sim_threshold == 0.82
    assert linker.max_candidates == 100
    assert cfg.port == 8080


def test_properties_file(tmp_path):
    props = tmp_path / "agdistis.properties"
    props.write_text(
        "algorithm=pagerank\ndepth=3\npopularity=true\n# comment\nsimThreshold=0.9\n",
        encoding="utf-8",
    )
    cfg = load_config(props, environ={})
    assert cfg.linker.algorithm == "pagerank"
    assert cfg.linker.depth == 3
    assert cfg.linker.popularity is True
    assert cfg.linker.sim_threshold == 0.9


def test_env_beats_file(tmp_path):
    props = tmp_path / "agdistis.properties"
    props.write_text("algorithm=pagerank\n", encoding="utf-8")
    cfg = load_config(props, environ={"AGD_ALGORITHM": "hits"})
    assert cfg.linker.algorithm == "hits"


def test_env_only():
    cfg = load_config(None, environ={"AGD_DEPTH": "5", "AGD_PORT": "9001"})
    assert cfg.linker.depth == 5
    assert cfg.port == 9001


def test_invalid_depth_named_in_error(tmp_path):
    props = tmp_path / "p.properties"
    props.write_text("depth=-1\n", encoding="utf-8")
    with pytest.raises(InvalidValue) as exc:
        load_config(props, environ={})
    assert exc.value.key == "depth"


def test_invalid_boolean():
    with pytest.raises(InvalidValue):
        load_config(None, environ={"AGD_POPULARITY": "yes"})


def test_invalid_algorithm():
    with pytest.raises(InvalidValue):
        load_config(None, environ={"AGD_ALGORITHM": "linker"})


def test_query_overrides_restricted_to_request_keys():
    cfg = LinkerConfig()
    out = apply_overrides(cfg, {"simThreshold": "0.1", "depth": "4"}, REQUEST_KEYS)
    assert out.sim_threshold == 0.82  # not request-overridable
    assert out.depth == 4


def test_linker_config_validation():
    with pytest.raises(InvalidValue):
        LinkerConfig(ngram_distance=1)
    with pytest.raises(InvalidValue):
        LinkerConfig(algorithm="dijkstra")
    with pytest.raises(InvalidValue):
        LinkerConfig(sim_threshold=1.5)
    with pytest.raises(InvalidValue):
        ServiceConfig(port=0)


def test_read_properties_rejects_garbage(tmp_path):
    f = tmp_path / "bad.properties"
    f.write_text("not a property line\n", encoding="utf-8")
    with pytest.raises(InvalidValue):
        read_properties(f)
