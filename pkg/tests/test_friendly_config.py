import pytest
from leslie.friendly_config import FriendlyConfig


def test_key_present():
    config = FriendlyConfig({"solver.dt": 0.1})
    assert config["solver.dt"] == 0.1
    assert config.get("solver.dt", "missing") == 0.1
    assert "solver.dt" in config


def test_key_missing_get():
    config = FriendlyConfig({})
    assert config.get("solver.dt") is None
    assert config.get("solver.dt", "missing") == "missing"
    assert "solver.dt" not in config


def test_layers_are_searched_in_order():
    config = FriendlyConfig(
        {"solver.scheme": "imex"}, {"solver.scheme": "rk4", "solver.dealias": True}
    )
    assert config["solver.scheme"] == "imex"
    assert config["solver.dealias"] is True
    assert config.keys() == ["solver.dealias", "solver.scheme"]


def test_key_not_str():
    config = FriendlyConfig({})
    with pytest.raises(TypeError, match=r".*int"):
        config[1]  # pylint: disable=pointless-statement

    with pytest.raises(TypeError, match=r".*int"):
        config.get(1)

    with pytest.raises(TypeError, match=r".*int"):
        1 in config  # pylint: disable=pointless-statement


def test_key_missing():
    config = FriendlyConfig({}, source="run.cfg")
    with pytest.raises(KeyError) as excinfo:
        config["solver.dt"]  # pylint: disable=pointless-statement

    assert "run.cfg" in str(excinfo.value)
    assert "solver.dt = <value>" in str(excinfo.value)
