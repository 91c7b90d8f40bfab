import pytest

from zr.plugins.registry import available_formats, get, register


class DummyPlugin:
    format = "dummy"

    def read_keys(self, path): ...
    def write_keys(self, path, keys): ...


def test_register_and_get_plugin():
    plugin = DummyPlugin()
    register(plugin)

    retrieved = get("dummy")
    assert retrieved is plugin

    with pytest.raises(ValueError):
        register(DummyPlugin())


def test_builtin_formats():
    assert {"bin", "txt"} <= set(available_formats())


def test_unknown_plugin():
    with pytest.raises(ValueError):
        get("does-not-exist")
