from zr.plugins.io import KeyFilePlugin

_PLUGINS: dict[str, KeyFilePlugin] = {}


def register(plugin: KeyFilePlugin) -> None:
    if plugin.format in _PLUGINS:
        raise ValueError(f"Plugin already registered: {plugin.format}")
    _PLUGINS[plugin.format] = plugin


def get(format_name: str) -> KeyFilePlugin:
    try:
        return _PLUGINS[format_name]
    except KeyError:
        raise ValueError(f"Unknown key file format: {format_name}")


def available_formats() -> list[str]:
    return sorted(_PLUGINS)
