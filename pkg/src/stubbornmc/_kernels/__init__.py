"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled module is used when it was built; otherwise the pure-Python
twin is loaded. Both expose the same functions with identical results.
"""

from types import ModuleType

from . import _pure

try:
    from . import _native
except ImportError:  # extension not built
    _native = None

BACKENDS = {"python": _pure}
if _native is not None:
    BACKENDS["native"] = _native

DEFAULT_BACKEND = "native" if _native is not None else "python"


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        name = DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"kernel backend {name!r} unavailable (have: {', '.join(BACKENDS)})"
        ) from None


kernels = get_backend()
