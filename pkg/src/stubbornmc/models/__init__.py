from .fixtures import FIXTURES, build_fixture
from .peterson import LETTERS, Variant, build_peterson, format_peterson

__all__ = ["FIXTURES", "LETTERS", "Variant", "build_fixture", "build_peterson", "format_peterson"]
