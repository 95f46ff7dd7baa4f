"""Typical-case theory and finite-size simulation of quantized linear regression."""

try:
    from ._quantreg import *  # noqa: F401,F403
    from ._quantreg import __doc__ as _core_doc
except ImportError:
    # in-tree builds place the extension directly on sys.path
    from _quantreg import *  # noqa: F401,F403
    from _quantreg import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
