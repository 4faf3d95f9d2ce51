"""Ruled-family sphere eversion: evaluation, validation and mesh export."""

try:
    from ._everse import *  # noqa: F401,F403  (installed package layout)
    from . import _everse as _impl
except ImportError:  # build-tree layout: extension sits on sys.path directly
    from _everse import *  # noqa: F401,F403
    import _everse as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
