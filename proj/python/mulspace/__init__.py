"""Python surface of the mulspace core.

Everything heavy lives in the compiled ``_mulspace`` module; this package
just re-exports it under a stable name.  Installed wheels carry the
extension inside the package, while in-tree test runs put the build
directory on ``sys.path``, so try the relative import first.
"""

try:
    from ._mulspace import *  # noqa: F401,F403
    from ._mulspace import __doc__  # noqa: F401
except ImportError:
    from _mulspace import *  # noqa: F401,F403
    from _mulspace import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
