"""Link-level simulator for phase-aligned space-time coding.

The heavy lifting lives in the C++ extension; this package re-exports it and
adds a small JSON-config convenience wrapper around the experiment runners.
"""

from mimolab._core import *  # noqa: F401,F403
from mimolab._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
