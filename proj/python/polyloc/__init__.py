"""Long-range lattice operators on finite cubes.

Thin wrapper over the compiled extension; everything public lives in
``polyloc._core`` and is re-exported here.
"""

from polyloc._core import *  # noqa: F401,F403
from polyloc._core import __version__  # noqa: F401
