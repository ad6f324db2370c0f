"""Fronthaul bit allocation for cell-free massive MIMO uplink."""

from cfbits._core import *  # noqa: F401,F403
from cfbits._core import __version__  # noqa: F401
