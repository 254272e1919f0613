"""Polarization kernel toolkit: metrics, decoding complexity, search, codec."""

from polarkit.gf2 import BitMatrix

__all__ = ["BitMatrix"]
