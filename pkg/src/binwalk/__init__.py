"""Coined quantum walks evaluated through rotated frequency-bin measurements."""

__version__ = "0.1.0"
