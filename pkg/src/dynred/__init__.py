"""Exact arithmetic for rational maps on P^1(Q) with marked point sets:
good reduction outside a prime set, portraits, multiplier invariants and
interpolation of maps from value constraints."""

__version__ = "0.1.0"
