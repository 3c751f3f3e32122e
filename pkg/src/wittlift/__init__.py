"""Lifting mod-p matrix representations of finite groups and local Galois groups to mod-p^2 coefficients."""

__version__ = "0.1.0"
