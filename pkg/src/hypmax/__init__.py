"""Numerical laboratory for uncentred maximal operators over half balls
on the hyperbolic upper half-plane and on NA groups built from H-type
algebras."""

__version__ = "0.1.0"
