"""Horocyclic Radon transform and its unitarization on the hyperbolic disk."""
__version__ = "0.1.0"
