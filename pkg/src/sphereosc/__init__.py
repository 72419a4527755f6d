"""Isotropic oscillator on a sphere with a fluctuating radius."""
__version__ = "0.1.0"
