"""Construction and verification toolkit for finite F_p-braces."""

__version__ = "0.1.0"
