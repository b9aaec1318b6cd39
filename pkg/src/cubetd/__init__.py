"""TD n-tuple learning for the 2x2x2 and 3x3x3 Rubik's cube."""

__version__ = "0.1.0"
