"""Numerical laboratory for hypersurfaces of the nearly Kaehler S6 and S3 x S3."""

__version__ = "0.1.0"
