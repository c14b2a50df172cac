"""Function-correcting codes for insertion-deletion channels."""

__version__ = "0.1.0"
