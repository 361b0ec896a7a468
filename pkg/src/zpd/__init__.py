"""Zero product determined algebras: exact decision with certificates."""

__version__ = "0.1.0"
