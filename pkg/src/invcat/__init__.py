"""Internal inverse categories over finite base categories."""

__version__ = "0.1.0"
