"""Bidirectional Lustre <-> C compiler and lifter built on a relational core."""

__version__ = "0.1.0"
