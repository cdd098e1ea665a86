"""Intermediate representations and their term encodings."""

from .encode import DecodeError, decode, encode

__all__ = ["DecodeError", "decode", "encode"]
