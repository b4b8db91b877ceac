"""Rational curve counts on split quartic del Pezzo surfaces over finite fields."""

__version__ = "0.1.0"
