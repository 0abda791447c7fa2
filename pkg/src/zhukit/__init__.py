"""Exact computation of level-p Zhu algebras of universal enveloping vertex algebras."""
from __future__ import annotations

__version__ = "0.1.0"
