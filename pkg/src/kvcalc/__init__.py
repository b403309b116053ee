"""Exact weight-truncated algebra for free Lie algebras, cyclic words,
necklace brackets and the Kashiwara–Vergne equations of surfaces."""

from .rational import Q
from .series import Alphabet, TensorSeries

__all__ = ["Alphabet", "Q", "TensorSeries"]
__version__ = "0.1.0"
