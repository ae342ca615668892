"""Theory files and the ``lawvere`` command."""

from .dsl import parse_functor, parse_morphism, parse_theory, print_theory
from .main import main

__all__ = ["main", "parse_functor", "parse_morphism", "parse_theory", "print_theory"]
