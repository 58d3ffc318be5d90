from .classic import CLASSIC, ClassicFunction, classic
from .gkls import GeneratedClass, GenerationError, generate_class, shift

__all__ = [
    "CLASSIC",
    "ClassicFunction",
    "classic",
    "GeneratedClass",
    "GenerationError",
    "generate_class",
    "shift",
]
