from .construction1 import construction1
from .construction2 import construction2
from .general import general_construction
from .rational import general_construction_rational
from .registry import FAMILIES, best_construction, get_construction
from .typed import describe_types

__all__ = [
    "FAMILIES",
    "best_construction",
    "construction1",
    "construction2",
    "describe_types",
    "general_construction",
    "general_construction_rational",
    "get_construction",
]
