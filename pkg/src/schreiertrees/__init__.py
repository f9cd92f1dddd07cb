"""Edge-colored Schreier trees of free products of order-two groups."""

from .trees import Code, FamilyError, NatSet, Vertex, family_from_json
from .words import GAMMA3, GAMMA5, FreeProduct

__all__ = ["Code", "FamilyError", "FreeProduct", "GAMMA3", "GAMMA5", "NatSet", "Vertex", "family_from_json"]
__version__ = "0.1.0"
