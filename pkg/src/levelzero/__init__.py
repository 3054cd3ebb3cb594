"""Level-zero decomposition data for unramified reductive p-adic groups."""

from .kernels import BACKEND
from .rootdatum import GroupSpec, RootDatum, build, build_classical
from .weyl import WeylGroup
from .classes import ClassContext, ClassLabel
from .alcove import Building
from .labels import h_map, kottwitz_group

__all__ = [
    "BACKEND",
    "GroupSpec",
    "RootDatum",
    "build",
    "build_classical",
    "WeylGroup",
    "ClassContext",
    "ClassLabel",
    "Building",
    "h_map",
    "kottwitz_group",
]
__version__ = "0.1.0"
