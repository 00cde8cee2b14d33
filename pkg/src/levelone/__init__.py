"""Level-1 Fourier weight of Boolean functions: bounds, certificates, search."""
from ._core import BACKEND
from .specfun import ProfileParams

__version__ = "0.1.0"

__all__ = ["BACKEND", "ProfileParams", "__version__"]
