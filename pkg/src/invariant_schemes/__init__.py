"""Symmetry-preserving finite difference schemes on evolving meshes.

Two models are covered: the heat equation with logarithmic source
``u_t = u_xx + u ln u`` and the spherical Burgers equation
``u_t + u/t + u u_x + u_xx = 0``, each with a standard, a partially invariant
and a fully invariant scheme.
"""

from invariant_schemes.models import Model, SchemeKind

__version__ = "0.1.0"

__all__ = ["Model", "SchemeKind", "__version__"]
