"""Exact intersection homology, duality maps and sign checks on simplicial pseudomanifolds."""

from .exactfield import GF, QQ, parse_field
from .complex import StratifiedComplex, barycentric_subdivide, cone, suspension
from .perversity import Perversity, gm_perversity, parse_perversity
from .ichains import build, homology, ih_dims

__version__ = "0.1.0"

__all__ = [
    "GF", "QQ", "parse_field", "StratifiedComplex", "barycentric_subdivide", "cone",
    "suspension", "Perversity", "gm_perversity", "parse_perversity", "build", "homology",
    "ih_dims",
]
