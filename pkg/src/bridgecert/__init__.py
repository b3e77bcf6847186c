"""Bridge number certificates for link diagrams.

Computes the Wirtinger number of a diagram (an upper bound for the
bridge number of the link) and verifies Coxeter quotient labelings
whose rank bounds the meridional rank from below; when the two numbers
meet, the package emits a replayable certificate that bridge number and
meridional rank are equal to that value.
"""

__version__ = "0.1.0"

from .coxeter import Certificate, CoxeterGraph, StrandLabeling, certify, rank
from .diagram import Diagram, DiagramError, parse_pd
from .fatgraph import FatGraph
from .wirtinger import ColoringSequence, OmegaResult, omega

__all__ = [
    "Certificate",
    "CoxeterGraph",
    "ColoringSequence",
    "Diagram",
    "DiagramError",
    "FatGraph",
    "OmegaResult",
    "StrandLabeling",
    "certify",
    "omega",
    "parse_pd",
    "rank",
    "__version__",
]
