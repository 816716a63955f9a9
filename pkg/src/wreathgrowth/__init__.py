"""Growth of wreath products and of groups in the Grigorchuk family.

Exact arithmetic in wreath products and self-similar groups, ball and
series computations, the simplex metric for G_omega, inverted orbits,
and a builder for omega sequences with prescribed growth.
"""

from .errors import (ContractViolation, DomainError, PreconditionError, ResourceError, SpecParseError,
                     UnsupportedInputError, WreathGrowthError)
from .growth import (BallRecord, Generator, MarkedGroupBackend, enumerate_ball, find_k_hills,
                     genset_equiv_check, quotient_diameter)
from .selfsim import FIRST_GRIGORCHUK, GrigGroup, OmegaSeq, grig_group, order, portrait, wp_trivial
from .series import Series

__version__ = "0.1.0"

__all__ = [
    "BallRecord", "ContractViolation", "DomainError", "FIRST_GRIGORCHUK", "Generator", "GrigGroup",
    "MarkedGroupBackend", "OmegaSeq", "PreconditionError", "ResourceError", "Series",
    "SpecParseError", "UnsupportedInputError", "WreathGrowthError", "enumerate_ball",
    "find_k_hills", "genset_equiv_check", "grig_group", "order", "portrait", "quotient_diameter",
    "wp_trivial",
]
