"""Degeneration assembly of the one-pointed invariants of Z = P(K_X + O)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidTangency
from .genus_series import GenusSeries, kernel_v2, kernel_v3


@dataclass(frozen=True)
class DegenerationInput:
    e: int
    R_twopoint: GenusSeries
    genus_cap: int

    def __post_init__(self):
        if self.e < 2:
            raise InvalidTangency(f"tangency e={self.e} must be >= 2")
        if self.genus_cap < 0:
            raise ValueError("genus_cap must be >= 0")
        if self.R_twopoint.cap < self.genus_cap:
            raise ValueError("R_twopoint is truncated below genus_cap")


def vertex_product(e: int, cap: int) -> GenusSeries:
    """The V2*V3 factor shared by every term of the degeneration formula."""
    return kernel_v2(e, cap) * kernel_v3(cap)


def assemble_Nz(inp: DegenerationInput) -> GenusSeries:
    """``sum_g N_{g,1}(Z, beta+h) hbar^2g`` from the two-point log series of V1.

    Edge weights are 1 and e-1; after the lcm and automorphism factors the
    net prefactor is e-1.
    """
    cap = inp.genus_cap
    R = inp.R_twopoint.truncate(cap)
    return R * vertex_product(inp.e, cap) * (inp.e - 1)


LINES_THROUGH_TWO_POINTS = 1


def genus1_v3_direct_check() -> Fraction:
    """Genus-1 V3 vertex by degenerating lambda_1 to the nodal boundary.

    ``lambda_1 = delta_0 / 12`` on M_{1,1}; the node contributes the
    diagonal class D x D, whose two diagonal terms vanish, leaving one
    point-point term.  The 1/2 is the automorphism of the node branches and
    the sign comes from the ``-lambda_1`` insertion.
    """
    node_symmetry = Fraction(1, 2)
    lambda1_coefficient = Fraction(-1, 12)
    value = node_symmetry * lambda1_coefficient * LINES_THROUGH_TWO_POINTS
    assert value == kernel_v3(1).coefficient(1)
    return value
