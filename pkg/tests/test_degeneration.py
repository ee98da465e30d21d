from __future__ import annotations

import random
from fractions import Fraction as Fr

import pytest

from gwseries.degeneration import DegenerationInput, assemble_Nz, genus1_v3_direct_check, vertex_product
from gwseries.errors import InvalidTangency
from gwseries.genus_series import GenusSeries, kernel_v2, kernel_v3, series_from_coeffs
from gwseries.transforms import two_point_from_local_g0


def _triple(R, e, g):
    v2, v3 = kernel_v2(e, g), kernel_v3(g)
    return (e - 1) * sum(
        R.coefficient(a) * v2.coefficient(b) * v3.coefficient(g - a - b)
        for a in range(g + 1)
        for b in range(g + 1 - a)
    )


@pytest.mark.parametrize("seed", range(20))
def test_triple_convolution_brute_force(seed):
    rng = random.Random(seed)
    e = rng.randint(2, 9)
    cap = rng.randint(0, 4)
    R = series_from_coeffs([Fr(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(cap + 1)], 0)
    out = assemble_Nz(DegenerationInput(e, R, cap))
    assert [out.coefficient(g) for g in range(cap + 1)] == [_triple(R, e, g) for g in range(cap + 1)]


@pytest.mark.parametrize("e", range(2, 13))
def test_genus0_collapse(e):
    rng = random.Random(e)
    n0 = Fr(rng.randint(-50, 50), rng.randint(1, 9))
    R = GenusSeries.constant(two_point_from_local_g0(e, n0), 2)
    assert assemble_Nz(DegenerationInput(e, R, 2)).coefficient(0) == n0


def test_zero_input():
    assert assemble_Nz(DegenerationInput(4, GenusSeries.zero(3), 3)).is_zero()


@pytest.mark.parametrize("e", range(2, 8))
def test_vertex_product_genus1(e):
    # V2 and V3 genus-1 terms are (-1)^e/24 and -1/24
    v = vertex_product(e, 1)
    lead = Fr((-1) ** e, (e - 1) ** 2)
    assert v.coefficient(1) == Fr((-1) ** e, 24) - lead / 24


def test_genus1_v3_direct_check():
    assert genus1_v3_direct_check() == Fr(-1, 24) == kernel_v3(1).coefficient(1)


def test_input_validation():
    with pytest.raises(InvalidTangency):
        DegenerationInput(1, GenusSeries.one(1), 1)
    with pytest.raises(ValueError):
        DegenerationInput(3, GenusSeries.one(1), 2)
    with pytest.raises(ValueError):
        DegenerationInput(3, GenusSeries.one(1), -1)


def test_cap_is_respected():
    out = assemble_Nz(DegenerationInput(3, GenusSeries.one(5), 2))
    assert out.cap == 2
