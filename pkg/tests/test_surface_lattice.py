from __future__ import annotations

from itertools import product

import pytest

from gwseries.errors import RankMismatch, SchemaError
from gwseries.surface_lattice import (
    F1,
    P2,
    CurveClass,
    SurfacePreset,
    blowup_class_map,
    cc_dot,
    cc_tangency,
    decompose_for_delta,
    enumerate_effective_upto,
    get_preset,
)

B, F = CurveClass.of(1, 0), CurveClass.of(0, 1)
H = CurveClass.of(1)


def test_f1_pairing():
    assert cc_dot(F1, B, B) == -1
    assert cc_dot(F1, B + F, B + F) == 1
    assert cc_dot(F1, F, F) == 0
    assert cc_dot(F1, F1.anticanonical, F1.anticanonical) == 8


def test_p2_pairing():
    assert cc_dot(P2, H, H) == 1
    assert cc_tangency(P2, H * 2) == 6


def test_f1_tangencies():
    assert [cc_tangency(F1, c) for c in (B, F, B + F)] == [1, 2, 3]


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        cc_dot(F1, B, H)
    with pytest.raises(RankMismatch):
        B + H


def test_class_arithmetic():
    assert B + F - B == F
    assert (B * 3).coords == (3, 0)
    assert not (B - F).is_effective()
    assert (-B).coords == (-1, 0)


@pytest.mark.parametrize("d,coords", [(1, (0, 1)), (2, (1, 2)), (3, (2, 3)), (4, (3, 4))])
def test_blowup_class_map(d, coords):
    assert blowup_class_map(d).coords == coords


def test_blowup_class_map_hits_anticanonical():
    assert blowup_class_map(3) == F1.anticanonical


def test_blowup_class_map_tangency_is_d_minus_one_plus_d():
    # strict transform of a degree-d curve through the centre: (pi*dH - C).E = 3d - 1
    for d in range(1, 8):
        assert cc_tangency(F1, blowup_class_map(d)) == 3 * d - 1


def test_enumerate_small():
    assert enumerate_effective_upto(P2, 2) == [CurveClass.of(0), H, H * 2]
    assert enumerate_effective_upto(F1, 1) == [CurveClass.of(0, 0), B, F]
    assert enumerate_effective_upto(F1, 0) == [CurveClass.of(0, 0)]


def test_enumerate_counts():
    # classes aB+bF with a+b <= d
    for d in range(7):
        assert len(enumerate_effective_upto(F1, d)) == (d + 1) * (d + 2) // 2


def test_enumerate_sorted_by_degree():
    out = enumerate_effective_upto(F1, 5)
    degs = [F1.degree(c) for c in out]
    assert degs == sorted(degs)


def test_format_and_parse():
    assert F1.format_class(CurveClass.of(2, 3)) == "2B+3F"
    assert F1.format_class(CurveClass.of(0, 0)) == "0"
    assert F1.parse_class("3B+4F") == CurveClass.of(3, 4)
    assert F1.parse_class("3,4") == CurveClass.of(3, 4)
    assert F1.parse_class("F") == F
    assert P2.parse_class("2H") == H * 2
    for c in enumerate_effective_upto(F1, 4):
        assert F1.parse_class(F1.format_class(c)) == c


def test_get_preset_unknown():
    with pytest.raises(SchemaError):
        get_preset("dp5")


def test_preset_validation():
    with pytest.raises(SchemaError):
        SurfacePreset("bad", 2, ((1, 0), (1, 0)), CurveClass.of(1, 1), (1, 1), 4, ("A", "B"))


# decompositions versus brute force ---------------------------------------------

def _brute_decompositions(p, beta, nmax):
    E = p.anticanonical
    subs = [
        CurveClass(c)
        for c in product(*(range(x + 1) for x in beta.coords))
        if any(c) and cc_tangency(p, CurveClass(c)) > 0
    ]
    found = set()
    for dE in range(0, 20):
        rem = beta - E * dE
        if not rem.is_effective():
            break
        for n in range(0, nmax + 1):
            for parts in product(subs, repeat=n):
                total = CurveClass.zero(p.rank)
                for c in parts:
                    total = total + c
                if total == rem:
                    found.add((dE, tuple(sorted(parts))))
    return found


@pytest.mark.parametrize("coords", [(0, 1), (1, 1), (1, 2), (2, 3), (3, 4), (2, 2)])
@pytest.mark.parametrize("nmax", [0, 1, 2, 3])
def test_decompose_matches_brute_force_f1(coords, nmax):
    beta = CurveClass(coords)
    got = decompose_for_delta(F1, beta, nmax)
    assert len(got) == len(set(got))
    assert {(d.d_E, d.parts) for d in got} == _brute_decompositions(F1, beta, nmax)


@pytest.mark.parametrize("deg", range(0, 8))
def test_decompose_matches_brute_force_p2(deg):
    beta = H * deg
    got = decompose_for_delta(P2, beta, 4)
    assert {(d.d_E, d.parts) for d in got} == _brute_decompositions(P2, beta, 4)


def test_decompose_zero_class():
    got = decompose_for_delta(F1, CurveClass.of(0, 0), 3)
    assert [(d.d_E, d.parts) for d in got] == [(0, ())]


def test_decompose_reconstructs_beta():
    beta = CurveClass.of(3, 4)
    for d in decompose_for_delta(F1, beta, 4):
        total = F1.anticanonical * d.d_E
        for c in d.parts:
            total = total + c
        assert total == beta
