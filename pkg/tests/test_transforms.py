from __future__ import annotations

import random
from fractions import Fraction as Fr

import pytest

from gwseries.errors import InvalidTangency, NotInImage, ZeroTangency
from gwseries.genus_series import GenusSeries, kernel_k1, kernel_sin_power, series_from_coeffs
from gwseries.invariant_store import InvariantKind, InvariantTable, NovikovSeries
from gwseries.surface_lattice import F1, P2, CurveClass, cc_tangency, enumerate_effective_upto
from gwseries.transforms import (
    genus1_gv_closed_form,
    gv_to_gw,
    gw_to_gv,
    hat_relation,
    hat_relation_inverse,
    loglocal_g0,
    loglocal_g0_inverse,
    open_closed_sign,
    two_point_from_local_g0,
)

K = InvariantKind
B, F = CurveClass.of(1, 0), CurveClass.of(0, 1)
H = CurveClass.of(1)


def random_gv(preset, rng, dcap, gcap):
    entries = {}
    for c in enumerate_effective_upto(preset, dcap)[1:]:
        for g in range(gcap + 1):
            if rng.random() < 0.6:
                entries[(K.GvLocal, c, g)] = Fr(rng.randint(-30, 30))
    return InvariantTable(preset.id, entries, gcap, dcap)


def nonzero(t):
    return {k: v for k, v in t.entries.items() if v}


def test_empty_table():
    assert gv_to_gw(InvariantTable("f1", {}, 2, 4), F1).is_zero()


def test_double_cover_coefficient():
    t = InvariantTable("p2", {(K.GvLocal, H, 0): Fr(1)}, 0, 2)
    F = gv_to_gw(t, P2)
    assert F.coefficient(H * 2).coefficient(-1) == Fr(1, 8)


def test_double_cover_brute_force():
    # (1/k) (2 sin(k h/2))^(2g-2) at k = 2, g = 0 and 2 via the sin kernel
    t = InvariantTable("p2", {(K.GvLocal, H, 0): Fr(1), (K.GvLocal, H, 2): Fr(3)}, 2, 2)
    F = gv_to_gw(t, P2)
    expect = kernel_sin_power(0, 2, 1) * Fr(1, 2) + kernel_sin_power(2, 2, 1) * Fr(3, 2)
    assert F.coefficient(H * 2) == expect


def test_gw_to_gv_by_hand():
    s = series_from_coeffs([1, Fr(1, 12)], -1)
    F = NovikovSeries.from_dict(F1, {B: s}, 1, 0)
    out = gw_to_gv(F)
    assert nonzero(out) == {(K.GvLocal, B, 0): 1}


def test_gw_to_gv_zero():
    assert gw_to_gv(NovikovSeries.from_dict(F1, {}, 3, 1)).entries == {}


def test_gw_to_gv_rejects_constant_class():
    F = NovikovSeries.from_dict(F1, {F1.zero(): GenusSeries.one(1)}, 3, 1)
    with pytest.raises(NotInImage):
        gw_to_gv(F)


@pytest.mark.parametrize("seed", range(25))
@pytest.mark.parametrize("preset", [F1, P2], ids=["f1", "p2"])
def test_round_trip(seed, preset):
    rng = random.Random(seed)
    t = random_gv(preset, rng, 6, rng.randint(0, 4))
    back = gw_to_gv(gv_to_gw(t, preset))
    assert nonzero(back) == nonzero(t)


@pytest.mark.parametrize("seed", range(20))
def test_genus1_at_primitive_classes(seed):
    rng = random.Random(seed)
    t = random_gv(F1, rng, 5, 1)
    F = gv_to_gw(t, F1)
    for c in enumerate_effective_upto(F1, 5)[1:]:
        if _gcd(c.coords) != 1:
            continue
        n0 = t.get(K.GvLocal, c, 0, strict=False)
        n1 = t.get(K.GvLocal, c, 1, strict=False)
        s = F.coefficient(c)
        assert s.coefficient(0) == n1 + n0 / 12
        assert genus1_gv_closed_form(s.coefficient(-1), s.coefficient(0)) == n1


def _gcd(xs):
    from math import gcd

    out = 0
    for x in xs:
        out = gcd(out, x)
    return out


def test_genus1_closed_form_zero():
    assert genus1_gv_closed_form(0, 0) == 0


def test_open_closed_sign_involution():
    t = InvariantTable("f1", {(K.GvLocal, B, 0): Fr(3), (K.GvLocal, B, 1): Fr(-2), (K.LogMax, F, 0): Fr(7)})
    once = open_closed_sign(t)
    assert once.entries == {(K.OpenBps, B, 0): Fr(-3), (K.OpenBps, B, 1): Fr(-2), (K.LogMax, F, 0): Fr(7)}
    assert open_closed_sign(once).entries == t.entries


def test_loglocal_g0():
    assert loglocal_g0(F1, B, 5) == 5
    assert loglocal_g0(F1, B + F, 5) == 15
    assert loglocal_g0(F1, F, 5) == -10
    for c in (B, F, B + F, F * 3):
        assert loglocal_g0_inverse(F1, c, loglocal_g0(F1, c, Fr(7, 3))) == Fr(7, 3)


def test_loglocal_zero_tangency():
    # every preset generator meets E positively, so only the zero class has E-degree 0
    with pytest.raises(ZeroTangency):
        loglocal_g0(F1, F1.zero(), 1)
    with pytest.raises(ZeroTangency):
        loglocal_g0_inverse(P2, P2.zero(), 1)


def test_two_point_from_local_g0():
    assert two_point_from_local_g0(2, 1) == 1
    assert two_point_from_local_g0(3, -2) == 4
    with pytest.raises(InvalidTangency):
        two_point_from_local_g0(1, 1)


def test_hat_relation_round_trip():
    r = series_from_coeffs([Fr(3), Fr(-1, 5), Fr(2, 7), 9], 0)
    assert hat_relation_inverse(hat_relation(r)) == r
    assert hat_relation(GenusSeries.one(3)) == kernel_k1(3)


def test_check_class_tangencies_positive():
    for c in enumerate_effective_upto(F1, 4)[1:]:
        assert cc_tangency(F1, c) > 0
