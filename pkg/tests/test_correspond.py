from __future__ import annotations

import random
from fractions import Fraction as Fr

import pytest

from gwseries.correspond import (
    c_series,
    check_blowup,
    check_classes,
    check_maing1,
    check_open_closed,
    check_theorem_main,
    generate_dataset,
    is_primitive,
    theta_structure,
)
from gwseries.errors import InvalidTangency, MissingInvariant
from gwseries.genus_series import kernel_v2, kernel_v3
from gwseries.invariant_store import Dataset, InvariantKind, InvariantTable, bundled_dataset
from gwseries.surface_lattice import F1, P2, CurveClass, cc_tangency

K = InvariantKind
B, F = CurveClass.of(1, 0), CurveClass.of(0, 1)


def replace(ds, entries):
    return Dataset(ds.preset, ds.table.with_entries(entries), ds.oracle)


def drop(ds, kind):
    return Dataset(ds.preset, ds.table.without_kind(kind), ds.oracle)


def residual_map(report):
    return {(r.cls, r.genus, r.term): r.value for r in report.residuals}


# bundled reference data ------------------------------------------------------------------

@pytest.mark.parametrize("fn", [check_theorem_main, check_maing1, check_blowup, check_open_closed])
def test_bundled_dataset_passes(fn):
    report = fn(bundled_dataset())
    assert report.passed
    assert report.residuals


def test_bundled_acceptance_fixture_class():
    report = check_maing1(bundled_dataset(), classes=[CurveClass.of(2, 3)])
    assert [r.value for r in report.residuals] == [0]


def test_check_classes_bundled():
    assert check_classes(bundled_dataset()) == [CurveClass.of(d - 1, d) for d in range(1, 5)]


def test_is_primitive():
    assert is_primitive(CurveClass.of(2, 3))
    assert not is_primitive(CurveClass.of(2, 2))
    assert not is_primitive(CurveClass.of(0, 0))


def test_c_series_leading_terms():
    for e in range(2, 9):
        c = c_series(e, 2)
        assert c.coefficient(0) == 1
        assert c == kernel_v2(e, 2) * kernel_v3(2) * ((-1) ** e * (e - 1) ** 2)
    with pytest.raises(InvalidTangency):
        c_series(1, 1)


# generated data ---------------------------------------------------------------------------------

@pytest.mark.parametrize("preset", [F1, P2], ids=["f1", "p2"])
@pytest.mark.parametrize("seed", range(8))
def test_generated_genus1_all_identities(preset, seed):
    ds = generate_dataset(preset, seed, genus_cap=1, degree_cap=6, include_gwz=True, include_open=True)
    for fn in (check_theorem_main, check_maing1, check_blowup, check_open_closed):
        assert fn(ds).passed, fn.__name__


@pytest.mark.parametrize("preset", [F1, P2], ids=["f1", "p2"])
@pytest.mark.parametrize("seed", range(3))
def test_generated_genus2_main(preset, seed):
    ds = generate_dataset(preset, seed, genus_cap=2, degree_cap=4, include_gwz=True)
    report = check_theorem_main(ds)
    assert report.passed
    assert {r.genus for r in report.residuals} == {0, 1, 2}


@pytest.mark.parametrize("seed", range(50))
def test_generated_genus0_main(seed):
    preset = (F1, P2)[seed % 2]
    ds = generate_dataset(preset, seed, genus_cap=0, degree_cap=6, include_gwz=True)
    assert check_theorem_main(ds).passed


def test_main_without_gwz_uses_degeneration():
    ds = generate_dataset(F1, 3, genus_cap=1, degree_cap=5)
    assert not ds.table.of_kind(K.GwZ)
    assert check_theorem_main(ds).passed


# perturbations ----------------------------------------------------------------------------------

def test_maing1_perturb_gv():
    ds = generate_dataset(F1, 1, include_gwz=True)
    beta = CurveClass.of(1, 2)
    eps = Fr(1)
    bumped = replace(ds, {(K.GvLocal, beta, 1): ds.table.get(K.GvLocal, beta, 1) + eps})
    res = residual_map(check_maing1(bumped))
    assert res.pop((beta, 1, "maing1")) == -eps
    assert not any(res.values())


def test_maing1_perturb_gwz():
    ds = generate_dataset(F1, 2, include_gwz=True)
    beta = CurveClass.of(1, 1)
    bumped = replace(ds, {(K.GwZ, beta, 1): ds.table.get(K.GwZ, beta, 1) + 1})
    res = residual_map(check_maing1(bumped))
    assert res.pop((beta, 1, "maing1")) == 1
    assert not any(res.values())


def test_main_perturb_local_gv_predicted():
    ds = generate_dataset(F1, 4, include_gwz=True)
    beta = CurveClass.of(1, 1)
    e = cc_tangency(F1, beta) + 1
    bumped = replace(ds, {(K.GvLocal, beta, 0): ds.table.get(K.GvLocal, beta, 0) + 1})
    res = residual_map(check_theorem_main(bumped))
    # a unit n_0 adds hbar^-2 + 1/12 + ... to the local series, i.e. N_0 += 1 and N_1 += 1/12
    c = c_series(e, 1)
    assert res.pop((beta, 0, "main")) == -1
    assert res.pop((beta, 1, "main")) == -(c.coefficient(0) * Fr(1, 12) + c.coefficient(1))
    # multiples of beta feel the bump through the multiple-cover sum; nothing else moves
    multiples = {beta * k for k in range(2, 4)}
    assert res[(beta * 2, 0, "main")] == Fr(-1, 8)
    assert all(v == 0 for (cls, _g, _t), v in res.items() if cls not in multiples)


def test_main_residual_is_linear():
    ds = generate_dataset(P2, 5, include_gwz=True)
    beta = CurveClass.of(2)
    base = ds.table.get(K.GwZ, beta, 1)
    r1 = residual_map(check_theorem_main(replace(ds, {(K.GwZ, beta, 1): base + 1})))
    r3 = residual_map(check_theorem_main(replace(ds, {(K.GwZ, beta, 1): base + 3})))
    key = (beta, 1, "main")
    assert r3[key] == 3 * r1[key] == 3


def test_blowup_agrees_with_maing1():
    rng = random.Random(0)
    for seed in range(10):
        ds = generate_dataset(F1, seed, include_gwz=True, include_gww=True)
        beta = CurveClass.of(1, 2)
        bump = {(K.GwZ, beta, 1): ds.table.get(K.GwZ, beta, 1) + rng.randint(-3, 3)}
        ds = replace(ds, bump)
        a, b = check_maing1(ds), check_blowup(ds)
        assert a.passed == b.passed
        assert [(r.cls, r.genus, r.value) for r in a.residuals] == [(r.cls, r.genus, r.value) for r in b.residuals]


def test_blowup_gww_off_by_twelfth():
    ds = generate_dataset(F1, 6, include_gwz=True, include_gww=True)
    beta = CurveClass.of(1, 1)
    bumped = replace(ds, {(K.GwW, beta, 0): ds.table.get(K.GwW, beta, 0) + Fr(1, 12)})
    res = residual_map(check_blowup(bumped))
    assert res.pop((beta, 1, "blowup")) == Fr(1, 144)
    assert not any(res.values())


def test_blowup_gww_matches_local():
    ds = generate_dataset(F1, 6, include_gwz=True, include_gww=True)
    assert check_blowup(ds).passed


def test_non_primitive_classes_skipped():
    ds = generate_dataset(F1, 6, include_gwz=True)
    report = check_maing1(ds)
    assert CurveClass.of(2, 2) in report.skipped
    assert all(is_primitive(r.cls) for r in report.residuals)


# open-closed ----------------------------------------------------------------------------

def test_open_closed_generated():
    ds = generate_dataset(F1, 9, include_gwz=True, include_open=True)
    report = check_open_closed(ds)
    assert report.passed
    assert {r.term for r in report.residuals} == {"sign", "theorem-op"}


def test_open_closed_wrong_sign():
    ds = generate_dataset(F1, 9, include_open=True)
    beta = CurveClass.of(1, 1)
    n0 = ds.table.get(K.GvLocal, beta, 0)
    bad = replace(ds, {(K.OpenBps, beta, 0): n0})
    res = residual_map(check_open_closed(bad, with_series=False))
    assert res.pop((beta, 0, "sign")) == 2 * n0
    assert not any(res.values())


def test_open_closed_missing_closed_entry():
    ds = generate_dataset(F1, 9, include_open=True)
    gone = drop(ds, K.GvLocal)
    with pytest.raises(MissingInvariant):
        check_open_closed(gone, with_series=False)


# reports ---------------------------------------------------------------------------------------

def test_report_json_shape():
    report = check_maing1(bundled_dataset())
    doc = report.to_json(F1)
    assert set(doc) >= {"identity", "preset", "caps", "residuals", "pass"}
    assert doc["pass"] is True
    assert doc["caps"] == {"genus": 1, "degree": 7}
    assert doc["residuals"][0].keys() >= {"class", "genus", "value"}


def test_strict_missing_data():
    ds = drop(bundled_dataset(), K.LogMax)
    with pytest.raises(MissingInvariant):
        check_maing1(ds)


# theta structure constants ----------------------------------------------------------------

def random_twopoint_table(seed):
    rng = random.Random(seed)
    tp = {}
    for c in (B, F, B + F, CurveClass.of(1, 2)):
        for p in range(0, 7):
            for q in range(p, 7):
                tp[(c, p, q)] = Fr(rng.randint(-9, 9), rng.randint(1, 4))
    return InvariantTable("f1", {}, 0, 6, twopoint=tp)


@pytest.mark.parametrize("seed", range(10))
def test_theta_symmetry(seed):
    t = random_twopoint_table(seed)
    for p in range(1, 5):
        for q in range(1, 5):
            for r in range(0, min(p, q) + 1):
                assert theta_structure(p, q, r, F, t) == theta_structure(q, p, r, F, t)


@pytest.mark.parametrize("seed", range(5))
def test_theta_r_equals_p(seed):
    t = random_twopoint_table(seed)
    for p in range(1, 5):
        for q in range(p, 6):
            want = (q - p) * t.get_twopoint(B + F, p, q - p)
            assert theta_structure(p, q, p, B + F, t) == want


def test_theta_r_equals_p_equals_q_is_zero_without_lookups():
    assert theta_structure(3, 3, 3, F, InvariantTable("f1")) == 0


def test_theta_invalid():
    t = random_twopoint_table(0)
    with pytest.raises(InvalidTangency):
        theta_structure(2, 3, 3, F, t)
    with pytest.raises(InvalidTangency):
        theta_structure(0, 3, 0, F, t)


def test_theta_missing():
    with pytest.raises(MissingInvariant):
        theta_structure(2, 3, 1, F, InvariantTable("f1"))
