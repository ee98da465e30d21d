"""End-to-end identity checks between the invariant families, plus a forward data generator."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .degeneration import DegenerationInput, assemble_Nz
from .errors import InvalidTangency, MissingInvariant
from .genus_series import GenusSeries, format_rational, kernel_k1, kernel_sin_power, kernel_v2, kernel_v3
from .invariant_store import (
    Dataset,
    InvariantKind,
    InvariantTable,
    StationaryOracle,
    TableReader,
    builtin_stationary,
    stationary_key,
)
from .loglocal import delta1, delta_full, loglocal_higher
from .surface_lattice import CurveClass, SurfacePreset, cc_tangency, enumerate_effective_upto
from .transforms import gv_to_gw, hat_relation_inverse, loglocal_g0, open_closed_sign, two_point_from_local_g0

K = InvariantKind


# reports ------------------------------------------------------------------------

@dataclass(frozen=True)
class Residual:
    cls: CurveClass
    genus: int
    value: Fraction
    term: str = ""


@dataclass
class CheckReport:
    identity: str
    preset: str
    genus_cap: int
    degree_cap: int
    residuals: list = field(default_factory=list)
    queried: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.value == 0 for r in self.residuals)

    def nonzero(self) -> list:
        return [r for r in self.residuals if r.value != 0]

    def to_json(self, preset: Optional[SurfacePreset] = None) -> dict:
        fmt = preset.format_class if preset is not None else str
        return {
            "identity": self.identity,
            "preset": self.preset,
            "caps": {"genus": self.genus_cap, "degree": self.degree_cap},
            "residuals": [
                {"class": fmt(r.cls), "genus": r.genus, "value": format_rational(r.value), "term": r.term}
                for r in self.residuals
            ],
            "queried": [_format_key(k, fmt) for k in self.queried],
            "pass": self.passed,
        }


def _format_key(key, fmt) -> str:
    if hasattr(key, "h"):
        return f"StationaryE h={key.h} a={list(key.a)} m={key.m} d={key.d}"
    kind, cls, extra = key
    name = getattr(kind, "value", kind)
    return f"{name} {fmt(cls)} {extra}"


# data access with fallbacks -------------------------------------------------------

def is_primitive(c: CurveClass) -> bool:
    g = 0
    for x in c.coords:
        g = gcd(g, x)
    return g == 1


class _Source:
    """Strict reads from a dataset, with the documented substitution routes."""

    def __init__(self, ds: Dataset):
        self.preset = ds.preset
        self.table = ds.table
        self.reader = TableReader(ds.table)
        self.oracle = StationaryOracle(dict(ds.oracle.table))

    def queried(self) -> list:
        return self.reader.queried + _dedupe(self.oracle.queried)

    def tangency(self, beta: CurveClass) -> int:
        return cc_tangency(self.preset, beta)

    def gv(self, beta: CurveClass, g: int) -> Fraction:
        return self.reader.get(K.GvLocal, beta, g)

    def local_gw(self, beta: CurveClass, g: int) -> Fraction:
        """``N_g(K_X, beta)``: a GwLocal entry, else the multiple-cover sum over divisors."""
        if self.table.has(K.GwLocal, beta, g):
            return self.reader.get(K.GwLocal, beta, g)
        total = Fraction(0)
        c = 0
        for x in beta.coords:
            c = gcd(c, x)
        for k in range(1, c + 1):
            if c % k:
                continue
            base = CurveClass(tuple(x // k for x in beta.coords))
            for gp in range(g + 1):
                n = self.gv(base, gp)
                if n:
                    total += n / k * kernel_sin_power(gp, k, g - 1).coefficient(g - 1)
        return total

    def gw_W(self, beta: CurveClass, g: int) -> Fraction:
        if self.table.has(K.GwW, beta, g):
            return self.reader.get(K.GwW, beta, g)
        return self.local_gw(beta, g)

    def two_point(self, beta: CurveClass, G: int) -> GenusSeries:
        """``sum_g R_{g,(1,e-1)} hbar^2g`` up to genus G.

        Missing genus-0 values come from the maximal-tangency invariant on the
        blow-up (equal by the two-point/one-point comparison) or, for a
        primitive class, from the genus-0 BPS number; missing higher values
        come from the maximal-tangency series through the hat relation.
        """
        e = self.tangency(beta) + 1
        K1 = kernel_k1(G)
        out = {}
        for i in range(G + 1):
            if self.table.has(K.LogTwoPoint, beta, i):
                out[i] = self.reader.get(K.LogTwoPoint, beta, i)
            elif i == 0:
                if self.table.has(K.LogMax, beta, 0):
                    out[0] = self.reader.get(K.LogMax, beta, 0)
                elif is_primitive(beta) and self.table.has(K.GvLocal, beta, 0):
                    out[0] = two_point_from_local_g0(e, self.gv(beta, 0))
                else:
                    raise MissingInvariant(K.LogTwoPoint, beta, 0)
            else:
                if not self.table.has(K.LogMax, beta, i):
                    raise MissingInvariant(K.LogTwoPoint, beta, i)
                rhat = self.reader.get(K.LogMax, beta, i)
                out[i] = rhat - sum((out[j] * K1.coefficient(i - j) for j in range(i)), Fraction(0))
        return GenusSeries.from_dict(out, G)

    def gwz(self, beta: CurveClass, G: int) -> GenusSeries:
        if all(self.table.has(K.GwZ, beta, g) for g in range(G + 1)):
            return GenusSeries.from_dict({g: self.reader.get(K.GwZ, beta, g) for g in range(G + 1)}, G)
        e = self.tangency(beta) + 1
        return assemble_Nz(DegenerationInput(e, self.two_point(beta, G), G))


def _dedupe(keys):
    seen = set()
    out = []
    for k in keys:
        if k not in seen:
            seen.add(k)
            out.append(k)
    return out


def check_classes(ds: Dataset, degree_cap: Optional[int] = None) -> list:
    """Classes carrying Z-side data (GwZ or two-point entries), else GV classes; all with E-degree >= 1."""
    p, t = ds.preset, ds.table
    D = t.degree_cap if degree_cap is None else degree_cap
    found = set(t.classes(K.GwZ)) | set(t.classes(K.LogTwoPoint))
    if not found:
        found = set(t.classes(K.GvLocal))
    return sorted(
        (c for c in found if not c.is_zero() and p.degree(c) <= D and cc_tangency(p, c) >= 1),
        key=lambda c: (p.degree(c), c.coords),
    )


def c_series(e: int, cap: int) -> GenusSeries:
    """Convolution kernel ``(-1)^e (e-1)^2 V2(e) V3`` multiplying the local GW series."""
    if e < 2:
        raise InvalidTangency(f"tangency e={e} must be >= 2")
    return kernel_v2(e, cap) * kernel_v3(cap) * ((-1) ** e * (e - 1) ** 2)


# identities ------------------------------------------------------------------------

def check_theorem_main(
    ds: Dataset,
    genus_cap: Optional[int] = None,
    degree_cap: Optional[int] = None,
    classes: Optional[Iterable[CurveClass]] = None,
    aut_mode: str = "at_most",
    identity: str = "main",
) -> CheckReport:
    """``N_{g,1}(Z) = [c_series * N(K_X)]_g - Delta(g)`` for every check class and genus."""
    G = ds.table.genus_cap if genus_cap is None else genus_cap
    D = ds.table.degree_cap if degree_cap is None else degree_cap
    src = _Source(ds)
    report = CheckReport(identity, ds.preset.id, G, D)
    for beta in classes if classes is not None else check_classes(ds, D):
        e = src.tangency(beta) + 1
        nz = src.gwz(beta, G)
        nser = GenusSeries.from_dict({g: src.local_gw(beta, g) for g in range(G + 1)}, G)
        conv = c_series(e, G) * nser
        r2 = src.two_point(beta, G)
        for g in range(G + 1):
            delta = delta_full(ds.preset, beta, g, src.reader, src.oracle, r_twopoint=r2, aut_mode=aut_mode)
            value = nz.coefficient(g) - (conv.coefficient(g) - delta)
            report.residuals.append(Residual(beta, g, value, identity))
    report.queried = src.queried()
    return report


def check_maing1(ds: Dataset, degree_cap: Optional[int] = None, classes=None) -> CheckReport:
    """``N_{1,1}(Z) = n_1(K_X) - delta_1`` at primitive check classes."""
    D = ds.table.degree_cap if degree_cap is None else degree_cap
    src = _Source(ds)
    report = CheckReport("maing1", ds.preset.id, 1, D)
    for beta in classes if classes is not None else check_classes(ds, D):
        if not is_primitive(beta):
            report.skipped.append(beta)
            continue
        nz1 = src.gwz(beta, 1).coefficient(1)
        n1 = src.gv(beta, 1)
        d1 = delta1(ds.preset, beta, src.reader, signed=True)
        report.residuals.append(Residual(beta, 1, nz1 - (n1 - d1), "maing1"))
    report.queried = src.queried()
    return report


def check_blowup(ds: Dataset, degree_cap: Optional[int] = None, classes=None) -> CheckReport:
    """``N_{1,1}(Z) = N_{1,0}(W) - N_{0,0}(W)/12 - delta_1``, with W read as the local surface when absent."""
    D = ds.table.degree_cap if degree_cap is None else degree_cap
    src = _Source(ds)
    report = CheckReport("blowup", ds.preset.id, 1, D)
    for beta in classes if classes is not None else check_classes(ds, D):
        if not is_primitive(beta):
            report.skipped.append(beta)
            continue
        nz1 = src.gwz(beta, 1).coefficient(1)
        w1 = src.gw_W(beta, 1)
        w0 = src.gw_W(beta, 0)
        d1 = delta1(ds.preset, beta, src.reader, signed=True)
        report.residuals.append(Residual(beta, 1, nz1 - (w1 - w0 / 12 - d1), "blowup"))
    report.queried = src.queried()
    return report


def check_open_closed(
    ds: Dataset,
    genus_cap: Optional[int] = None,
    degree_cap: Optional[int] = None,
    with_series: bool = True,
    aut_mode: str = "at_most",
) -> CheckReport:
    """Closed GV versus winding-1 open BPS numbers, entry by entry and through the main identity."""
    G = ds.table.genus_cap if genus_cap is None else genus_cap
    D = ds.table.degree_cap if degree_cap is None else degree_cap
    src = _Source(ds)
    report = CheckReport("open-closed", ds.preset.id, G, D)
    for (beta, g), n_open in ds.table.of_kind(K.OpenBps).items():
        if g > G or ds.preset.degree(beta) > D:
            continue
        src.reader.get(K.OpenBps, beta, g)
        closed = src.gv(beta, g)
        report.residuals.append(Residual(beta, g, closed - (-1) ** (g + 1) * n_open, "sign"))
    queried = src.queried()
    if with_series and check_classes(ds, D):
        mapped = open_closed_sign(ds.table.without_kind(K.GvLocal).without_kind(K.GwLocal))
        op_ds = Dataset(ds.preset, mapped, ds.oracle)
        sub = check_theorem_main(op_ds, G, D, aut_mode=aut_mode, identity="theorem-op")
        report.residuals.extend(sub.residuals)
        queried += [k for k in sub.queried if k not in queried]
    report.queried = queried
    return report


def theta_structure(p_ord: int, q_ord: int, r_ord: int, beta: CurveClass, R0_twopoint) -> Fraction:
    """Structure constant ``N^beta_{pqr}`` of the theta-function algebra."""
    if p_ord < 1 or q_ord < 1 or r_ord < 0:
        raise InvalidTangency("need p, q >= 1 and r >= 0")
    if r_ord > p_ord or r_ord > q_ord:
        raise InvalidTangency("r may not exceed p or q (contact orders would be negative)")
    total = Fraction(0)
    if p_ord - r_ord:
        total += (p_ord - r_ord) * R0_twopoint.get_twopoint(beta, q_ord, p_ord - r_ord)
    if q_ord - r_ord:
        total += (q_ord - r_ord) * R0_twopoint.get_twopoint(beta, p_ord, q_ord - r_ord)
    return total


IDENTITIES = {
    "main": check_theorem_main,
    "maing1": check_maing1,
    "blowup": check_blowup,
    "open-closed": check_open_closed,
}


# forward generator -------------------------------------------------------------------

class _FillingOracle(StationaryOracle):
    """Oracle that invents (and remembers) random values for keys nobody supplied."""

    def __init__(self, rng: random.Random):
        super().__init__({})
        self.rng = rng

    def get(self, h, a, m, d):
        key = stationary_key(h, a, m, d)
        if key not in self.table and builtin_stationary(key) is None:
            self.table[key] = Fraction(self.rng.randint(-6, 6), self.rng.randint(1, 4))
        return super().get(h, a, m, d)


def _random_value(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.choice((1, 1, 1, 2, 3)))


def generate_dataset(
    preset: SurfacePreset,
    seed: int,
    genus_cap: int = 1,
    degree_cap: int = 6,
    density: float = 0.7,
    include_gwz: bool = False,
    include_gwlocal: bool = False,
    include_open: bool = False,
    include_gww: bool = False,
) -> Dataset:
    """Random GV data pushed through the forward algebra, so that every identity holds exactly.

    The GV numbers are random; local GW invariants come from the
    multiple-cover formula, maximal-tangency invariants from the log-local
    principle (higher-genus stationary invariants of E are invented as
    needed), two-point invariants from the hat relation and the Z-side from
    the degeneration formula.
    """
    rng = random.Random(seed)
    p = preset
    classes = [c for c in enumerate_effective_upto(p, degree_cap)[1:] if cc_tangency(p, c) >= 1]
    gv = {}
    for c in classes:
        for g in range(genus_cap + 1):
            if rng.random() < density:
                gv[(K.GvLocal, c, g)] = _random_value(rng)
            else:
                gv[(K.GvLocal, c, g)] = Fraction(0)
    table = InvariantTable(p.id, gv, genus_cap, degree_cap)
    F = gv_to_gw(table, p, genus_cap, degree_cap)
    local = {}
    for c in classes:
        s = F.coefficient(c)
        for g in range(genus_cap + 1):
            local[(K.GwLocal, c, g)] = s.coefficient(g - 1)

    oracle = _FillingOracle(rng)
    logmax = {}
    work = InvariantTable(p.id, logmax, genus_cap, degree_cap)
    for c in classes:
        for g in range(genus_cap + 1):
            N = local[(K.GwLocal, c, g)]
            if g == 0:
                logmax[(K.LogMax, c, 0)] = loglocal_g0(p, c, N)
            else:
                logmax[(K.LogMax, c, g)] = loglocal_higher(p, c, g, N, work, oracle)

    entries = dict(gv)
    entries.update(logmax)
    for c in classes:
        rhat = GenusSeries.from_dict({g: logmax[(K.LogMax, c, g)] for g in range(genus_cap + 1)}, genus_cap)
        r2 = hat_relation_inverse(rhat)
        for g in range(genus_cap + 1):
            entries[(K.LogTwoPoint, c, g)] = r2.coefficient(g)
        if include_gwz:
            nz = assemble_Nz(DegenerationInput(cc_tangency(p, c) + 1, r2, genus_cap))
            for g in range(genus_cap + 1):
                entries[(K.GwZ, c, g)] = nz.coefficient(g)
    if include_gwlocal:
        entries.update(local)
    if include_gww:
        entries.update({(K.GwW, c, g): v for (_k, c, g), v in local.items()})
    out = InvariantTable(p.id, entries, genus_cap, degree_cap)
    if include_open:
        mapped = open_closed_sign(InvariantTable(p.id, gv, genus_cap, degree_cap))
        out = out.with_entries(mapped.entries)
    return Dataset(p, out, StationaryOracle(dict(oracle.table)))


__all__ = [
    "Residual",
    "CheckReport",
    "c_series",
    "check_classes",
    "check_theorem_main",
    "check_maing1",
    "check_blowup",
    "check_open_closed",
    "theta_structure",
    "generate_dataset",
    "is_primitive",
    "IDENTITIES",
]
