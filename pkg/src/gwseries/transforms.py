"""Gopakumar-Vafa resummation and the small closed-form conversions between invariant families."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import InvalidTangency, NotInImage, ZeroTangency
from .genus_series import GenusSeries, kernel_k1, kernel_sin_power, kernel_v3
from .invariant_store import InvariantKind, InvariantTable, NovikovSeries
from .surface_lattice import CurveClass, SurfacePreset, cc_tangency, enumerate_effective_upto


def _multiples(p: SurfacePreset, beta: CurveClass, degree_cap: int):
    k = 1
    while p.degree(beta * k) <= degree_cap:
        yield k, beta * k
        k += 1


def gv_to_gw(
    n: InvariantTable,
    preset: SurfacePreset,
    genus_cap: Optional[int] = None,
    degree_cap: Optional[int] = None,
) -> NovikovSeries:
    """``F = sum n_{g,beta} sum_k (1/k) (2 sin(k hbar/2))^(2g-2) Q^(k beta)``.

    The result is in the ``hbar^(2g-2)`` convention, so genus g sits at
    ``u**(g-1)`` and the u-power cap is ``genus_cap - 1``.
    """
    G = n.genus_cap if genus_cap is None else genus_cap
    D = n.degree_cap if degree_cap is None else degree_cap
    ucap = G - 1
    out: dict = {}
    for (beta, g), value in n.of_kind(InvariantKind.GvLocal).items():
        if g > G or value == 0 or beta.is_zero():
            continue
        for k, kb in _multiples(preset, beta, D):
            term = kernel_sin_power(g, k, ucap) * (value / k)
            out[kb] = out[kb] + term if kb in out else term
    return NovikovSeries.from_dict(preset, out, D, ucap)


def gw_to_gv(F: NovikovSeries) -> InvariantTable:
    """Invert :func:`gv_to_gw`, class by increasing degree and genus by genus."""
    p = F.preset
    if not F.coefficient(p.zero()).is_zero():
        raise NotInImage("the multiple-cover formula has no Q^0 term")
    ucap = F.genus_cap
    G = ucap + 1
    residual = {c: s for c, s in F.terms}
    entries: dict = {}
    for beta in enumerate_effective_upto(p, F.degree_cap)[1:]:
        for g in range(G + 1):
            s = residual.get(beta)
            if s is None:
                break
            ng = s.coefficient(g - 1)
            if ng == 0:
                continue
            entries[(InvariantKind.GvLocal, beta, g)] = ng
            for k, kb in _multiples(p, beta, F.degree_cap):
                term = kernel_sin_power(g, k, ucap) * (ng / k)
                residual[kb] = residual[kb] - term if kb in residual else -term
        left = residual.get(beta)
        if left is not None and not left.is_zero():
            raise NotInImage(f"residual at {beta} is not in the image of the multiple-cover map")
    return InvariantTable(p.id, entries, G, F.degree_cap)


def genus1_gv_closed_form(N0, N1) -> Fraction:
    """Genus-1 BPS number of a primitive class: ``n1 = N1 - N0/12``."""
    return Fraction(N1) - Fraction(N0) / 12


def open_closed_sign(n: InvariantTable) -> InvariantTable:
    """Swap closed GV and winding-1 open BPS entries, with sign ``(-1)^(g+1)``."""
    swap = {InvariantKind.GvLocal: InvariantKind.OpenBps, InvariantKind.OpenBps: InvariantKind.GvLocal}
    entries = {}
    for (kind, cls, g), v in n.entries.items():
        if kind in swap:
            entries[(swap[kind], cls, g)] = v * (-1) ** (g + 1)
        else:
            entries[(kind, cls, g)] = v
    return InvariantTable(n.preset_id, entries, n.genus_cap, n.degree_cap, dict(n.twopoint))


def _tangency(p: SurfacePreset, beta: CurveClass) -> int:
    k = cc_tangency(p, beta)
    if k <= 0:
        raise ZeroTangency(f"class {beta} has E-degree {k}")
    return k


def loglocal_g0(p: SurfacePreset, beta: CurveClass, N0_local) -> Fraction:
    """Maximal-tangency genus-0 log invariant from the local one."""
    k = _tangency(p, beta)
    return (-1) ** (k - 1) * k * Fraction(N0_local)


def loglocal_g0_inverse(p: SurfacePreset, beta: CurveClass, R0) -> Fraction:
    k = _tangency(p, beta)
    return (-1) ** (k - 1) * Fraction(R0) / k


def two_point_from_local_g0(e: int, n0_hat) -> Fraction:
    """``R_{0,(1,e-1)} = (-1)^e (e-1) n0`` for the blown-up class."""
    if e < 2:
        raise InvalidTangency(f"tangency e={e} must be >= 2")
    return (-1) ** e * (e - 1) * Fraction(n0_hat)


def hat_relation(R_twopoint: GenusSeries) -> GenusSeries:
    """Two-point series on X to the one-point series on the blow-up."""
    return R_twopoint * kernel_k1(R_twopoint.cap)


def hat_relation_inverse(R_hat: GenusSeries) -> GenusSeries:
    return R_hat * kernel_v3(R_hat.cap)
