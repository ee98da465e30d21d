"""The log-local principle: mirror variable, elliptic genus-1 series, delta_1 and the full discrepancy."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Optional

from .errors import ZeroTangency
from .genus_series import GenusSeries, kernel_k1, kernel_v2, kernel_v3
from .invariant_store import (
    InvariantKind,
    NovikovSeries,
    StationaryOracle,
    nv_exp,
    nv_scale,
    sigma_minus1,
)
from .surface_lattice import (
    CurveClass,
    SurfacePreset,
    cc_dot,
    cc_tangency,
    decompose_for_delta,
    enumerate_effective_upto,
)

LogMax = InvariantKind.LogMax
LogTwoPoint = InvariantKind.LogTwoPoint


def _below(beta: CurveClass):
    """Nonzero classes coordinatewise below ``beta``."""
    for c in product(*(range(x + 1) for x in beta.coords)):
        cls = CurveClass(c)
        if not cls.is_zero():
            yield cls


def _exponent(p: SurfacePreset, R0, classes, degree_cap: int) -> NovikovSeries:
    """``sum (-1)^(b.E) (b.E) R0(b) Q^b`` over the given classes (strict lookups)."""
    terms = {}
    for c in classes:
        k = cc_tangency(p, c)
        if k <= 0:
            continue
        v = (-1) ** k * k * R0.get(LogMax, c, 0)
        if v:
            terms[c] = GenusSeries.constant(v)
    return NovikovSeries.from_dict(p, terms, degree_cap, 0)


def qtilde_series(p: SurfacePreset, R0, degree_cap: int) -> NovikovSeries:
    """Mirror variable ``(-1)^(E.E) Q^E exp(sum (-1)^(b.E)(b.E) R0(b) Q^b)``."""
    E = p.anticanonical
    sign = (-1) ** cc_dot(p, E, E)
    room = degree_cap - p.degree(E)
    if room < 0:
        return NovikovSeries.from_dict(p, {}, degree_cap, 0)
    classes = enumerate_effective_upto(p, room)[1:]
    ex = nv_exp(_exponent(p, R0, classes, room))
    shifted = {c + E: s * sign for c, s in ex.terms}
    return NovikovSeries.from_dict(p, shifted, degree_cap, 0)


def elliptic_g1_series(nmax: int) -> list:
    """Coefficients ``sigma_{-1}(n)`` of ``-sum_m log(1 - x^m)`` for ``n = 1..nmax``."""
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    return [sigma_minus1(n) for n in range(1, nmax + 1)]


def delta1(p: SurfacePreset, beta: CurveClass, R0, signed: bool = False) -> Fraction:
    """Elliptic-curve correction to the genus-1 log-local identity at ``Q^beta``.

    With ``signed=True`` the n-th term carries ``(-1)^((E.E) n)``, the sign
    produced by expanding in the mirror variable; it is invisible whenever
    ``E.E`` is even.
    """
    E = p.anticanonical
    if not beta.is_effective():
        raise ValueError(f"class {beta} is not effective")
    top = beta - E
    if not top.is_effective():
        return Fraction(0)
    ee = cc_dot(p, E, E)
    cap = p.degree(top)
    L = _exponent(p, R0, _below(top), cap)
    total = Fraction(0)
    n = 1
    while True:
        rest = beta - E * n
        if not rest.is_effective():
            break
        sign = (-1) ** (ee * n) if signed else 1
        coeff = nv_exp(nv_scale(L, n)).coefficient(rest).coefficient(0)
        total += sign * sigma_minus1(n) * coeff
        n += 1
        if E.is_zero():
            break
    return total


def genus1_loglocal(p: SurfacePreset, beta: CurveClass, N1_local, R1, R0_table, signed: bool = False) -> Fraction:
    """LHS minus RHS of the genus-1 log-local identity at ``Q^beta``.

    The formal ``log Q^E`` term never reaches an effective nonzero class
    and is dropped.
    """
    if beta.is_zero():
        raise ValueError("identity is stated for nonzero classes")
    k = cc_tangency(p, beta)
    if k <= 0:
        raise ZeroTangency(f"class {beta} has E-degree {k}")
    R0 = R0_table.get(LogMax, beta, 0)
    rhs = (
        Fraction((-1) ** (k + 1), k) * Fraction(R1)
        + Fraction(1, 24) * (-1) ** (k + 1) * k * R0
        + delta1(p, beta, R0_table, signed=signed)
    )
    return Fraction(N1_local) - rhs


# the full discrepancy ---------------------------------------------------------------

@lru_cache(maxsize=None)
def partitions_at_most(n: int, k: int) -> int:
    """Partitions of ``n`` into at most ``k`` parts."""
    if n == 0:
        return 1
    if k <= 0 or n < 0:
        return 0
    # either fewer than k parts, or exactly k parts (subtract 1 from each)
    return partitions_at_most(n, k - 1) + partitions_at_most(n - k, k)


def partitions_exactly(n: int, k: int) -> int:
    if k == 0:
        return int(n == 0)
    return partitions_at_most(n - k, k) if n >= k else 0


AUT_MODES = ("at_most", "exactly")


def aut_factor(a, gs, mode: str = "at_most") -> int:
    """``prod_i`` (partitions of ``a_i`` into ``g_i`` boxes); may be 0."""
    if len(a) != len(gs):
        raise ValueError("a and g must have equal lengths")
    count = partitions_at_most if mode == "at_most" else partitions_exactly
    if mode not in AUT_MODES:
        raise ValueError(f"aut_mode must be one of {AUT_MODES}")
    out = 1
    for ai, gi in zip(a, gs):
        out *= count(ai, gi)
    return out


@dataclass(frozen=True)
class DeltaTerm:
    g: int
    h: int
    gs: tuple
    a: tuple
    m: int
    d_E: int
    parts: tuple
    weight: Fraction
    stationary: Fraction
    value: Fraction


def _compositions(total: int, n: int):
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


def _bounded_vectors(bound: int, n: int):
    """Nonnegative integer vectors of length n with sum <= bound."""
    if n == 0:
        yield ()
        return
    for first in range(bound + 1):
        for rest in _bounded_vectors(bound - first, n - 1):
            yield (first,) + rest


def stationary_sum(
    p: SurfacePreset,
    beta: CurveClass,
    g: int,
    R_tables,
    oracle: StationaryOracle,
    nmax: Optional[int] = None,
    aut_mode: str = "at_most",
    trace: Optional[list] = None,
) -> Fraction:
    """The elliptic-curve sum of the genus-g log-local principle at ``beta``.

    Parts are unordered, so a multiset of (class, genus, psi-order) triples
    is weighted by one over its symmetry factor; terms whose automorphism
    count vanishes are excluded.
    """
    if g < 1:
        return Fraction(0)
    E = p.anticanonical
    ee = cc_dot(p, E, E)
    if nmax is None:
        nmax = max(cc_tangency(p, beta), 0)
    total = Fraction(0)
    for d_E, parts in decompose_for_delta(p, beta, nmax):
        n = len(parts)
        sym = 1
        for mult in Counter(parts).values():
            sym *= factorial(mult)
        for h in range(g + 1):
            for gs in _compositions(g - h, n):
                for a in _bounded_vectors(2 * g - 2, n):
                    m = 2 * g - 2 - sum(a)
                    aut = aut_factor(a, gs, aut_mode)
                    if aut == 0:
                        continue
                    stat = oracle.get(h, a, m, d_E)
                    if stat == 0:
                        continue
                    weight = Fraction((-1) ** (g - 1 + ee * d_E) * ee ** m, factorial(m) * aut * sym)
                    prod = Fraction(1)
                    for bj, gj in zip(parts, gs):
                        kj = cc_tangency(p, bj)
                        prod *= (-1) ** kj * kj * R_tables.get(LogMax, bj, gj)
                    value = weight * stat * prod
                    if trace is not None:
                        trace.append(DeltaTerm(g, h, gs, a, m, d_E, parts, weight, stat, value))
                    total += value
    return total


def _two_point_series(beta, g, R_tables, r_twopoint: Optional[GenusSeries]) -> GenusSeries:
    if r_twopoint is not None:
        return r_twopoint
    return GenusSeries.from_dict({i: R_tables.get(LogTwoPoint, beta, i) for i in range(g)}, max(g - 1, 0))


def delta_full(
    p: SurfacePreset,
    beta: CurveClass,
    g: int,
    R_tables,
    oracle: StationaryOracle,
    nmax: Optional[int] = None,
    r_twopoint: Optional[GenusSeries] = None,
    aut_mode: str = "at_most",
    trace: Optional[list] = None,
) -> Fraction:
    """Discrepancy ``Delta(g, beta)`` for a class ``beta`` on the blown-up surface.

    With ``k = beta.E`` and ``e = k + 1``, the bracket at genus j is
    ``(-1)^e k S_j + sum_{i<j} R^two_i N(j-i, 1)``; the result is the genus-g
    coefficient of ``k * bracket * V2(e) * V3``.  ``r_twopoint`` overrides
    the two-point series otherwise read from the ``LogTwoPoint`` entries.
    """
    if g < 0:
        raise ValueError("genus must be >= 0")
    k = cc_tangency(p, beta)
    if k < 1:
        raise ZeroTangency(f"class {beta} has E-degree {k}")
    if g == 0:
        return Fraction(0)
    e = k + 1
    R2 = _two_point_series(beta, g, R_tables, r_twopoint)
    K1 = kernel_k1(g)
    bracket = {}
    for j in range(g + 1):
        s = stationary_sum(p, beta, j, R_tables, oracle, nmax, aut_mode, trace)
        corr = sum((R2.coefficient(i) * K1.coefficient(j - i) for i in range(j)), Fraction(0))
        bracket[j] = (-1) ** e * k * s + corr
    series = GenusSeries.from_dict(bracket, g) * kernel_v2(e, g) * kernel_v3(g)
    return k * series.coefficient(g)


def delta_genus1_closed(p: SurfacePreset, beta: CurveClass, R_tables, r0_twopoint=None) -> Fraction:
    """``Delta(1, beta)`` through delta_1 alone (no stationary oracle)."""
    k = cc_tangency(p, beta)
    if k < 1:
        raise ZeroTangency(f"class {beta} has E-degree {k}")
    e = k + 1
    R0 = R_tables.get(LogMax, beta, 0)
    R2 = R_tables.get(LogTwoPoint, beta, 0) if r0_twopoint is None else Fraction(r0_twopoint)
    return (
        Fraction((-1) ** e * k, 24) * R0
        + delta1(p, beta, R_tables, signed=True)
        + Fraction((-1) ** e, 24 * k) * R2
    )


def loglocal_higher(p: SurfacePreset, beta: CurveClass, g: int, N_local, R_tables, oracle, aut_mode="at_most"):
    """Maximal-tangency ``R_g(beta)`` from ``N_g(K_X, beta)`` and the stationary sum."""
    k = cc_tangency(p, beta)
    if k < 1:
        raise ZeroTangency(f"class {beta} has E-degree {k}")
    s = stationary_sum(p, beta, g, R_tables, oracle, aut_mode=aut_mode)
    return (-1) ** (k - 1) * k * (Fraction(N_local) - s)

