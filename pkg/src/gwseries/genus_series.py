"""Truncated even-Laurent series in hbar with exact rational coefficients.

A :class:`GenusSeries` stores coefficients of ``u = hbar**2`` from ``min_upow``
up to ``cap``.  The only pole allowed is ``u**-1`` (the genus-0 term of the
multiple-cover kernel); anything deeper raises :class:`PoleTooDeep`.

Coefficients beyond ``cap`` are *unknown*, not zero, so every binary
operation truncates to the smaller amount of information it was given.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Union

from .errors import OutOfCap, PoleTooDeep, RationalParseError, ZeroLeadingCoefficient, InvalidTangency

Number = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (or a Python int) into a Fraction.

    Floats are rejected: nothing in this package is ever approximate.
    """
    if isinstance(text, bool):
        raise RationalParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise RationalParseError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise RationalParseError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise RationalParseError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class GenusSeries:
    """``sum_{n=min_upow}^{cap} coeffs[n - min_upow] * hbar**(2n)``.

    The stored form is canonical: ``min_upow`` is -1 only when the pole
    coefficient is nonzero (or when ``cap == -1``), and 0 otherwise.
    """

    min_upow: int
    coeffs: tuple
    genus_cap: int

    def __post_init__(self):
        lo = int(self.min_upow)
        cap = int(self.genus_cap)
        cs = [Fraction(c) for c in self.coeffs]
        if len(cs) != cap - lo + 1:
            raise ValueError(f"expected {cap - lo + 1} coefficients, got {len(cs)}")
        if cap < -1:
            raise OutOfCap(f"cap {cap} leaves no coefficient above the hbar^-2 floor")
        # strip zero leading terms down to the pole floor
        while lo < -1 and cs and cs[0] == 0:
            cs.pop(0)
            lo += 1
        if lo < -1:
            raise PoleTooDeep(f"series has a pole of order hbar^{2 * lo}")
        if lo == -1 and cap >= 0 and cs[0] == 0:
            cs.pop(0)
            lo = 0
        if lo > 0:
            start = 0 if cap >= 0 else -1
            cs = [Fraction(0)] * (lo - start) + cs
            lo = start
        object.__setattr__(self, "min_upow", lo)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "genus_cap", cap)

    @property
    def cap(self) -> int:
        return self.genus_cap

    # construction -----------------------------------------------------------
    @classmethod
    def from_dict(cls, terms: Mapping[int, Number], cap: int) -> "GenusSeries":
        lo = min([0, *terms.keys()]) if cap >= 0 else -1
        if any(n > cap for n in terms):
            raise OutOfCap("term above cap")
        return cls(lo, tuple(terms.get(n, 0) for n in range(lo, cap + 1)), cap)

    @classmethod
    def zero(cls, cap: int) -> "GenusSeries":
        return cls.from_dict({}, cap)

    @classmethod
    def one(cls, cap: int) -> "GenusSeries":
        return cls.from_dict({0: 1}, cap)

    @classmethod
    def constant(cls, c: Number, cap: int = 0) -> "GenusSeries":
        return cls.from_dict({0: c}, cap)

    # access -----------------------------------------------------------------
    def coefficient(self, n: int) -> Fraction:
        if n > self.cap:
            raise OutOfCap(f"u^{n} lies beyond cap {self.cap}")
        if n < -1:
            raise PoleTooDeep(f"no coefficient at u^{n}")
        if n < self.min_upow:
            return Fraction(0)
        return self.coeffs[n - self.min_upow]

    def items(self):
        return ((n, self.coeffs[n - self.min_upow]) for n in range(self.min_upow, self.cap + 1))

    def valuation(self):
        for n, c in self.items():
            if c != 0:
                return n
        return None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, cap: int) -> "GenusSeries":
        if cap > self.cap:
            raise OutOfCap(f"cannot extend cap {self.cap} to {cap}")
        return GenusSeries.from_dict({n: c for n, c in self.items() if n <= cap}, cap)

    def shift(self, k: int) -> "GenusSeries":
        """Multiply by ``u**k`` (i.e. ``hbar**(2k)``)."""
        return GenusSeries(self.min_upow + k, self.coeffs, self.cap + k)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GenusSeries):
            other = GenusSeries.constant(other, self.cap)
        cap = min(self.cap, other.cap)
        lo = min(self.min_upow, other.min_upow)
        return GenusSeries(
            lo,
            tuple(self.coefficient(n) + other.coefficient(n) for n in range(lo, cap + 1)),
            cap,
        )

    __radd__ = __add__

    def __neg__(self):
        return GenusSeries(self.min_upow, tuple(-c for c in self.coeffs), self.cap)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GenusSeries):
            return gs_mul(self, other)
        c = Fraction(other)
        return GenusSeries(self.min_upow, tuple(c * x for x in self.coeffs), self.cap)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GenusSeries):
            return gs_mul(self, gs_invert(other))
        return self * (1 / Fraction(other))

    def __str__(self):
        return format_series(self)


def gs_add(a: GenusSeries, b: GenusSeries) -> GenusSeries:
    return a + b


def gs_mul(a: GenusSeries, b: GenusSeries) -> GenusSeries:
    """Cauchy product, truncated to the coefficients both factors determine.

    For pole-free inputs this is simply ``min(a.cap, b.cap)``; a ``u**-1``
    factor costs one order on the other side.
    """
    cap = min(a.cap, b.cap, a.cap + b.min_upow, b.cap + a.min_upow)
    lo = a.min_upow + b.min_upow
    if cap < lo:
        raise OutOfCap("product determines no coefficients")
    out = [Fraction(0)] * (cap - lo + 1)
    for i, ai in a.items():
        if ai == 0:
            continue
        for j, bj in b.items():
            n = i + j
            if n > cap:
                break
            out[n - lo] += ai * bj
    return GenusSeries(lo, tuple(out), cap)


def gs_invert(a: GenusSeries) -> GenusSeries:
    v = a.valuation()
    if v is None:
        raise ZeroLeadingCoefficient("cannot invert the zero series")
    b = [a.coefficient(n) for n in range(v, a.cap + 1)]
    order = len(b) - 1
    c = [Fraction(0)] * (order + 1)
    c[0] = 1 / b[0]
    for n in range(1, order + 1):
        s = sum((b[j] * c[n - j] for j in range(1, n + 1)), Fraction(0))
        c[n] = -s / b[0]
    cap = min(a.cap, a.cap - 2 * v)
    if -v < -1:
        raise PoleTooDeep(f"inverse has a pole of order hbar^{-2 * v}")
    return GenusSeries(-v, tuple(c[: cap + v + 1]), cap)


def gs_rescale_h(a: GenusSeries, k: int) -> GenusSeries:
    """Substitute ``hbar -> k*hbar``."""
    if k < 1:
        raise ValueError("rescale factor must be a positive integer")
    k2 = Fraction(k * k)
    return GenusSeries(a.min_upow, tuple(c * k2 ** n for n, c in a.items()), a.cap)


def gs_coefficient(a: GenusSeries, g: int) -> Fraction:
    return a.coefficient(g)


def gs_power(a: GenusSeries, n: int) -> GenusSeries:
    if n < 0:
        return gs_power(gs_invert(a), -n)
    result = GenusSeries.one(a.cap)
    base = a
    while n:
        if n & 1:
            result = gs_mul(result, base)
        n >>= 1
        if n:
            base = gs_mul(base, base)
    return result


# closed-form kernels --------------------------------------------------------

def kernel_v3(cap: int) -> GenusSeries:
    """``2 sin(hbar/2) / hbar``; its hbar^2g coefficient is the V3 vertex invariant."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    return GenusSeries(
        0,
        tuple(Fraction((-1) ** j, 4 ** j * factorial(2 * j + 1)) for j in range(cap + 1)),
        cap,
    )


def kernel_k1(cap: int) -> GenusSeries:
    """One-marking correction series ``hbar / (2 sin(hbar/2))`` = 1/kernel_v3."""
    return gs_invert(kernel_v3(cap))


def kernel_sin_power(g: int, k: int, cap: int) -> GenusSeries:
    """``(2 sin(k*hbar/2))**(2g-2)`` truncated at ``u**cap``."""
    if g < 0:
        raise ValueError("genus must be >= 0")
    if k < 1:
        raise ValueError("k must be >= 1")
    if g == 1:
        return GenusSeries.one(cap) if cap >= 0 else GenusSeries.zero(cap)
    # (2 sin(hbar/2))^(2g-2) = u^(g-1) * kernel_v3^(2g-2)
    inner = cap - (g - 1)
    if inner < 0:
        series = GenusSeries.zero(cap)
    else:
        series = gs_power(kernel_v3(inner), 2 * g - 2).shift(g - 1)
    return gs_rescale_h(series, k)


def kernel_v2(e: int, cap: int) -> GenusSeries:
    """Vertex-V2 series ``(-1)^e/(e-1) * (hbar/2) csc((e-1) hbar/2)``."""
    if e < 2:
        raise InvalidTangency(f"tangency e={e} must be >= 2")
    k = e - 1
    return gs_rescale_h(kernel_k1(cap), k) * Fraction((-1) ** e, k * k)


# text form --------------------------------------------------------------------

def format_series(a: GenusSeries) -> str:
    return " ".join(f"{n}:{format_rational(c)}" for n, c in a.items())


def parse_series(text: str) -> GenusSeries:
    """Inverse of :func:`format_series`: whitespace-separated ``upow:p/q`` pairs."""
    terms: dict = {}
    for tok in text.split():
        if ":" not in tok:
            raise RationalParseError(f"expected upow:rational, got {tok!r}")
        head, _, tail = tok.partition(":")
        try:
            n = int(head)
        except ValueError:
            raise RationalParseError(f"bad exponent in {tok!r}") from None
        if n in terms:
            raise RationalParseError(f"duplicate exponent {n}")
        terms[n] = parse_rational(tail)
    if not terms:
        raise RationalParseError("empty series")
    return GenusSeries.from_dict(terms, max(terms))


def series_from_coeffs(coeffs: Iterable[Number], start: int = 0) -> GenusSeries:
    cs = list(coeffs)
    return GenusSeries.from_dict({start + i: c for i, c in enumerate(cs)}, start + len(cs) - 1)
