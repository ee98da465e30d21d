"""Curve classes on the preset surfaces P^2 and F_1.

The coordinate basis of each preset is a set of generators of the
effective cone, so a class is effective exactly when every coordinate
is nonnegative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering
from itertools import product
from typing import Iterator, NamedTuple, Sequence

from .errors import RankMismatch, SchemaError


@total_ordering
@dataclass(frozen=True)
class CurveClass:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def of(cls, *coords: int) -> "CurveClass":
        return cls(tuple(coords))

    @classmethod
    def zero(cls, rank: int) -> "CurveClass":
        return cls((0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _check(self, other: "CurveClass"):
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")

    def __add__(self, other: "CurveClass") -> "CurveClass":
        self._check(other)
        return CurveClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CurveClass") -> "CurveClass":
        self._check(other)
        return CurveClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CurveClass":
        return CurveClass(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "CurveClass":
        return CurveClass(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __lt__(self, other: "CurveClass") -> bool:
        return self.coords < other.coords

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class SurfacePreset:
    id: str
    rank: int
    pairing: tuple
    anticanonical: CurveClass
    degree_weights: tuple
    euler_char: int
    basis_names: tuple = field(default=())

    def __post_init__(self):
        pairing = tuple(tuple(int(x) for x in row) for row in self.pairing)
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "degree_weights", tuple(int(w) for w in self.degree_weights))
        if not self.basis_names:
            object.__setattr__(self, "basis_names", tuple(f"e{i}" for i in range(self.rank)))
        if len(pairing) != self.rank or any(len(r) != self.rank for r in pairing):
            raise SchemaError(f"pairing must be {self.rank}x{self.rank}")
        for i in range(self.rank):
            for j in range(i):
                if pairing[i][j] != pairing[j][i]:
                    raise SchemaError("pairing must be symmetric")
        if self.anticanonical.rank != self.rank:
            raise SchemaError("anticanonical class has the wrong rank")
        if len(self.degree_weights) != self.rank or any(w < 1 for w in self.degree_weights):
            raise SchemaError("degree weights must be positive integers, one per generator")
        for g in self.generators:
            if cc_dot(self, g, self.anticanonical) <= 0:
                raise SchemaError(f"generator {g} has non-positive anticanonical degree")

    @property
    def generators(self) -> tuple:
        return tuple(
            CurveClass(tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)
        )

    def zero(self) -> CurveClass:
        return CurveClass.zero(self.rank)

    def degree(self, c: CurveClass) -> int:
        _check_rank(self, c)
        return sum(w * x for w, x in zip(self.degree_weights, c.coords))

    def format_class(self, c: CurveClass) -> str:
        """Render a class like ``2B+3F`` (``0`` for the zero class)."""
        _check_rank(self, c)
        parts = []
        for coef, name in zip(c.coords, self.basis_names):
            if coef == 0:
                continue
            sign = "-" if coef < 0 else "+"
            mag = "" if abs(coef) == 1 else str(abs(coef))
            parts.append(f"{sign}{mag}{name}")
        if not parts:
            return "0"
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def parse_class(self, text: str) -> CurveClass:
        """Accept ``2B+3F``, ``3H``, ``0`` or a bare coordinate list ``2,3``."""
        s = text.replace(" ", "")
        if re.fullmatch(r"-?\d+(,-?\d+)*", s):
            coords = tuple(int(x) for x in s.split(","))
            if s == "0":
                return self.zero()
            if len(coords) != self.rank:
                raise RankMismatch(f"expected {self.rank} coordinates, got {len(coords)}")
            return CurveClass(coords)
        coords = [0] * self.rank
        pos = 0
        term = re.compile(r"([+-]?)(\d*)([A-Za-z_]\w*)")
        if s and s[0] not in "+-":
            s = "+" + s
        while pos < len(s):
            m = term.match(s, pos)
            if m is None or not m.group(1):
                raise SchemaError(f"cannot parse class {text!r}")
            name = m.group(3)
            if name not in self.basis_names:
                raise SchemaError(f"unknown generator {name!r} in {text!r}")
            coef = int(m.group(2)) if m.group(2) else 1
            coords[self.basis_names.index(name)] += -coef if m.group(1) == "-" else coef
            pos = m.end()
        return CurveClass(tuple(coords))


def _check_rank(p: SurfacePreset, *classes: CurveClass):
    for c in classes:
        if c.rank != p.rank:
            raise RankMismatch(f"class {c} has rank {c.rank}, preset {p.id} has rank {p.rank}")


def cc_dot(p: SurfacePreset, a: CurveClass, b: CurveClass) -> int:
    _check_rank(p, a, b)
    return sum(
        a.coords[i] * p.pairing[i][j] * b.coords[j] for i in range(p.rank) for j in range(p.rank)
    )


def cc_tangency(p: SurfacePreset, b: CurveClass) -> int:
    return cc_dot(p, b, p.anticanonical)


def blowup_class_map(d: int) -> CurveClass:
    """The F_1 class of the strict transform of a degree-d curve through the centre."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return CurveClass((d - 1, d))


def enumerate_effective_upto(p: SurfacePreset, dmax: int) -> list:
    if dmax < 0:
        raise ValueError("dmax must be >= 0")
    bounds = [range(dmax // w + 1) for w in p.degree_weights]
    out = [CurveClass(c) for c in product(*bounds)]
    out = [c for c in out if p.degree(c) <= dmax]
    # within a degree, earlier generators come first: B before F
    out.sort(key=lambda c: (p.degree(c), tuple(-x for x in c.coords)))
    return out


class Decomposition(NamedTuple):
    d_E: int
    parts: tuple


def _sub_effective(beta: CurveClass) -> Iterator[CurveClass]:
    for c in product(*(range(x + 1) for x in beta.coords)):
        yield CurveClass(c)


def _multisets(target: CurveClass, candidates: Sequence[CurveClass], start: int, left: int):
    if target.is_zero():
        yield ()
        return
    if left == 0:
        return
    for i in range(start, len(candidates)):
        c = candidates[i]
        rest = target - c
        if not rest.is_effective():
            continue
        for tail in _multisets(rest, candidates, i, left - 1):
            yield (c,) + tail


def decompose_for_delta(p: SurfacePreset, beta: CurveClass, nmax: int) -> list:
    """All ways to write ``beta = d_E*E + beta_1 + ... + beta_n`` with ``n <= nmax``.

    Each ``beta_j`` is effective, nonzero and meets E positively; parts are
    returned as sorted tuples so every multiset appears once.
    """
    _check_rank(p, beta)
    if not beta.is_effective():
        raise ValueError(f"class {beta} is not effective")
    out = []
    d_E = 0
    while True:
        rem = beta - p.anticanonical * d_E
        if not rem.is_effective():
            break
        candidates = sorted(
            c for c in _sub_effective(rem) if not c.is_zero() and cc_tangency(p, c) > 0
        )
        for parts in _multisets(rem, candidates, 0, nmax):
            out.append(Decomposition(d_E, parts))
        if p.anticanonical.is_zero():
            break
        d_E += 1
    out.sort()
    return out


P2 = SurfacePreset(
    id="p2",
    rank=1,
    pairing=((1,),),
    anticanonical=CurveClass((3,)),
    degree_weights=(1,),
    euler_char=3,
    basis_names=("H",),
)

F1 = SurfacePreset(
    id="f1",
    rank=2,
    pairing=((-1, 1), (1, 0)),
    anticanonical=CurveClass((2, 3)),
    degree_weights=(1, 1),
    euler_char=4,
    basis_names=("B", "F"),
)

PRESETS = {"p2": P2, "f1": F1}


def get_preset(name: str) -> SurfacePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise SchemaError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None
