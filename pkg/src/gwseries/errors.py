"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GWSeriesError(Exception):
    """Base class for all errors raised by gwseries."""


class PoleTooDeep(GWSeriesError):
    """A genus series acquired a pole deeper than hbar^-2."""


class ZeroLeadingCoefficient(GWSeriesError):
    pass


class OutOfCap(GWSeriesError):
    """A coefficient beyond the truncation cap was requested."""


class InvalidTangency(GWSeriesError):
    pass


class ZeroTangency(GWSeriesError):
    pass


class RankMismatch(GWSeriesError):
    pass


class PresetMismatch(GWSeriesError):
    pass


class NonNilpotentArgument(GWSeriesError):
    pass


class NonUnitConstantTerm(GWSeriesError):
    pass


class NotInImage(GWSeriesError):
    pass


class MissingInvariant(GWSeriesError):
    """A strict lookup did not find the requested (kind, class, genus) key."""

    def __init__(self, kind, cls, genus):
        self.key = (kind, cls, genus)
        name = getattr(kind, "value", kind)
        super().__init__(f"missing invariant {name} class={cls} genus={genus}")


class MissingStationary(GWSeriesError):
    """The stationary oracle has no value for an (h, a, m, d) key."""

    def __init__(self, h, a, m, d):
        self.key = (h, tuple(a), m, d)
        super().__init__(f"missing stationary invariant h={h} a={tuple(a)} m={m} d={d}")


class SchemaError(GWSeriesError):
    pass


class RationalParseError(GWSeriesError):
    pass
