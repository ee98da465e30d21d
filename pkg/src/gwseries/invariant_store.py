"""Invariant tables, the elliptic-curve stationary oracle, Novikov series and dataset I/O."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Optional

import jsonschema

from .errors import (
    MissingInvariant,
    MissingStationary,
    NonNilpotentArgument,
    NonUnitConstantTerm,
    PresetMismatch,
    RationalParseError,
    SchemaError,
)
from .genus_series import GenusSeries, format_rational, gs_mul, parse_rational
from .surface_lattice import CurveClass, SurfacePreset, get_preset


class InvariantKind(Enum):
    GvLocal = "GvLocal"
    GwLocal = "GwLocal"
    LogMax = "LogMax"
    LogTwoPoint = "LogTwoPoint"
    GwZ = "GwZ"
    GwW = "GwW"
    OpenBps = "OpenBps"
    StationaryE = "StationaryE"


# tables ----------------------------------------------------------------------

@dataclass
class InvariantTable:
    """Store ``(kind, class, genus) -> Fraction``.

    ``twopoint`` holds genus-0 two-point log invariants with arbitrary
    contact orders, keyed ``(class, p, q)`` with ``p <= q``; these only feed
    the theta structure constants.
    """

    preset_id: str
    entries: dict = field(default_factory=dict)
    genus_cap: int = 1
    degree_cap: int = 6
    twopoint: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        for key in self.entries:
            if key[0] is InvariantKind.StationaryE:
                raise SchemaError("StationaryE values belong to the stationary oracle")

    def __len__(self):
        return len(self.entries)

    def has(self, kind: InvariantKind, cls: CurveClass, genus: int) -> bool:
        return (kind, cls, genus) in self.entries

    def get(self, kind: InvariantKind, cls: CurveClass, genus: int, strict: bool = True) -> Fraction:
        try:
            return self.entries[(kind, cls, genus)]
        except KeyError:
            if strict:
                raise MissingInvariant(kind, cls, genus) from None
            return Fraction(0)

    def get_twopoint(self, cls: CurveClass, p: int, q: int, strict: bool = True) -> Fraction:
        key = (cls, min(p, q), max(p, q))
        try:
            return self.twopoint[key]
        except KeyError:
            if strict:
                raise MissingInvariant(f"R0({key[1]},{key[2]})", cls, 0) from None
            return Fraction(0)

    def of_kind(self, kind: InvariantKind) -> dict:
        """``{(class, genus): value}`` for one kind, in sorted key order."""
        return {
            (c, g): v
            for (k, c, g), v in sorted(self.entries.items(), key=_entry_sort_key)
            if k is kind
        }

    def classes(self, kind: InvariantKind) -> list:
        return sorted({c for (k, c, _g) in self.entries if k is kind})

    def with_entries(self, values: Mapping) -> "InvariantTable":
        merged = dict(self.entries)
        merged.update({k: Fraction(v) for k, v in values.items()})
        return InvariantTable(
            self.preset_id, merged, self.genus_cap, self.degree_cap, dict(self.twopoint), dict(self.notes)
        )

    def without_kind(self, kind: InvariantKind) -> "InvariantTable":
        return InvariantTable(
            self.preset_id,
            {k: v for k, v in self.entries.items() if k[0] is not kind},
            self.genus_cap,
            self.degree_cap,
            dict(self.twopoint),
            dict(self.notes),
        )

    def reader(self) -> "TableReader":
        return TableReader(self)


def _entry_sort_key(item):
    (kind, cls, genus), _ = item
    return (kind.value, sum(cls.coords), cls.coords, genus)


class TableReader:
    """Strict view of a table that records every key it is asked for."""

    def __init__(self, table: InvariantTable):
        self.table = table
        self.queried: list = []
        self._seen: set = set()

    def _log(self, key):
        if key not in self._seen:
            self._seen.add(key)
            self.queried.append(key)

    @property
    def preset_id(self):
        return self.table.preset_id

    def has(self, kind, cls, genus) -> bool:
        return self.table.has(kind, cls, genus)

    def get(self, kind, cls, genus, strict: bool = True) -> Fraction:
        self._log((kind, cls, genus))
        return self.table.get(kind, cls, genus, strict)

    def get_twopoint(self, cls, p, q, strict: bool = True) -> Fraction:
        self._log(("R0twopoint", cls, (min(p, q), max(p, q))))
        return self.table.get_twopoint(cls, p, q, strict)


# stationary invariants of the elliptic curve --------------------------------------

def sigma_minus1(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1) if n % k == 0), Fraction(0))


class StationaryKey(NamedTuple):
    h: int
    a: tuple
    m: int
    d: int


def stationary_key(h: int, a: Iterable[int], m: int, d: int) -> StationaryKey:
    return StationaryKey(int(h), tuple(sorted(int(x) for x in a)), int(m), int(d))


@dataclass
class StationaryOracle:
    """Values of ``N_{h,(a,1^m)}(E, d)``: point insertions with psi^a_i and m psi^1.

    Built-in rules, all consequences of dimension counting on the elliptic
    curve or of the divisor axiom:

    * the integrand degree must equal the virtual dimension ``2h-2+n+m``,
      i.e. ``sum(a) + m == 2h - 2``; otherwise the invariant is 0;
    * genus 0 invariants vanish;
    * genus 1 with no psi classes: ``d**n * sigma_{-1}(d)`` for ``d >= 1``,
      ``-1/24`` for ``d = 0`` with one marking, and 0 for ``d = 0`` otherwise.

    Everything else must be supplied; a missing key raises
    :class:`MissingStationary`.
    """

    table: dict = field(default_factory=dict)
    queried: list = field(default_factory=list)

    def get(self, h: int, a: Iterable[int], m: int, d: int) -> Fraction:
        key = stationary_key(h, a, m, d)
        self.queried.append(key)
        if key in self.table:
            return self.table[key]
        value = builtin_stationary(key)
        if value is None:
            raise MissingStationary(key.h, key.a, key.m, key.d)
        return value

    def with_values(self, values: Mapping) -> "StationaryOracle":
        merged = dict(self.table)
        for k, v in values.items():
            merged[stationary_key(*k)] = Fraction(v)
        return StationaryOracle(merged)


def builtin_stationary(key: StationaryKey) -> Optional[Fraction]:
    h, a, m, d = key
    if h < 0 or d < 0 or m < 0 or any(x < 0 for x in a):
        return Fraction(0)
    if sum(a) + m != 2 * h - 2:
        return Fraction(0)
    if h == 0:
        return Fraction(0)
    if h == 1:
        # here a = 0 and m = 0 by the dimension test
        n = len(a)
        if d == 0:
            return Fraction(-1, 24) if n == 1 else Fraction(0)
        return Fraction(d) ** n * sigma_minus1(d)
    return None


# Novikov series ---------------------------------------------------------------------

@dataclass(frozen=True)
class NovikovSeries:
    """Finitely supported ``CurveClass -> GenusSeries`` with a degree cap.

    Every stored series has cap ``genus_cap`` (a u-power cap), and zero
    series are dropped so that equality is structural.
    """

    preset: SurfacePreset
    terms: tuple
    degree_cap: int
    genus_cap: int

    def __post_init__(self):
        cleaned = {}
        for cls, s in dict(self.terms).items():
            if not cls.is_effective():
                raise ValueError(f"class {cls} is not effective")
            if self.preset.degree(cls) > self.degree_cap:
                continue
            if s.cap > self.genus_cap:
                s = s.truncate(self.genus_cap)
            elif s.cap < self.genus_cap:
                raise ValueError(f"series at {cls} has cap {s.cap} < {self.genus_cap}")
            if not s.is_zero():
                cleaned[cls] = s
        object.__setattr__(self, "terms", tuple(sorted(cleaned.items())))

    @classmethod
    def from_dict(cls, preset, terms: Mapping, degree_cap: int, genus_cap: int) -> "NovikovSeries":
        return cls(preset, tuple(terms.items()), degree_cap, genus_cap)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coefficient(self, c: CurveClass) -> GenusSeries:
        return self.as_dict().get(c, GenusSeries.zero(self.genus_cap))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        return nv_add(self, other)

    def __sub__(self, other):
        return nv_add(self, nv_scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, NovikovSeries):
            return nv_mul(self, other)
        return nv_scale(self, other)

    __rmul__ = __mul__


def nv_zero(preset, degree_cap: int, genus_cap: int) -> NovikovSeries:
    return NovikovSeries(preset, (), degree_cap, genus_cap)


def nv_monomial(preset, cls: CurveClass, series: GenusSeries, degree_cap: int, genus_cap: int):
    return NovikovSeries(preset, ((cls, series),), degree_cap, genus_cap)


def nv_one(preset, degree_cap: int, genus_cap: int) -> NovikovSeries:
    return nv_monomial(preset, preset.zero(), GenusSeries.one(genus_cap), degree_cap, genus_cap)


def nv_coefficient(a: NovikovSeries, cls: CurveClass) -> GenusSeries:
    return a.coefficient(cls)


def _same_preset(a: NovikovSeries, b: NovikovSeries):
    if a.preset.id != b.preset.id or a.preset != b.preset:
        raise PresetMismatch(f"{a.preset.id} vs {b.preset.id}")


def nv_add(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    _same_preset(a, b)
    gcap = min(a.genus_cap, b.genus_cap)
    dcap = min(a.degree_cap, b.degree_cap)
    out: dict = {}
    for src in (a, b):
        for cls, s in src.terms:
            s = s.truncate(gcap)
            out[cls] = out[cls] + s if cls in out else s
    return NovikovSeries(a.preset, tuple(out.items()), dcap, gcap)


def nv_scale(a: NovikovSeries, c) -> NovikovSeries:
    return NovikovSeries(a.preset, tuple((k, s * c) for k, s in a.terms), a.degree_cap, a.genus_cap)


def nv_mul(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    _same_preset(a, b)
    p = a.preset
    dcap = min(a.degree_cap, b.degree_cap)
    out: dict = {}
    gcap = None
    for ca, sa in a.terms:
        for cb, sb in b.terms:
            cls = ca + cb
            if p.degree(cls) > dcap:
                continue
            prod = gs_mul(sa, sb)
            gcap = prod.cap if gcap is None else min(gcap, prod.cap)
            out[cls] = out[cls] + prod if cls in out else prod
    if gcap is None:
        # no surviving products; the cap a product would have had
        gcap = min(a.genus_cap, b.genus_cap)
    out = {k: v.truncate(gcap) for k, v in out.items()}
    return NovikovSeries(p, tuple(out.items()), dcap, gcap)


def nv_exp(a: NovikovSeries) -> NovikovSeries:
    zero = a.preset.zero()
    if not a.coefficient(zero).is_zero():
        raise NonNilpotentArgument("exp needs a vanishing constant term")
    result = nv_one(a.preset, a.degree_cap, a.genus_cap)
    power = result
    k = 0
    while True:
        k += 1
        power = nv_scale(nv_mul(power, a), Fraction(1, k))
        if power.is_zero():
            break
        result = nv_add(result, power)
    return result


def nv_log(a: NovikovSeries) -> NovikovSeries:
    zero = a.preset.zero()
    c0 = a.coefficient(zero)
    if c0 != GenusSeries.one(a.genus_cap):
        raise NonUnitConstantTerm("log needs constant term exactly 1")
    x = nv_add(a, nv_scale(nv_one(a.preset, a.degree_cap, a.genus_cap), -1))
    result = nv_zero(a.preset, a.degree_cap, a.genus_cap)
    power = nv_one(a.preset, a.degree_cap, a.genus_cap)
    k = 0
    while True:
        k += 1
        power = nv_mul(power, x)
        if power.is_zero():
            break
        result = nv_add(result, nv_scale(power, Fraction((-1) ** (k + 1), k)))
    return result


def table_to_novikov(
    t: InvariantTable, kind: InvariantKind, preset: SurfacePreset, strict_keys: Iterable = ()
) -> NovikovSeries:
    """``sum t[kind, beta, g] hbar^(2g) Q^beta`` (missing entries count as 0).

    Keys listed in ``strict_keys`` must be present.
    """
    if kind is InvariantKind.StationaryE:
        raise ValueError("stationary invariants are not indexed by curve classes")
    for cls, g in strict_keys:
        t.get(kind, cls, g)
    terms: dict = {}
    for (cls, g), v in t.of_kind(kind).items():
        if g > t.genus_cap or preset.degree(cls) > t.degree_cap:
            continue
        terms.setdefault(cls, {})[g] = v
    series = {c: GenusSeries.from_dict(d, t.genus_cap) for c, d in terms.items()}
    return NovikovSeries.from_dict(preset, series, t.degree_cap, t.genus_cap)


# dataset files ------------------------------------------------------------------

_RAT = {"type": ["string", "integer"]}
_CLASS = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

DATASET_SCHEMA = {
    "type": "object",
    "required": ["preset", "genus_cap", "degree_cap", "entries"],
    "additionalProperties": False,
    "properties": {
        "description": {"type": "string"},
        "preset": {
            "oneOf": [
                {"type": "string"},
                {
                    "type": "object",
                    "required": ["rank", "pairing", "anticanonical", "degree_weights", "euler_char"],
                    "additionalProperties": False,
                    "properties": {
                        "id": {"type": "string"},
                        "rank": {"type": "integer", "minimum": 1},
                        "pairing": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                        "anticanonical": _CLASS,
                        "generators": {"type": "array", "items": _CLASS},
                        "degree_weights": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                        "euler_char": {"type": "integer"},
                        "basis_names": {"type": "array", "items": {"type": "string"}},
                    },
                },
            ]
        },
        "genus_cap": {"type": "integer", "minimum": 0},
        "degree_cap": {"type": "integer", "minimum": 0},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "class", "genus", "value"],
                "additionalProperties": False,
                "properties": {
                    "kind": {"enum": [k.value for k in InvariantKind if k is not InvariantKind.StationaryE]},
                    "class": _CLASS,
                    "genus": {"type": "integer", "minimum": 0},
                    "value": _RAT,
                    "note": {"type": "string"},
                },
            },
        },
        "stationary": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["h", "a", "m", "d", "value"],
                "additionalProperties": False,
                "properties": {
                    "h": {"type": "integer", "minimum": 0},
                    "a": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "m": {"type": "integer", "minimum": 0},
                    "d": {"type": "integer", "minimum": 0},
                    "value": _RAT,
                },
            },
        },
        "twopoint": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["class", "p", "q", "value"],
                "additionalProperties": False,
                "properties": {
                    "class": _CLASS,
                    "p": {"type": "integer", "minimum": 0},
                    "q": {"type": "integer", "minimum": 0},
                    "value": _RAT,
                },
            },
        },
    },
}


class Dataset(NamedTuple):
    preset: SurfacePreset
    table: InvariantTable
    oracle: StationaryOracle


def _json_path(err) -> str:
    parts = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return "$" + parts


def _preset_from_json(obj) -> SurfacePreset:
    if isinstance(obj, str):
        return get_preset(obj)
    rank = obj["rank"]
    gens = obj.get("generators")
    if gens is not None:
        ident = [[int(i == j) for j in range(rank)] for i in range(rank)]
        if [list(g) for g in gens] != ident:
            raise SchemaError("$.preset.generators: the coordinate basis must consist of the cone generators")
    names = tuple(obj.get("basis_names", ()))
    if names and len(names) != rank:
        raise SchemaError("$.preset.basis_names: one name per generator")
    if len(obj["anticanonical"]) != rank:
        raise SchemaError("$.preset.anticanonical: wrong length")
    return SurfacePreset(
        id=obj.get("id", "custom"),
        rank=rank,
        pairing=tuple(tuple(r) for r in obj["pairing"]),
        anticanonical=CurveClass(tuple(obj["anticanonical"])),
        degree_weights=tuple(obj["degree_weights"]),
        euler_char=obj["euler_char"],
        basis_names=names,
    )


def _preset_to_json(p: SurfacePreset):
    from .surface_lattice import PRESETS

    if PRESETS.get(p.id) == p:
        return p.id
    return {
        "id": p.id,
        "rank": p.rank,
        "pairing": [list(r) for r in p.pairing],
        "anticanonical": list(p.anticanonical.coords),
        "generators": [list(g.coords) for g in p.generators],
        "degree_weights": list(p.degree_weights),
        "euler_char": p.euler_char,
        "basis_names": list(p.basis_names),
    }


def dataset_from_json(doc) -> Dataset:
    validator = jsonschema.Draft7Validator(DATASET_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise SchemaError(f"{_json_path(e)}: {e.message}")
    try:
        preset = _preset_from_json(doc["preset"])
    except SchemaError:
        raise
    except Exception as exc:
        raise SchemaError(f"$.preset: {exc}") from exc

    entries: dict = {}
    notes: dict = {}
    for i, row in enumerate(doc["entries"]):
        where = f"$.entries[{i}]"
        if len(row["class"]) != preset.rank:
            raise SchemaError(f"{where}.class: expected {preset.rank} coordinates")
        cls = CurveClass(tuple(row["class"]))
        if not cls.is_effective():
            raise SchemaError(f"{where}.class: class is not effective")
        key = (InvariantKind(row["kind"]), cls, row["genus"])
        if key in entries:
            raise SchemaError(f"{where}: duplicate key")
        try:
            entries[key] = parse_rational(row["value"])
        except RationalParseError as exc:
            raise RationalParseError(f"{where}.value: {exc}") from None
        if "note" in row:
            notes[key] = row["note"]

    stationary: dict = {}
    for i, row in enumerate(doc.get("stationary", [])):
        key = stationary_key(row["h"], row["a"], row["m"], row["d"])
        if key in stationary:
            raise SchemaError(f"$.stationary[{i}]: duplicate key")
        try:
            stationary[key] = parse_rational(row["value"])
        except RationalParseError as exc:
            raise RationalParseError(f"$.stationary[{i}].value: {exc}") from None

    twopoint: dict = {}
    for i, row in enumerate(doc.get("twopoint", [])):
        if len(row["class"]) != preset.rank:
            raise SchemaError(f"$.twopoint[{i}].class: expected {preset.rank} coordinates")
        cls = CurveClass(tuple(row["class"]))
        key = (cls, min(row["p"], row["q"]), max(row["p"], row["q"]))
        if key in twopoint:
            raise SchemaError(f"$.twopoint[{i}]: duplicate key")
        try:
            twopoint[key] = parse_rational(row["value"])
        except RationalParseError as exc:
            raise RationalParseError(f"$.twopoint[{i}].value: {exc}") from None

    table = InvariantTable(preset.id, entries, doc["genus_cap"], doc["degree_cap"], twopoint, notes)
    return Dataset(preset, table, StationaryOracle(stationary))


def dataset_to_json(ds: Dataset, description: Optional[str] = None) -> dict:
    preset, table, oracle = ds
    doc: dict = {}
    if description:
        doc["description"] = description
    doc["preset"] = _preset_to_json(preset)
    doc["genus_cap"] = table.genus_cap
    doc["degree_cap"] = table.degree_cap
    rows = []
    for key, value in sorted(table.entries.items(), key=_entry_sort_key):
        kind, cls, genus = key
        row = {"kind": kind.value, "class": list(cls.coords), "genus": genus, "value": format_rational(value)}
        if key in table.notes:
            row["note"] = table.notes[key]
        rows.append(row)
    doc["entries"] = rows
    if oracle.table:
        doc["stationary"] = [
            {"h": k.h, "a": list(k.a), "m": k.m, "d": k.d, "value": format_rational(v)}
            for k, v in sorted(oracle.table.items())
        ]
    if table.twopoint:
        doc["twopoint"] = [
            {"class": list(c.coords), "p": p, "q": q, "value": format_rational(v)}
            for (c, p, q), v in sorted(table.twopoint.items(), key=lambda kv: (kv[0][0].coords, kv[0][1], kv[0][2]))
        ]
    return doc


_INT_LIST = re.compile(r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]")


def dumps_dataset(ds: Dataset, description: Optional[str] = None) -> str:
    """Canonical text: two-space indent with integer vectors kept on one line."""
    text = json.dumps(dataset_to_json(ds, description), indent=2)
    text = _INT_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]", text)
    return text + "\n"


def load_dataset(path) -> Dataset:
    path = resolve_data_path(path)
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return dataset_from_json(doc)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def save_dataset(ds: Dataset, path, description: Optional[str] = None) -> None:
    Path(path).write_text(dumps_dataset(ds, description))


BUNDLED_DIR = Path(__file__).parent / "data"


def resolve_data_path(name) -> Path:
    """Resolve ``name`` as a file path, then inside ``GWSERIES_DATA_DIR``, then bundled data.

    Bare names without a suffix get ``.json`` appended for the lookup.
    """
    p = Path(name)
    if p.is_file():
        return p
    candidates = [p.name, p.name + ".json"] if not p.suffix else [p.name]
    dirs = []
    env = os.environ.get("GWSERIES_DATA_DIR")
    if env:
        dirs.append(Path(env))
    dirs.append(BUNDLED_DIR)
    for d in dirs:
        for c in candidates:
            if (d / c).is_file():
                return d / c
    raise SchemaError(f"dataset not found: {name}")


def bundled_dataset(name: str = "f1_reference") -> Dataset:
    return load_dataset(BUNDLED_DIR / f"{name}.json")

