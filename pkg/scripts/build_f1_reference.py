"""Regenerate src/gwseries/data/f1_reference.json.

Inputs are the genus-0 and genus-1 Gopakumar-Vafa invariants of local F_1
at the strict transforms (d-1)B + dF of degree-d plane curves, plus the
genus-0 numbers of B, F and B+F that the elliptic correction needs.  Every
other entry is derived from those by the package's own algebra and carries
a note saying so.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

from gwseries.genus_series import GenusSeries
from gwseries.invariant_store import Dataset, InvariantKind as K, InvariantTable, StationaryOracle, save_dataset
from gwseries.loglocal import delta1
from gwseries.surface_lattice import F1, CurveClass, blowup_class_map, cc_tangency
from gwseries.transforms import hat_relation_inverse, loglocal_g0

GV = {
    # class: (n0, n1)
    (1, 0): (1, 0),
    (0, 1): (-2, 0),
    (1, 1): (3, 0),
    (1, 2): (5, 0),
    (2, 3): (-32, 9),
    (3, 4): (286, -288),
}

CHECK = [blowup_class_map(d) for d in range(1, 5)]


def build() -> Dataset:
    entries = {}
    notes = {}
    for coords, (n0, n1) in GV.items():
        c = CurveClass(coords)
        entries[(K.GvLocal, c, 0)] = Fraction(n0)
        entries[(K.GvLocal, c, 1)] = Fraction(n1)
        r0 = loglocal_g0(F1, c, n0)
        entries[(K.LogMax, c, 0)] = r0
        notes[(K.LogMax, c, 0)] = "derived: genus-0 log-local from GvLocal genus 0 (primitive class)"
    table = InvariantTable("f1", entries, 1, 7, {}, notes)
    for c in CHECK:
        k = cc_tangency(F1, c)
        n0, n1 = (Fraction(x) for x in GV[c.coords])
        N1 = n1 + n0 / 12
        r0 = entries[(K.LogMax, c, 0)]
        d1 = delta1(F1, c, table, signed=True)
        r1 = (-1) ** (k - 1) * k * (N1 - Fraction((-1) ** (k + 1) * k, 24) * r0 - d1)
        entries[(K.LogMax, c, 1)] = r1
        notes[(K.LogMax, c, 1)] = "derived: genus-1 log-local identity from GvLocal and delta_1"
        r2 = hat_relation_inverse(GenusSeries.from_dict({0: r0, 1: r1}, 1))
        for g in (0, 1):
            entries[(K.LogTwoPoint, c, g)] = r2.coefficient(g)
            notes[(K.LogTwoPoint, c, g)] = "derived: hat relation from LogMax"
            entries[(K.OpenBps, c, g)] = entries[(K.GvLocal, c, g)] * (-1) ** (g + 1)
            notes[(K.OpenBps, c, g)] = "derived: open-closed sign map of GvLocal"
    return Dataset(F1, InvariantTable("f1", entries, 1, 7, {}, notes), StationaryOracle())


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parents[1] / "src/gwseries/data/f1_reference.json"
    save_dataset(build(), out, "Local F_1 reference data at the classes (d-1)B+dF, d=1..4")
    print(out)
