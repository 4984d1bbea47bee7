"""Golden Betti numbers for ``nu = (NE^m)^n`` and their recomputation.

Each golden cell is transcribed from the published table of Betti numbers of
the canonical join complex, m-Tamari column (delta = nu) and m-Dyck column
(delta = 0).  ``beta_0`` is unreduced (number of components); omitted entries
are zero.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .complex import betti_gf2, trim
from .paths import count_nu_dyck, resolve_delta, shape_from, uniform_path

SOURCE = "published Betti table for (NE^m)^n, m-Tamari and m-Dyck columns"

GOLDEN: dict[tuple[int, int], dict[str, tuple[int, ...]]] = {
    (2, 2): {"tamari": (2,), "dyck": (2,)},
    (2, 3): {"tamari": (2, 1), "dyck": (2, 1)},
    (2, 4): {"tamari": (1, 4, 1), "dyck": (2, 5, 1)},
    (2, 5): {"tamari": (1, 2, 10, 1), "dyck": (2, 8, 15, 1)},
    (2, 6): {"tamari": (1, 0, 15, 20, 1), "dyck": (2, 11, 40, 35, 1)},
    (3, 2): {"tamari": (3,), "dyck": (3,)},
    (3, 3): {"tamari": (2, 5), "dyck": (2, 5)},
    (3, 4): {"tamari": (1, 8, 14), "dyck": (2, 9, 14)},
    (3, 5): {"tamari": (1, 2, 45, 42), "dyck": (2, 13, 55, 42)},
    (4, 2): {"tamari": (4,), "dyck": (4,)},
    (4, 3): {"tamari": (2, 12), "dyck": (2, 12)},
    (4, 4): {"tamari": (1, 12, 55), "dyck": (2, 13, 55)},
    (5, 2): {"tamari": (5,), "dyck": (5,)},
    (5, 3): {"tamari": (2, 22), "dyck": (2, 22)},
    (5, 4): {"tamari": (1, 16, 140), "dyck": (2, 17, 140)},
    (6, 2): {"tamari": (6,), "dyck": (6,)},
    (6, 3): {"tamari": (2, 35), "dyck": (2, 35)},
    (6, 4): {"tamari": (1, 20, 285), "dyck": (2, 21, 285)},
    (7, 2): {"tamari": (7,), "dyck": (7,)},
    (7, 3): {"tamari": (2, 51), "dyck": (2, 51)},
}

# rows whose lattices are largest; gated behind --slow where the lattice is built
SLOW_ROWS = {(3, 5), (6, 4), (2, 6)}


def provenance(m: int, n: int, kind: str) -> str:
    return f"{SOURCE}: row m={m}, n={n}, {'m-Tamari' if kind == 'tamari' else 'm-Dyck'} column"


@dataclass
class Table1Row:
    m: int
    n: int
    kind: str
    lattice_size: int
    golden: tuple[int, ...]
    gf2: tuple[int, ...] | None = None
    shelling: tuple[int, ...] | None = None
    lattice_gf2: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool:
        got = [v for v in (self.gf2, self.shelling, self.lattice_gf2) if v is not None]
        return bool(got) and all(tuple(trim(v)) == tuple(trim(self.golden)) for v in got)

    def as_csv_row(self) -> list:
        def fmt(v):
            return "" if v is None else " ".join(map(str, trim(v)))

        return [self.m, self.n, self.kind, self.lattice_size, fmt(self.golden), fmt(self.gf2),
                fmt(self.shelling), fmt(self.lattice_gf2), "ok" if self.ok else "MISMATCH"]


def compute_row(m: int, n: int, kind: str, with_lattice: bool = False,
                rational: bool = False) -> Table1Row:
    """Betti numbers of the box complex by GF(2) ranks and by shelling; with
    ``with_lattice`` also from the canonical join complex built in the lattice."""
    from .boxcomplex import box_complex
    from .shelling import betti_via_shelling, shelling_order

    nu = uniform_path(m, n)
    delta = resolve_delta(nu, kind)
    shape = shape_from(nu, delta)
    golden = GOLDEN.get((m, n), {}).get(kind, ())
    row = Table1Row(m, n, kind, count_nu_dyck(nu), golden)
    row.gf2 = tuple(trim(betti_gf2(box_complex(shape), rational)))
    row.shelling = tuple(trim(betti_via_shelling(shelling_order(shape))))
    if with_lattice:
        from .verify import alt_tamari_lattice

        alt = alt_tamari_lattice(nu, delta)
        cjc, _ = alt.lattice.canonical_join_complex()
        row.lattice_gf2 = tuple(trim(betti_gf2(cjc, rational)))
    return row


def compute_table(ms=range(2, 8), ns=range(2, 7), slow: bool = False,
                  with_lattice: bool = False, rational: bool = False) -> list[Table1Row]:
    rows = []
    for (m, n) in sorted(GOLDEN):
        if m not in ms or n not in ns:
            continue
        for kind in ("tamari", "dyck"):
            lat = with_lattice and (slow or (m, n) not in SLOW_ROWS)
            rows.append(compute_row(m, n, kind, lat, rational))
    return rows


def table_csv(rows: list[Table1Row]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["m", "n", "lattice", "lattice_size", "golden", "gf2", "shelling", "lattice_gf2", "status"])
    for r in rows:
        w.writerow(r.as_csv_row())
    return out.getvalue()
