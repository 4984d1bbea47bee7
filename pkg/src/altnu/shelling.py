"""Explicit shellings of the box complex, homology facets and the maps H and phi.

Facets are handled as frozensets of :class:`Box`.  Internally they are also
encoded as bitmasks over a fixed vertex order, which keeps the validity check
and the restriction sets cheap.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .boxcomplex import BoxError, box_complex, cells_of, is_box_face, q_sequence, _incompatible_cells
from .complex import SimplicialComplex, VDCertificate, is_vertex_decomposable
from .paths import Box, NEPath, Shape, as_path, enumerate_nu_dyck, shape_from, shrunken_path

MODES = ("refined", "plain")


class ShellingError(ValueError):
    """A facet order fails the shelling condition (or a map is not applicable)."""


# ------------------------------------------------------------------ labels

def label_boxes(shape) -> dict[Box, int]:
    """Label ``i`` for the not yet labelled boxes in the row or column of ``q_i``.

    Boxes sharing neither a row nor a column with any ``q`` stay unlabelled.
    """
    cells = cells_of(shape)
    labels: dict[Box, int] = {}
    for i, q in enumerate(q_sequence(shape), start=1):
        for b in sorted(cells):
            if b not in labels and (b.row == q.row or b.col == q.col):
                labels[b] = i
    return labels


def boxes_above_q(shape) -> frozenset[Box]:
    """Boxes strictly above some ``q_i`` in its column."""
    qs = q_sequence(shape)
    return frozenset(b for b in cells_of(shape) for q in qs if b.col == q.col and b.row < q.row)


def vertex_order(shape) -> list[Box]:
    """Order in which vertices enter the refined shelling.

    First the ``q``'s (the facet ``F_0``), then the unlabelled boxes, then the
    labelled boxes with higher labels first; within a label from top to bottom
    and from right to left.
    """
    cells = cells_of(shape)
    qs = q_sequence(shape)
    labels = label_boxes(shape)
    qset = set(qs)
    rest = [b for b in cells if b not in qset]
    rest.sort(key=lambda b: (b in labels, -labels.get(b, 0), b.row, -b.col))
    return list(qs) + rest


def label_sequence(facet: Iterable, labels: dict[Box, int], n: int) -> tuple[int, ...]:
    """``(a_n, ..., a_1)`` with ``a_i = i`` when the facet has a box labelled ``i``."""
    present = {labels[b] for b in facet if b in labels}
    return tuple(i if i in present else 0 for i in range(n, 0, -1))


# ------------------------------------------------------------------ shelling orders

@dataclass
class ShellingOrder:
    shape: Shape | None
    facets: list[frozenset[Box]]
    restrictions: list[frozenset[Box]] = field(default_factory=list)
    mode: str = "refined"

    def __len__(self) -> int:
        return len(self.facets)

    def homology_facets(self) -> list[tuple[int, frozenset[Box]]]:
        return [(j, F) for j, (F, R) in enumerate(zip(self.facets, self.restrictions)) if F == R]

    def betti(self) -> list[int]:
        return betti_via_shelling(self)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "facets": [sorted(list(b) for b in F) for F in self.facets],
            "restriction_sizes": [len(R) for R in self.restrictions],
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["position", "size", "a_sequence", "restriction_size", "homology"])
        for j, (F, R) in enumerate(zip(self.facets, self.restrictions)):
            a = a_sequence(F, self.shape) if self.shape is not None else ()
            w.writerow([j, len(F), " ".join(map(str, a)), len(R), int(F == R)])
        return out.getvalue()


def _masks(facets: Sequence[frozenset], ground: Sequence) -> list[int]:
    pos = {v: i for i, v in enumerate(ground)}
    out = []
    for F in facets:
        m = 0
        for v in F:
            m |= 1 << pos[v]
        out.append(m)
    return out


def _restriction_masks(masks: Sequence[int]) -> list[int]:
    """``R(F_j)`` as masks, for any facet order."""
    out = []
    for j, m in enumerate(masks):
        r = 0
        rest = m
        while rest:
            low = rest & -rest
            rest ^= low
            ridge = m ^ low
            if any(ridge & ~masks[k] == 0 for k in range(j)):
                r |= low
        out.append(r)
    return out


def shelling_violation(facets: Sequence[frozenset], ground: Sequence | None = None) -> int | None:
    """Index of the first facet whose intersection with the earlier ones is not
    pure of codimension one, or ``None`` for a valid shelling."""
    if ground is None:
        ground = sorted(set().union(*facets)) if facets else []
    masks = _masks(facets, ground)
    restr = _restriction_masks(masks)
    for j in range(1, len(masks)):
        m, r = masks[j], restr[j]
        for k in range(j):
            # F_j & F_k must lie in a ridge F_j - {x} that meets the earlier complex
            if m & ~masks[k] & r == 0:
                return j
    return None


def is_shelling(facets: Sequence[frozenset], ground: Sequence | None = None) -> bool:
    return shelling_violation(facets, ground) is None


def restriction_sets(order: ShellingOrder | Sequence[frozenset]) -> list[frozenset]:
    facets = order.facets if isinstance(order, ShellingOrder) else list(order)
    ground = sorted(set().union(*facets)) if facets else []
    masks = _masks(facets, ground)
    return [frozenset(v for i, v in enumerate(ground) if r >> i & 1)
            for r in _restriction_masks(masks)]


def _colex_key(F, rank: dict[Box, int]) -> tuple[int, ...]:
    return tuple(sorted((rank[b] for b in F), reverse=True))


def shelling_from_certificate(cert: VDCertificate) -> list[frozenset]:
    """Shelling of the deletion followed by the link facets coned with the vertex."""
    out: list[frozenset] = []
    # explicit stack: (node, suffix to add to every facet it produces)
    stack: list[tuple[VDCertificate, frozenset]] = [(cert, frozenset())]
    while stack:
        node, extra = stack.pop()
        if node.vertex is None:
            out.append(node.facets[0] | extra)
            continue
        stack.append((node.link, extra | {node.vertex}))
        stack.append((node.deletion, extra))
    return out


def shedding_hint(shape):
    """Vertices to shed first: the reverse of :func:`vertex_order`, so the
    ``q``'s are never removed and the last remaining simplex is ``F_0``."""
    order = vertex_order(shape)
    rank = {b: i for i, b in enumerate(order)}

    def hint(facets):
        present = set().union(*facets)
        return sorted(present, key=lambda b: -rank[b])

    return hint


def shelling_order(shape, mode: str = "refined", rearrange: bool = False,
                   validate: bool = True, budget: int = 1_000_000) -> ShellingOrder:
    """``F_0 = {q_1, ..., q_n}`` followed by the remaining facets.

    ``refined``: the shelling read off a vertex decomposition whose shedding
    vertices follow :func:`vertex_order` backwards (the last vertex added is the
    first one shed).  This is the link-by-link construction.
    ``plain``: ``F_0``, then the label sequences ``(a_n, ..., a_1)`` in
    decreasing lexicographic order; facets with equal sequences keep their
    refined order.
    ``rearrange`` moves larger facets in front (stable).
    """
    if mode not in MODES:
        raise ValueError(f"unknown shelling mode {mode!r}; expected one of {MODES}")
    cx = box_complex(shape)
    ok, cert = is_vertex_decomposable(cx, shedding_hint(shape), budget=budget)
    if not ok:
        raise ShellingError(f"no vertex decomposition found for {cells_of(shape)}")
    facets = shelling_from_certificate(cert)
    f0 = frozenset(q_sequence(shape))
    if mode == "plain":
        labels = label_boxes(shape)
        n = max(labels.values(), default=0)
        pos = {F: k for k, F in enumerate(facets)}
        rest = sorted((F for F in facets if F != f0),
                      key=lambda F: (tuple(-a for a in label_sequence(F, labels, n)), pos[F]))
        facets = [f0] + rest
    if rearrange:
        facets.sort(key=len, reverse=True)
    if validate:
        bad = shelling_violation(facets, vertex_order(shape))
        if bad is not None:
            raise ShellingError(f"{mode} order fails at facet {bad}: {sorted(facets[bad])}")
    shp = shape if isinstance(shape, Shape) else None
    return ShellingOrder(shp, facets, restriction_sets(facets), mode)


def betti_via_shelling(order: ShellingOrder) -> list[int]:
    """Counts of homology facets by dimension up to the top dimension of the
    complex; ``beta_0`` unreduced."""
    if not order.restrictions:
        order.restrictions = restriction_sets(order)
    counts: dict[int, int] = {}
    for F, R in zip(order.facets, order.restrictions):
        if F == R and F:
            counts[len(F) - 1] = counts.get(len(F) - 1, 0) + 1
    top = max((len(F) - 1 for F in order.facets), default=0)
    betti = [counts.get(k, 0) for k in range(top + 1)]
    if order.facets:
        betti[0] += 1
    return betti


def betti_of_shape(shape, mode: str = "refined") -> list[int]:
    return betti_via_shelling(shelling_order(shape, mode))


# ------------------------------------------------------------------ a-sequences and phi

def _rows_bottom_up(cells) -> list[int]:
    return sorted({r for r, _ in cells}, reverse=True)


def _candidates(cells, row: int, chosen: Sequence[Box]) -> list[Box]:
    """Boxes of ``row`` from left to right compatible with ``chosen``."""
    row_boxes = sorted((b for b in cells if b.row == row), key=lambda b: b.col)
    return [b for b in row_boxes if all(not _incompatible_cells(b, c, cells) for c in chosen)]


def a_sequence(facet: Iterable, shape) -> tuple[int, ...]:
    """``(a_1, ..., a_k)`` from the bottom row up; ``a_i`` is one plus the number
    of boxes left of the row's box compatible with the boxes below, 0 if the
    row has no box of the facet."""
    cells = cells_of(shape)
    facet = [Box(*b) for b in facet]
    by_row = {b.row: b for b in facet}
    if len(by_row) != len(facet):
        raise BoxError("a face has at most one box per row")
    chosen: list[Box] = []
    out = []
    for r in _rows_bottom_up(cells):
        b = by_row.get(r)
        if b is None:
            out.append(0)
            continue
        cand = _candidates(cells, r, chosen)
        if b not in cand:
            raise BoxError(f"box {tuple(b)} is incompatible with the boxes below it")
        out.append(cand.index(b) + 1)
        chosen.append(b)
    return tuple(out)


def facet_from_a(a: Sequence[int], shape) -> frozenset[Box]:
    cells = cells_of(shape)
    rows = _rows_bottom_up(cells)
    if len(a) != len(rows):
        raise BoxError(f"sequence of length {len(a)} for a shape with {len(rows)} rows")
    chosen: list[Box] = []
    for r, ai in zip(rows, a):
        if ai == 0:
            continue
        cand = _candidates(cells, r, chosen)
        if not 1 <= ai <= len(cand):
            raise BoxError(f"a = {tuple(a)} is not realizable: row {r} has {len(cand)} candidates")
        chosen.append(cand[ai - 1])
    return frozenset(chosen)


def phi_map(facet: Iterable, shape: Shape, delta2: Sequence[int]) -> frozenset[Box]:
    """Carry a facet to the shape of another increment vector via its a-sequence."""
    nu = shape.nu
    if nu is None or any(v < 2 for v in nu.east_runs[1:]):
        raise ShellingError("phi is defined for nu with all runs nu_i >= 2")
    other = shape_from(nu, delta2)
    return facet_from_a(a_sequence(facet, shape), other)


# ------------------------------------------------------------------ the map H

def h_labels(nu) -> dict[Box, tuple[int, int]]:
    """Box ``-> (i, j)``: row ``i`` from the bottom, ``j``-th box from the right
    after skipping the ``1 + 2(i-1)`` right-most boxes (delta = 0)."""
    nu = as_path(nu)
    if any(v < 2 for v in nu.east_runs[1:]):
        raise ShellingError("H is defined for nu with all runs nu_i >= 2")
    shape = shape_from(nu, (0,) * nu.n)
    cells = cells_of(shape)
    out = {}
    for i, r in enumerate(_rows_bottom_up(cells), start=1):
        row = sorted((b for b in cells if b.row == r), key=lambda b: -b.col)
        for j, b in enumerate(row[1 + 2 * (i - 1):], start=1):
            out[b] = (i, j)
    return out


def h_map(path, nu) -> frozenset[Box]:
    """Boxes labelled by the vertical segments of a shrunken-path Dyck path.

    The north step ``i+1`` of the path at abscissa ``x`` is the segment
    ``r_{i, x+1}`` of row ``i``.
    """
    nu = as_path(nu)
    path = as_path(path)
    bar = shrunken_path(nu)
    if path.n != bar.n or path.width != bar.width or not path.is_weakly_above(bar):
        raise ShellingError(f"{path} is not a Dyck path over {bar}")
    labels = {v: k for k, v in h_labels(nu).items()}
    xs = path.prefix_sums()
    out = []
    for i in range(1, nu.n):
        key = (i, xs[i] + 1)
        if key not in labels:
            raise ShellingError(f"segment r_{key} has no box")
        out.append(labels[key])
    return frozenset(out)


def h_image(nu) -> list[frozenset[Box]]:
    return [h_map(p, nu) for p in enumerate_nu_dyck(shrunken_path(nu))]


def top_homology_facets(shape, mode: str = "refined") -> list[frozenset[Box]]:
    """Homology facets of size ``n - 1`` (one box per row)."""
    order = shelling_order(shape, mode)
    rows = len(_rows_bottom_up(cells_of(shape)))
    return [F for _, F in order.homology_facets() if len(F) == rows]


def nondecreasing_r_facets(nu) -> list[frozenset[Box]]:
    """Facets of size ``n - 1`` made of boxes ``r_{1,j_1}, ..., r_{n-1,j_{n-1}}``
    with ``j_1 <= ... <= j_{n-1}`` (scanned directly)."""
    labels = h_labels(nu)
    shape = shape_from(as_path(nu), (0,) * as_path(nu).n)
    rows = _rows_bottom_up(cells_of(shape))
    per_row = [sorted((b for b in labels if b.row == r), key=lambda b: labels[b][1]) for r in rows]
    out = []

    def rec(i: int, lo: int, acc: list[Box]):
        if i == len(per_row):
            if is_box_face(acc, shape):
                out.append(frozenset(acc))
            return
        for b in per_row[i]:
            if labels[b][1] >= lo:
                rec(i + 1, labels[b][1], acc + [b])

    rec(0, 1, [])
    return out


def homology_complex(order: ShellingOrder) -> SimplicialComplex:
    return SimplicialComplex(order.facets)
