"""The box complex of a unimodal shape and its identification with the
canonical join complex of the alt nu-Tamari lattice.

Boxes are ``Box(row, col)`` with rows counted downward from the top line.
Most functions take a :class:`Shape`; the compatibility predicate and the
complex builder also accept an arbitrary set of cells (used for transposed
shapes and for sub-shapes met during vertex decomposition).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .complex import SimplicialComplex, find_isomorphism, is_vertex_decomposable
from .paths import Box, Shape, is_unimodal
from .trees import DeltaNuTree, Region, _maximal_cliques, enumerate_trees, left_rotations

Cells = frozenset


class BoxError(ValueError):
    """Box outside the shape, or a box set that is not pairwise compatible."""


def cells_of(shape) -> frozenset[Box]:
    if isinstance(shape, Shape):
        return frozenset(shape.boxes())
    return frozenset(Box(*b) for b in shape)


def transpose_cells(shape) -> frozenset[Box]:
    """The transposed shape: ``u_i`` boxes in row ``i``."""
    return frozenset(Box(c, r) for r, c in cells_of(shape))


def _incompatible_cells(a, b, cells) -> bool:
    (r1, c1), (r2, c2) = a, b
    if a == b:
        return False
    if r1 == r2 or c1 == c2:
        return True
    if (r1 - r2) * (c1 - c2) > 0:
        # one is NW of the other (rows grow downward): always compatible
        return False
    rlo, rhi = min(r1, r2), max(r1, r2)
    clo, chi = min(c1, c2), max(c1, c2)
    return all((r, c) in cells for r in range(rlo, rhi + 1) for c in range(clo, chi + 1))


def boxes_incompatible(a, b, shape) -> bool:
    """Same row or column, or SW/NE with bounding rectangle inside the shape."""
    a, b = Box(*a), Box(*b)
    if isinstance(shape, Shape):
        for x in (a, b):
            if x not in shape:
                raise BoxError(f"box {tuple(x)} is not in the shape {shape.columns}")
        if a == b:
            return False
        if a.row == b.row or a.col == b.col:
            return True
        if (a.row - b.row) * (a.col - b.col) > 0:
            return False
        # top-aligned unimodal columns: the rectangle fits iff both end columns reach the lower row
        low = max(a.row, b.row)
        return min(shape.columns[a.col - 1], shape.columns[b.col - 1]) >= low
    cells = cells_of(shape)
    for x in (a, b):
        if x not in cells:
            raise BoxError(f"box {tuple(x)} is not in the cell set")
    return _incompatible_cells(a, b, cells)


def boxes_compatible(a, b, shape) -> bool:
    return not boxes_incompatible(a, b, shape)


def is_box_face(boxes: Iterable, shape) -> bool:
    bs = [Box(*b) for b in boxes]
    return all(boxes_compatible(bs[i], bs[j], shape) for i in range(len(bs)) for j in range(i + 1, len(bs)))


def compatibility_masks(shape) -> tuple[list[Box], list[int]]:
    """Boxes in canonical order and, for each, the bitmask of boxes compatible with it."""
    boxes = sorted(cells_of(shape))
    masks = []
    for i, a in enumerate(boxes):
        m = 0
        for j, b in enumerate(boxes):
            if i != j and boxes_compatible(a, b, shape):
                m |= 1 << j
        masks.append(m)
    return boxes, masks


def box_complex(shape) -> SimplicialComplex:
    """Flag complex of the compatibility graph; vertices are all boxes."""
    boxes, masks = compatibility_masks(shape)
    if not boxes:
        return SimplicialComplex([[]], [])
    facets = [[boxes[i] for i in range(len(boxes)) if clique >> i & 1]
              for clique in _maximal_cliques(masks, 10**7)]
    return SimplicialComplex(facets, boxes)


def box_faces(shape) -> list[frozenset[Box]]:
    """Every pairwise compatible set of boxes, including the empty set."""
    boxes, masks = compatibility_masks(shape)
    out = []

    def rec(start: int, chosen: list[Box], allowed: int):
        out.append(frozenset(chosen))
        for i in range(start, len(boxes)):
            if allowed >> i & 1:
                chosen.append(boxes[i])
                rec(i + 1, chosen, allowed & masks[i])
                chosen.pop()

    rec(0, [], (1 << len(boxes)) - 1)
    return out


def normalize_columns(columns: Sequence[int]) -> tuple[int, ...]:
    return tuple(c for c in columns if c > 0)


def all_shapes(max_boxes: int, min_boxes: int = 1) -> Iterator[Shape]:
    """Every top-aligned unimodal shape with ``min_boxes..max_boxes`` boxes."""

    def rec(cols: list[int], total: int, falling: bool):
        if cols and total >= min_boxes:
            yield Shape(tuple(cols))
        last = cols[-1] if cols else 0
        for h in range(1, max_boxes - total + 1):
            if falling and h > last:
                break
            yield from rec(cols + [h], total + h, falling or (cols and h < last))

    yield from rec([], 0, False)


def shape_isomorphism(s1, s2) -> dict | None:
    return find_isomorphism(box_complex(s1), box_complex(s2))


def render_cells(cells, marked=(), mark: str = "■", blank: str = "□") -> str:
    cells = cells_of(cells)
    marked = {tuple(b) for b in marked}
    if not cells:
        return ""
    nr = max(r for r, _ in cells)
    nc = max(c for _, c in cells)
    lines = []
    for r in range(1, nr + 1):
        row = "".join(mark if (r, c) in marked else blank if (r, c) in cells else " "
                      for c in range(1, nc + 1))
        lines.append(row.rstrip())
    return "\n".join(lines)


def face_json(shape: Shape, face) -> dict:
    return {"columns": list(shape.columns), "marked": sorted([list(b) for b in face])}


# ------------------------------------------------------------------ link split

@dataclass(frozen=True)
class LinkSplit:
    pivot: Box
    u_plus: tuple[int, ...]
    u_minus: tuple[int, ...]
    plus_map: dict            # Box of F_{u+} -> Box of F_u
    minus_map: dict           # Box of F_{u-} -> Box of F_u

    def image(self) -> frozenset[Box]:
        return frozenset(self.plus_map.values()) | frozenset(self.minus_map.values())


def link_split(shape: Shape, b) -> LinkSplit:
    """Describe the link of ``b`` as the join of two smaller box complexes.

    ``u-`` holds the compatible boxes south-east of ``b``.  ``u+`` glues the
    compatible boxes north-west and north-east of ``b`` side by side; compatible
    boxes south-west of ``b`` (present when ``b``'s column is shorter than a
    column to its left) are glued below the north-west part.
    """
    b = Box(*b)
    if b not in shape:
        raise BoxError(f"box {tuple(b)} is not in the shape {shape.columns}")
    u = shape.columns
    r, k = b
    uk = u[k - 1]
    istar = max(j for j in range(k, len(u) + 1) if u[j - 1] >= r)
    shift = uk - r + 1
    plus_cols: list[int] = []
    plus_map: dict[Box, Box] = {}
    for c in range(1, k):
        top = min(u[c - 1], r - 1)
        low = max(0, u[c - 1] - uk)
        h = top + low
        if h == 0:
            continue
        col = len(plus_cols) + 1
        for rho in range(1, top + 1):
            plus_map[Box(rho, col)] = Box(rho, c)
        for rho in range(top + 1, h + 1):
            plus_map[Box(rho, col)] = Box(rho + shift, c)
        plus_cols.append(h)
    for c in range(istar + 1, len(u) + 1):
        col = len(plus_cols) + 1
        for rho in range(1, u[c - 1] + 1):
            plus_map[Box(rho, col)] = Box(rho, c)
        plus_cols.append(u[c - 1])
    minus_cols: list[int] = []
    minus_map: dict[Box, Box] = {}
    for c in range(k + 1, istar + 1):
        h = u[c - 1] - r
        if h <= 0:
            continue
        col = len(minus_cols) + 1
        for rho in range(1, h + 1):
            minus_map[Box(rho, col)] = Box(rho + r, c)
        minus_cols.append(h)
    return LinkSplit(b, tuple(plus_cols), tuple(minus_cols), plus_map, minus_map)


def closed_link_formula(u: Sequence[int], r: int, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The closed formula for ``(u+, u-)`` with the column index of the pivot.

    ``u+_i = min(u_i, r-1)`` for ``i < k`` and the columns right of ``i*``
    afterwards.  Ignores the south-west region, so it only agrees with
    :func:`link_split` when that region is empty.
    """
    u = list(u)
    istar = max((j for j in range(k, len(u) + 1) if u[j - 1] >= r), default=0)
    minus = tuple(x - r for x in u[k:istar])
    plus = [min(u[i - 1], r - 1) for i in range(1, k)] + u[istar:]
    return normalize_columns(plus), normalize_columns(minus)


def verify_link_split(shape: Shape, split: LinkSplit) -> bool:
    """The link of the pivot equals the join of the two pieces, mapped back into ``F_u``."""
    cx = box_complex(shape)
    link = cx.link([split.pivot])
    plus = box_complex(Shape(split.u_plus)) if split.u_plus else SimplicialComplex([[]], [])
    minus = box_complex(Shape(split.u_minus)) if split.u_minus else SimplicialComplex([[]], [])
    mapped_plus = [frozenset(split.plus_map[x] for x in f) for f in plus.facets]
    mapped_minus = [frozenset(split.minus_map[x] for x in f) for f in minus.facets]
    joined = SimplicialComplex([a | m for a in mapped_plus for m in mapped_minus])
    return set(joined.facets) == set(link.facets)


# ------------------------------------------------------------------ decomposing vertices

def bottom_right(cells) -> Box | None:
    cells = cells_of(cells)
    if not cells:
        return None
    low = max(r for r, _ in cells)
    return Box(low, max(c for r, c in cells if r == low))


def decomposing_vertices(shape) -> list[Box]:
    """Boxes sharing a row or a column with ``q_1``, the rightmost box of the bottom row."""
    cells = cells_of(shape)
    q1 = bottom_right(cells)
    if q1 is None:
        return []
    return sorted(b for b in cells if b != q1 and (b.row == q1.row or b.col == q1.col))


def q_sequence(shape) -> list[Box]:
    """``q_1`` is the rightmost bottom box; moving up, each row contributes its
    rightmost box compatible with all boxes chosen below it (if any)."""
    cells = cells_of(shape)
    if not cells:
        return []
    rows = sorted({r for r, _ in cells}, reverse=True)
    chosen: list[Box] = []
    for r in rows:
        row = sorted((b for b in cells if b.row == r), key=lambda b: -b.col)
        for b in row:
            if all(not _incompatible_cells(b, q, cells) for q in chosen):
                chosen.append(b)
                break
    return chosen


def deletion_shape(shape: Shape) -> tuple[int, ...]:
    """Column heights after removing the row and the column of ``q_1``."""
    q1 = bottom_right(shape)
    cols = [h - (1 if h >= q1.row else 0) for i, h in enumerate(shape.columns, start=1)
            if i != q1.col]
    return normalize_columns(cols)


def vd_hint(cells) -> list[Box]:
    """Vertex order following the decomposing-vertex construction.

    Repeatedly take the rightmost box of the lowest row, list the other boxes of
    its row and column, then drop the row and the column and continue.
    """
    cells = set(cells_of(cells))
    order: list[Box] = []
    while cells:
        q = bottom_right(cells)
        strip = sorted(b for b in cells if b != q and (b.row == q.row or b.col == q.col))
        order.extend(strip)
        cells -= set(strip)
        cells.discard(q)
    return order


def box_vd(shape):
    """Vertex decomposition of the box complex using the decomposing-vertex hints."""
    cx = box_complex(shape)

    def hint(facets):
        return vd_hint(set().union(*facets))

    return is_vertex_decomposable(cx, hint)


# ------------------------------------------------------------------ tau and theta

def box_of_label(region: Region, witness) -> Box:
    return region.shape.lattice_to_box(*witness.label_box)


def descent_boxes(tree: DeltaNuTree) -> frozenset[Box]:
    """Boxes labelling the down-covers of ``tree`` (its canonical joinands)."""
    return frozenset(box_of_label(tree.region, w) for _, w in left_rotations(tree))


def tau(face: Iterable[DeltaNuTree], region: Region | None = None) -> frozenset[Box]:
    """Boxes of a set of join-irreducible trees (each read off its unique descent)."""
    out = set()
    for j in face:
        reg = region or j.region
        labels = descent_boxes(j)
        if len(labels) != 1:
            raise BoxError(f"{j} is not join-irreducible")
        out |= labels
    boxes = frozenset(out)
    shape = (region or next(iter(face)).region).shape if out else None
    if out and not is_box_face(boxes, shape):
        raise BoxError(f"incompatible boxes {sorted(boxes)} from a canonical join face")
    return boxes


def _killable(region: Region, p) -> bool:
    """Some point strictly south-west of ``p`` would make ``p`` incompatible."""
    x, y = p
    return any(lo <= x - 1 and hi >= x for lo, hi in region.bounds[:y])


def _check_face(shape: Shape, boxes: Iterable) -> list[Box]:
    boxes = [Box(*b) for b in boxes]
    for b in boxes:
        if b not in shape:
            raise BoxError(f"box {tuple(b)} is not in the shape {shape.columns}")
    if not is_box_face(boxes, shape):
        raise BoxError(f"boxes {sorted(boxes)} are not pairwise compatible")
    return boxes


def theta_placement(shape: Shape, boxes: Iterable, region: Region | None = None) -> DeltaNuTree:
    """The column-by-column placement rule, read literally.

    Columns of lattice points are filled right to left and bottom to top.  A
    column with no shaded box to its left gets nodes only while they cannot be
    killed by a point further left (a single node in the Tamari-like case); a
    column bounding shaded boxes keeps going until a node sits on or above the
    top line of its highest shaded box; the left-most column is filled to the
    top.  The result is a valid tree with descents ``boxes`` in the Tamari-like
    case but not for every (delta, nu); :func:`theta` checks and falls back.
    """
    boxes = _check_face(shape, boxes)
    if region is None:
        region = Region(shape.nu, shape.delta)
    stop: dict[int, int] = {}
    for b in boxes:
        x, y = shape.box_to_lattice(b)
        stop[x + 1] = max(stop.get(x + 1, 0), y + 1)
    xs = sorted(region.col_mask)
    mask = 0
    allowed = (1 << len(region)) - 1
    for x in reversed(xs):
        column = sorted(region.points_of(region.col_mask[x]), key=lambda p: p[1])
        last = None
        for p in column:
            i = region.index[p]
            if not allowed >> i & 1:
                continue
            if (x != xs[0] and last is not None and (x not in stop or last >= stop[x])
                    and _killable(region, p)):
                break
            mask |= 1 << i
            allowed &= region.compat[i]
            last = p[1]
    return DeltaNuTree(region, mask)


_DESCENT_INDEX: dict[tuple, dict[frozenset, DeltaNuTree]] = {}


def descent_index(region: Region) -> dict[frozenset, DeltaNuTree]:
    """``descent boxes -> tree`` over all trees of the region (cached)."""
    key = (region.nu.east_runs, region.delta)
    if key not in _DESCENT_INDEX:
        table = {}
        for t in enumerate_trees(region, None):
            d = descent_boxes(t)
            if d in table:
                raise BoxError(f"two trees share the descent boxes {sorted(d)}")
            table[d] = t
        if len(_DESCENT_INDEX) > 64:
            _DESCENT_INDEX.clear()
        _DESCENT_INDEX[key] = table
    return _DESCENT_INDEX[key]


def theta(shape: Shape, boxes: Iterable, region: Region | None = None) -> DeltaNuTree:
    """The tree whose down-cover labels are exactly the given compatible boxes.

    Tries the placement rule first; when its descents differ from ``boxes`` the
    tree is looked up in the inverse of the descent map.
    """
    boxes = frozenset(_check_face(shape, boxes))
    if region is None:
        region = Region(shape.nu, shape.delta)
    t = theta_placement(shape, boxes, region)
    if t.is_valid() and descent_boxes(t) == boxes:
        return t
    try:
        return descent_index(region)[boxes]
    except KeyError:
        raise BoxError(f"no tree has descent boxes {sorted(boxes)}") from None
