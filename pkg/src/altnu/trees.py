"""(delta, nu)-trees: maximal sets of pairwise compatible lattice points.

Trees are stored as integer bitmasks over the points of a :class:`Region`, so
compatibility tests and rotations reduce to a handful of bit operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .paths import (
    DEFAULT_PATH_LIMIT,
    Box,
    NEPath,
    Shape,
    SizeLimitError,
    as_path,
    row_bounds,
    shape_from,
    validate_delta,
)

Point = tuple[int, int]


class RegionError(ValueError):
    """A point outside the region, or a tree that is not a valid tree."""


class Region:
    """Lattice points between the check path and the hat path of ``(nu, delta)``."""

    def __init__(self, nu, delta):
        self.nu: NEPath = as_path(nu)
        self.delta: tuple[int, ...] = validate_delta(self.nu, delta)
        self.bounds = row_bounds(self.nu, self.delta)
        self.points: list[Point] = [
            (x, y) for y, (lo, hi) in enumerate(self.bounds) for x in range(lo, hi + 1)
        ]
        self.index = {p: i for i, p in enumerate(self.points)}
        self._build_masks()

    def _build_masks(self):
        pts = self.points
        right = [hi for lo, hi in self.bounds]
        incompat = [0] * len(pts)
        for i, (x1, y1) in enumerate(pts):
            for j in range(i + 1, len(pts)):
                x2, y2 = pts[j]
                # j comes later so y2 >= y1; strictly NE means x2 > x1 and y2 > y1
                if y2 > y1 and x2 > x1 and x2 <= right[y1]:
                    incompat[i] |= 1 << j
                    incompat[j] |= 1 << i
        self.incompat = incompat
        full = (1 << len(pts)) - 1
        self.compat = [full & ~m for m in incompat]
        cols: dict[int, int] = {}
        rows: dict[int, int] = {}
        for i, (x, y) in enumerate(pts):
            cols[x] = cols.get(x, 0) | (1 << i)
            rows[y] = rows.get(y, 0) | (1 << i)
        self.col_mask = cols
        self.row_mask = rows

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.index

    @property
    def key(self) -> tuple:
        return self.nu.east_runs, self.delta

    @cached_property
    def shape(self) -> Shape:
        return shape_from(self.nu, self.delta)

    @property
    def root(self) -> Point:
        return (self.bounds[-1][0], self.nu.n)

    def pid(self, p) -> int:
        try:
            return self.index[tuple(p)]
        except KeyError:
            raise RegionError(f"point {tuple(p)} is outside the region") from None

    def mask_of(self, pts) -> int:
        m = 0
        for p in pts:
            m |= 1 << self.pid(p)
        return m

    def points_of(self, mask: int) -> list[Point]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.points[low.bit_length() - 1])
            mask ^= low
        return out

    def is_compatible_set(self, mask: int) -> bool:
        m = mask
        while m:
            low = m & -m
            if self.incompat[low.bit_length() - 1] & mask:
                return False
            m ^= low
        return True

    def is_maximal(self, mask: int) -> bool:
        """No point outside ``mask`` is compatible with all of it."""
        common = (1 << len(self.points)) - 1
        m = mask
        while m:
            low = m & -m
            common &= self.compat[low.bit_length() - 1]
            m ^= low
        return common & ~mask == 0

    def tree(self, mask_or_points) -> "DeltaNuTree":
        mask = mask_or_points if isinstance(mask_or_points, int) else self.mask_of(mask_or_points)
        return DeltaNuTree(self, mask)


def nu_check_incompatible(p: Point, q: Point, region: Region) -> bool:
    """``p`` strictly SW/NE of ``q`` with their bounding rectangle inside the check diagram."""
    for a in (p, q):
        if tuple(a) not in region.index:
            raise RegionError(f"point {tuple(a)} is outside the region")
    (x1, y1), (x2, y2) = sorted([tuple(p), tuple(q)], key=lambda t: (t[1], t[0]))
    if not (x2 > x1 and y2 > y1) and not (x2 < x1 and y2 < y1):
        return False
    lo_y = min(y1, y2)
    hi_x = max(x1, x2)
    return hi_x <= region.bounds[lo_y][1]


class RotationWitness(NamedTuple):
    """Corners of a rotation: ``q`` (in the lower tree) is swapped for ``q_prime``."""

    p: Point
    q: Point
    q_prime: Point
    r: Point

    @property
    def label_box(self) -> Point:
        """Lower-left corner of the bottom-right unit box of the rotation rectangle."""
        return (self.r[0] - 1, self.r[1])


@dataclass(frozen=True, eq=False)
class DeltaNuTree:
    region: Region
    mask: int

    def __eq__(self, other):
        return (isinstance(other, DeltaNuTree) and self.mask == other.mask
                and self.region.key == other.region.key)

    def __hash__(self):
        return hash((self.mask, self.region.key))

    @property
    def nodes(self) -> list[Point]:
        return sorted(self.region.points_of(self.mask))

    @property
    def root(self) -> Point:
        return self.region.root

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, p) -> bool:
        i = self.region.index.get(tuple(p))
        return i is not None and bool(self.mask >> i & 1)

    def is_valid(self) -> bool:
        reg = self.region
        return (self.mask >> reg.index[reg.root] & 1 == 1
                and reg.is_compatible_set(self.mask) and reg.is_maximal(self.mask))

    def parent(self, p: Point) -> Point | None:
        """Next node to the north, else to the west."""
        x, y = p
        above = [q for q in self.region.points_of(self.mask & self.region.col_mask[x]) if q[1] > y]
        if above:
            return min(above, key=lambda q: q[1])
        left = [q for q in self.region.points_of(self.mask & self.region.row_mask[y]) if q[0] < x]
        if left:
            return max(left, key=lambda q: q[0])
        return None

    def children(self) -> dict[Point, tuple[Point | None, Point | None]]:
        """``node -> (child below, child to the right)`` of the induced binary tree."""
        kids: dict[Point, list] = {p: [None, None] for p in self.nodes}
        for p in self.nodes:
            par = self.parent(p)
            if par is None:
                continue
            slot = 0 if par[0] == p[0] else 1
            kids[par][slot] = p
        return {p: (a, b) for p, (a, b) in kids.items()}

    def to_json(self) -> dict:
        return {
            "nodes": [list(p) for p in self.nodes],
            "nu": list(self.region.nu.east_runs),
            "delta": list(self.region.delta),
        }

    def to_dot(self, name: str = "T") -> str:
        lines = [f"digraph {name} {{"]
        for p, (below, right) in sorted(self.children().items()):
            lines.append(f'  "{p[0]},{p[1]}";')
            for child, tag in ((below, "below"), (right, "right")):
                if child is not None:
                    lines.append(f'  "{p[0]},{p[1]}" -> "{child[0]},{child[1]}" [label="{tag}"];')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"DeltaNuTree({self.nodes})"


def _nearest(points, key) -> Point | None:
    return min(points, key=key) if points else None


def _neighbours(tree: DeltaNuTree, q: Point):
    """Nearest nodes of ``tree`` north, south, east and west of ``q``."""
    reg = tree.region
    x, y = q
    col = reg.points_of(tree.mask & reg.col_mask.get(x, 0))
    row = reg.points_of(tree.mask & reg.row_mask.get(y, 0))
    north = _nearest([p for p in col if p[1] > y], key=lambda p: p[1])
    south = _nearest([p for p in col if p[1] < y], key=lambda p: -p[1])
    east = _nearest([p for p in row if p[0] > x], key=lambda p: p[0])
    west = _nearest([p for p in row if p[0] < x], key=lambda p: -p[0])
    return north, south, east, west


def _rect_mask(reg: Region, x1: int, y1: int, x2: int, y2: int) -> int:
    m = 0
    for i, (x, y) in enumerate(reg.points):
        if x1 <= x <= x2 and y1 <= y <= y2:
            m |= 1 << i
    return m


def right_rotations(tree: DeltaNuTree) -> list[tuple[DeltaNuTree, RotationWitness]]:
    """All upper covers of ``tree``.

    A node ``q`` with a nearest node ``p`` above it and ``r`` to its right is an
    ascent when the rectangle spanned by ``p`` and ``r`` holds no other node; the
    rotation replaces ``q`` by the opposite corner ``q'``.
    """
    reg = tree.region
    out = []
    for q in tree.nodes:
        north, _, east, _ = _neighbours(tree, q)
        if north is None or east is None:
            continue
        x1, y1 = q
        x2, y2 = east[0], north[1]
        rect = _rect_mask(reg, x1, y1, x2, y2)
        inside = tree.mask & rect
        expected = reg.mask_of([q, north, east])
        if inside != expected:
            continue
        q_prime = (x2, y2)
        if q_prime not in reg.index:
            continue
        new_mask = (tree.mask & ~(1 << reg.index[q])) | (1 << reg.index[q_prime])
        out.append((DeltaNuTree(reg, new_mask), RotationWitness(north, q, q_prime, east)))
    return out


def left_rotations(tree: DeltaNuTree) -> list[tuple[DeltaNuTree, RotationWitness]]:
    """All lower covers; witnesses are reported from the lower tree's point of view."""
    reg = tree.region
    out = []
    for qp in tree.nodes:
        _, south, _, west = _neighbours(tree, qp)
        if south is None or west is None:
            continue
        x2, y2 = qp
        x1, y1 = west[0], south[1]
        rect = _rect_mask(reg, x1, y1, x2, y2)
        if tree.mask & rect != reg.mask_of([qp, south, west]):
            continue
        q = (x1, y1)
        if q not in reg.index:
            continue
        new_mask = (tree.mask & ~(1 << reg.index[qp])) | (1 << reg.index[q])
        out.append((DeltaNuTree(reg, new_mask), RotationWitness(west, q, qp, south)))
    return out


def descents(tree: DeltaNuTree) -> list[Point]:
    return [w.q_prime for _, w in left_rotations(tree)]


def _maximal_cliques(adj: list[int], limit: int) -> Iterator[int]:
    """Bron-Kerbosch with pivoting over bitmask adjacency."""
    stack = [(0, (1 << len(adj)) - 1, 0)]
    count = 0
    while stack:
        r, p, x = stack.pop()
        if p == 0:
            if x == 0:
                count += 1
                if count > limit:
                    raise SizeLimitError(f"more than {limit} maximal cliques")
                yield r
            continue
        px = p | x
        best, pivot_nb = -1, 0
        m = px
        while m:
            low = m & -m
            nb = adj[low.bit_length() - 1]
            c = bin(p & nb).count("1")
            if c > best:
                best, pivot_nb = c, nb
            m ^= low
        cand = p & ~pivot_nb
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            stack.append((r | low, p & adj[v], x & adj[v]))
            p &= ~low
            x |= low
            cand ^= low


def enumerate_trees(nu, delta, limit: int = DEFAULT_PATH_LIMIT) -> list[DeltaNuTree]:
    """Every (delta, nu)-tree, sorted by node list."""
    reg = nu if isinstance(nu, Region) else Region(nu, delta)
    adj = [reg.compat[i] & ~(1 << i) for i in range(len(reg))]
    trees = [DeltaNuTree(reg, m) for m in _maximal_cliques(adj, limit)]
    trees.sort(key=lambda t: t.nodes)
    return trees


def trees_by_rotation(region: Region, start: DeltaNuTree) -> list[DeltaNuTree]:
    """Closure of ``start`` under left and right rotations."""
    seen = {start.mask}
    todo = [start]
    while todo:
        t = todo.pop()
        for s, _ in right_rotations(t) + left_rotations(t):
            if s.mask not in seen:
                seen.add(s.mask)
                todo.append(s)
    return sorted((DeltaNuTree(region, m) for m in seen), key=lambda t: t.nodes)


def bottom_tree(region: Region) -> DeltaNuTree:
    """The unique tree without descents (the box-placement of the empty face)."""
    from .boxcomplex import theta

    return theta(region.shape, (), region=region)


def box_corner(region: Region, box) -> Point:
    """Lower-left lattice corner of a shape box."""
    return region.shape.box_to_lattice(box)


def box_of_corner(region: Region, corner: Point) -> Box:
    return region.shape.lattice_to_box(*corner)


def join_irreducible_tree_for_box(box, shape: Shape, region: Region | None = None) -> DeltaNuTree:
    """The join-irreducible tree whose single descent sits on ``box``."""
    from .boxcomplex import theta

    if box not in shape:
        raise RegionError(f"box {tuple(box)} is not in the shape")
    return theta(shape, [Box(*box)], region=region)


def perspective_box(lower: DeltaNuTree, upper: DeltaNuTree) -> Box:
    """Box of the bottom-right unit square of the rotation rectangle of a cover."""
    for t, w in right_rotations(lower):
        if t == upper:
            return box_of_corner(lower.region, w.label_box)
    raise ValueError("trees do not form a cover")


def perspective_label(lower: DeltaNuTree, upper: DeltaNuTree) -> DeltaNuTree:
    box = perspective_box(lower, upper)
    return join_irreducible_tree_for_box(box, lower.region.shape, lower.region)


# ---------------------------------------------------------------- bracket vectors

class BracketVector(tuple):
    """Node heights read in in-order (below-subtree, node, right-subtree)."""


def is_nu_tree_region(region: Region) -> bool:
    return region.delta == tuple(region.nu.east_runs[1:])


def bracket_vector(tree: DeltaNuTree) -> BracketVector:
    if not is_nu_tree_region(tree.region):
        raise ValueError("bracket vectors are defined for nu-trees only (delta = nu)")
    kids = tree.children()
    out: list[int] = []
    stack: list[tuple[Point, bool]] = [(tree.root, False)]
    while stack:
        p, expanded = stack.pop()
        if expanded:
            out.append(p[1])
            continue
        below, right = kids[p]
        if right is not None:
            stack.append((right, False))
        stack.append((p, True))
        if below is not None:
            stack.append((below, False))
    return BracketVector(out)


def meet_by_brackets(b, b2) -> BracketVector:
    if len(b) != len(b2):
        raise ValueError(f"bracket vectors have different lengths {len(b)} != {len(b2)}")
    return BracketVector(min(u, v) for u, v in zip(b, b2))
