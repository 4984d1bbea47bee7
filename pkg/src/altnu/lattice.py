"""Explicit finite lattices.

Elements are re-indexed along a linear extension, so that the up-set of ``x``
(as an int bitmask) has the join of ``x`` and ``y`` as the lowest set bit of
``up[x] & up[y]``, and symmetrically for meets and down-sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Any, Hashable, Iterable, Sequence

from .complex import SimplicialComplex

DEFAULT_ELEMENT_CAP = 20_000
FULL_VALIDATION_LIMIT = 3_000


class LatticeError(ValueError):
    """The poset is not a lattice, or an argument is not a cover."""


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class JoinIrreducible:
    element: int
    lower_cover: int


@dataclass(frozen=True)
class CanonicalJoinRep:
    element: int
    joinands: frozenset[int]


class FiniteLattice:
    """A finite lattice given by its cover relations.

    ``elements`` may be arbitrary hashable payloads (trees, tuples, ...).  They
    are stored in a linear extension of the order; ``index`` maps payloads back
    to their position.
    """

    def __init__(self, elements: Sequence[Hashable], covers: Iterable[tuple[int, int]],
                 cap: int = DEFAULT_ELEMENT_CAP, validate: bool | None = None):
        if len(elements) > cap:
            raise LatticeError(f"{len(elements)} elements exceed the cap of {cap}")
        if not elements:
            raise LatticeError("a lattice needs at least one element")
        covers = {(int(a), int(b)) for a, b in covers}
        for a, b in covers:
            if a == b:
                raise LatticeError(f"cover ({a},{b}) is reflexive")
        graph: dict[int, set[int]] = {i: set() for i in range(len(elements))}
        for a, b in covers:
            graph[b].add(a)
        try:
            order = list(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise LatticeError("cover relations contain a cycle") from exc
        pos = {old: new for new, old in enumerate(order)}
        self.elements: list[Any] = [elements[i] for i in order]
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(order)
        up_c: list[list[int]] = [[] for _ in range(n)]
        down_c: list[list[int]] = [[] for _ in range(n)]
        for a, b in covers:
            up_c[pos[a]].append(pos[b])
            down_c[pos[b]].append(pos[a])
        self.upper_covers = [sorted(c) for c in up_c]
        self.lower_covers = [sorted(c) for c in down_c]
        up = [1 << i for i in range(n)]
        for i in reversed(range(n)):
            for j in self.upper_covers[i]:
                up[i] |= up[j]
        down = [1 << i for i in range(n)]
        for i in range(n):
            for j in self.lower_covers[i]:
                down[i] |= down[j]
        self.up, self.down = up, down
        # drop redundant (transitive) pairs so that covers are true covers
        for i in range(n):
            lc = self.lower_covers[i]
            if len(lc) > 1:
                keep = []
                for a in lc:
                    if not any(b != a and down[b] >> a & 1 for b in lc):
                        keep.append(a)
                self.lower_covers[i] = keep
        self.upper_covers = [[] for _ in range(n)]
        for i in range(n):
            for a in self.lower_covers[i]:
                self.upper_covers[a].append(i)
        bottoms = [i for i in range(n) if not self.lower_covers[i]]
        tops = [i for i in range(n) if not self.upper_covers[i]]
        if len(bottoms) != 1 or len(tops) != 1:
            raise LatticeError(f"not a lattice: {len(bottoms)} minimal and {len(tops)} maximal elements")
        self.bottom, self.top = bottoms[0], tops[0]
        if validate is None:
            validate = n <= FULL_VALIDATION_LIMIT
        if validate:
            self.validate()

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def covers(self) -> list[tuple[int, int]]:
        return [(a, b) for b in range(len(self)) for a in self.lower_covers[b]]

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def join(self, x: int, y: int) -> int:
        common = self.up[x] & self.up[y]
        z = (common & -common).bit_length() - 1
        if z < 0 or self.up[z] != common:
            raise LatticeError(f"elements {x} and {y} have no unique join")
        return z

    def meet(self, x: int, y: int) -> int:
        common = self.down[x] & self.down[y]
        z = common.bit_length() - 1
        if z < 0 or self.down[z] != common:
            raise LatticeError(f"elements {x} and {y} have no unique meet")
        return z

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        for x in xs:
            acc = self.join(acc, x)
        return acc

    def validate(self) -> None:
        """Every pair has a unique join and meet."""
        n = len(self)
        for x in range(n):
            for y in range(x + 1, n):
                self.join(x, y)
                self.meet(x, y)

    def join_irreducibles(self) -> list[JoinIrreducible]:
        return [JoinIrreducible(i, lc[0]) for i, lc in enumerate(self.lower_covers) if len(lc) == 1]

    def is_cover(self, x: int, y: int) -> bool:
        return x in self.lower_covers[y]

    # ------------------------------------------------------------ semidistributivity
    def is_join_semidistributive(self) -> bool:
        """``x v y = x v z`` implies ``x v y = x v (y ^ z)`` for all triples.

        For fixed ``x`` the elements ``y`` sharing the value ``x v y`` are grouped;
        the implication holds for all pairs in a group exactly when it holds for
        the meet of the whole group, which is what is checked.
        """
        n = len(self)
        for x in range(n):
            groups: dict[int, int] = {}
            for y in range(n):
                a = self.join(x, y)
                groups[a] = self.meet(groups[a], y) if a in groups else y
            for a, m in groups.items():
                if self.join(x, m) != a:
                    return False
        return True

    def lambda_jsd(self, x: int, y: int) -> int:
        """``min {c : x v c = y}`` for a cover ``x < y``."""
        if not self.is_cover(x, y):
            raise LatticeError(f"({x},{y}) is not a cover")
        cands = 0
        for c in _bits(self.down[y] & ~self.down[x]):
            if self.join(x, c) == y:
                cands |= 1 << c
        mins = [c for c in _bits(cands) if self.down[c] & cands == 1 << c]
        if len(mins) != 1 or self.up[mins[0]] & cands != cands:
            raise LatticeError(f"cover ({x},{y}): {{c : x v c = y}} has no unique minimum")
        return mins[0]

    def canonical_join_rep(self, a: int) -> CanonicalJoinRep:
        joinands = frozenset(self.lambda_jsd(b, a) for b in self.lower_covers[a])
        if self.join_all(joinands) != a:
            raise LatticeError(f"canonical joinands of {a} do not join to it")
        return CanonicalJoinRep(a, joinands)

    def canonical_join_complex(self) -> tuple[SimplicialComplex, dict[frozenset[int], int]]:
        """The complex on join-irreducibles plus the map ``face -> element``."""
        faces: dict[frozenset[int], int] = {}
        for a in range(len(self)):
            faces[self.canonical_join_rep(a).joinands] = a
        if len(faces) != len(self):
            raise LatticeError("two elements share a canonical join representation")
        ground = [j.element for j in self.join_irreducibles()]
        return SimplicialComplex.from_faces(faces, ground_set=ground), faces

    # ------------------------------------------------------------ output
    def to_json(self, key=repr, labels: dict[tuple[int, int], int] | None = None) -> dict:
        data = {
            "elements": [key(e) for e in self.elements],
            "covers": [list(c) for c in self.covers],
        }
        if labels is not None:
            data["labels"] = [[a, b, labels[(a, b)]] for a, b in self.covers]
        return data

    def to_dot(self, name: str = "L", labels: dict[tuple[int, int], Any] | None = None,
               key=str) -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, e in enumerate(self.elements):
            text = key(e).replace('"', "'")
            lines.append(f'  {i} [label="{text}"];')
        for a, b in self.covers:
            attr = f' [label="{labels[(a, b)]}"]' if labels and (a, b) in labels else ""
            lines.append(f"  {a} -> {b}{attr};")
        lines.append("}")
        return "\n".join(lines)


def build_lattice(elements, covers, **kwargs) -> FiniteLattice:
    return FiniteLattice(elements, covers, **kwargs)
