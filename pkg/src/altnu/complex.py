"""Abstract simplicial complexes stored by their facets."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

DEFAULT_FACE_CAP = 2_000_000

Face = frozenset


class ComplexError(ValueError):
    """Not a face, overlapping ground sets, or a face enumeration over the cap."""


def _maximal(sets: Iterable[frozenset]) -> list[frozenset]:
    """Inclusion-maximal members, sorted canonically."""
    uniq = sorted(set(sets), key=lambda s: (-len(s), sorted(s, key=repr)))
    out: list[frozenset] = []
    for s in uniq:
        if not any(s <= t for t in out):
            out.append(s)
    return sorted(out, key=_face_key)


def _face_key(f):
    return (len(f), sorted(f, key=repr))


class SimplicialComplex:
    """Facets over a ground set; every subset of a facet is a face.

    The complex with the single facet ``{}`` is the empty complex ``{emptyset}``.
    """

    __slots__ = ("facets", "ground_set", "_faces")

    def __init__(self, facets: Iterable[Iterable[Hashable]], ground_set: Sequence[Hashable] | None = None):
        fs = _maximal(frozenset(f) for f in facets) or [frozenset()]
        self.facets: tuple[frozenset, ...] = tuple(fs)
        verts = set().union(*self.facets)
        if ground_set is None:
            ground_set = sorted(verts, key=repr)
        else:
            missing = verts - set(ground_set)
            if missing:
                raise ComplexError(f"facets use vertices outside the ground set: {sorted(missing, key=repr)}")
        self.ground_set = tuple(ground_set)
        self._faces: list[frozenset] | None = None

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable[Hashable]], ground_set=None) -> "SimplicialComplex":
        return cls(faces, ground_set)

    @classmethod
    def simplex(cls, vertices: Iterable[Hashable]) -> "SimplicialComplex":
        vs = list(vertices)
        return cls([vs], vs)

    # ---------------------------------------------------------------- basics
    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and set(self.facets) == set(other.facets)

    def __hash__(self) -> int:
        return hash(frozenset(self.facets))

    def __repr__(self) -> str:
        fs = [sorted(f, key=repr) for f in self.facets]
        return f"SimplicialComplex({fs})"

    @property
    def vertices(self) -> list:
        return sorted(set().union(*self.facets), key=repr)

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1

    def is_simplex(self) -> bool:
        return len(self.facets) == 1

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) == 1

    def __contains__(self, face) -> bool:
        face = frozenset(face)
        return any(face <= f for f in self.facets)

    def faces(self, cap: int = DEFAULT_FACE_CAP) -> list[frozenset]:
        """All faces including the empty face, sorted by size then vertices."""
        if self._faces is None:
            seen: set[frozenset] = set()
            for f in self.facets:
                items = sorted(f, key=repr)
                for k in range(len(items) + 1):
                    for sub in combinations(items, k):
                        seen.add(frozenset(sub))
                        if len(seen) > cap:
                            raise ComplexError(f"more than {cap} faces")
            self._faces = sorted(seen, key=_face_key)
        return self._faces

    def f_vector(self) -> list[int]:
        """``(f_0, ..., f_dim)``; the empty face is not counted."""
        counts = [0] * (self.dim + 1)
        for face in self.faces():
            if face:
                counts[len(face) - 1] += 1
        return counts

    def euler(self) -> int:
        return sum((-1) ** i * f for i, f in enumerate(self.f_vector()))

    def euler_reduced(self) -> int:
        return self.euler() - 1

    # ---------------------------------------------------------------- operations
    def _require_face(self, face) -> frozenset:
        face = frozenset(face)
        if face not in self:
            raise ComplexError(f"{sorted(face, key=repr)} is not a face")
        return face

    def link(self, face) -> "SimplicialComplex":
        face = self._require_face(face)
        return SimplicialComplex([f - face for f in self.facets if face <= f], self.ground_set)

    def deletion(self, face) -> "SimplicialComplex":
        """Faces not containing ``face``."""
        face = self._require_face(face)
        if not face:
            return SimplicialComplex([], self.ground_set)
        out = []
        for f in self.facets:
            if face <= f:
                out.extend(f - {v} for v in face)
            else:
                out.append(f)
        return SimplicialComplex(out, self.ground_set)

    def induced(self, vertices: Iterable[Hashable]) -> "SimplicialComplex":
        vs = frozenset(vertices)
        return SimplicialComplex([f & vs for f in self.facets],
                                 [v for v in self.ground_set if v in vs])

    def join(self, other: "SimplicialComplex") -> "SimplicialComplex":
        if set(self.ground_set) & set(other.ground_set):
            raise ComplexError("join needs disjoint ground sets")
        return SimplicialComplex([a | b for a in self.facets for b in other.facets],
                                 self.ground_set + other.ground_set)

    def relabel(self, mapping) -> "SimplicialComplex":
        get = mapping.__getitem__ if hasattr(mapping, "__getitem__") else mapping
        return SimplicialComplex([{get(v) for v in f} for f in self.facets],
                                 [get(v) for v in self.ground_set])

    # ---------------------------------------------------------------- io
    def to_json(self, vertex_key=lambda v: v) -> dict:
        return {
            "ground_set": [vertex_key(v) for v in self.ground_set],
            "facets": [[vertex_key(v) for v in sorted(f, key=repr)] for f in self.facets],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        conv = lambda v: tuple(v) if isinstance(v, list) else v  # noqa: E731
        return cls([[conv(v) for v in f] for f in data["facets"]],
                   [conv(v) for v in data["ground_set"]])

    def to_text(self) -> str:
        """One facet per line, vertex indices (into the ground set) separated by spaces."""
        pos = {v: i for i, v in enumerate(self.ground_set)}
        return "\n".join(" ".join(str(i) for i in sorted(pos[v] for v in f)) for f in self.facets) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SimplicialComplex":
        facets = [[int(t) for t in line.split()] for line in text.splitlines()]
        verts = sorted(set().union(*map(set, facets))) if facets else []
        return cls(facets, verts)


def find_isomorphism(a: SimplicialComplex, b: SimplicialComplex) -> dict | None:
    """A vertex bijection carrying the facets of ``a`` onto those of ``b``.

    Searches for an isomorphism of the vertex/facet incidence graphs.
    """
    import networkx as nx
    from networkx.algorithms import isomorphism as iso

    if sorted(map(len, a.facets)) != sorted(map(len, b.facets)) or len(a.vertices) != len(b.vertices):
        return None

    def incidence(c: SimplicialComplex):
        g = nx.Graph()
        for v in c.vertices:
            g.add_node(("v", v), kind="v")
        for i, f in enumerate(c.facets):
            g.add_node(("f", i), kind="f")
            for v in f:
                g.add_edge(("f", i), ("v", v))
        return g

    matcher = iso.GraphMatcher(incidence(a), incidence(b),
                               node_match=lambda x, y: x["kind"] == y["kind"])
    for m in matcher.isomorphisms_iter():
        mapping = {k[1]: v[1] for k, v in m.items() if k[0] == "v"}
        if {frozenset(mapping[v] for v in f) for f in a.facets} == set(b.facets):
            return mapping
    return None


def is_isomorphism(a: SimplicialComplex, b: SimplicialComplex, mapping) -> bool:
    if set(mapping) != set(a.vertices) or set(mapping.values()) != set(b.vertices):
        return False
    if len(set(mapping.values())) != len(mapping):
        return False
    return {frozenset(mapping[v] for v in f) for f in a.facets} == set(b.facets)


# -------------------------------------------------------------------- vertex decomposability

@dataclass
class VDCertificate:
    """Recursion tree of decomposing vertices.

    A leaf (``vertex is None``) stands for a simplex; the facets are stored at
    every node so the certificate can be replayed on its own.
    """

    facets: tuple[frozenset, ...]
    vertex: Hashable | None = None
    link: "VDCertificate | None" = None
    deletion: "VDCertificate | None" = None

    def size(self) -> int:
        if self.vertex is None:
            return 1
        return 1 + self.link.size() + self.deletion.size()

    def depth(self) -> int:
        if self.vertex is None:
            return 0
        return 1 + max(self.link.depth(), self.deletion.depth())


def _link_facets(facets, v) -> tuple[frozenset, ...]:
    return tuple(_maximal(f - {v} for f in facets if v in f))


def _deletion_facets(facets, v) -> tuple[frozenset, ...]:
    out = []
    for f in facets:
        out.append(f - {v} if v in f else f)
    return tuple(_maximal(out))


def is_shedding(facets, v) -> bool:
    """No facet of the link of ``v`` is a facet of the deletion of ``v``."""
    others = [g for g in facets if v not in g]
    for f in facets:
        if v in f:
            rest = f - {v}
            if not any(rest <= g for g in others):
                return False
    return True


HintType = Sequence[Hashable] | Callable[[tuple[frozenset, ...]], Sequence[Hashable]] | None


def is_vertex_decomposable(cx: SimplicialComplex, vertex_order_hint: HintType = None,
                           budget: int = 1_000_000) -> tuple[bool, VDCertificate | None]:
    """Search for a vertex decomposition.

    ``vertex_order_hint`` is either a list of vertices tried first or a callable
    that proposes an order for each sub-complex met during the recursion.
    """
    memo: dict[tuple[frozenset, ...], VDCertificate | None] = {}
    calls = [0]

    def order(facets) -> list:
        verts = sorted(set().union(*facets), key=repr)
        if vertex_order_hint is None:
            hinted = []
        elif callable(vertex_order_hint):
            hinted = list(vertex_order_hint(facets))
        else:
            hinted = list(vertex_order_hint)
        present = set(verts)
        seen, out = set(), []
        for v in hinted + verts:
            if v in present and v not in seen:
                seen.add(v)
                out.append(v)
        return out

    def rec(facets: tuple[frozenset, ...]) -> VDCertificate | None:
        key = frozenset(facets)
        if key in memo:
            return memo[key]
        calls[0] += 1
        if calls[0] > budget:
            raise ComplexError(f"vertex decomposition search exceeded {budget} steps")
        if len(facets) == 1:
            memo[key] = VDCertificate(facets)
            return memo[key]
        result = None
        for v in order(facets):
            if not is_shedding(facets, v):
                continue
            lk = rec(_link_facets(facets, v))
            if lk is None:
                continue
            dl = rec(_deletion_facets(facets, v))
            if dl is None:
                continue
            result = VDCertificate(facets, v, lk, dl)
            break
        memo[key] = result
        return result

    cert = rec(tuple(cx.facets))
    return cert is not None, cert


def replay_certificate(cert: VDCertificate, cx: SimplicialComplex | None = None) -> bool:
    """Re-check conditions (i) and (ii) at every node of the certificate."""
    if cx is not None and set(cert.facets) != set(cx.facets):
        return False
    stack = [cert]
    while stack:
        node = stack.pop()
        if node.vertex is None:
            if len(node.facets) != 1:
                return False
            continue
        v = node.vertex
        if not any(v in f for f in node.facets):
            return False
        if node.link is None or node.deletion is None:
            return False
        if set(node.link.facets) != set(_link_facets(node.facets, v)):
            return False
        if set(node.deletion.facets) != set(_deletion_facets(node.facets, v)):
            return False
        link_facets = set(node.link.facets)
        if link_facets & set(node.deletion.facets):
            return False
        stack.extend([node.link, node.deletion])
    return True


# -------------------------------------------------------------------- homology

def _rank_gf2(rows: list[int]) -> int:
    basis: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top in basis:
                row ^= basis[top]
            else:
                basis[top] = row
                rank += 1
                break
    return rank


def _rank_rational(matrix: list[list[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in matrix]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col] / m[rank][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def boundary_ranks(cx: SimplicialComplex, rational: bool = False) -> list[int]:
    """``ranks[k]`` is the rank of the boundary map from k-faces to (k-1)-faces (k >= 0)."""
    by_dim: list[list[frozenset]] = [[] for _ in range(cx.dim + 2)]
    for face in cx.faces():
        by_dim[len(face)].append(face)
    index = [{f: i for i, f in enumerate(fs)} for fs in by_dim]
    ranks = []
    for size in range(1, cx.dim + 2):
        lower = index[size - 1]
        if rational:
            mat = []
            for f in by_dim[size]:
                verts = sorted(f, key=repr)
                row = [0] * len(lower)
                for i, v in enumerate(verts):
                    row[lower[f - {v}]] = (-1) ** i
                mat.append(row)
            ranks.append(_rank_rational(mat) if mat else 0)
        else:
            rows = []
            for f in by_dim[size]:
                r = 0
                for v in f:
                    r |= 1 << lower[f - {v}]
                rows.append(r)
            ranks.append(_rank_gf2(rows))
    return ranks


def betti_gf2(cx: SimplicialComplex, rational: bool = False) -> list[int]:
    """Betti numbers ``(b_0, ..., b_dim)``; ``b_0`` counts components, higher ones are reduced.

    With ``rational=True`` ranks are taken over the rationals instead of GF(2).
    """
    f = [len([x for x in cx.faces() if len(x) == k + 1]) for k in range(cx.dim + 1)]
    if not f or f[0] == 0:
        return [0]
    ranks = boundary_ranks(cx, rational) + [0]
    # ranks[0] is the augmentation map, rank 1 for a nonempty complex
    reduced = [f[k] - ranks[k] - ranks[k + 1] for k in range(len(f))]
    reduced[0] += 1
    return reduced


def reduced_betti_from_unreduced(betti: Sequence[int]) -> list[int]:
    out = list(betti)
    if out:
        out[0] -= 1
    return out


def trim(seq: Sequence[int]) -> list[int]:
    out = list(seq)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def f_vector_csv(rows: Iterable[tuple[str, Sequence[int]]], header: str = "f") -> str:
    rows = list(rows)
    width = max((len(v) for _, v in rows), default=0)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name"] + [f"{header}{i}" for i in range(width)])
    for name, vals in rows:
        w.writerow([name] + list(vals) + [""] * (width - len(vals)))
    return buf.getvalue()


def dumps(cx: SimplicialComplex) -> str:
    return json.dumps(cx.to_json(), sort_keys=True)
