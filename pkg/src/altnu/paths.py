"""Lattice paths, increment vectors and the box shapes they cut out.

A northeast path is stored by its east runs ``(nu_0, nu_1, ..., nu_n)``:
``nu_0`` east steps, then one north step followed by ``nu_1`` east steps, and
so on.  Everything else in the package is built on top of these helpers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from typing import Iterator, NamedTuple, Sequence

DEFAULT_PATH_LIMIT = 10**6


class PathError(ValueError):
    """Malformed path text or a path that violates a precondition."""


class DeltaError(ValueError):
    """Increment vector incompatible with its path."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class SizeLimitError(RuntimeError):
    """An enumeration exceeded its configured cap."""


@dataclass(frozen=True, order=True)
class NEPath:
    east_runs: tuple[int, ...]

    def __post_init__(self):
        runs = tuple(int(r) for r in self.east_runs)
        if not runs:
            raise PathError("a path needs at least the initial run nu_0")
        if any(r < 0 for r in runs):
            raise PathError(f"east runs must be non-negative, got {runs}")
        object.__setattr__(self, "east_runs", runs)

    @property
    def n(self) -> int:
        return len(self.east_runs) - 1

    @property
    def width(self) -> int:
        return sum(self.east_runs)

    def __len__(self) -> int:
        return len(self.east_runs)

    def __getitem__(self, i):
        return self.east_runs[i]

    def __iter__(self):
        return iter(self.east_runs)

    def prefix_sums(self) -> list[int]:
        out, s = [], 0
        for r in self.east_runs:
            s += r
            out.append(s)
        return out

    def steps(self) -> str:
        return "N".join("E" * r for r in self.east_runs)

    def valleys(self) -> int:
        """Number of ``EN`` factors."""
        return sum(1 for r in self.east_runs[:-1] if r > 0)

    def is_weakly_above(self, other: "NEPath") -> bool:
        if self.n != other.n or self.width != other.width:
            return False
        return all(a <= b for a, b in zip(self.prefix_sums(), other.prefix_sums()))

    @classmethod
    def from_steps(cls, steps: str) -> "NEPath":
        steps = steps.strip().upper()
        if not steps or set(steps) - {"N", "E"}:
            if steps == "":
                return cls((0,))
            raise PathError(f"step string may only contain N and E: {steps!r}")
        return cls(tuple(len(chunk) for chunk in steps.split("N")))

    @classmethod
    def parse(cls, text: str) -> "NEPath":
        """Parse ``"(1,2,0)"``, ``"1,2,0"`` or a step string such as ``"ENEEN"``."""
        text = text.strip()
        if re.fullmatch(r"[NEne]*", text):
            return cls.from_steps(text)
        return cls(parse_int_vector(text))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.east_runs)) + ")"


def parse_int_vector(text: str) -> tuple[int, ...]:
    body = text.strip().strip("()[] ")
    if not body:
        return ()
    try:
        return tuple(int(tok) for tok in re.split(r"[,\s]+", body) if tok)
    except ValueError:
        raise PathError(f"cannot parse integer vector from {text!r}") from None


def as_path(nu) -> NEPath:
    if isinstance(nu, NEPath):
        return nu
    if isinstance(nu, str):
        return NEPath.parse(nu)
    return NEPath(tuple(nu))


def uniform_path(m: int, n: int) -> NEPath:
    """The path ``(N E^m)^n``."""
    return NEPath((0,) + (m,) * n)


def validate_delta(nu: NEPath, delta: Sequence[int] | str) -> tuple[int, ...]:
    if isinstance(delta, str):
        return resolve_delta(nu, delta)
    delta = tuple(int(d) for d in delta)
    if len(delta) != nu.n:
        raise DeltaError(f"increment vector needs {nu.n} entries, got {len(delta)}")
    for i, (d, v) in enumerate(zip(delta, nu.east_runs[1:]), start=1):
        if d < 0:
            raise DeltaError(f"delta_{i} = {d} is negative", index=i)
        if d > v:
            raise DeltaError(f"delta_{i} = {d} exceeds nu_{i} = {v}", index=i)
    return delta


def resolve_delta(nu: NEPath, spec) -> tuple[int, ...]:
    """Accept an explicit vector or one of the keywords ``tamari`` / ``dyck``."""
    if isinstance(spec, str):
        key = spec.strip().lower()
        if key == "tamari":
            return tuple(nu.east_runs[1:])
        if key == "dyck":
            return (0,) * nu.n
        spec = parse_int_vector(spec)
    return validate_delta(nu, spec)


def all_deltas(nu: NEPath) -> Iterator[tuple[int, ...]]:
    def rec(i, acc):
        if i > nu.n:
            yield tuple(acc)
            return
        for d in range(nu[i] + 1):
            acc.append(d)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(1, [])


def check_path(nu, delta) -> NEPath:
    """The path ``(W - sum(delta), delta_1, ..., delta_n)``."""
    nu = as_path(nu)
    delta = validate_delta(nu, delta)
    return NEPath((nu.width - sum(delta),) + delta)


def hat_path(nu, delta) -> tuple[int, ...]:
    """West runs of the northwest bounding path, ``W^{nu_0} N W^{nu_1-delta_1} ...``."""
    nu = as_path(nu)
    delta = validate_delta(nu, delta)
    return (nu[0],) + tuple(v - d for v, d in zip(nu.east_runs[1:], delta))


def row_bounds(nu, delta) -> list[tuple[int, int]]:
    """For each height ``y`` the x-interval ``[left, right]`` of lattice points.

    Points lie weakly left of the check path and weakly right of the hat path;
    coordinates have the origin at the lower-left corner of the bounding box.
    """
    nu = as_path(nu)
    delta = validate_delta(nu, delta)
    check = check_path(nu, delta)
    hat = hat_path(nu, delta)
    bounds = []
    right = 0
    left = check[0]
    for y in range(nu.n + 1):
        right += check[y]
        left -= hat[y]
        bounds.append((left, right))
    return bounds


class Box(NamedTuple):
    """A unit box, addressed by row (from the top, 1-based) and column (1-based)."""

    row: int
    col: int

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


def is_unimodal(seq: Sequence[int]) -> bool:
    i, k = 0, len(seq)
    while i + 1 < k and seq[i] <= seq[i + 1]:
        i += 1
    while i + 1 < k and seq[i] >= seq[i + 1]:
        i += 1
    return i + 1 >= k


@dataclass(frozen=True)
class Shape:
    """Top-aligned columns of boxes with unimodal heights.

    ``nu``/``delta`` record where the shape came from; ``x_offset`` is the lattice
    x-coordinate of the left edge of column 1 when it came from a path pair.
    """

    columns: tuple[int, ...]
    nu: NEPath | None = None
    delta: tuple[int, ...] | None = None
    x_offset: int = 0

    def __post_init__(self):
        cols = tuple(int(c) for c in self.columns)
        if any(c <= 0 for c in cols):
            raise ValueError(f"column heights must be positive, got {cols}")
        if not is_unimodal(cols):
            raise ValueError(f"column heights must be unimodal, got {cols}")
        object.__setattr__(self, "columns", cols)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @property
    def nrows(self) -> int:
        return max(self.columns, default=0)

    @property
    def size(self) -> int:
        return sum(self.columns)

    def __contains__(self, box) -> bool:
        r, c = box
        return 1 <= c <= len(self.columns) and 1 <= r <= self.columns[c - 1]

    def boxes(self) -> list[Box]:
        """All boxes, row by row from the top, left to right."""
        return [Box(r, c) for r in range(1, self.nrows + 1)
                for c in range(1, self.ncols + 1) if self.columns[c - 1] >= r]

    def row(self, r: int) -> list[Box]:
        return [Box(r, c) for c in range(1, self.ncols + 1) if self.columns[c - 1] >= r]

    # lattice coordinates (only meaningful for shapes built by shape_from)
    def box_to_lattice(self, box) -> tuple[int, int]:
        """Lower-left lattice corner of ``box``."""
        if self.nu is None:
            raise ValueError("shape has no path origin")
        r, c = box
        return self.x_offset + c - 1, self.nu.n - r

    def lattice_to_box(self, x: int, y: int) -> Box:
        if self.nu is None:
            raise ValueError("shape has no path origin")
        box = Box(self.nu.n - y, x - self.x_offset + 1)
        if box not in self:
            raise ValueError(f"no box with lower-left corner {(x, y)}")
        return box

    def to_json(self) -> dict:
        return {
            "columns": list(self.columns),
            "nu": list(self.nu.east_runs) if self.nu is not None else None,
            "delta": list(self.delta) if self.delta is not None else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Shape":
        if data.get("nu") is not None:
            nu = NEPath(tuple(data["nu"]))
            shape = shape_from(nu, data["delta"])
            if list(shape.columns) != list(data["columns"]):
                raise ValueError("columns disagree with nu/delta")
            return shape
        return cls(tuple(data["columns"]))

    def render(self, marked=(), mark: str = "■", blank: str = "□") -> str:
        marked = set(map(tuple, marked))
        lines = []
        for r in range(1, self.nrows + 1):
            cells = []
            for c in range(1, self.ncols + 1):
                if self.columns[c - 1] >= r:
                    cells.append(mark if (r, c) in marked else blank)
                else:
                    cells.append(" ")
            lines.append("".join(cells).rstrip())
        return "\n".join(lines)


def shape_from(nu, delta) -> Shape:
    """The box shape between the check path and the hat path."""
    nu = as_path(nu)
    delta = validate_delta(nu, delta)
    n = nu.n
    if n == 0:
        return Shape((), nu, delta, 0)
    bounds = row_bounds(nu, delta)
    # strip y holds boxes [x, x+1] x [y, y+1] for left(y) <= x < right(y)
    strips = [(bounds[y][0], bounds[y][1]) for y in range(n)]
    lo = min(l for l, r in strips if r > l) if any(r > l for l, r in strips) else 0
    hi = max(r for l, r in strips if r > l) if any(r > l for l, r in strips) else 0
    heights = []
    offset = None
    for x in range(lo, hi):
        h = sum(1 for l, r in strips if l <= x < r)
        if h:
            if offset is None:
                offset = x
            heights.append(h)
    return Shape(tuple(heights), nu, delta, offset if offset is not None else 0)


def enumerate_nu_dyck(nu, limit: int = DEFAULT_PATH_LIMIT) -> list[NEPath]:
    """All paths weakly above ``nu`` with its endpoints, lexicographic on runs."""
    nu = as_path(nu)
    n, width = nu.n, nu.width
    bounds = nu.prefix_sums()
    out: list[NEPath] = []
    runs: list[int] = []

    def rec(k: int, used: int):
        if k == n:
            runs.append(width - used)
            out.append(NEPath(tuple(runs)))
            runs.pop()
            if len(out) > limit:
                raise SizeLimitError(f"more than {limit} nu-Dyck paths for {nu}")
            return
        for r in range(bounds[k] - used + 1):
            runs.append(r)
            rec(k + 1, used + r)
            runs.pop()

    rec(0, 0)
    return out


def count_nu_dyck(nu) -> int:
    """Path count by dynamic programming (no enumeration)."""
    nu = as_path(nu)
    bounds = nu.prefix_sums()
    ways = [1] * (bounds[0] + 1)
    for k in range(1, nu.n + 1):
        cap = bounds[k] if k < nu.n else nu.width
        new = [0] * (cap + 1)
        acc = 0
        for x in range(cap + 1):
            if x < len(ways):
                acc += ways[x]
            new[x] = acc
        ways = new
    return ways[nu.width] if nu.width < len(ways) else 0


def narayana_polynomial(nu, limit: int = DEFAULT_PATH_LIMIT) -> list[int]:
    """Coefficients ``[c_0, c_1, ...]``; ``c_i`` counts nu-Dyck paths with ``i`` valleys."""
    coeffs: list[int] = []
    for path in enumerate_nu_dyck(nu, limit):
        v = path.valleys()
        while len(coeffs) <= v:
            coeffs.append(0)
        coeffs[v] += 1
    return coeffs


def evaluate(coeffs: Sequence[int], x: int) -> int:
    return sum(c * x**i for i, c in enumerate(coeffs))


def shrunken_path(nu) -> NEPath:
    nu = as_path(nu)
    bad = [i for i in range(1, nu.n + 1) if nu[i] < 2]
    if bad:
        raise PathError(f"not shrinkable: nu_{bad[0]} = {nu[bad[0]]} < 2")
    return NEPath((nu[0],) + tuple(v - 2 for v in nu.east_runs[1:]))


def fuss_catalan(m: int, n: int) -> int:
    """``C((m-1)n, n) / ((m-2)n + 1)``, the number of top spheres for ``(N E^m)^n``."""
    return comb((m - 1) * n, n) // ((m - 2) * n + 1)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def peak_bijection(face, shape: Shape) -> NEPath:
    """Map a face of the Dyck-case box complex to a nu-Dyck path.

    The shape is mirrored onto the Ferrers diagram above ``nu``; the path is the
    lowest one whose peaks strictly inside the diagram sit exactly at the
    top-left corners of the mirrored marked boxes.
    """
    nu = shape.nu
    if nu is None or shape.delta != (0,) * nu.n:
        raise ValueError("peak bijection needs a shape built with delta = 0")
    width = nu.width
    pref = nu.prefix_sums()
    peaks = {}
    for box in face:
        if box not in shape:
            raise ValueError(f"box {box} is not in the shape")
        x, y = shape.box_to_lattice(box)
        if y in peaks:
            raise ValueError("face has two boxes in one row")
        peaks[y] = width - x - 1
    order = sorted(peaks)
    for a, b in zip(order, order[1:]):
        if peaks[b] <= peaks[a]:
            raise ValueError("face is not a set of compatible boxes")
    runs, x = [], 0
    for h in range(nu.n):
        upcoming = [peaks[y] for y in order if y >= h]
        target = min(pref[h], upcoming[0]) if upcoming else pref[h]
        runs.append(target - x)
        x = target
    runs.append(width - x)
    return NEPath(tuple(runs))
