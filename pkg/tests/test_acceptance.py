"""Acceptance gate: one PASS/FAIL line per criterion.

Sweep criteria (2, 4, 5, 6, 8, 9) walk every ``(nu, delta)`` with at most five
north steps and runs at most 3 in increasing ``n`` under a wall-clock budget
(``ALTNU_ACCEPT_BUDGET`` seconds per pass, default 300; 0 means no limit).
A criterion passes only when the whole sweep was covered and every checked
instance agreed; otherwise the line reports how far the sweep got.
"""

from __future__ import annotations

import itertools
import os
import random
import time

import pytest

from altnu.boxcomplex import (all_shapes, box_complex, box_vd, decomposing_vertices,
                              deletion_shape, link_split, shape_isomorphism, verify_link_split)
from altnu.complex import betti_gf2, replay_certificate, trim
from altnu.paths import (Box, NEPath, Shape, all_deltas, count_nu_dyck, evaluate, fuss_catalan,
                         narayana_polynomial, shape_from, shrunken_path, uniform_path)
from altnu.shelling import a_sequence, betti_via_shelling, facet_from_a, shelling_order, top_homology_facets
from altnu.table1 import GOLDEN, compute_row
from altnu.verify import sweep_pairs, verify_isomorphism
from conftest import ACCEPTANCE

MAX_N, MAX_RUN = 5, 3
BUDGET = float(os.environ.get("ALTNU_ACCEPT_BUDGET", "300"))
SWEEP_TOTAL = sum((MAX_RUN + 1) * ((MAX_RUN + 1) * (MAX_RUN + 2) // 2) ** n for n in range(1, MAX_N + 1))


def report(k: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[k] = line
    print(line)


class Coverage:
    """Pairs checked per ``n`` against the number the sweep contains."""

    def __init__(self):
        self.start = time.perf_counter()
        self.done = {n: 0 for n in range(1, MAX_N + 1)}
        self.timed_out = False

    def expired(self) -> bool:
        if BUDGET > 0 and time.perf_counter() - self.start > BUDGET:
            self.timed_out = True
        return self.timed_out

    @staticmethod
    def expected(n: int) -> int:
        return (MAX_RUN + 1) * ((MAX_RUN + 1) * (MAX_RUN + 2) // 2) ** n

    @property
    def total(self) -> int:
        return sum(self.done.values())

    @property
    def complete(self) -> bool:
        return self.total == SWEEP_TOTAL

    def summary(self) -> str:
        full = [n for n in self.done if self.done[n] == self.expected(n)]
        parts = [f"{self.total}/{SWEEP_TOTAL} pairs in {time.perf_counter() - self.start:.0f}s",
                 f"complete for n <= {max(full, default=0)}"]
        partial = [n for n in self.done if 0 < self.done[n] < self.expected(n)]
        if partial:
            n = partial[0]
            parts.append(f"n = {n}: {self.done[n]}/{self.expected(n)}")
        if self.timed_out:
            parts.append(f"stopped at the {BUDGET:.0f}s budget")
        return "; ".join(parts)


# ------------------------------------------------------------------ criterion 1

def test_criterion_1_table():
    start = time.perf_counter()
    bad, rows = [], 0
    for (m, n) in sorted(GOLDEN):
        if count_nu_dyck(uniform_path(m, n)) > 20_000:
            continue
        for kind in ("tamari", "dyck"):
            row = compute_row(m, n, kind)
            rows += 1
            golden = trim(row.golden)
            if trim(row.gf2) != golden or trim(row.shelling) != golden:
                bad.append(f"m={m} n={n} {kind}: golden {golden} gf2 {row.gf2} shelling {row.shelling}")
    took = time.perf_counter() - start
    ok = not bad and took <= 600
    report(1, ok, f"{rows} table cells, GF(2) and shelling both exact, {took:.1f}s"
           + (f"; mismatches: {bad}" if bad else ""))
    assert ok


# ------------------------------------------------------------------ criteria 2 and 9

@pytest.fixture(scope="module")
def iso_sweep():
    cov = Coverage()
    iso_bad, lam_bad = [], []
    iso_keys = ("jsd", "ji_boxes", "tau_image", "theta_tau", "tau_theta", "complex_iso")
    for nu, d in sweep_pairs(MAX_N, MAX_RUN):
        if cov.expired():
            break
        rep = verify_isomorphism(nu, d)
        if not all(rep.checks.get(k, False) for k in iso_keys):
            iso_bad.append((nu.east_runs, d, rep.failures))
        if not rep.checks.get("perspective_equals_lambda", False):
            lam_bad.append((nu.east_runs, d, rep.failures))
        cov.done[nu.n] += 1
    cov.elapsed = time.perf_counter() - cov.start
    return cov, iso_bad, lam_bad


def test_criterion_2_isomorphism(iso_sweep):
    cov, bad, _ = iso_sweep
    # the criterion also bounds the run at five minutes
    ok = cov.complete and not bad and cov.elapsed <= 300
    detail = f"tau/theta round trips and complex isomorphism: {cov.summary()}"
    if bad:
        detail += f"; {len(bad)} failures, first {bad[0]}"
    report(2, ok, detail)
    assert ok


def test_criterion_9_lambda(iso_sweep):
    cov, _, bad = iso_sweep
    ok = cov.complete and not bad
    detail = f"perspective label = min-based lambda_jsd on every cover: {cov.summary()}"
    if bad:
        detail += f"; {len(bad)} failures, first {bad[0]}"
    report(9, ok, detail)
    assert ok


# ------------------------------------------------------------------ criterion 3

def test_criterion_3_vertex_decomposable():
    start = time.perf_counter()
    count, bad = 0, []
    for shape in all_shapes(12):
        ok, cert = box_vd(shape)
        if not (ok and replay_certificate(cert, box_complex(shape))):
            bad.append(shape.columns)
        count += 1
    took = time.perf_counter() - start
    ok = not bad and took <= 300
    report(3, ok, f"{count} shapes with <= 12 boxes, certificates replayed, {took:.1f}s"
           + (f"; failures {bad[:5]}" if bad else ""))
    assert ok


# ------------------------------------------------------------------ criteria 4, 5, 6

@pytest.fixture(scope="module")
def fvector_sweep():
    cov = Coverage()
    cache: dict[tuple[int, ...], tuple[list[int], int]] = {}
    euler_bad, nar_bad, inv_bad = [], [], []
    for nu, group in itertools.groupby(sweep_pairs(MAX_N, MAX_RUN), key=lambda p: p[0]):
        if cov.expired():
            break
        deltas = [d for _, d in group]
        nar = narayana_polynomial(nu)
        fs = set()
        for d in deltas:
            shape = shape_from(nu, d)
            if shape.columns not in cache:
                cx = box_complex(shape)
                f = trim(cx.f_vector()) if shape.boxes() else []
                cache[shape.columns] = (f, cx.euler() if shape.boxes() else 0)
            f, chi = cache[shape.columns]
            fs.add(tuple(f))
            if chi != 1 - evaluate(nar, -1):
                euler_bad.append((nu.east_runs, d, chi, nar))
            if d == nu.east_runs[1:] and f != trim(nar[1:]):
                nar_bad.append((nu.east_runs, f, nar))
        if len(fs) != 1:
            inv_bad.append((nu.east_runs, sorted(fs)))
        cov.done[nu.n] += len(deltas)
    return cov, euler_bad, nar_bad, inv_bad


def test_criterion_4_euler(fvector_sweep):
    cov, bad, _, _ = fvector_sweep
    ok = cov.complete and not bad
    report(4, ok, f"chi = 1 - Nar(-1) with Nar from path enumeration: {cov.summary()}"
           + (f"; {len(bad)} failures, first {bad[0]}" if bad else ""))
    assert ok


def test_criterion_5_narayana(fvector_sweep):
    cov, _, bad, _ = fvector_sweep
    ok = cov.complete and not bad
    report(5, ok, f"f_i = Nar(i+1) for delta = nu: {cov.summary()}"
           + (f"; {len(bad)} failures, first {bad[0]}" if bad else ""))
    assert ok


def test_criterion_6_f_invariance(fvector_sweep):
    cov, _, _, bad = fvector_sweep
    ok = cov.complete and not bad
    report(6, ok, f"f-vector independent of delta: {cov.summary()}"
           + (f"; {len(bad)} failures, first {bad[0]}" if bad else ""))
    assert ok


# ------------------------------------------------------------------ criterion 7

SAMPLED_DELTAS = 8


def delta_sample(nu: NEPath) -> list[tuple[int, ...]]:
    """All deltas when there are at most 64, else tamari, dyck and a seeded sample."""
    ds = list(all_deltas(nu))
    if len(ds) <= 64:
        return ds
    rng = random.Random(1000 * nu.n + sum(nu.east_runs))
    extremes = [tuple(nu.east_runs[1:]), (0,) * nu.n]
    return extremes + rng.sample([d for d in ds if d not in extremes], SAMPLED_DELTAS)


def test_criterion_7_top_spheres():
    start = time.perf_counter()
    bad, cells = [], 0
    for m in (2, 3, 4):
        for n in range(1, 6):
            nu = uniform_path(m, n)
            expected = fuss_catalan(m, n)
            paths = count_nu_dyck(shrunken_path(nu))
            counts = {len(top_homology_facets(shape_from(nu, d))) for d in delta_sample(nu)}
            cells += 1
            if paths != expected or counts != {expected}:
                bad.append((m, n, counts, paths, expected))
    took = time.perf_counter() - start
    ok = not bad
    report(7, ok, f"{cells} (m, n) cells, top homology facets = shrunken paths = Fuss-Catalan "
                  f"for every tested delta (all when at most 64, else 10), {took:.1f}s"
           + (f"; failures {bad}" if bad else ""))
    assert ok


# ------------------------------------------------------------------ criterion 8

def test_criterion_8_cross_oracle():
    cov = Coverage()
    seen: dict[tuple[int, ...], bool] = {}
    bad = []
    for nu, d in sweep_pairs(MAX_N, MAX_RUN):
        if cov.expired():
            break
        shape = shape_from(nu, d)
        if shape.columns not in seen:
            if shape.boxes():
                a = trim(betti_via_shelling(shelling_order(shape)))
                b = trim(betti_gf2(box_complex(shape)))
                seen[shape.columns] = a == b
                if a != b:
                    bad.append((shape.columns, a, b))
            else:
                seen[shape.columns] = True
        cov.done[nu.n] += 1
    # the Table 1 complexes are part of "every sweep" as well
    for (m, n) in sorted(GOLDEN):
        for kind in ("tamari", "dyck"):
            row = compute_row(m, n, kind)
            if trim(row.gf2) != trim(row.shelling):
                bad.append((m, n, kind, row.gf2, row.shelling))
    ok = cov.complete and not bad
    report(8, ok, f"shelling Betti = GF(2) Betti on {len(seen)} distinct shapes plus Table 1: {cov.summary()}"
           + (f"; {len(bad)} failures, first {bad[0]}" if bad else ""))
    assert ok


# ------------------------------------------------------------------ criterion 10

def test_criterion_10_worked_examples():
    checks = {}
    worked = Shape((6, 6, 7, 8, 8, 9, 10, 10, 10, 10, 10, 8, 5, 5, 4))
    sp = link_split(worked, Box(6, 10))
    checks["u+ and u-"] = sp.u_plus == (5,) * 11 + (4,) and sp.u_minus == (4, 2)
    checks["u' deletion"] = (len(decomposing_vertices(worked)) == 13
                             and deletion_shape(worked) == (6, 6, 7, 8, 8, 9, 9, 9, 9, 9, 8, 5, 5, 4))
    shape = shape_from((0, 3, 4, 2, 1), (1, 2, 0, 0))
    facet = facet_from_a((2, 4, 3), shape)
    checks["a=(2,4,3) facet"] = (facet == {Box(3, 6), Box(2, 8), Box(1, 3)}
                                 and a_sequence(facet, shape) == (2, 4, 3)
                                 and facet in set(box_complex(shape).facets))
    checks["(3,2,1) ~ (1,3,2)"] = shape_isomorphism(Shape((3, 2, 1)), Shape((1, 3, 2))) is not None
    small = Shape((3, 1))
    checks["link split on a small shape"] = verify_link_split(small, link_split(small, Box(1, 2)))
    ok = all(checks.values())
    report(10, ok, ", ".join(f"{k}: {'ok' if v else 'MISMATCH'}" for k, v in checks.items()))
    assert ok
