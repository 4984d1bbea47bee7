"""The alt nu-Tamari lattice as an explicit lattice, and the check battery tying
the lattice, the box complex and the shelling together."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .boxcomplex import box_complex, box_faces, box_of_label, descent_boxes, is_box_face, theta
from .complex import (SimplicialComplex, betti_gf2, is_isomorphism, replay_certificate, trim)
from .lattice import DEFAULT_ELEMENT_CAP, FiniteLattice, LatticeError
from .paths import (Box, NEPath, all_deltas, as_path, count_nu_dyck, enumerate_nu_dyck,
                    evaluate, fuss_catalan, narayana_polynomial, resolve_delta, shrunken_path)
from .trees import DeltaNuTree, Region, enumerate_trees, perspective_box, right_rotations


@dataclass
class AltTamari:
    """``Tam_nu(delta)`` with every cover labelled by the box of its rotation."""

    region: Region
    lattice: FiniteLattice
    labels: dict[tuple[int, int], Box]

    @property
    def trees(self) -> list[DeltaNuTree]:
        return self.lattice.elements

    def __len__(self) -> int:
        return len(self.lattice)


def alt_tamari_lattice(nu, delta, cap: int = DEFAULT_ELEMENT_CAP,
                       covers: Iterable[tuple[int, int]] | None = None) -> AltTamari:
    """Enumerate the trees and connect them by right rotations.

    ``covers`` (indices into the sorted tree list) replaces the rotation covers;
    it exists so that tests can feed a deliberately broken order.
    """
    nu = as_path(nu)
    region = Region(nu, resolve_delta(nu, delta) if isinstance(delta, str) else delta)
    count = count_nu_dyck(nu)
    if count > cap:
        raise LatticeError(f"{count} trees exceed the cap of {cap}")
    trees = enumerate_trees(region, None)
    pos = {t.mask: i for i, t in enumerate(trees)}
    labels_old: dict[tuple[int, int], Box] = {}
    if covers is None:
        found = []
        for i, t in enumerate(trees):
            for s, w in right_rotations(t):
                j = pos[s.mask]
                found.append((i, j))
                labels_old[(i, j)] = box_of_label(region, w)
        covers = found
    covers = list(covers)
    lat = FiniteLattice(trees, covers, cap=cap)
    labels = {}
    for a, b in lat.covers:
        old = (pos[lat.elements[a].mask], pos[lat.elements[b].mask])
        labels[(a, b)] = labels_old.get(old) or _label_or_none(lat.elements[a], lat.elements[b])
    return AltTamari(region, lat, labels)


def _label_or_none(lower: DeltaNuTree, upper: DeltaNuTree):
    try:
        return perspective_box(lower, upper)
    except ValueError:
        return None


def ji_boxes(alt: AltTamari) -> dict[int, Box]:
    """Join-irreducible element ``->`` the box of its unique descent."""
    out = {}
    for j in alt.lattice.join_irreducibles():
        boxes = descent_boxes(alt.lattice.elements[j.element])
        if len(boxes) != 1:
            raise LatticeError(f"join-irreducible {alt.lattice.elements[j.element]} has descents {sorted(boxes)}")
        out[j.element] = next(iter(boxes))
    return out


# ------------------------------------------------------------------ reports

@dataclass
class Report:
    """Named boolean checks plus free-form details."""

    title: str
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, object] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def check(self, name: str, ok: bool, why: str = "") -> bool:
        self.checks[name] = self.checks.get(name, True) and bool(ok)
        if not ok:
            self.failures.append(f"{name}: {why}" if why else name)
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": self.checks,
                "details": self.details, "failures": self.failures}


def verify_isomorphism(nu, delta, cap: int = DEFAULT_ELEMENT_CAP,
                       alt: AltTamari | None = None) -> Report:
    """Box complex versus the canonical join complex computed in the lattice.

    Checks join-semidistributivity, that join-irreducibles and boxes match one
    to one, that the perspective label of every cover is the min-based
    ``lambda_jsd``, and that tau and theta are mutually inverse.
    """
    nu = as_path(nu)
    if alt is None:
        alt = alt_tamari_lattice(nu, delta, cap)
    region, lat = alt.region, alt.lattice
    shape = region.shape
    rep = Report(f"iso nu={nu} delta={region.delta}")
    rep.details["elements"] = len(lat)
    rep.details["boxes"] = len(shape.boxes())
    if not rep.check("jsd", lat.is_join_semidistributive()):
        return rep
    try:
        jb = ji_boxes(alt)
    except LatticeError as exc:
        rep.check("ji_boxes", False, str(exc))
        return rep
    rep.check("ji_boxes", sorted(jb.values()) == sorted(shape.boxes()),
              f"{len(jb)} join-irreducibles for {len(shape.boxes())} boxes")
    if not rep.ok:
        return rep
    box_ji = {b: j for j, b in jb.items()}
    bad = [(a, b) for a, b in lat.covers if alt.labels.get((a, b)) != jb.get(lat.lambda_jsd(a, b))]
    rep.check("perspective_equals_lambda", not bad, f"{len(bad)} covers disagree, first {bad[:1]}")
    try:
        cjc, faces = lat.canonical_join_complex()
    except LatticeError as exc:
        rep.check("canonical_join_complex", False, str(exc))
        return rep
    images = {}
    for F, a in faces.items():
        B = frozenset(jb[j] for j in F)
        if not is_box_face(B, shape):
            rep.check("tau_well_defined", False, f"incompatible boxes {sorted(B)}")
        images[B] = a
    bf = set(box_faces(shape))
    rep.check("tau_image", set(images) == bf, f"{len(images)} images vs {len(bf)} box faces")
    theta_of = {B: theta(shape, B, region) for B in bf}
    theta_tau = all(theta_of.get(B) == lat.elements[a] for B, a in images.items())
    rep.check("theta_tau", theta_tau)
    tau_theta = True
    for B, t in theta_of.items():
        a = lat.index.get(t)
        if a is None or frozenset(jb[j] for j in lat.canonical_join_rep(a).joinands) != B:
            tau_theta = False
            break
    rep.check("tau_theta", tau_theta)
    mapping = {j: jb[j] for j in cjc.vertices}
    rep.check("complex_iso", is_isomorphism(cjc, box_complex(shape), mapping))
    rep.details["box_of_ji"] = len(box_ji)
    return rep


def verify_box_side(nu, delta, tamari_fvector: Sequence[int] | None = None) -> Report:
    """Euler reciprocity, Narayana f-vector (delta = nu), Betti cross-check."""
    from .shelling import betti_via_shelling, shelling_order

    nu = as_path(nu)
    region = Region(nu, delta)
    shape = region.shape
    cx = box_complex(shape)
    rep = Report(f"box nu={nu} delta={region.delta}")
    nar = narayana_polynomial(nu)
    f = cx.f_vector()
    rep.details["f_vector"] = f
    rep.check("euler", cx.euler() == 1 - evaluate(nar, -1),
              f"chi={cx.euler()} but 1-Nar(-1)={1 - evaluate(nar, -1)}")
    if region.delta == tuple(nu.east_runs[1:]):
        rep.check("f_narayana", trim(f) == trim(nar[1:]), f"f={f} Nar={nar}")
    if tamari_fvector is not None:
        rep.check("f_delta_invariant", trim(f) == trim(tamari_fvector))
    b = betti_gf2(cx)
    rep.details["betti"] = trim(b)
    if shape.boxes():
        sb = betti_via_shelling(shelling_order(shape))
        rep.check("betti_shelling", trim(sb) == trim(b), f"shelling {sb} vs gf2 {b}")
    return rep


def verify_all(nu, delta, cap: int = DEFAULT_ELEMENT_CAP, rational: bool = False) -> Report:
    """Everything the CLI ``verify`` command runs for one ``(nu, delta)``."""
    from .boxcomplex import box_vd
    from .shelling import (MODES, betti_via_shelling, h_image, shelling_order,
                           top_homology_facets)

    nu = as_path(nu)
    delta = resolve_delta(nu, delta) if isinstance(delta, str) else tuple(delta)
    rep = Report(f"verify nu={nu} delta={delta}")
    iso = verify_isomorphism(nu, delta, cap)
    for k, v in iso.checks.items():
        rep.check(f"iso.{k}", v, "; ".join(iso.failures))
    box = verify_box_side(nu, delta)
    for k, v in box.checks.items():
        rep.check(f"box.{k}", v, "; ".join(box.failures))
    rep.details.update(box.details)
    shape = Region(nu, delta).shape
    if shape.boxes():
        ok, cert = box_vd(shape)
        rep.check("vertex_decomposable", ok and replay_certificate(cert, box_complex(shape)))
        for mode in MODES:
            try:
                order = shelling_order(shape, mode)
                rep.check(f"shelling.{mode}", True)
                rep.check(f"shelling.{mode}.betti",
                          trim(betti_via_shelling(order)) == trim(betti_gf2(box_complex(shape), rational)))
            except Exception as exc:  # report, do not crash the battery
                rep.check(f"shelling.{mode}", False, str(exc))
    # the sphere count is stated for paths starting with a north step
    if nu.n >= 1 and nu[0] == 0 and all(v >= 2 for v in nu.east_runs[1:]):
        top = top_homology_facets(shape)
        paths = count_nu_dyck(shrunken_path(nu))
        rep.details["top_homology_facets"] = len(top)
        rep.check("top_spheres", len(top) == paths, f"{len(top)} vs {paths} shrunken Dyck paths")
        if not any(delta):
            rep.check("h_bijection", set(h_image(nu)) == set(top))
    else:
        rep.details["top_spheres"] = "skipped: needs nu_0 = 0 and nu_i >= 2"
    return rep


def sweep_pairs(max_n: int, max_run: int, nu0: Sequence[int] | None = None):
    """All ``(nu, delta)`` with ``1..max_n`` north steps and runs ``<= max_run``,
    in increasing ``n``.  ``nu0`` restricts the initial east run."""
    import itertools

    starts = range(max_run + 1) if nu0 is None else nu0
    for n in range(1, max_n + 1):
        for runs in itertools.product(range(max_run + 1), repeat=n):
            for r0 in starts:
                nu = NEPath((r0,) + runs)
                for d in all_deltas(nu):
                    yield nu, d


def timed(fn, *args, **kwargs):
    t = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t
