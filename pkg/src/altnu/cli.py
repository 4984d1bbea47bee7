"""Command-line front end: ``altnu {lattice,complex,table1,verify}``."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .boxcomplex import box_complex, face_json
from .complex import betti_gf2, trim
from .lattice import DEFAULT_ELEMENT_CAP, LatticeError
from .paths import PathError, SizeLimitError, as_path, resolve_delta, shape_from

SCHEMA = 1
CACHE_ENV = "ALTNU_CACHE_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def _cache_path(key: dict) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    digest = hashlib.sha256(_dump(key).encode()).hexdigest()[:24]
    return Path(root) / f"{digest}.json"


def _cached(key: dict, compute):
    path = _cache_path(key)
    if path is not None and path.exists():
        return json.loads(path.read_text())
    value = compute()
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_dump(value))
    return value


def _parse_nu_delta(args):
    if args.nu is None:
        raise UsageError("--nu is required")
    try:
        nu = as_path(args.nu)
    except (PathError, ValueError) as exc:
        raise UsageError(f"invalid --nu: {exc}") from None
    spec = args.delta or "tamari"
    if spec.strip().lower() == "all":
        from .paths import all_deltas

        return nu, list(all_deltas(nu))
    try:
        return nu, [resolve_delta(nu, spec)]
    except (PathError, ValueError) as exc:
        raise UsageError(f"invalid --delta: {exc}") from None


def _tree_key(t) -> str:
    return " ".join(f"{x},{y}" for x, y in t.nodes)


# ------------------------------------------------------------------ commands

def cmd_lattice(args) -> tuple[int, str]:
    from .verify import alt_tamari_lattice

    nu, deltas = _parse_nu_delta(args)
    outputs = []
    for delta in deltas:
        alt = alt_tamari_lattice(nu, delta, cap=args.max_elements)
        lat = alt.lattice
        labels = {c: f"{b.row},{b.col}" for c, b in alt.labels.items()}
        if args.format == "dot":
            outputs.append(lat.to_dot(labels=labels, key=_tree_key))
        elif args.format == "csv":
            rows = ["lower,upper,box_row,box_col"]
            rows += [f"{a},{b},{alt.labels[(a, b)].row},{alt.labels[(a, b)].col}" for a, b in lat.covers]
            outputs.append("\n".join(rows))
        elif args.format == "ascii":
            outputs.append(f"nu={nu} delta={delta}: {len(lat)} elements, {len(lat.covers)} covers\n"
                           + alt.region.shape.render())
        else:
            data = lat.to_json(key=lambda t: [list(p) for p in t.nodes])
            data["labels"] = [[a, b, list(alt.labels[(a, b)])] for a, b in lat.covers]
            outputs.append({"schema": SCHEMA, "nu": list(nu.east_runs), "delta": list(delta),
                            "size": len(lat), **data})
    return EXIT_OK, _render(outputs, args.format)


def _complex_payload(nu, delta, args) -> dict:
    from .shelling import betti_via_shelling, shelling_order
    from .verify import verify_isomorphism

    shape = shape_from(nu, delta)
    cx = box_complex(shape)
    payload = {
        "schema": SCHEMA,
        "nu": list(nu.east_runs),
        "delta": list(delta),
        "shape": shape.to_json(),
        "facets": [sorted(list(b) for b in F) for F in cx.facets],
        "f_vector": cx.f_vector(),
        "euler": cx.euler(),
        "betti_gf2": trim(betti_gf2(cx, rational=args.rational)),
    }
    if shape.boxes():
        order = shelling_order(shape, args.mode, rearrange=args.rearrange)
        payload["betti_shelling"] = trim(betti_via_shelling(order))
        payload["shelling_mode"] = args.mode
    else:
        payload["betti_shelling"] = [1]
    iso = verify_isomorphism(nu, delta, cap=args.max_elements)
    payload["isomorphism"] = iso.to_json()
    return payload


def cmd_complex(args) -> tuple[int, str]:
    nu, deltas = _parse_nu_delta(args)
    outputs, code = [], EXIT_OK
    for delta in deltas:
        key = {"cmd": "complex", "nu": list(nu.east_runs), "delta": list(delta), "mode": args.mode,
               "rational": args.rational, "rearrange": args.rearrange}
        payload = _cached(key, lambda: _complex_payload(nu, delta, args))
        if not payload["isomorphism"]["ok"]:
            code = EXIT_FAIL
        if args.format == "ascii":
            shape = shape_from(nu, delta)
            outputs.append(
                f"nu={nu} delta={tuple(delta)}\n{shape.render()}\n"
                f"f={payload['f_vector']} chi={payload['euler']} "
                f"betti(gf2)={payload['betti_gf2']} betti(shelling)={payload['betti_shelling']} "
                f"iso={'ok' if payload['isomorphism']['ok'] else 'FAILED'}")
        elif args.format == "csv":
            from .shelling import shelling_order

            outputs.append(shelling_order(shape_from(nu, delta), args.mode, args.rearrange).to_csv())
        elif args.format == "dot":
            raise UsageError("dot output is available for the lattice command")
        else:
            outputs.append(payload)
    return code, _render(outputs, args.format)


def cmd_table1(args) -> tuple[int, str]:
    from .table1 import compute_table, table_csv

    ms = range(args.m_min, args.m_max + 1)
    ns = range(args.n_min, args.n_max + 1)
    rows = compute_table(ms, ns, slow=args.slow, with_lattice=args.lattice, rational=args.rational)
    code = EXIT_OK if all(r.ok for r in rows) else EXIT_FAIL
    if args.format == "json":
        data = {"schema": SCHEMA, "rows": [
            {"m": r.m, "n": r.n, "lattice": r.kind, "lattice_size": r.lattice_size,
             "golden": list(r.golden), "gf2": list(r.gf2 or ()), "shelling": list(r.shelling or ()),
             "lattice_gf2": None if r.lattice_gf2 is None else list(r.lattice_gf2), "ok": r.ok}
            for r in rows]}
        return code, _dump(data)
    text = table_csv(rows)
    bad = [r for r in rows if not r.ok]
    for r in bad:
        print(f"mismatch at m={r.m} n={r.n} {r.kind}: golden {r.golden} got {r.gf2}/{r.shelling}",
              file=sys.stderr)
    return code, text.rstrip("\n")


def cmd_verify(args) -> tuple[int, str]:
    from .verify import sweep_pairs, verify_all

    if args.sweep:
        pairs = list(sweep_pairs(args.sweep, args.max_run))
    else:
        nu, deltas = _parse_nu_delta(args)
        pairs = [(nu, d) for d in deltas]
    reports = []
    for nu, d in pairs:
        rep = verify_all(nu, d, cap=args.max_elements, rational=args.rational)
        reports.append(rep)
    ok = all(r.ok for r in reports)
    if args.format == "json":
        body = _dump({"schema": SCHEMA, "ok": ok, "count": len(reports),
                      "reports": [r.to_json() for r in reports]})
    else:
        lines = [f"{'PASS' if r.ok else 'FAIL'} {r.title}" + ("" if r.ok else f" :: {'; '.join(r.failures)}")
                 for r in reports]
        lines.append(f"{sum(r.ok for r in reports)}/{len(reports)} passed")
        body = "\n".join(lines)
    return (EXIT_OK if ok else EXIT_FAIL), body


def _render(outputs: list, fmt: str) -> str:
    if fmt == "json":
        return _dump(outputs[0] if len(outputs) == 1 else {"schema": SCHEMA, "items": outputs})
    return "\n\n".join(str(o) for o in outputs)


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="altnu", description="Canonical join complexes of alt nu-Tamari lattices.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nu", help="east runs (nu_0,...,nu_n), e.g. '(0,2,2,2)', or a word like NENENE")
    common.add_argument("--delta", help="explicit vector, 'tamari' (delta=nu), 'dyck' (delta=0) or 'all'")
    common.add_argument("--format", choices=["json", "csv", "dot", "ascii"], default=None,
                        help="output format (default: csv for table1, json otherwise)")
    common.add_argument("--mode", choices=["refined", "plain"], default="refined", help="shelling order")
    common.add_argument("--max-elements", type=int, default=DEFAULT_ELEMENT_CAP, help="lattice size cap")
    common.add_argument("--rational", action="store_true", help="homology over Q instead of GF(2)")
    common.add_argument("--rearrange", action="store_true", help="put larger facets first in the shelling")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("lattice", parents=[common], help="the lattice with labelled covers")
    sub.add_parser("complex", parents=[common], help="box complex, invariants and the isomorphism check")
    t = sub.add_parser("table1", parents=[common], help="recompute the Betti table for (NE^m)^n")
    t.add_argument("--m-min", type=int, default=2)
    t.add_argument("--m-max", type=int, default=7)
    t.add_argument("--n-min", type=int, default=2)
    t.add_argument("--n-max", type=int, default=6)
    t.add_argument("--lattice", action="store_true", help="also build the lattice and its canonical join complex")
    t.add_argument("--slow", action="store_true", help="include the largest lattices with --lattice")
    v = sub.add_parser("verify", parents=[common], help="run the full check battery")
    v.add_argument("--sweep", type=int, default=0, help="sweep every nu with at most this many north steps")
    v.add_argument("--max-run", type=int, default=3, help="largest east run in a sweep")
    return p


COMMANDS = {"lattice": cmd_lattice, "complex": cmd_complex, "table1": cmd_table1, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.format is None:
        args.format = "csv" if args.command == "table1" else "json"
    elif args.command == "table1" and args.format not in ("csv", "json"):
        print("error: table1 writes csv or json", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LatticeError, SizeLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
