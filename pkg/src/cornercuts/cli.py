"""Command line front end.

One verb per capability: classify a body, compute its cut, separate a
gamma vector, find minimum-norm cuts, enumerate all facets, produce
non-extremality witnesses, dump the blocking system, and render SVG
figures.  All output rationals are exact strings; --approx adds decimal
renderings for human reading (marked non-authoritative).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .blocking import (
    L1,
    LINF,
    build_blocking_system,
    is_extreme,
    is_minimal,
    linf_search,
    min_norm_cut,
    separate,
)
from .bodies import (
    Body,
    CornerInstance,
    Cut,
    classify,
    cut_from_body,
    gauge,
)
from .facets import enumerate_facets
from .ratgeom import GeometryError, Q, QVec, parse_q, qstr
from .svgplot import svg_scene
from .tilting import find_nonextremality_witness, lattice_free_realizations

USAGE_ERROR = 2
INTERNAL_ERROR = 1


def parse_instance(source: str) -> CornerInstance:
    """Instance from a JSON file path or a JSON literal string."""
    text = source
    if not source.lstrip().startswith("{"):
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise GeometryError(f"cannot read instance file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"malformed instance JSON: {exc}") from None
    if not isinstance(data, dict) or "f" not in data or "rays" not in data:
        raise GeometryError('instance needs "f" and "rays" fields')
    f_raw = data["f"]
    if not isinstance(f_raw, list) or len(f_raw) != 2:
        raise GeometryError("f must be a pair of rational strings")
    f = QVec((_coord(f_raw[0], "f[1]"), _coord(f_raw[1], "f[2]")))
    rays = []
    for idx, pair in enumerate(data["rays"], start=1):
        if not isinstance(pair, list) or len(pair) != 2:
            raise GeometryError(f"ray {idx} must be a pair of rational strings")
        rays.append(QVec((_coord(pair[0], f"ray {idx}[1]"),
                          _coord(pair[1], f"ray {idx}[2]"))))
    return CornerInstance(f=f, rays=tuple(rays))


def _coord(raw, where: str) -> Q:
    try:
        return parse_q(str(raw))
    except ValueError as exc:
        raise GeometryError(f"{where}: {exc}") from None


def serialize_instance(instance: CornerInstance) -> dict:
    return {"f": instance.f.as_strings(),
            "rays": [r.as_strings() for r in instance.rays]}


def _load_json(path: str, what: str) -> dict:
    text = path
    if not path.lstrip().startswith("{"):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise GeometryError(f"cannot read {what} file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"malformed {what} JSON: {exc}") from None
    return data


def parse_body(source: str, instance: CornerInstance) -> Body:
    data = _load_json(source, "body")
    if "rows" not in data:
        raise GeometryError('body needs a "rows" field')
    rows = []
    for idx, pair in enumerate(data["rows"], start=1):
        rows.append(QVec((_coord(pair[0], f"row {idx}[1]"),
                          _coord(pair[1], f"row {idx}[2]"))))
    return Body(rows=tuple(rows), f=instance.f)


def parse_gamma(source: str, instance: CornerInstance) -> Cut:
    data = _load_json(source, "gamma")
    if "gamma" not in data:
        raise GeometryError('gamma file needs a "gamma" field')
    vals = [(_coord(v, f"gamma[{i + 1}]")) for i, v in enumerate(data["gamma"])]
    if len(vals) != instance.k:
        raise GeometryError("gamma length does not match the ray count")
    return Cut(gamma=tuple(vals))


def _approximate(obj):
    if isinstance(obj, dict):
        return {k: _approximate(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_approximate(v) for v in obj]
    if isinstance(obj, str) and "/" in obj:
        try:
            return float(Q(obj))
        except ValueError:
            return obj
    return obj


def _emit(payload: dict, args) -> None:
    if args.approx:
        payload = dict(payload)
        payload["approx"] = _approximate(
            {k: v for k, v in payload.items() if k != "approx"})
        payload["approx_note"] = "decimal renderings are not authoritative"
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _body_payload(body: Body) -> List[List[str]]:
    return body.as_matrix_strings()


def cmd_classify(args) -> int:
    instance = parse_instance(args.instance)
    body = parse_body(args.body, instance)
    cls = classify(body)
    payload = {"tag": cls.tag}
    if cls.facet_points:
        payload["facet_points"] = [[y.as_strings() for y in pts]
                                   for pts in cls.facet_points]
        payload["facets"] = [[p.as_strings(), q.as_strings()]
                             for p, q in cls.facets]
    if cls.split_normal is not None:
        payload["split_normal"] = cls.split_normal.as_strings()
        payload["split_offset"] = str(cls.split_offset)
    if cls.witness is not None:
        payload["witness"] = cls.witness.as_strings()
    if cls.note:
        payload["note"] = cls.note
    _emit(payload, args)
    return 0


def cmd_cut(args) -> int:
    instance = parse_instance(args.instance)
    body = parse_body(args.body, instance)
    cut = cut_from_body(body, instance)
    _emit({"gamma": cut.as_strings()}, args)
    return 0


def cmd_separate(args) -> int:
    instance = parse_instance(args.instance)
    cut = parse_gamma(args.gamma, instance)
    res = separate(instance, cut)
    if res.valid:
        _emit({"valid": True}, args)
    else:
        _emit({"valid": False,
               "witness": res.x.as_strings(),
               "I": [res.I[0] + 1, res.I[1] + 1],
               "lhs": qstr(res.lhs)}, args)
    return 0


def cmd_mincut(args) -> int:
    instance = parse_instance(args.instance)
    norm = {"l1": L1, "linf": LINF}[args.norm]
    if args.method == "search":
        if norm != LINF:
            raise GeometryError("the search method applies to the linf norm only")
        alpha, cut = linf_search(instance)
        _emit({"norm": "linf", "method": "search",
               "alpha": qstr(alpha), "value": qstr(1 / alpha),
               "gamma": cut.as_strings()}, args)
        return 0
    cut, value = min_norm_cut(instance, norm)
    _emit({"norm": args.norm, "method": "lp", "value": qstr(value),
           "gamma": cut.as_strings()}, args)
    return 0


def cmd_enumerate(args) -> int:
    instance = parse_instance(args.instance)
    facets = enumerate_facets(instance)
    out = []
    for fc in facets.cuts:
        cand = fc.candidates[0]
        out.append({
            "gamma": fc.cut.as_strings(),
            "family": cand.family,
            "body_rows": _body_payload(cand.body),
            "certificate_rank": fc.certificate.rank,
            "tight_rows": list(fc.certificate.tight_rows),
        })
    _emit({"facets": out, "count": len(out)}, args)
    return 0


def cmd_witness(args) -> int:
    instance = parse_instance(args.instance)
    body = parse_body(args.body, instance)
    witness = find_nonextremality_witness(body, instance)
    if witness is None:
        _emit({"witness": None,
               "note": "no tilting witness found; the cut may be extreme"}, args)
        return 0
    payload = {
        "gamma": [qstr(g) for g in witness.gamma],
        "gamma_plus": [qstr(g) for g in witness.gamma_plus],
        "gamma_minus": [qstr(g) for g in witness.gamma_minus],
        "epsilon": qstr(witness.epsilon),
        "direction": [d.as_strings() for d in witness.direction],
        "bodies": {"plus": _body_payload(witness.body_plus),
                   "minus": _body_payload(witness.body_minus)},
    }
    if args.explicit_edge:
        plus, minus = lattice_free_realizations(witness, instance)
        payload["lattice_free_bodies"] = {"plus": _body_payload(plus),
                                          "minus": _body_payload(minus)}
    _emit(payload, args)
    return 0


def cmd_blocking(args) -> int:
    instance = parse_instance(args.instance)
    system = build_blocking_system(instance)
    if args.dump:
        sys.stdout.write(system.dump() + "\n")
        return 0
    _emit({"rows": len(system.rows)}, args)
    return 0


def cmd_plot(args) -> int:
    instance = parse_instance(args.instance)
    body = parse_body(args.body, instance) if args.body else None
    svg = svg_scene(instance, body)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cornercuts",
        description="Exact cuts from lattice-free bodies for the two-row "
                    "corner relaxation")
    parser.add_argument("--instance", "-i", required=True,
                        help="instance JSON file (or literal JSON)")
    parser.add_argument("--approx", action="store_true",
                        help="add non-authoritative decimal renderings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a body")
    p.add_argument("body")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cut", help="intersection cut of a body")
    p.add_argument("body")
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("separate", help="validity of a gamma vector")
    p.add_argument("gamma")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("mincut", help="minimum-norm valid inequality")
    p.add_argument("--norm", choices=["l1", "linf"], required=True)
    p.add_argument("--method", choices=["lp", "search"], default="lp")
    p.set_defaults(func=cmd_mincut)

    p = sub.add_parser("enumerate", help="all facets of the integer hull")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("witness", help="non-extremality witness for a body")
    p.add_argument("body")
    p.add_argument("--explicit-edge", action="store_true",
                   help="also emit explicit lattice-free realizations")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("blocking", help="the blocking inequality system")
    p.add_argument("--dump", action="store_true",
                   help="print one inequality per line")
    p.set_defaults(func=cmd_blocking)

    p = sub.add_parser("plot", help="SVG rendering of the instance")
    p.add_argument("--body", help="body JSON file to draw")
    p.add_argument("--out", help="output SVG path (default: stdout)")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # pragma: no cover - internal failures
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
