"""JSON-in, JSON-out command line frontend.

Exit codes: 0 success, 1 the polytope document was rejected by validation,
2 any other failure (malformed input, unsupported computation, a failed
verification check).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Sequence

from . import __version__
from .adjoint import adjoint, check_vanishing, surface_adjoint
from .algebra import ExactScalar
from .errors import DocumentError, PolyminkError, ValidationError
from .oracle import run_checks
from .polytope import Polytope, nonface_subspaces, validate
from .tensor import METHODS, BigradedTensor, surface_tensor, volume_tensor


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(doc, dict):
        raise DocumentError("polytope document must be a JSON object")
    for key in ("dim", "vertices"):
        if key not in doc:
            raise DocumentError(f"missing field {key!r}")
    if not isinstance(doc["dim"], int) or isinstance(doc["dim"], bool):
        raise DocumentError("'dim' must be an integer")
    if not isinstance(doc["vertices"], list) or not all(isinstance(v, list) for v in doc["vertices"]):
        raise DocumentError("'vertices' must be a list of coordinate lists")
    facets = doc.get("facets")
    if facets is not None and not (
        isinstance(facets, list)
        and all(isinstance(f, list) and all(isinstance(i, int) for i in f) for f in facets)
    ):
        raise DocumentError("'facets' must be a list of integer index lists")
    return doc


def polytope_from_document(doc: dict) -> Polytope:
    try:
        return validate(doc["dim"], doc["vertices"], doc.get("facets"))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad coordinate: {exc}") from None


def polytope_hash(P: Polytope) -> str:
    canonical = json.dumps(P.to_document(), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()


def scalar_doc(x: ExactScalar, with_float: bool) -> dict:
    out = x.to_json()
    if with_float:
        out["float"] = float(x)
    return out


def dumps(doc: dict) -> str:
    """Canonical rendering: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def tensor_document(T: BigradedTensor, P: Polytope, with_float: bool) -> dict:
    return T.to_json(with_float=with_float, polytope_hash=polytope_hash(P))


def parse_tensor_document(text: str) -> BigradedTensor:
    return BigradedTensor.from_json(json.loads(text))


def cmd_validate(P: Polytope, args) -> dict:
    return {
        "status": "ok",
        "dim": P.dim,
        "num_vertices": P.num_vertices,
        "simplicial": P.is_simplicial,
        "volume": scalar_doc(ExactScalar.rational(P.volume), args.float),
        "facets": [
            {
                "id": f.id,
                "vertices": list(f.vertex_ids),
                "normal": [str(x) for x in f.normal],
                "volume": scalar_doc(f.volume, args.float),
            }
            for f in P.facets
        ],
    }


def cmd_adjoint(P: Polytope, args) -> dict:
    p = adjoint(P)
    return {"polynomial": p.to_json(), "text": str(p), "degree": p.total_degree}


def cmd_surface_adjoint(P: Polytope, args) -> dict:
    sa = surface_adjoint(P, args.s)
    doc = sa.to_json()
    doc["degree"] = sa.degree()
    if args.float:
        for row, fid in zip(doc["facets"], sorted(sa.per_facet)):
            row["weight"]["float"] = float(sa.weights[fid])
    return doc


def _subspace_doc(S) -> dict:
    return {
        "defining_vertices": list(S.defining_indices),
        "point": [str(x) for x in S.point],
        "directions": [[str(x) for x in v] for v in S.directions],
    }


def cmd_check_vanishing(P: Polytope, args) -> dict:
    results = []
    ad = adjoint(P)
    for S in nonface_subspaces(P):
        cert = check_vanishing(ad, S, seed=args.seed)
        results.append({"target": "adjoint", "subspace": _subspace_doc(S), **cert.to_json()})
    sa = surface_adjoint(P)
    for f in P.facets:
        for S in nonface_subspaces(P, f.id):
            cert = check_vanishing(sa.per_facet[f.id], S, seed=args.seed)
            results.append(
                {"target": f"surface_adjoint[{f.id}]", "subspace": _subspace_doc(S), **cert.to_json()}
            )
    passed = all(r["status"] == "PASS" for r in results)
    return {"status": "PASS" if passed else "FAIL", "seed": args.seed, "results": results}


def cmd_volume_tensor(P: Polytope, args) -> dict:
    return tensor_document(volume_tensor(P, args.r), P, args.float)


def cmd_surface_tensor(P: Polytope, args) -> dict:
    return tensor_document(surface_tensor(P, args.r, args.s, args.method), P, args.float)


def cmd_verify(P: Polytope, args) -> dict:
    checks = run_checks(P, max_degree=args.max_degree, max_s=args.s, seed=args.seed)
    passed = all(c["status"] != "FAIL" for c in checks)
    return {"status": "PASS" if passed else "FAIL", "checks": checks}


COMMANDS = {
    "validate": cmd_validate,
    "adjoint": cmd_adjoint,
    "surface-adjoint": cmd_surface_adjoint,
    "volume-tensor": cmd_volume_tensor,
    "surface-tensor": cmd_surface_tensor,
    "check-vanishing": cmd_check_vanishing,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polymink", description="Exact Minkowski tensors of convex polytopes."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-", help="polytope JSON document ('-' for stdin)")
    common.add_argument("--float", action="store_true", help="add float renderings of exact values")
    common.add_argument("--seed", type=int, default=0, help="seed for vanishing sample points")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("volume-tensor", "surface-tensor"):
            p.add_argument("--r", type=int, default=0)
        if name in ("surface-tensor", "surface-adjoint", "verify"):
            p.add_argument("--s", type=int, default=2 if name == "verify" else 0)
        if name == "surface-tensor":
            p.add_argument("--method", choices=METHODS, default="formula")
        if name == "verify":
            p.add_argument("--max-degree", type=int, default=3)
    return parser


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    for flag in ("r", "s", "max_degree"):
        if getattr(args, flag, 0) < 0:
            stdout.write(dumps({"error": {"code": "bad_argument", "message": f"--{flag.replace('_', '-')} must be >= 0"}}))
            return 2
    try:
        P = polytope_from_document(load_document(_read_input(args.input)))
        out = COMMANDS[args.command](P, args)
    except ValidationError as exc:
        stdout.write(dumps({"error": {"code": exc.code, "message": str(exc)}}))
        return 1
    except PolyminkError as exc:
        stdout.write(dumps({"error": {"code": exc.code, "message": str(exc)}}))
        return 2
    if args.command != "volume-tensor" and args.command != "surface-tensor":
        out["polytope_hash"] = polytope_hash(P)
    stdout.write(dumps(out))
    if out.get("status") == "FAIL":
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
