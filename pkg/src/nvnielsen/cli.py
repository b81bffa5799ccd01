"""Command-line front end.

Every command prints one JSON document on standard output. Integers are
bare, other rationals are ``"p/q"`` strings and an infinite count is
``"inf"``. Exit status is 0 on success, 1 when a group or map fails
validation or an internal consistency check fails, and 2 for usage and
file-format errors. Factor numbers on the command line and in the output
start at 1.
"""

from __future__ import annotations

import argparse
import io
import sys
from fractions import Fraction

from .exact import INF, fmt, identity, matmul
from .group import CanonicalElement, CrystalGroup, validate_group
from .lattice import IntLattice
from .model import ModelError, load_json, parse_matrix, parse_model, to_json_text
from .nielsen import (
    IntegralityViolation,
    find_displacement,
    fixed_point_index,
    fixpoint_enumerate,
    nielsen_averaging,
    nielsen_via_classes,
)
from .nmap import MapRejected, NMapLift, analyze, lift_check
from .reidemeister import cokernel_count, enumerate_classes, reidemeister_number_lattice


class Failed(Exception):
    """Validation or consistency failure; the payload is still printed."""

    def __init__(self, payload: dict):
        self.payload = payload
        super().__init__(payload.get("error", "failed"))


def jsonable(x):
    if x is INF or isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _load(path: str, need_map: bool = True) -> tuple[CrystalGroup, NMapLift | None]:
    group, lift = parse_model(path)
    report = validate_group(group)
    if not report.ok:
        raise Failed({
            "valid": False,
            "error": "group validation failed",
            "failures": [_failure(group, f) for f in report.failures],
        })
    if need_map and lift is None:
        raise ModelError("map", "missing; this command needs a map section")
    if lift is not None and lift.dimension != group.dimension:
        raise ModelError("map", "dimension differs from the group")
    return group, lift


def _failure(group: CrystalGroup, f) -> dict:
    out = {"check": f.check, "message": f.message}
    w = f.witness
    if f.check == "torsion":
        out["witness"] = {"element": group.describe(CanonicalElement(w.coset, w.coords)),
                          "order": w.order}
    return out


def _analyze(group, lift):
    try:
        return analyze(group, lift)
    except MapRejected as exc:
        raise Failed({"valid": False, "error": type(exc).__name__, "message": str(exc)}) from None


def _sublattice(group: CrystalGroup, value: str | None) -> IntLattice | None:
    if value is None:
        return None
    try:
        m = int(value)
    except ValueError:
        m = None
    if m is not None:
        if m < 1:
            raise ModelError("--sublattice", "scale must be a positive integer")
        return group.lattice.scaled(m)
    data = load_json(value)
    if isinstance(data, dict):
        if "basis" not in data:
            raise ModelError("basis", "missing")
        data = data["basis"]
    return IntLattice(parse_matrix(data, group.dimension, "basis"))


def _ce(group, ce) -> dict:
    return {"element": group.describe(ce), "coset": group.coset_names[ce.coset], "coords": list(ce.coords)}


def cmd_validate(args) -> dict:
    group, lift = _load(args.file, need_map=False)
    out = {"valid": True, "dimension": group.dimension, "holonomy_order": group.holonomy_order}
    if lift is None:
        return out
    ind, sig = _analyze(group, lift)
    out["n"] = lift.n
    out["generators"] = [
        {"name": name, "sigma": [j + 1 for j in s], "phi": [group.describe(d) for d in p]}
        for name, s, p in zip(ind.names, ind.sigma, ind.phi)
    ]
    out["sigma_classes"] = [[i + 1 for i in cls] for cls in sig.classes]
    out["orbit_sizes"] = list(sig.orbit_size)
    return out


def _averaging_table(group, rep) -> dict:
    return {
        "nielsen": rep.value,
        "quotient_order": rep.quotient_order,
        "determinants": [
            {"coset": group.coset_names[c], "factor": i + 1, "det": d}
            for (c, i), d in sorted(rep.determinants.items())
        ],
    }


def cmd_nielsen(args) -> dict:
    group, lift = _load(args.file)
    ind, sig = _analyze(group, lift)
    sub = _sublattice(group, args.sublattice)
    out: dict = {}
    avg = cls = None
    if args.method in ("averaging", "both"):
        try:
            avg = nielsen_averaging(group, lift, sub)
        except ValueError as exc:
            raise Failed({"error": "bad sublattice", "message": str(exc)}) from None
    if args.method in ("classes", "both"):
        cls = nielsen_via_classes(group, lift, ind, sig)
    if args.method == "both":
        out["nielsen"] = avg.value
        out["agreement"] = avg.value == cls.value
        out["averaging"] = _averaging_table(group, avg)
        out["classes"] = {"nielsen": cls.value, "factors": cls.per_factor()}
        if not out["agreement"]:
            out["error"] = "averaging and class counts disagree"
            raise Failed(out)
    elif avg is not None:
        out = {"nielsen": avg.value, "method": "averaging", **_averaging_table(group, avg)}
    else:
        out = {"nielsen": cls.value, "method": "classes", "factors": cls.per_factor()}
    return out


def cmd_fixpoints(args) -> dict:
    group, lift = _load(args.file)
    _analyze(group, lift)
    rep = fixpoint_enumerate(group, lift)
    return {
        "manifold_fixed_points": rep.isolated_count,
        "points": [list(p) for p in rep.points],
        "lifted": [
            {"factor": r.factor + 1, "coset": group.coset_names[r.coset], "shift": list(r.coords), "x": list(r.x)}
            for r in rep.raw
        ],
        "degenerate": [{"factor": i + 1, "coset": group.coset_names[c]} for i, c in rep.degenerate],
        "non_isolated_components": len(rep.degenerate_branches),
    }


def cmd_classes(args) -> dict:
    group, lift = _load(args.file)
    ind, sig = _analyze(group, lift)
    i = args.factor - 1
    if not 0 <= i < lift.n:
        raise ModelError("--factor", f"must be between 1 and {lift.n}")
    cs = enumerate_classes(group, lift, sig, i)
    out = {
        "factor": args.factor,
        "orbit_size": sig.orbit_size[i],
        "stabilizer_index": sig.index(i),
        "count": cs.count,
        "essential": cs.essential_count,
        "classes": [
            {**_ce(group, c.representative), "index": fixed_point_index(group, lift, i, c.representative)}
            for c in cs.classes
        ],
        "degenerate_cosets": [
            {"coset": group.coset_names[c], "index": 0,
             "displacement": list(find_displacement(*_twisted_factor(group, lift, i, c)))}
            for c in cs.degenerate_cosets
        ],
    }
    return out


def _twisted_factor(group, lift, i, c):
    """Linear and translation parts of ``cosets[c] F_i``."""
    F, rep = lift.factors[i], group.cosets[c]
    return matmul(rep.A, F.Phi), rep(F.g)


def _matrix_file(path: str, key: str):
    data = load_json(path)
    lattice = None
    if isinstance(data, dict):
        if key not in data:
            raise ModelError(key, "missing")
        lattice = data.get("lattice")
        data = data[key]
    if not isinstance(data, list) or not data:
        raise ModelError(key, "expected a non-empty square matrix")
    M = parse_matrix(data, len(data), key)
    L = None
    if lattice is not None:
        L = IntLattice(parse_matrix(lattice, len(M), "lattice"))
    return M, L


def cmd_reidemeister(args) -> dict:
    M, lattice = _matrix_file(args.matrix, "matrix")
    S, _ = _matrix_file(args.sub, "basis")
    k = len(M)
    if len(S) != k:
        raise ModelError("basis", f"expected a {k} x {k} matrix")
    lattice = lattice or IntLattice(identity(k))
    sub = IntLattice(S)
    try:
        value = reidemeister_number_lattice(M, lattice, sub)
        count = cokernel_count(M, lattice, sub)
    except ValueError as exc:
        raise Failed({"error": "bad input", "message": str(exc)}) from None
    out = {"reidemeister": value, "cokernel_count": count, "agreement": value == count}
    if value != count:
        raise Failed({**out, "error": "formula and cokernel count disagree"})
    return out


def cmd_lift_check(args) -> dict:
    group, lift = _load(args.file)
    ind, _ = _analyze(group, lift)
    sub = _sublattice(group, args.sublattice)
    try:
        ob = lift_check(group, lift, ind, sub)
    except ValueError as exc:
        raise Failed({"error": "bad sublattice", "message": str(exc)}) from None
    if ob is None:
        return {"liftable": True}
    return {
        "liftable": False,
        "obstruction": ob.name,
        "factor": ob.factor + 1,
        "image": None if ob.image is None else group.describe(ob.image),
        "reason": ob.reason,
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nvnielsen", description="Nielsen numbers of affine n-valued maps on flat manifolds")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the group and the map")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("nielsen", help="Nielsen number")
    s.add_argument("file")
    s.add_argument("--method", choices=("averaging", "classes", "both"), default="averaging")
    s.add_argument("--sublattice", metavar="M", help="integer M for M*L, or a JSON file with a basis matrix")
    s.set_defaults(func=cmd_nielsen)

    s = sub.add_parser("fixpoints", help="fixed points in the fundamental cell")
    s.add_argument("file")
    s.set_defaults(func=cmd_fixpoints)

    s = sub.add_parser("classes", help="Reidemeister classes of one factor")
    s.add_argument("file")
    s.add_argument("--factor", type=int, required=True, metavar="I")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("reidemeister", help="Reidemeister number of a lattice endomorphism")
    s.add_argument("--matrix", required=True, metavar="FILE")
    s.add_argument("--sub", required=True, metavar="FILE")
    s.set_defaults(func=cmd_reidemeister)

    s = sub.add_parser("lift-check", help="does the map lift to the cover given by a sublattice")
    s.add_argument("file")
    s.add_argument("--sublattice", required=True, metavar="M")
    s.set_defaults(func=cmd_lift_check)
    return p


def emit(payload: dict, stream) -> None:
    stream.write(to_json_text(jsonable(payload)))


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.func(args)
    except ModelError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        stderr.write(f"error: {exc.filename}: no such file\n")
        return 2
    except Failed as exc:
        emit(exc.payload, stdout)
        stderr.write(f"error: {exc}\n")
        return 1
    except (IntegralityViolation, AssertionError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    emit(payload, stdout)
    return 0


def run_command(argv) -> tuple[int, str]:
    """Exit status and standard output text of one invocation."""
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue()


if __name__ == "__main__":
    sys.exit(main())
