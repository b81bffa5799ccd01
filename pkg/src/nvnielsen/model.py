"""Reading and writing group/map description files.

A model file is a JSON document::

    {"group": {"dimension": 2,
               "lattice_basis": [["1", "0"], ["0", "1"]],
               "coset_reps": [{"A": [["1", "0"], ["0", "1"]], "a": ["0", "0"]}, ...],
               "lattice_names": ["a", "b^2"], "coset_names": ["1", "b"]},
     "map": {"n": 2, "factors": [{"Phi": [...], "g": [...]}, ...]}}

Matrices are lists of rows and the lattice basis vectors are the columns of
``lattice_basis``. Numbers are strings ``"p"`` or ``"p/q"``; JSON integers
are accepted, decimals are not. The ``map`` section and the name lists are
optional.
"""

from __future__ import annotations

import json
import re
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from .exact import fmt
from .group import AffineElement, CrystalGroup
from .lattice import IntLattice
from .nmap import Factor, NMapLift

_NUMBER = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*")


class ModelError(ValueError):
    """Schema or syntax problem in a model file; ``field`` names the location."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


def parse_number(raw, field: str) -> Fraction:
    if isinstance(raw, bool):
        raise ModelError(field, f"expected a number string, got {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, (float, Decimal)):
        raise ModelError(field, f"decimal {raw} is not allowed; write exact fractions (use 1/2, not 0.5)")
    if not isinstance(raw, str):
        raise ModelError(field, f"expected a number string, got {type(raw).__name__}")
    m = _NUMBER.fullmatch(raw)
    if m is None:
        if re.fullmatch(r"\s*[+-]?\d*\.\d*(e[+-]?\d+)?\s*", raw, re.I) and any(ch.isdigit() for ch in raw):
            raise ModelError(field, f"decimal {raw!r} is not allowed; write exact fractions (use 1/2, not 0.5)")
        raise ModelError(field, f"cannot read {raw!r} as a rational 'p' or 'p/q'")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ModelError(field, "zero denominator")
    return Fraction(num, den)


def _expect(obj, kind, field: str):
    if not isinstance(obj, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ModelError(field, f"expected {names}, got {type(obj).__name__}")
    return obj


def parse_vector(raw, k: int, field: str) -> tuple[Fraction, ...]:
    _expect(raw, list, field)
    if len(raw) != k:
        raise ModelError(field, f"expected {k} entries, got {len(raw)}")
    return tuple(parse_number(x, f"{field}[{j}]") for j, x in enumerate(raw))


def parse_matrix(raw, k: int, field: str) -> tuple[tuple[Fraction, ...], ...]:
    _expect(raw, list, field)
    if len(raw) != k:
        raise ModelError(field, f"expected {k} rows, got {len(raw)}")
    return tuple(parse_vector(row, k, f"{field}[{r}]") for r, row in enumerate(raw))


def _names(section: dict, key: str, count: int, field: str) -> tuple[str, ...]:
    if key not in section:
        return ()
    names = _expect(section[key], list, f"{field}.{key}")
    if len(names) != count or not all(isinstance(s, str) and s for s in names):
        raise ModelError(f"{field}.{key}", f"expected {count} non-empty strings")
    if len(set(names)) != count:
        raise ModelError(f"{field}.{key}", "names must be distinct")
    return tuple(names)


def _check_keys(section: dict, allowed: set[str], field: str):
    extra = sorted(set(section) - allowed)
    if extra:
        raise ModelError(f"{field}.{extra[0]}", "unknown field")


def group_from_dict(data, field: str = "group") -> CrystalGroup:
    _expect(data, dict, field)
    _check_keys(data, {"dimension", "lattice_basis", "coset_reps", "lattice_names", "coset_names"}, field)
    for key in ("dimension", "lattice_basis", "coset_reps"):
        if key not in data:
            raise ModelError(f"{field}.{key}", "missing")
    k = data["dimension"]
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ModelError(f"{field}.dimension", f"expected a positive integer, got {k!r}")
    B = parse_matrix(data["lattice_basis"], k, f"{field}.lattice_basis")
    reps_raw = _expect(data["coset_reps"], list, f"{field}.coset_reps")
    if not reps_raw:
        raise ModelError(f"{field}.coset_reps", "need at least the identity representative")
    reps = []
    for c, rep in enumerate(reps_raw):
        f = f"{field}.coset_reps[{c}]"
        _expect(rep, dict, f)
        _check_keys(rep, {"A", "a"}, f)
        for key in ("A", "a"):
            if key not in rep:
                raise ModelError(f"{f}.{key}", "missing")
        A = parse_matrix(rep["A"], k, f"{f}.A")
        a = parse_vector(rep["a"], k, f"{f}.a")
        try:
            reps.append(AffineElement(A, a))
        except ValueError as exc:
            raise ModelError(f"{f}.A", str(exc)) from None
    if reps[0] != AffineElement.identity(k):
        raise ModelError(f"{field}.coset_reps[0]", "the first representative must be the identity (I, 0)")
    lattice = IntLattice(B)
    lattice_names = _names(data, "lattice_names", k, field)
    coset_names = _names(data, "coset_names", len(reps), field)
    return CrystalGroup(k, lattice, tuple(reps), lattice_names, coset_names)


def lift_from_dict(data, k: int, field: str = "map") -> NMapLift:
    _expect(data, dict, field)
    _check_keys(data, {"n", "factors"}, field)
    factors_raw = _expect(data.get("factors"), list, f"{field}.factors")
    n = data.get("n", len(factors_raw))
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ModelError(f"{field}.n", f"expected a positive integer, got {n!r}")
    if n != len(factors_raw):
        raise ModelError(f"{field}.n", f"n = {n} but {len(factors_raw)} factors are listed")
    factors = []
    for i, fr in enumerate(factors_raw):
        f = f"{field}.factors[{i}]"
        _expect(fr, dict, f)
        _check_keys(fr, {"Phi", "g"}, f)
        for key in ("Phi", "g"):
            if key not in fr:
                raise ModelError(f"{f}.{key}", "missing")
        factors.append(Factor(parse_matrix(fr["Phi"], k, f"{f}.Phi"), parse_vector(fr["g"], k, f"{f}.g")))
    return NMapLift(tuple(factors))


def model_from_dict(data) -> tuple[CrystalGroup, NMapLift | None]:
    _expect(data, dict, "")
    _check_keys(data, {"group", "map"}, "")
    if "group" not in data:
        raise ModelError("group", "missing")
    group = group_from_dict(data["group"])
    lift = lift_from_dict(data["map"], group.dimension) if "map" in data else None
    return group, lift


def load_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ModelError(f"line {exc.lineno}, column {exc.colno}", f"invalid JSON: {exc.msg}") from None


def parse_model(path) -> tuple[CrystalGroup, NMapLift | None]:
    """Group and optional lift described by the file at ``path``."""
    return model_from_dict(load_json(path))


def _num(x) -> str:
    return str(fmt(x))


def _mat(M) -> list[list[str]]:
    return [[_num(x) for x in row] for row in M]


def group_to_dict(group: CrystalGroup) -> dict:
    return {
        "dimension": group.dimension,
        "lattice_basis": _mat(group.basis),
        "coset_reps": [{"A": _mat(c.A), "a": [_num(x) for x in c.a]} for c in group.cosets],
        "lattice_names": list(group.lattice_names),
        "coset_names": list(group.coset_names),
    }


def lift_to_dict(lift: NMapLift) -> dict:
    return {
        "n": lift.n,
        "factors": [{"Phi": _mat(F.Phi), "g": [_num(x) for x in F.g]} for F in lift.factors],
    }


def model_to_dict(group: CrystalGroup, lift: NMapLift | None = None) -> dict:
    out = {"group": group_to_dict(group)}
    if lift is not None:
        out["map"] = lift_to_dict(lift)
    return out


_FLAT_LIST = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")


def to_json_text(obj) -> str:
    """Indented JSON with every list of scalars kept on one line."""
    text = json.dumps(obj, indent=2)
    return _FLAT_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",\n")) + "]", text) + "\n"


def dump_model(group: CrystalGroup, lift: NMapLift | None = None) -> str:
    """Canonical text of a model; ``parse_model`` of it gives the same objects."""
    return to_json_text(model_to_dict(group, lift))
