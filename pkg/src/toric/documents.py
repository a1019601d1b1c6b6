"""
JSON codec for complex documents and reports.

Rationals travel as "p/q" strings or JSON integers; decimal literals are
rejected so that every number stays exact. Reports are written with sorted
keys so identical inputs give byte-identical output.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional
import hashlib
import json
import logging
import re

from .conf import get_setting
from .exceptions import DocumentError
from .mcomplex import GENERATORS, LATTICE_FAMILY, MODES, MonoidalComplex, RawComplex, validate

logger = logging.getLogger(__name__)

RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


class _DecimalLiteral(str):
    """A JSON number with a fraction or exponent, kept as text until a field reads it."""


def parse_rational(value: Any, name: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, _DecimalLiteral):
        raise DocumentError(f"{name}: {value} is not an exact rational, write it as \"p/q\"", field=name)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = RATIONAL.match(value)
        if match:
            num, den = match.groups()
            if den is not None and int(den) == 0:
                raise DocumentError(f"{name}: zero denominator", field=name)
            return Fraction(int(num), int(den or 1))
    raise DocumentError(f"{name}: {value!r} is not a rational \"p/q\"", field=name)


def _integer(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(f"{name}: expected an integer, got {value!r}", field=name)
    return value


def _vectors(value: Any, d: int, name: str) -> list[tuple[int, ...]]:
    if not isinstance(value, list):
        raise DocumentError(f"{name}: expected a list of vectors", field=name)
    out = []
    for i, v in enumerate(value):
        if not isinstance(v, list) or len(v) != d:
            raise DocumentError(f"{name}[{i}]: expected a vector of length {d}", field=f"{name}[{i}]")
        out.append(tuple(_integer(x, f"{name}[{i}][{j}]") for j, x in enumerate(v)))
    return out


def _named_cones(value: Any, d: int, name: str) -> dict[str, list]:
    if not isinstance(value, list):
        raise DocumentError(f"{name}: expected a list of {{id, generators}} objects", field=name)
    out = {}
    for i, entry in enumerate(value):
        where = f"{name}[{i}]"
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise DocumentError(f"{where}: expected an object with a string id", field=where)
        if entry["id"] in out:
            raise DocumentError(f"{where}: duplicate id {entry['id']!r}", field=where)
        out[entry["id"]] = _vectors(entry.get("generators", []), d, f"{where}.generators")
    return out


def _keyed_vectors(value: Any, d: int, name: str) -> dict[str, list]:
    if not isinstance(value, dict):
        raise DocumentError(f"{name}: expected an object keyed by cone id", field=name)
    return {k: _vectors(v, d, f"{name}.{k}") for k, v in value.items()}


@dataclass(frozen=True)
class ComplexDocument:
    schema_version: int
    lattice_rank: int
    characteristic: int
    mode: str
    maximal_cones: dict[str, list]
    faces: dict[str, list] = field(default_factory=dict)
    semigroups: dict[str, list] = field(default_factory=dict)
    lattices: dict[str, list] = field(default_factory=dict)
    boundary: dict[str, Fraction] = field(default_factory=dict)
    digest: str = ""

    def to_raw(self, characteristic: Optional[int] = None) -> RawComplex:
        return RawComplex(
            self.lattice_rank,
            self.maximal_cones,
            self.mode,
            faces=self.faces,
            semigroups=self.semigroups,
            lattices=self.lattices,
            characteristic=self.characteristic if characteristic is None else characteristic,
        )

    def build(self, characteristic: Optional[int] = None) -> MonoidalComplex:
        return validate(self.to_raw(characteristic))


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def load_document(text: str, source: str = "<document>") -> ComplexDocument:
    try:
        data = json.loads(text, parse_float=_DecimalLiteral)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}", line=exc.lineno, column=exc.colno
        ) from exc
    if not isinstance(data, dict):
        raise DocumentError(f"{source}: the document must be a JSON object")

    version = _integer(data.get("schema_version", get_setting("SCHEMA_VERSION")), "schema_version")
    if version != get_setting("SCHEMA_VERSION"):
        raise DocumentError(f"schema_version {version} is not supported", field="schema_version")
    d = _integer(data.get("lattice_rank"), "lattice_rank")
    if d < 0:
        raise DocumentError("lattice_rank must be non-negative", field="lattice_rank")
    mode = data.get("mode", LATTICE_FAMILY)
    if mode not in MODES:
        raise DocumentError(f"mode must be one of {', '.join(MODES)}", field="mode")
    boundary = data.get("boundary", {})
    if not isinstance(boundary, dict):
        raise DocumentError("boundary: expected an object keyed by prime id", field="boundary")

    doc = ComplexDocument(
        schema_version=version,
        lattice_rank=d,
        characteristic=_integer(data.get("characteristic", 0), "characteristic"),
        mode=mode,
        maximal_cones=_named_cones(data.get("maximal_cones"), d, "maximal_cones"),
        faces=_named_cones(data.get("faces", []), d, "faces"),
        semigroups=_keyed_vectors(data.get("semigroups", {}), d, "semigroups"),
        lattices=_keyed_vectors(data.get("lattices", {}), d, "lattices"),
        boundary={k: parse_rational(v, f"boundary.{k}") for k, v in sorted(boundary.items())},
        digest=digest(text),
    )
    logger.debug("loaded %s: %d maximal cones, mode %s", source, len(doc.maximal_cones), mode)
    return doc


def read_document(path: str) -> ComplexDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}", field="path") from exc
    return load_document(text, source=path)


def dump_complex(mc: MonoidalComplex, boundary: Optional[dict[str, str]] = None) -> dict:
    """A document that validates back to ``mc``."""
    out = {
        "schema_version": get_setting("SCHEMA_VERSION"),
        "lattice_rank": mc.ambient_rank,
        "characteristic": mc.characteristic,
        "mode": mc.mode,
        "maximal_cones": [
            {"id": mc.name(F), "generators": [list(g) for g in F.cone_generators]} for F in mc.facets
        ],
    }
    lower = [c for c in mc.cones if not mc.is_facet(c)]
    if mc.mode == GENERATORS:
        out["semigroups"] = {
            mc.name(F): [list(g) for g in mc.semigroup_generators(F)] for F in mc.facets
        }
    else:
        out["faces"] = [{"id": mc.name(c), "generators": [list(g) for g in c.cone_generators]} for c in lower]
        out["lattices"] = {mc.name(c): [list(b) for b in mc.lattice(c).basis] for c in mc.cones}
    if boundary:
        out["boundary"] = dict(sorted(boundary.items()))
    return out


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def report(document: Optional[ComplexDocument], **sections: Any) -> dict:
    out = {"schema_version": get_setting("SCHEMA_VERSION")}
    if document is not None:
        out["input_digest"] = document.digest
    out.update(sections)
    return out
