"""Lattice JSON / DOT formats and inline generator specs (``gen:boolean:3``)."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Union

from .lattice import (
    FiniteOml,
    RawLatticeSpec,
    gen_boolean,
    gen_greechie,
    gen_horizontal_sum,
    gen_mo,
    gen_product,
    validate,
)


class LatticeFormatError(ValueError):
    """Input is not a well-formed lattice document or generator spec."""


def spec_from_dict(doc: dict) -> RawLatticeSpec:
    try:
        names = tuple(doc["elements"])
        order = doc["order"]
        kind = order.get("kind", "covers")
        pairs = tuple((int(i), int(j)) for i, j in order["pairs"])
        ortho = dict(doc["ortho"])
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise LatticeFormatError(f"malformed lattice document: {exc}") from exc
    try:
        return RawLatticeSpec(names, pairs, ortho, kind=kind)
    except ValueError as exc:
        raise LatticeFormatError(str(exc)) from exc


def spec_to_dict(lat: FiniteOml, kind: str = "covers") -> dict:
    pairs = lat.covers() if kind == "covers" else [list(p) for p in lat.to_spec().pairs]
    return {
        "elements": list(lat.names),
        "order": {"kind": kind, "pairs": [list(p) for p in pairs]},
        "ortho": {lat.names[i]: lat.names[lat.ortho(i)] for i in range(lat.n)},
    }


def read_spec(path: Union[str, Path]) -> RawLatticeSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LatticeFormatError(f"{path}: {exc}") from exc
    return spec_from_dict(doc)


def dumps_lattice(lat: FiniteOml, kind: str = "covers") -> str:
    return json.dumps(spec_to_dict(lat, kind), indent=2, ensure_ascii=False)


def to_dot(lat: FiniteOml) -> str:
    """Hasse diagram in Graphviz DOT; edges point upward so bottom renders lowest."""
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i, name in enumerate(lat.names):
        lines.append(f"  n{i} [label={json.dumps(name, ensure_ascii=False)}];")
    for i, j in lat.covers():
        lines.append(f"  n{i} -> n{j} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _split_top(arg: str) -> list:
    """Split on commas that are not nested inside brackets."""
    parts, depth, cur = [], 0, ""
    for ch in arg:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def _strip_brackets(s: str) -> str:
    return s[1:-1] if s[:1] == "[" and s[-1:] == "]" else s


def parse_generator(spec: str) -> FiniteOml:
    """Build a lattice from an inline generator spec.

    Forms: ``gen:boolean:k``, ``gen:mo:k``, ``gen:product:X,Y``, ``gen:hsum:X,Y``
    and ``gen:greechie:abc/cde`` (blocks of single-character atoms separated by
    ``/``). Operands X, Y may be wrapped in brackets to nest, e.g.
    ``gen:product:[gen:boolean:1],[gen:mo:2]``.
    """
    if not spec.startswith("gen:"):
        raise LatticeFormatError(f"not a generator spec: {spec!r}")
    body = spec[4:]
    kind, _, arg = body.partition(":")
    try:
        if kind == "boolean":
            return gen_boolean(int(arg))
        if kind == "mo":
            return gen_mo(int(arg))
        if kind in ("product", "hsum"):
            parts = _split_top(arg)
            if len(parts) != 2:
                raise LatticeFormatError(f"{kind} needs exactly two operands, got {parts}")
            left, right = (parse_generator(_strip_brackets(p)) for p in parts)
            return gen_product(left, right) if kind == "product" else gen_horizontal_sum(left, right)
        if kind == "greechie":
            return gen_greechie([tuple(block) for block in arg.split("/")])
    except ValueError as exc:
        if isinstance(exc, LatticeFormatError):
            raise
        if type(exc) is ValueError:
            raise LatticeFormatError(f"bad generator argument in {spec!r}: {exc}") from exc
        raise
    raise LatticeFormatError(f"unknown generator {kind!r}")


def load_source(source: str) -> RawLatticeSpec | FiniteOml:
    """A generator spec yields a validated lattice; a path yields a raw spec."""
    if source.startswith("gen:"):
        return parse_generator(source)
    return read_spec(source)


def load_lattice(source: str) -> FiniteOml:
    obj = load_source(source)
    return obj if isinstance(obj, FiniteOml) else validate(obj)


def write_atomic(path: Union[str, Path], text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
