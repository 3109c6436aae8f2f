"""Structured-text documents for spaces, plus the CLI sequence literal.

A space document is YAML with three keys::

    points: [1, 2, 3]
    dist:
    - [0, 1, "1/sqrt(2)"]
    - [1, 0, 1]
    - ["1/sqrt(2)", 1, 0]
    alpha:
    - [1, 1, 1]
    - [1, 1, "sqrt(2)"]
    - [1, "sqrt(2)", 1]

Tables are row-major, indexed by the ``points`` order. Entries are numbers or
small expressions (``sqrt(x)`` and a single division), so golden files can
carry exact irrational values without precision drift. Reals are emitted with
up to 12 significant digits.
"""

from __future__ import annotations

import math
import re
from typing import Iterable

import yaml

from .sequences import EpSequence
from .spaces import ControlledSpace, ShapeError, SpaceSpec


class LoadError(ValueError):
    """Document cannot be parsed: bad syntax, missing field, bad entry."""


_NUMBER = r"[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?"
_TERM = rf"(?:{_NUMBER}|sqrt\(\s*{_NUMBER}\s*\))"
_EXPR_RE = re.compile(rf"^\s*(-?)\s*({_TERM})\s*(?:/\s*({_TERM})\s*)?$")


def _eval_term(text: str) -> float:
    text = text.strip()
    if text.startswith("sqrt"):
        return math.sqrt(float(text[text.index("(") + 1 : text.rindex(")")]))
    return float(text)


def parse_real(value, where: str = "value") -> float:
    """A table entry: a number, or an expression like ``1/sqrt(2)``."""
    if isinstance(value, bool):
        raise LoadError(f"{where}: expected a real number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _EXPR_RE.match(value)
        if not m:
            raise LoadError(
                f"{where}: cannot parse {value!r} "
                "(expected a number, sqrt(x), or a single division of those)"
            )
        sign, num, den = m.groups()
        out = _eval_term(num) / (_eval_term(den) if den else 1.0)
        return -out if sign else out
    raise LoadError(f"{where}: expected a real number, got {type(value).__name__}")


def _parse_table(doc: dict, key: str, n: int) -> list[list[float]]:
    if key not in doc:
        raise ShapeError(f"missing {key} table")
    rows = doc[key]
    if not isinstance(rows, list):
        raise ShapeError(f"{key} must be a list of rows")
    if len(rows) != n:
        raise ShapeError(f"{key} has {len(rows)} rows, expected {n}")
    table = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ShapeError(f"{key} row {i} must be a list")
        if len(row) != n:
            raise ShapeError(f"{key} row {i} has {len(row)} entries, expected {n}")
        table.append([parse_real(v, where=f"{key}[{i}][{j}]") for j, v in enumerate(row)])
    return table


def load_space(text: str) -> SpaceSpec:
    """Parse a space document. Shape is enforced here; the axioms are not."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        at = f" at line {mark.line + 1}" if mark is not None else ""
        raise LoadError(f"invalid document syntax{at}: {exc}") from exc
    if not isinstance(doc, dict):
        raise LoadError("document must be a mapping with points, dist and alpha")
    if "points" not in doc:
        raise LoadError("missing required field 'points'")
    points = doc["points"]
    if not isinstance(points, list) or not points:
        raise LoadError("points must be a nonempty list")
    for p in points:
        if isinstance(p, bool) or not isinstance(p, (int, str)):
            raise LoadError(f"point ids must be integers or strings, got {p!r}")
    n = len(points)
    dist = _parse_table(doc, "dist", n)
    alpha = _parse_table(doc, "alpha", n)
    extra = set(doc) - {"points", "dist", "alpha"}
    if extra:
        raise LoadError(f"unknown fields: {sorted(extra)}")
    return SpaceSpec(points=tuple(points), dist=dist, alpha=alpha)


def format_real(x: float) -> str:
    """Decimal with up to 12 significant digits."""
    return "%.12g" % x


_BARE_STRING = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")


def _scalar(p) -> str:
    if isinstance(p, bool) or not isinstance(p, (int, str)):
        raise ValueError(f"cannot serialize point id {p!r}")
    if isinstance(p, int):
        return str(p)
    if _BARE_STRING.match(p) and p.lower() not in ("true", "false", "null", "yes", "no"):
        return p
    return '"' + p.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dump_space(spec: SpaceSpec) -> str:
    """Emit a space document; loading it back reproduces the tables to 12
    significant digits."""
    lines = ["points: [" + ", ".join(_scalar(p) for p in spec.points) + "]"]
    for key, table in (("dist", spec.dist), ("alpha", spec.alpha)):
        lines.append(f"{key}:")
        for row in table:
            lines.append("- [" + ", ".join(format_real(v) for v in row) + "]")
    return "\n".join(lines) + "\n"


def parse_sequence_literal(text: str, space: ControlledSpace) -> EpSequence:
    """``"c1,c2,..."`` or ``"p1,p2|c1,c2,..."``: prefix then repeating cycle.

    Tokens are matched against the space's points by their string form.
    """
    by_name = {str(p): p for p in space.points}

    def resolve(tokens: str, part: str) -> tuple:
        out = []
        for tok in tokens.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if tok not in by_name:
                raise ValueError(f"unknown point {tok!r} in sequence {part}")
            out.append(by_name[tok])
        return tuple(out)

    if "|" in text:
        prefix_part, cycle_part = text.split("|", 1)
    else:
        prefix_part, cycle_part = "", text
    prefix = resolve(prefix_part, "prefix")
    cycle = resolve(cycle_part, "cycle")
    if not cycle:
        raise ValueError("sequence literal needs a nonempty cycle")
    return EpSequence(prefix=prefix, cycle=cycle)


def sequence_literal(seq: EpSequence) -> str:
    cycle = ",".join(str(v) for v in seq.cycle)
    if seq.prefix:
        return ",".join(str(v) for v in seq.prefix) + "|" + cycle
    return cycle
