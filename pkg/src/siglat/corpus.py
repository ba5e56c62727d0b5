"""Group specifications: the JSON group-file format and the builtin corpus.

A group file is a JSON object::

    {"name": "S3", "degree": 3, "generators": ["(1 2)", "(1 2 3)"]}

Points are 1-based in cycle notation; an optional ``"order"`` is checked
against the generated group.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError
from .perm import Group, generate_group, parse_cycles


@dataclass(frozen=True)
class GroupSpec:
    name: str
    degree: int
    generators: tuple[str, ...]
    order: int | None = None

    def build(self) -> Group:
        G = generate_group(self.degree, list(self.generators), name=self.name)
        if self.order is not None and G.order != self.order:
            raise ValueError(f"{self.name}: generated order {G.order}, declared {self.order}")
        return G

    def to_json(self) -> dict:
        out = {"name": self.name, "degree": self.degree, "generators": list(self.generators)}
        if self.order is not None:
            out["order"] = self.order
        return out


def _locate(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse_group_text(text: str) -> GroupSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("group file must hold a JSON object", 1, 1)
    for key in ("name", "degree", "generators"):
        if key not in data:
            raise ParseError(f"missing key {key!r}", 1, 1)
    name, degree, gens = data["name"], data["degree"], data["generators"]
    if not isinstance(name, str):
        raise ParseError("'name' must be a string", *_locate(text, text.find('"name"')))
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise ParseError("'degree' must be a positive integer", *_locate(text, text.find('"degree"')))
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise ParseError("'generators' must be a list of strings", *_locate(text, text.find('"generators"')))
    for g in gens:
        where = text.find(json.dumps(g))
        line, col = _locate(text, max(where, 0))
        try:
            parse_cycles(g, degree)
        except ParseError as exc:
            raise ParseError(f"bad generator {g!r}: {exc}", line, col + exc.column) from None
        except ValueError as exc:
            raise ParseError(f"bad generator {g!r}: {exc}", line, col) from None
    order = data.get("order")
    if order is not None and (not isinstance(order, int) or order < 1):
        raise ParseError("'order' must be a positive integer", *_locate(text, text.find('"order"')))
    return GroupSpec(name, degree, tuple(gens), order)


def parse_group_file(path: str | Path) -> GroupSpec:
    return parse_group_text(Path(path).read_text())


def _cyclic(n: int) -> GroupSpec:
    if n == 1:
        return GroupSpec("C1", 1, (), 1)
    return GroupSpec(f"C{n}", n, ("(" + " ".join(str(k) for k in range(1, n + 1)) + ")",), n)


_NAMED = [
    GroupSpec("C2xC2", 4, ("(1 2)", "(3 4)"), 4),
    GroupSpec("C2xC4", 6, ("(1 2)", "(3 4 5 6)"), 8),
    GroupSpec("C2xC2xC2", 6, ("(1 2)", "(3 4)", "(5 6)"), 8),
    GroupSpec("S3", 3, ("(1 2)", "(1 2 3)"), 6),
    GroupSpec("D8", 4, ("(1 2 3 4)", "(1 3)"), 8),
    GroupSpec("Q8", 8, ("(1 2 5 6)(3 8 7 4)", "(1 3 5 7)(2 4 6 8)"), 8),
    GroupSpec("D10", 5, ("(1 2 3 4 5)", "(2 5)(3 4)"), 10),
    GroupSpec("D12", 6, ("(1 2 3 4 5 6)", "(2 6)(3 5)"), 12),
    GroupSpec("A4", 4, ("(1 2 3)", "(1 2)(3 4)"), 12),
    GroupSpec("S4", 4, ("(1 2)", "(1 2 3 4)"), 24),
    GroupSpec("SL(2,3)", 8, ("(1 4 7)(2 8 5)", "(1 6 2 3)(4 7 8 5)"), 24),
    GroupSpec("C3:C4", 7, ("(1 2 3)", "(2 3)(4 5 6 7)"), 12),
    GroupSpec("A5", 5, ("(1 2 3 4 5)", "(1 2 3)"), 60),
    GroupSpec("S3xS3", 6, ("(1 2)", "(1 2 3)", "(4 5)", "(4 5 6)"), 36),
    GroupSpec("S3xC4", 7, ("(1 2)", "(1 2 3)", "(4 5 6 7)"), 24),
    GroupSpec("M16", 8, ("(1 2 3 4 5 6 7 8)", "(2 6)(4 8)"), 16),
    GroupSpec("F20", 5, ("(1 2 3 4 5)", "(2 3 5 4)"), 20),
    GroupSpec("C7:C3", 7, ("(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"), 21),
    GroupSpec("C3xS3", 6, ("(1 2 3)", "(4 5)", "(4 5 6)"), 18),
    GroupSpec("S5", 5, ("(1 2)", "(1 2 3 4 5)"), 120),
]


def builtin_corpus() -> list[GroupSpec]:
    """Cyclic groups C1..C12, C16, C24 followed by the named groups."""
    return [_cyclic(n) for n in [*range(1, 13), 16, 24]] + list(_NAMED)


def corpus_by_name() -> dict[str, GroupSpec]:
    return {spec.name: spec for spec in builtin_corpus()}
