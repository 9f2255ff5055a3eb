"""Corpus files: named permutation groups given by cycle-notation generators.

A corpus file is a UTF-8 JSON document::

    {"entries": [
        {"name": "S4", "degree": 4, "generators": ["(1 2)", "(1 2 3 4)"], "tags": ["symmetric"]}
    ]}

Points are 1-based, "()" is the identity.  A bare list of entries is also
accepted.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import CycleParseError, FusionLabError
from ..permcore import DEFAULT_ORDER_CAP, Permutation, PermGroup, group_closure


class CorpusError(FusionLabError, ValueError):
    def __init__(self, message: str, source: str = "<corpus>", line: int | None = None, column: int | None = None):
        loc = f"{source}:{line}:{column}" if line is not None else source
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    degree: int
    generators: tuple[str, ...]
    tags: tuple[str, ...] = field(default=())

    def permutations(self) -> list[Permutation]:
        return [Permutation.from_cycles(g, self.degree) for g in self.generators]

    def build(self, cap: int | None = DEFAULT_ORDER_CAP) -> PermGroup:
        return group_closure(self.permutations(), self.degree, cap)

    def to_dict(self) -> dict:
        return {"name": self.name, "degree": self.degree, "generators": list(self.generators), "tags": list(self.tags)}


def _locate(text: str, needle: str, start: int = 0) -> tuple[int, int] | None:
    at = text.find(needle, start)
    if at < 0:
        return None
    line = text.count("\n", 0, at) + 1
    col = at - (text.rfind("\n", 0, at) + 1) + 1
    return line, col


def parse_corpus(text: str, source: str = "<corpus>") -> list[CorpusEntry]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(exc.msg, source, exc.lineno, exc.colno) from None
    raw = doc.get("entries") if isinstance(doc, dict) else doc
    if not isinstance(raw, list):
        raise CorpusError("expected a list of entries or an object with an 'entries' list", source)

    entries: list[CorpusEntry] = []
    names: set[str] = set()
    for n, item in enumerate(raw):
        where = f"entry {n}"
        if not isinstance(item, dict):
            raise CorpusError(f"{where}: expected an object", source)
        name = item.get("name")
        degree = item.get("degree")
        gens = item.get("generators")
        tags = item.get("tags", [])
        if not isinstance(name, str) or not name:
            raise CorpusError(f"{where}: missing or empty 'name'", source)
        anchor = text.find(json.dumps(name))
        if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
            raise CorpusError(f"{name}: 'degree' must be a positive integer", source, *(_locate(text, json.dumps(name)) or (None, None)))
        if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
            raise CorpusError(f"{name}: 'generators' must be a list of strings", source, *(_locate(text, json.dumps(name)) or (None, None)))
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise CorpusError(f"{name}: 'tags' must be a list of strings", source)
        if name in names:
            raise CorpusError(f"duplicate entry name {name!r}", source, *(_locate(text, json.dumps(name), anchor + 1) or (None, None)))
        names.add(name)
        for g in gens:
            try:
                Permutation.from_cycles(g, degree)
            except CycleParseError as exc:
                loc = _locate(text, json.dumps(g), max(anchor, 0))
                line, col = (loc[0], loc[1] + exc.column) if loc else (None, None)
                raise CorpusError(f"{name}: {exc}", source, line, col) from None
        entries.append(CorpusEntry(name, degree, tuple(gens), tuple(tags)))
    return entries


def load_corpus(path: str | Path) -> list[CorpusEntry]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus: {exc.strerror}", str(path)) from None
    return parse_corpus(text, str(path))


def builtin_corpus() -> list[CorpusEntry]:
    text = resources.files("fusionlab").joinpath("data/builtin_corpus.json").read_text(encoding="utf-8")
    return parse_corpus(text, "builtin")


def resolve_group_spec(spec: str) -> CorpusEntry:
    """``<corpus-path>#<name>``; the path ``builtin`` selects the builtin corpus."""
    path, sep, name = spec.rpartition("#")
    if not sep or not path or not name:
        raise CorpusError(f"group spec {spec!r} must look like <corpus-path>#<name>")
    entries = builtin_corpus() if path == "builtin" else load_corpus(path)
    for e in entries:
        if e.name == name:
            return e
    raise CorpusError(f"no entry named {name!r}", path)
