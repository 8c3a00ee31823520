"""JSON corpus files: named spaces, pairs, covers, filtrations and maps.

A corpus is ``{"format_version": 1, "items": [...]}``; every item has a unique
``name`` and a ``kind``.  Items may refer to earlier items by name.  See the
README for the full schema with an example of each kind.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from . import exactness, spaces
from .errors import OrdhomError
from .exactness import ExcisiveSquare
from .spaces import (
    CwComplex,
    DeltaComplex,
    Filtration,
    FinitePoset,
    SimplicialMap,
    SubcomplexPair,
    order_complex,
    simplicial_map,
    skeletal_filtration,
)

FORMAT_VERSION = 1
KINDS = ("delta_complex", "cw_complex", "poset", "pair", "cover", "filtration", "map")

DELTA_BUILDERS = {
    "point": spaces.point,
    "sphere_delta": spaces.sphere_delta,
    "torus_delta": spaces.torus_delta,
    "rp2_delta": spaces.rp2_delta,
    "klein_delta": spaces.klein_delta,
    "circle_mgon": spaces.circle_mgon,
    "torus_grid": spaces.torus_grid,
}
PAIR_BUILDERS = {"disk_pair": spaces.disk_pair}
COVER_BUILDERS = {
    "circle_two_arc_cover": exactness.circle_two_arc_cover,
    "sphere_two_disk_cover": exactness.sphere_two_disk_cover,
    "torus_two_cylinder_cover": exactness.torus_two_cylinder_cover,
}
MAP_BUILDERS = {
    "wrap_map": spaces.wrap_map,
    "covering_map": spaces.covering_map,
    "collapse_map": spaces.collapse_map,
    "identity": SimplicialMap.identity,
}


class CorpusError(OrdhomError, ValueError):
    """Malformed corpus; the message starts with the location of the problem."""


@dataclass
class Item:
    name: str
    kind: str
    value: Any
    spec: dict = field(repr=False)


@dataclass
class Corpus:
    items: dict[str, Item]
    source: str = ""

    def __iter__(self):
        return iter(self.items.values())

    def __len__(self) -> int:
        return len(self.items)

    def get(self, name: str, *kinds: str) -> Item:
        try:
            item = self.items[name]
        except KeyError:
            raise CorpusError(f"unknown item {name!r}") from None
        if kinds and item.kind not in kinds:
            raise CorpusError(f"item {name!r} is a {item.kind}, expected {' or '.join(kinds)}")
        return item

    def of_kind(self, kind: str) -> list[Item]:
        return [i for i in self if i.kind == kind]

    def space(self, name: str) -> DeltaComplex:
        """Delta complex behind a ``delta_complex`` or ``poset`` item."""
        item = self.get(name, "delta_complex", "poset")
        return item.value if item.kind == "delta_complex" else order_complex(item.value)


def _members(x: DeltaComplex, spec, where: str):
    if isinstance(spec, dict) and "closure" in spec:
        return x.closure(tuple(s) for s in spec["closure"])
    if isinstance(spec, dict) and "simplices" in spec:
        return x.members(spec["simplices"])
    raise CorpusError(f"{where}: expected {{'closure': [[dim, index], ...]}} or {{'simplices': [[...], ...]}}")


def _args(spec: dict) -> list:
    args = spec.get("args", [])
    if not isinstance(args, list):
        raise TypeError("args must be a list")
    return args


def _build(spec: dict, table: dict, where: str):
    name = spec["builder"]
    if name not in table:
        raise CorpusError(f"{where}.builder: unknown builder {name!r}; choose from {sorted(table)}")
    return table[name](*_args(spec))


def _delta(spec: dict, corpus: Corpus, where: str) -> DeltaComplex:
    if "builder" in spec:
        return _build(spec, DELTA_BUILDERS, where)
    if "simplices" in spec:
        return spaces.delta_from_simplices([tuple(s) for s in spec["simplices"]], spec.get("vertices"))
    if "faces" in spec:
        return DeltaComplex.from_faces(spec["vertices"], [[tuple(f) for f in level] for level in spec["faces"]])
    raise CorpusError(f"{where}: a delta_complex needs 'builder', 'simplices' or 'faces'")


def _cw(spec: dict, corpus: Corpus, where: str) -> CwComplex:
    return CwComplex(tuple(spec["cells"]), tuple(spec["incidence"]))


def _poset(spec: dict, corpus: Corpus, where: str) -> FinitePoset:
    return FinitePoset.from_relations(spec["elements"], [tuple(r) for r in spec.get("less", [])])


def _pair(spec: dict, corpus: Corpus, where: str) -> SubcomplexPair:
    if "builder" in spec:
        return _build(spec, PAIR_BUILDERS, where)
    x = corpus.space(spec["total"])
    return SubcomplexPair(x, _members(x, spec["sub"], f"{where}.sub"))


def _cover(spec: dict, corpus: Corpus, where: str) -> ExcisiveSquare:
    if "builder" in spec:
        return _build(spec, COVER_BUILDERS, where)
    x = corpus.space(spec["total"])
    return ExcisiveSquare(x, _members(x, spec["u"], f"{where}.u"), _members(x, spec["v"], f"{where}.v"))


def _filtration(spec: dict, corpus: Corpus, where: str) -> Filtration:
    x = corpus.space(spec["total"])
    if spec.get("skeletal"):
        return skeletal_filtration(x)
    stages = [_members(x, s, f"{where}.stages[{i}]") for i, s in enumerate(spec["stages"])]
    return Filtration(x, tuple(stages))


def _map(spec: dict, corpus: Corpus, where: str) -> SimplicialMap:
    if "builder" in spec:
        name = spec["builder"]
        if name in ("collapse_map", "identity"):
            return MAP_BUILDERS[name](corpus.space(spec["source"]))
        return _build(spec, MAP_BUILDERS, where)
    return simplicial_map(corpus.space(spec["source"]), corpus.space(spec["target"]), spec["images"])


PARSERS = {
    "delta_complex": _delta,
    "cw_complex": _cw,
    "poset": _poset,
    "pair": _pair,
    "cover": _cover,
    "filtration": _filtration,
    "map": _map,
}


def load_corpus(data: dict, source: str = "<memory>") -> Corpus:
    """Validate a decoded corpus; every module invariant is checked here."""
    if not isinstance(data, dict):
        raise CorpusError(f"{source}: top level must be an object")
    if data.get("format_version") != FORMAT_VERSION:
        raise CorpusError(f"{source}: format_version must be {FORMAT_VERSION}")
    items = data.get("items")
    if not isinstance(items, list):
        raise CorpusError(f"{source}: 'items' must be a list")
    corpus = Corpus({}, source)
    if not items:
        warnings.warn(f"{source}: corpus has no items", stacklevel=2)
    for i, spec in enumerate(items):
        where = f"items[{i}]"
        if not isinstance(spec, dict):
            raise CorpusError(f"{where}: expected an object")
        name, kind = spec.get("name"), spec.get("kind")
        if not isinstance(name, str) or not name:
            raise CorpusError(f"{where}: missing name")
        where = f"items[{i}] ({name})"
        if name in corpus.items:
            raise CorpusError(f"{where}: duplicate name")
        if kind not in PARSERS:
            raise CorpusError(f"{where}: unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        try:
            value = PARSERS[kind](spec, corpus, where)
        except CorpusError as exc:
            if str(exc).startswith("unknown item"):
                raise CorpusError(f"{where}: dangling reference, {exc}") from None
            raise
        except KeyError as exc:
            raise CorpusError(f"{where}: missing field {exc}") from None
        except (OrdhomError, ValueError, TypeError, IndexError) as exc:
            raise CorpusError(f"{where}: {exc}") from None
        corpus.items[name] = Item(name, kind, value, spec)
    return corpus


def parse_corpus(path: str | Path) -> Corpus:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    return load_corpus(data, str(path))


def golden_path() -> Path:
    return Path(str(resources.files("ordhom") / "data" / "golden.json"))


def golden_corpus() -> Corpus:
    return parse_corpus(golden_path())
