"""Workspace persistence: one presentation plus named objects, extension
classes and pairs, with an append-only report log.

Documents are canonical JSON; loading validates every invariant and reports
parse errors with the offending field path.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from .linalg import Mat, format_rat, parse_rat
from .blends import CompatiblePair
from .cohomology import ExtClassHandle, ext1_class
from .objects import RepObject
from .presentations import (GroupPresentation, explicit_presentation,
                            validate_presentation)

FORMAT_VERSION = 1

DEFAULT_WORKSPACE_ENV = "PANACHE_WORKSPACE"
DEFAULT_WORKSPACE_PATH = "panache-workspace.json"


class WorkspaceError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class PairRef:
    """A compatible pair by name: (B, A, C) objects and (L, N) classes."""
    b: str
    a: str
    c: str
    l: str
    n: str


@dataclass
class WorkspaceDoc:
    presentation: GroupPresentation
    objects: dict[str, RepObject] = field(default_factory=dict)
    ext_classes: dict[str, ExtClassHandle] = field(default_factory=dict)
    pairs: dict[str, PairRef] = field(default_factory=dict)
    reports: list[dict] = field(default_factory=list)
    format_version: int = FORMAT_VERSION

    def object(self, name: str) -> RepObject:
        if name not in self.objects:
            raise WorkspaceError(f"objects.{name}", "unknown object")
        return self.objects[name]

    def ext_class(self, name: str) -> ExtClassHandle:
        if name not in self.ext_classes:
            raise WorkspaceError(f"ext_classes.{name}", "unknown extension class")
        return self.ext_classes[name]

    def pair(self, name: str) -> CompatiblePair:
        if name not in self.pairs:
            raise WorkspaceError(f"pairs.{name}", "unknown pair")
        ref = self.pairs[name]
        try:
            return CompatiblePair(self.object(ref.b), self.object(ref.a),
                                  self.object(ref.c), self.ext_class(ref.l),
                                  self.ext_class(ref.n))
        except ValueError as exc:
            raise WorkspaceError(f"pairs.{name}", str(exc))


# ---------------------------------------------------------------------------
# serialisation


def presentation_to_json(p: GroupPresentation) -> dict:
    return {
        "torus_rank": p.torus_rank,
        "weight": list(p.weight),
        "generators": [{"name": g.name, "degree": list(g.degree)} for g in p.generators],
        "brackets": [
            {"i": i, "j": j, "coeffs": {str(k): format_rat(c) for k, c in sorted(coeffs.items())}}
            for (i, j), coeffs in sorted(p.materialized_brackets().items())
        ],
    }


def presentation_from_json(doc: dict, path: str = "presentation") -> GroupPresentation:
    try:
        rank = int(doc["torus_rank"])
        weight = [int(x) for x in doc["weight"]]
        gens = [(g["name"], [int(x) for x in g["degree"]]) for g in doc["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise WorkspaceError(path, f"malformed presentation: {exc}")
    names = [g[0] for g in gens]
    if len(set(names)) != len(names):
        raise WorkspaceError(f"{path}.generators", "generator names must be unique")
    brackets = {}
    for idx, b in enumerate(doc.get("brackets", [])):
        try:
            i, j = int(b["i"]), int(b["j"])
            coeffs = {int(k): parse_rat(v) for k, v in b["coeffs"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise WorkspaceError(f"{path}.brackets[{idx}]", str(exc))
        if not (0 <= i < j < len(gens)):
            raise WorkspaceError(f"{path}.brackets[{idx}]", f"bad index pair ({i},{j})")
        brackets[(i, j)] = coeffs
    p = explicit_presentation(rank, weight, gens, brackets)
    report = validate_presentation(p)
    if not report.ok:
        v = report.first
        raise WorkspaceError(f"{path}", f"invariant {v.code} violated at {v.indices}")
    return p


def object_to_json(m: RepObject) -> dict:
    return {
        "basis": [{"label": lab, "character": list(chi)}
                  for lab, chi in zip(m.labels, m.characters)],
        "actions": {
            m.presentation.name_of(i): [[a, b, format_rat(c)]
                                        for a, b, c in mat.nonzero_entries()]
            for i, mat in sorted(m.actions.items())
        },
    }


def object_from_json(p: GroupPresentation, doc: dict, path: str) -> RepObject:
    try:
        labels = tuple(b["label"] for b in doc["basis"])
        chars = tuple(tuple(int(x) for x in b["character"]) for b in doc["basis"])
    except (KeyError, TypeError, ValueError) as exc:
        raise WorkspaceError(f"{path}.basis", str(exc))
    actions = {}
    dim = len(labels)
    for gen_name, triples in doc.get("actions", {}).items():
        try:
            gi = p.index_of(gen_name)
        except KeyError:
            raise WorkspaceError(f"{path}.actions.{gen_name}", "unknown generator")
        mat = Mat.zeros(dim, dim)
        for t_idx, triple in enumerate(triples):
            try:
                a, b, c = int(triple[0]), int(triple[1]), parse_rat(triple[2])
            except (TypeError, ValueError, IndexError) as exc:
                raise WorkspaceError(f"{path}.actions.{gen_name}[{t_idx}]", str(exc))
            if not (0 <= a < dim and 0 <= b < dim):
                raise WorkspaceError(f"{path}.actions.{gen_name}[{t_idx}]",
                                     f"entry ({a},{b}) outside a {dim}-dim object")
            mat.data[a][b] = c
        actions[gi] = mat
    m = RepObject(p, labels, chars, actions)
    problems = m.validate()
    if problems:
        raise WorkspaceError(path, f"object invariant violated: {problems[0]}")
    return m


def ext_class_to_json(e: ExtClassHandle, doc: WorkspaceDoc) -> dict:
    def ref_or_inline(obj: RepObject):
        for name, known in doc.objects.items():
            if known.characters == obj.characters and known.actions == obj.actions:
                return name
        return object_to_json(obj)

    out = {
        "cocycle": {e.target.presentation.name_of(i): [format_rat(x) for x in v]
                    for i, v in sorted(e.comps.items())},
    }
    if e.hom_source is not None:
        out["source"] = ref_or_inline(e.hom_source)
        out["target"] = ref_or_inline(e.hom_target)
    else:
        out["target"] = ref_or_inline(e.target)
    return out


def ext_class_from_json(doc: WorkspaceDoc, spec: dict, path: str) -> ExtClassHandle:
    if "target" not in spec:
        raise WorkspaceError(path, "missing target")
    target = doc.object(spec["target"]) if isinstance(spec["target"], str) else \
        object_from_json(doc.presentation, spec["target"], f"{path}.target")
    comps = {}
    p = doc.presentation
    for gen_name, entries in spec.get("cocycle", {}).items():
        try:
            gi = p.index_of(gen_name)
        except KeyError:
            raise WorkspaceError(f"{path}.cocycle.{gen_name}", "unknown generator")
        try:
            comps[gi] = [parse_rat(x) for x in entries]
        except ValueError as exc:
            raise WorkspaceError(f"{path}.cocycle.{gen_name}", str(exc))
    if "source" in spec and spec["source"] is not None:
        source = doc.object(spec["source"]) if isinstance(spec["source"], str) else \
            object_from_json(doc.presentation, spec["source"], f"{path}.source")
        cls = ext1_class(source, target, comps)
    else:
        cls = ExtClassHandle(target, {i: tuple(v) for i, v in comps.items()})
    defects = cls.cocycle_defects()
    if defects:
        raise WorkspaceError(path, f"cocycle identity fails at pair {defects[0]}")
    return cls


def workspace_to_json(doc: WorkspaceDoc) -> dict:
    return {
        "format_version": doc.format_version,
        "presentation": presentation_to_json(doc.presentation),
        "objects": {name: object_to_json(m) for name, m in sorted(doc.objects.items())},
        "ext_classes": {name: ext_class_to_json(e, doc)
                        for name, e in sorted(doc.ext_classes.items())},
        "pairs": {name: {"b": pr.b, "a": pr.a, "c": pr.c, "l": pr.l, "n": pr.n}
                  for name, pr in sorted(doc.pairs.items())},
        "reports": doc.reports,
    }


def workspace_from_json(raw: dict) -> WorkspaceDoc:
    if not isinstance(raw, dict):
        raise WorkspaceError("$", "document must be a JSON object")
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise WorkspaceError("format_version", f"unsupported version {version!r}")
    p = presentation_from_json(raw.get("presentation", {}))
    doc = WorkspaceDoc(p, format_version=version)
    for name, spec in raw.get("objects", {}).items():
        doc.objects[name] = object_from_json(p, spec, f"objects.{name}")
    for name, spec in raw.get("ext_classes", {}).items():
        doc.ext_classes[name] = ext_class_from_json(doc, spec, f"ext_classes.{name}")
    for name, spec in raw.get("pairs", {}).items():
        try:
            ref = PairRef(spec["b"], spec["a"], spec["c"], spec["l"], spec["n"])
        except KeyError as exc:
            raise WorkspaceError(f"pairs.{name}", f"missing field {exc}")
        doc.pairs[name] = ref
        doc.pair(name)  # validates objects, classes and weight separation
    doc.reports = list(raw.get("reports", []))
    return doc


def load_workspace(path: str) -> WorkspaceDoc:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise WorkspaceError(path, "no such workspace file")
    except json.JSONDecodeError as exc:
        raise WorkspaceError(path, f"invalid JSON: {exc}")
    return workspace_from_json(raw)


def save_workspace(doc: WorkspaceDoc, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(workspace_to_json(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


def default_workspace_path() -> str:
    return os.environ.get(DEFAULT_WORKSPACE_ENV, DEFAULT_WORKSPACE_PATH)
