"""Scenario documents: JSON in, validated objects out, and back.

Rationals are always strings (``"3/10"``). Every parse error carries the JSON
path of the offending field.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .continuity import ProbeSet
from .errors import RandopError, ScenarioError, UnknownAnalysis
from .operators import (
    Affine,
    Constant,
    DiagonalMap,
    Harmonic,
    MatrixMap,
    RandomOperator,
    RankOneMap,
    Table,
    ZeroMap,
)
from .prob_core import FiniteProbSpace, make_space
from .sequences import ScaledBasis, ScaledFixed, UserPrefix, WindowSum
from .spaces import C00, SeqVector, SpaceDescriptor, vector_to_json

ANALYSES = ("alpha", "profile", "clauses", "conditional", "closed_graph", "linearity", "sequential")

DEFAULT_GRIDS = {
    "M": ("0", "1", "2", "5", "10", "100"),
    "eps": tuple(f"{i}/10" for i in range(1, 10)),
    "tau": ("1/100", "1/10", "1/2", "1", "2"),
}


@dataclass(frozen=True)
class Analysis:
    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    name: str
    operator: RandomOperator
    analyses: tuple
    probes: ProbeSet
    grids: dict

    @property
    def space(self) -> FiniteProbSpace:
        return self.operator.space


# low-level field readers ------------------------------------------------------

def _get(doc, key, path, default=...):
    if not isinstance(doc, dict):
        raise ScenarioError(path, "expected an object")
    if key not in doc:
        if default is ...:
            raise ScenarioError(f"{path}.{key}", "missing field")
        return default
    return doc[key]


def _rational(value, path):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ScenarioError(path, f"expected a rational string like \"3/10\", got {value!r}")
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ScenarioError(path, f"not a rational number: {value!r}") from None


def _int(value, path, minimum=1):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ScenarioError(path, f"expected an integer >= {minimum}, got {value!r}")
    return value


def _space_desc(doc, path):
    kind = _get(doc, "kind", path)
    if kind == "c00":
        return C00
    if kind == "finite":
        return SpaceDescriptor(_int(_get(doc, "dimension", path), f"{path}.dimension"))
    raise ScenarioError(f"{path}.kind", f"unknown space kind {kind!r} (expected 'c00' or 'finite')")


def _vector(doc, space, path):
    if not isinstance(doc, dict):
        raise ScenarioError(path, "vector literal must be an object {index: rational}")
    entries = {}
    for k, v in doc.items():
        try:
            n = int(k)
        except ValueError:
            raise ScenarioError(f"{path}.{k}", "vector index must be a positive integer") from None
        if n < 1 or (space.dimension is not None and n > space.dimension):
            raise ScenarioError(f"{path}.{k}", f"index {n} outside {space}")
        entries[n] = _rational(v, f"{path}.{k}")
    return SeqVector.from_map(entries, space)


def _coeff(doc, path):
    kind = _get(doc, "kind", path)
    r = lambda key: _rational(_get(doc, key, path), f"{path}.{key}")
    if kind == "constant":
        return Constant(r("c"))
    if kind == "affine":
        return Affine(r("a"), r("b"))
    if kind == "harmonic":
        return Harmonic(r("a"), r("b"))
    if kind == "table":
        values = _get(doc, "values", path)
        if not isinstance(values, dict):
            raise ScenarioError(f"{path}.values", "expected an object {index: rational}")
        overrides = []
        for k, v in values.items():
            try:
                n = int(k)
            except ValueError:
                raise ScenarioError(f"{path}.values.{k}", "index must be a positive integer") from None
            if n < 1:
                raise ScenarioError(f"{path}.values.{k}", "index must be a positive integer")
            overrides.append((n, _rational(v, f"{path}.values.{k}")))
        return Table(tuple(sorted(overrides)), _coeff(_get(doc, "tail", path), f"{path}.tail"))
    raise ScenarioError(f"{path}.kind", f"unknown coefficient family {kind!r}")


def _map(doc, domain, codomain, path):
    kind = _get(doc, "kind", path)
    if kind == "zero":
        return ZeroMap()
    if kind == "matrix":
        rows = _get(doc, "rows", path)
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise ScenarioError(f"{path}.rows", "expected a list of rows")
        return MatrixMap(tuple(tuple(_rational(a, f"{path}.rows[{i}][{j}]") for j, a in enumerate(row))
                               for i, row in enumerate(rows)))
    if kind == "diagonal":
        return DiagonalMap(_coeff(_get(doc, "coeff", path), f"{path}.coeff"))
    if kind == "rank_one":
        return RankOneMap(_coeff(_get(doc, "weights", path), f"{path}.weights"),
                          _vector(_get(doc, "output", path), codomain, f"{path}.output"))
    raise ScenarioError(f"{path}.kind", f"unknown map kind {kind!r}")


def parse_sequence(doc, domain, path):
    kind = _get(doc, "kind", path)
    scale = _rational(doc.get("scale", "1"), f"{path}.scale")
    try:
        if kind == "scaled_basis":
            return ScaledBasis(_int(_get(doc, "p", path, 1), f"{path}.p"), scale)
        if kind == "scaled_fixed":
            return ScaledFixed(_vector(_get(doc, "v", path), domain, f"{path}.v"), scale)
        if kind == "window_sum":
            return WindowSum(_int(_get(doc, "L", path, 2), f"{path}.L"), scale)
        if kind == "user_prefix":
            terms = _get(doc, "terms", path)
            if not isinstance(terms, list):
                raise ScenarioError(f"{path}.terms", "expected a list of vectors")
            return UserPrefix(tuple(_vector(t, domain, f"{path}.terms[{i}]") for i, t in enumerate(terms)),
                              _get(doc, "tail", path, "unknown"))
    except ScenarioError:
        raise
    except RandopError as exc:
        raise ScenarioError(path, f"{type(exc).__name__}: {exc}") from None
    raise ScenarioError(f"{path}.kind", f"unknown sequence kind {kind!r}")


def _rational_list(values, path):
    if not isinstance(values, list) or not values:
        raise ScenarioError(path, "expected a non-empty list of rationals")
    return tuple(_rational(v, f"{path}[{i}]") for i, v in enumerate(values))


def _analysis(doc, domain, path):
    if isinstance(doc, str):
        doc = {"kind": doc}
    kind = _get(doc, "kind", path)
    if kind not in ANALYSES:
        raise UnknownAnalysis(f"{path}.kind", f"unknown analysis {kind!r}; expected one of {', '.join(ANALYSES)}")
    params = {}
    if kind == "clauses":
        if "eps" in doc:
            params["eps"] = _rational_list(doc["eps"], f"{path}.eps")
        if "tau" in doc:
            params["tau"] = _rational(doc["tau"], f"{path}.tau")
        if "x0" in doc:
            params["x0"] = _vector(doc["x0"], domain, f"{path}.x0")
    elif kind == "conditional":
        if "x" in doc:
            params["x"] = _vector(doc["x"], domain, f"{path}.x")
    elif kind == "closed_graph":
        if "specs" in doc:
            specs = doc["specs"]
            if not isinstance(specs, list):
                raise ScenarioError(f"{path}.specs", "expected a list of sequence specs")
            params["specs"] = tuple(parse_sequence(s, domain, f"{path}.specs[{i}]") for i, s in enumerate(specs))
    elif kind == "linearity":
        inputs = _get(doc, "inputs", path)
        if not isinstance(inputs, list) or not inputs:
            raise ScenarioError(f"{path}.inputs", "expected a non-empty list")
        parsed = []
        for i, item in enumerate(inputs):
            p = f"{path}.inputs[{i}]"
            parsed.append((_vector(_get(item, "x", p), domain, f"{p}.x"),
                           _vector(_get(item, "y", p), domain, f"{p}.y"),
                           _rational(_get(item, "alpha", p, "1"), f"{p}.alpha"),
                           _rational(_get(item, "beta", p, "1"), f"{p}.beta")))
        params["inputs"] = tuple(parsed)
    elif kind == "sequential":
        params["spec"] = parse_sequence(_get(doc, "spec", path), domain, f"{path}.spec")
        alpha = _rational(_get(doc, "alpha", path), f"{path}.alpha")
        if not 0 < alpha <= 1:
            raise ScenarioError(f"{path}.alpha", "alpha must lie in (0, 1]")
        params["alpha"] = alpha
        mode = doc.get("mode", "single")
        if mode not in ("single", "eqseq"):
            raise ScenarioError(f"{path}.mode", "mode must be 'single' or 'eqseq'")
        params["mode"] = mode
    return Analysis(kind, params)


def parse_scenario(doc) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("$", "scenario must be a JSON object")
    name = _get(doc, "name", "$")
    if not isinstance(name, str):
        raise ScenarioError("$.name", "expected a string")

    atoms_doc = _get(_get(doc, "space", "$"), "atoms", "$.space")
    if not isinstance(atoms_doc, list):
        raise ScenarioError("$.space.atoms", "expected a list of {id, mass}")
    atoms = []
    for i, a in enumerate(atoms_doc):
        p = f"$.space.atoms[{i}]"
        atom_id = _get(a, "id", p)
        if not isinstance(atom_id, str) or not atom_id:
            raise ScenarioError(f"{p}.id", "atom id must be a non-empty string")
        if any(atom_id == prev for prev, _ in atoms):
            raise ScenarioError(f"{p}.id", f"DuplicateAtom: duplicate atom id {atom_id!r}")
        atoms.append((atom_id, _rational(_get(a, "mass", p), f"{p}.mass")))
    try:
        space = make_space(atoms)
    except RandopError as exc:
        raise ScenarioError("$.space.atoms", f"{type(exc).__name__}: {exc}") from None

    domain = _space_desc(_get(doc, "domain", "$"), "$.domain")
    codomain = _space_desc(_get(doc, "codomain", "$"), "$.codomain")

    ops = _get(doc, "operator", "$")
    if not isinstance(ops, list):
        raise ScenarioError("$.operator", "expected a list of {atom, map}")
    maps = {}
    for i, entry in enumerate(ops):
        p = f"$.operator[{i}]"
        atom = _get(entry, "atom", p)
        if atom not in space.ids:
            raise ScenarioError(f"{p}.atom", f"unknown atom {atom!r}")
        if atom in maps:
            raise ScenarioError(f"{p}.atom", f"atom {atom!r} given twice")
        rep = _map(_get(entry, "map", p), domain, codomain, f"{p}.map")
        try:
            rep.check(domain, codomain)
        except RandopError as exc:
            raise ScenarioError(f"{p}.map", f"{type(exc).__name__}: {exc}") from None
        maps[atom] = rep
    missing = [a for a in space.ids if a not in maps]
    if missing:
        raise ScenarioError("$.operator", f"no map given for atoms {missing}")

    corruption = None
    if doc.get("corruption") is not None:
        c = doc["corruption"]
        members = _get(c, "event", "$.corruption")
        if not isinstance(members, list) or any(m not in space.ids for m in members):
            raise ScenarioError("$.corruption.event", "expected a list of known atom ids")
        corruption = (space.event(members), _vector(_get(c, "offset", "$.corruption"), codomain, "$.corruption.offset"))

    try:
        operator = RandomOperator.from_map(space, domain, codomain, maps, corruption)
    except RandopError as exc:
        raise ScenarioError("$.operator", f"{type(exc).__name__}: {exc}") from None

    analyses_doc = doc.get("analyses", ["alpha"])
    if not isinstance(analyses_doc, list):
        raise ScenarioError("$.analyses", "expected a list")
    analyses = tuple(_analysis(a, domain, f"$.analyses[{i}]") for i, a in enumerate(analyses_doc))

    pc = doc.get("probe_config", {})
    probes = ProbeSet(
        _int(pc.get("basis_max", 64), "$.probe_config.basis_max"),
        _int(pc.get("comb_width", 4), "$.probe_config.comb_width"),
        _int(pc.get("window_len", 8), "$.probe_config.window_len"),
    )
    grids_doc = doc.get("grids", {})
    grids = {}
    for key, default in DEFAULT_GRIDS.items():
        grids[key] = _rational_list(list(grids_doc.get(key, default)), f"$.grids.{key}")
    if list(grids["M"]) != sorted(set(grids["M"])) or grids["M"][0] < 0:
        raise ScenarioError("$.grids.M", "M grid must be non-negative and strictly increasing")
    if any(not 0 < e < 1 for e in grids["eps"]):
        raise ScenarioError("$.grids.eps", "eps values must lie in (0, 1)")
    if any(t <= 0 for t in grids["tau"]):
        raise ScenarioError("$.grids.tau", "tau values must be positive")
    return Scenario(name, operator, analyses, probes, grids)


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError("$", f"cannot read scenario: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno} column {exc.colno}", f"invalid JSON: {exc.msg}") from None
    return parse_scenario(doc)


# serialization -----------------------------------------------------------------

def space_desc_to_json(s: SpaceDescriptor):
    return {"kind": "c00"} if s.is_c00 else {"kind": "finite", "dimension": s.dimension}


def coeff_to_json(c):
    if isinstance(c, Constant):
        return {"kind": "constant", "c": str(c.c)}
    if isinstance(c, Affine):
        return {"kind": "affine", "a": str(c.a), "b": str(c.b)}
    if isinstance(c, Harmonic):
        return {"kind": "harmonic", "a": str(c.a), "b": str(c.b)}
    return {"kind": "table", "values": {str(n): str(v) for n, v in c.overrides}, "tail": coeff_to_json(c.tail)}


def map_to_json(rep):
    if isinstance(rep, ZeroMap):
        return {"kind": "zero"}
    if isinstance(rep, MatrixMap):
        return {"kind": "matrix", "rows": [[str(a) for a in row] for row in rep.rows]}
    if isinstance(rep, DiagonalMap):
        return {"kind": "diagonal", "coeff": coeff_to_json(rep.coeff)}
    return {"kind": "rank_one", "weights": coeff_to_json(rep.weights), "output": vector_to_json(rep.output)}


def sequence_to_json(spec):
    if isinstance(spec, ScaledBasis):
        doc = {"kind": "scaled_basis", "p": spec.p}
    elif isinstance(spec, ScaledFixed):
        doc = {"kind": "scaled_fixed", "v": vector_to_json(spec.v)}
    elif isinstance(spec, WindowSum):
        doc = {"kind": "window_sum", "L": spec.L}
    else:
        return {"kind": "user_prefix", "terms": [vector_to_json(t) for t in spec.terms], "tail": spec.tail}
    doc["scale"] = str(spec.scale)
    return doc


def analysis_to_json(a: Analysis):
    doc = {"kind": a.kind}
    p = a.params
    if "eps" in p:
        doc["eps"] = [str(e) for e in p["eps"]]
    if "tau" in p:
        doc["tau"] = str(p["tau"])
    if "x0" in p:
        doc["x0"] = vector_to_json(p["x0"])
    if "x" in p:
        doc["x"] = vector_to_json(p["x"])
    if "specs" in p:
        doc["specs"] = [sequence_to_json(s) for s in p["specs"]]
    if "inputs" in p:
        doc["inputs"] = [{"x": vector_to_json(x), "y": vector_to_json(y), "alpha": str(al), "beta": str(be)}
                         for x, y, al, be in p["inputs"]]
    if "spec" in p:
        doc["spec"] = sequence_to_json(p["spec"])
        doc["alpha"] = str(p["alpha"])
        doc["mode"] = p["mode"]
    return doc


def scenario_to_json(s: Scenario) -> dict:
    T = s.operator
    doc = {
        "name": s.name,
        "space": {"atoms": [{"id": a, "mass": str(m)} for a, m in T.space.atoms]},
        "domain": space_desc_to_json(T.domain),
        "codomain": space_desc_to_json(T.codomain),
        "operator": [{"atom": a, "map": map_to_json(r)} for a, r in T.maps],
    }
    if T.corruption is not None:
        event, offset = T.corruption
        doc["corruption"] = {"event": list(event.ordered()), "offset": vector_to_json(offset)}
    doc["analyses"] = [analysis_to_json(a) for a in s.analyses]
    doc["probe_config"] = {"basis_max": s.probes.basis_max, "comb_width": s.probes.comb_width,
                           "window_len": s.probes.window_len}
    doc["grids"] = {k: [str(v) for v in s.grids[k]] for k in DEFAULT_GRIDS}
    return doc
