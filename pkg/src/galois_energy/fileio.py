"""Reading and writing games and problem instances.

All files are single JSON documents with a ``schema`` marker.  Game files
use ``galois-energy/1``:

.. code-block:: json

    {
      "schema": "galois-energy/1",
      "dimension": 2,
      "positions": [{"id": "a", "owner": "attacker"}],
      "edges": [{"from": "a", "to": "a", "update": [[
          {"op": "add", "z": -1}, {"op": "min", "of": [0, 1]}
      ]]}],
      "annotations": {}
    }

An update is a list of steps; a step lists one spec per component:
``{"op": "add", "z": int}``, ``{"op": "min", "of": [indices]}`` or
``{"op": "mul", "m": nat}``.  Parallel edges in a file are legal and get
rerouted through fresh auxiliary positions on load; the load report
records every insertion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import GameFileError, InvalidGameError
from .game import AuxiliaryInsertion, GameGraph, Owner, Position, split_parallel_edges
from .instances import MultiReachabilityGame, Vass, WeightedGraph
from .lattice import Energy
from .updates import Add, ComponentSpec, MinOf, Mul, Update, UpdateAtom

GAME_SCHEMA = "galois-energy/1"


@dataclass(frozen=True)
class LoadedGame:
    game: GameGraph
    insertions: tuple[AuxiliaryInsertion, ...] = ()
    annotations: dict[str, Any] = field(default_factory=dict)


def bundled_game_path(name: str = "espresso") -> Path:
    """Path of a game file shipped with the package."""
    return Path(str(resources.files("galois_energy").joinpath(f"data/{name}.json")))


def _fail(message: str) -> GameFileError:
    return GameFileError(message)


def _spec_from_json(raw: Any) -> ComponentSpec:
    if not isinstance(raw, dict) or "op" not in raw:
        raise _fail(f"bad component spec {raw!r}")
    op = raw["op"]
    try:
        if op == "add":
            return Add(int(raw["z"]))
        if op == "min":
            return MinOf(tuple(int(i) for i in raw["of"]))
        if op == "mul":
            return Mul(int(raw["m"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"bad component spec {raw!r}: {exc}") from None
    raise _fail(f"unknown op {op!r} in component spec")


def _spec_to_json(spec: ComponentSpec) -> dict[str, Any]:
    if isinstance(spec, Add):
        return {"op": "add", "z": spec.z}
    if isinstance(spec, MinOf):
        return {"op": "min", "of": list(spec.indices)}
    return {"op": "mul", "m": spec.factor}


def _update_from_json(raw: Any, dimension: int) -> Update:
    if not isinstance(raw, list) or not raw:
        raise _fail(f"an update must be a nonempty list of steps, got {raw!r}")
    steps = []
    for step in raw:
        if not isinstance(step, list) or len(step) != dimension:
            raise _fail(f"a step must list {dimension} component specs, got {step!r}")
        try:
            steps.append(UpdateAtom(tuple(_spec_from_json(s) for s in step)))
        except ValueError as exc:
            raise _fail(str(exc)) from None
    return Update(tuple(steps))


def _update_to_json(update: Update) -> list[list[dict[str, Any]]]:
    return [[_spec_to_json(s) for s in atom.specs] for atom in update.steps]


def _load_document(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _fail(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _fail(f"{path} is not valid JSON: {exc}") from None


def game_from_dict(doc: Any) -> LoadedGame:
    if not isinstance(doc, dict):
        raise _fail("a game document must be a JSON object")
    if doc.get("schema") != GAME_SCHEMA:
        raise _fail(f"expected schema {GAME_SCHEMA!r}, got {doc.get('schema')!r}")
    try:
        dimension = int(doc["dimension"])
    except (KeyError, TypeError, ValueError):
        raise _fail("missing or bad 'dimension'") from None
    if dimension < 1:
        raise _fail(f"dimension must be at least 1, got {dimension}")
    positions: list[tuple[str, Owner]] = []
    for p in doc.get("positions", []):
        if not isinstance(p, dict) or "id" not in p or "owner" not in p:
            raise _fail(f"bad position entry {p!r}")
        try:
            owner = Owner(p["owner"])
        except ValueError:
            raise _fail(f"bad owner {p['owner']!r} (use 'attacker' or 'defender')") from None
        positions.append((str(p["id"]), owner))
    edges: list[tuple[str, str, Update]] = []
    for e in doc.get("edges", []):
        if not isinstance(e, dict) or "from" not in e or "to" not in e or "update" not in e:
            raise _fail(f"bad edge entry {e!r}")
        edges.append((str(e["from"]), str(e["to"]), _update_from_json(e["update"], dimension)))
    positions, edges, insertions = split_parallel_edges(positions, edges)
    game = GameGraph.build(dimension, positions, edges)
    try:
        game.require_valid()
    except InvalidGameError as exc:
        raise _fail(f"invalid game: {exc}") from None
    annotations = doc.get("annotations", {})
    if not isinstance(annotations, dict):
        raise _fail("'annotations' must be an object")
    return LoadedGame(game=game, insertions=tuple(insertions), annotations=annotations)


def load_game(path: str | Path) -> LoadedGame:
    return game_from_dict(_load_document(path))


def game_to_dict(game: GameGraph, annotations: dict[str, Any] | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "schema": GAME_SCHEMA,
        "dimension": game.dimension,
        "positions": [
            {"id": p.id, "owner": p.owner.value}
            for p in sorted(game.positions, key=lambda p: p.id)
        ],
        "edges": [
            {"from": e.source, "to": e.target, "update": _update_to_json(e.update)}
            for e in sorted(game.edges, key=lambda e: (e.source, e.target))
        ],
    }
    if annotations:
        doc["annotations"] = annotations
    return doc


def save_game(game: GameGraph, path: str | Path, annotations: dict[str, Any] | None = None) -> None:
    Path(path).write_text(json.dumps(game_to_dict(game, annotations), indent=2) + "\n")


def _require_schema(doc: Any, schema: str) -> dict[str, Any]:
    if not isinstance(doc, dict) or doc.get("schema") != schema:
        got = doc.get("schema") if isinstance(doc, dict) else None
        raise _fail(f"expected schema {schema!r}, got {got!r}")
    return doc


def _energy_from_json(raw: Any) -> Energy:
    if isinstance(raw, str):
        return Energy.parse(raw)
    if isinstance(raw, list):
        try:
            return Energy(tuple(int(c) for c in raw))
        except (TypeError, ValueError) as exc:
            raise _fail(f"bad energy {raw!r}: {exc}") from None
    raise _fail(f"bad energy {raw!r}")


def load_weighted_graph(path: str | Path) -> WeightedGraph:
    doc = _require_schema(_load_document(path), "weighted-graph/1")
    try:
        return WeightedGraph(
            nodes=tuple(str(v) for v in doc["nodes"]),
            edges=tuple((str(v), int(w), str(u)) for v, w, u in doc["edges"]),
            source=str(doc["source"]),
            target=str(doc["target"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"bad weighted graph: {exc}") from None


def load_vass(path: str | Path) -> Vass:
    doc = _require_schema(_load_document(path), "vass/1")
    try:
        return Vass(
            states=tuple(str(q) for q in doc["states"]),
            transitions=tuple(
                (str(q), tuple(int(c) for c in w), str(q2)) for q, w, q2 in doc["transitions"]
            ),
            initial=(str(doc["initial"]["state"]), _energy_from_json(doc["initial"]["energy"])),
            target=(str(doc["target"]["state"]), _energy_from_json(doc["target"]["energy"])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"bad vass: {exc}") from None


def load_multi_reachability(path: str | Path) -> MultiReachabilityGame:
    doc = _require_schema(_load_document(path), "multi-reachability/1")
    try:
        dimension = int(doc["dimension"])
        positions = tuple(
            Position(str(p["id"]), Owner(p["owner"])) for p in doc["positions"]
        )
        edges = tuple(
            (str(e["from"]), str(e["to"]), tuple(int(c) for c in e["weight"]))
            for e in doc["edges"]
        )
        targets = frozenset(str(t) for t in doc["targets"])
        return MultiReachabilityGame(
            dimension=dimension, positions=positions, edges=edges, targets=targets
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"bad multi-reachability game: {exc}") from None


def load_weak_bound(path: str | Path) -> tuple[LoadedGame, set[tuple[int, int]]]:
    doc = _require_schema(_load_document(path), "weak-bound/1")
    try:
        loaded = game_from_dict(doc["game"])
        pairs = {(int(i), int(j)) for i, j in doc["pairs"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"bad weak-bound instance: {exc}") from None
    return loaded, pairs


def load_generalized_reachability(path: str | Path) -> tuple[LoadedGame, list[frozenset[str]]]:
    doc = _require_schema(_load_document(path), "generalized-reachability/1")
    try:
        loaded = game_from_dict(doc["game"])
        targets = [frozenset(str(p) for p in f) for f in doc["targets"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"bad generalized-reachability instance: {exc}") from None
    return loaded, targets
