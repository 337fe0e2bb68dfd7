"""Fixed-point computation of minimal attacker winning budgets.

Starting from the empty budget at every position, each pass pulls winning
energies backwards over the edges via the update inverses and keeps the
minima, until two consecutive passes agree:

* attacker position: minimal elements of
  ``{ u.invert(e') | g -u-> g', e' in old[g'] }``
* defender position: fold over the successors, starting from the zero
  vector, keeping minima of pairwise suprema (``compute_new_win`` below);
  a defender deadlock therefore yields exactly the zero vector, and one
  empty successor budget empties the whole result.

Every pass reads the previous map only (Jacobi style), so the iteration
sequence is deterministic and position evaluations are independent.  The
resulting fixed point maps each position to the Pareto front of its
winning budgets; membership of arbitrary energies follows by upward
closure.

Fronts of games with integer edge parameters stay finite throughout, so
the passes run on int64 row matrices; the front maps exposed to callers
are ordinary ``ParetoFront`` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import IterationCapExceeded, StrategyError
from .game import GameGraph, Owner
from .lattice import Energy, ParetoFront, member_upward
from .updates import Add, MinOf, Update

FrontMap = dict[str, ParetoFront]

_CHUNK = 256
_GRID_CELL_CAP = 1 << 22


def _front_to_rows(front: ParetoFront, dimension: int) -> np.ndarray:
    rows = np.empty((len(front), dimension), dtype=np.int64)
    for r, e in enumerate(front):
        if not e.is_finite:
            raise ValueError("iteration handles finite fronts only")
        rows[r] = e.components
    return rows


def _rows_to_front(rows: np.ndarray) -> ParetoFront:
    return ParetoFront(tuple(Energy(tuple(int(c) for c in row)) for row in rows))


def _minimize_by_sweep(unique: np.ndarray) -> np.ndarray:
    """Forward sweep over lexicographically sorted rows.

    A dominating row always precedes every row it dominates in that
    order, so one pass against the kept minima suffices; rows are
    processed in chunks to keep the comparisons vectorised.
    """
    kept = np.empty_like(unique)
    count = 0
    for start in range(0, unique.shape[0], _CHUNK):
        chunk = unique[start : start + _CHUNK]
        if count:
            dominated = (kept[None, :count, :] <= chunk[:, None, :]).all(2).any(1)
            chunk = chunk[~dominated]
        if chunk.shape[0] > 1:
            mutual = (chunk[:, None, :] <= chunk[None, :, :]).all(2)
            np.fill_diagonal(mutual, False)
            chunk = chunk[~mutual.any(0)]
        kept[count : count + chunk.shape[0]] = chunk
        count += chunk.shape[0]
    return kept[:count].copy()


def _minimize_rows(rows: np.ndarray) -> np.ndarray:
    """Minimal rows under the component-wise order, lexicographically sorted.

    Rank-compresses every column and packs rows into scalar keys whose
    numeric order is the lexicographic row order; deduplication then runs
    on the keys.  When the rank grid is small enough, a cumulative sum
    along every axis counts for each cell the rows below-or-equal to it,
    and a row is minimal exactly when that count is 1 (itself); otherwise
    a chunked dominance sweep takes over.
    """
    m = rows.shape[0]
    if m <= 1:
        return rows
    n = rows.shape[1]
    ranks = np.empty((m, n), dtype=np.int64)
    sizes = []
    cells = 1
    for c in range(n):
        values, inverse = np.unique(rows[:, c], return_inverse=True)
        ranks[:, c] = inverse
        sizes.append(len(values))
        cells *= len(values)
    if cells >= 1 << 62:
        return _minimize_by_sweep(np.unique(rows, axis=0))
    keys = np.ravel_multi_index(tuple(ranks.T), sizes)
    unique_keys, first = np.unique(keys, return_index=True)
    unique = rows[first]
    if unique.shape[0] <= 1:
        return unique
    if cells > _GRID_CELL_CAP:
        return _minimize_by_sweep(unique)
    grid = np.zeros(cells, dtype=np.int32)
    grid[unique_keys] = 1
    grid = grid.reshape(sizes)
    for axis in range(n):
        np.cumsum(grid, axis=axis, out=grid)
    return unique[grid.reshape(-1)[unique_keys] == 1]


_InversePlan = list[list[tuple[int | None, int | None, tuple[int, ...]]]]


def _inverse_plan(update: Update) -> _InversePlan:
    """Per step (in undo order), per component: Add amount, Mul factor and
    the components draining into it through a MinOf."""
    plan: _InversePlan = []
    for atom in reversed(update.steps):
        step = []
        for i, spec in enumerate(atom.specs):
            if isinstance(spec, Add):
                z, m = spec.z, None
            elif isinstance(spec, MinOf):
                z, m = None, None
            else:
                z, m = None, spec.factor
            drains = tuple(
                j
                for j, other in enumerate(atom.specs)
                if isinstance(other, MinOf) and i in other.indices
            )
            step.append((z, m, drains))
        plan.append(step)
    return plan


def _invert_rows(plan: _InversePlan, rows: np.ndarray) -> np.ndarray:
    for step in plan:
        cols = []
        for i, (z, m, drains) in enumerate(step):
            if z is not None:
                col = rows[:, i] - z
                np.maximum(col, 0, out=col)
            elif m is not None:
                col = (rows[:, i] + (m - 1)) // m
            else:
                col = np.zeros(rows.shape[0], dtype=np.int64)
            for j in drains:
                col = np.maximum(col, rows[:, j])
            cols.append(col)
        rows = np.stack(cols, axis=1) if cols else rows[:, :0]
    return rows


class _Engine:
    """Array-based pass evaluator for one game."""

    def __init__(self, game: GameGraph):
        self.game = game
        self.n = game.dimension
        self.ids = game.position_ids
        self.is_attacker = {g: game.owner(g) is Owner.ATTACKER for g in self.ids}
        self.moves = {
            g: [(target, _inverse_plan(update)) for target, update in game.successors(g)]
            for g in self.ids
        }

    def empty_map(self) -> dict[str, np.ndarray]:
        return {g: np.empty((0, self.n), dtype=np.int64) for g in self.ids}

    def from_fronts(self, fronts: Mapping[str, ParetoFront]) -> dict[str, np.ndarray]:
        return {g: _front_to_rows(fronts[g], self.n) for g in self.ids}

    def to_fronts(self, rows: Mapping[str, np.ndarray]) -> FrontMap:
        return {g: _rows_to_front(rows[g]) for g in self.ids}

    def attacker_rows(self, old: Mapping[str, np.ndarray], g: str) -> np.ndarray:
        pulled = [
            _invert_rows(plan, old[target])
            for target, plan in self.moves[g]
            if old[target].shape[0]
        ]
        if not pulled:
            return np.empty((0, self.n), dtype=np.int64)
        return _minimize_rows(np.vstack(pulled))

    def defender_rows(self, old: Mapping[str, np.ndarray], g: str) -> np.ndarray:
        acc = np.zeros((1, self.n), dtype=np.int64)
        for target, plan in self.moves[g]:
            source = old[target]
            if not source.shape[0]:
                return np.empty((0, self.n), dtype=np.int64)
            pulled = _invert_rows(plan, source)
            sups = np.maximum(acc[:, None, :], pulled[None, :, :]).reshape(-1, self.n)
            acc = _minimize_rows(sups)
        return acc

    def position_rows(self, old: Mapping[str, np.ndarray], g: str) -> np.ndarray:
        if self.is_attacker[g]:
            return self.attacker_rows(old, g)
        return self.defender_rows(old, g)

    def pass_once(self, old: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
        return {g: self.position_rows(old, g) for g in self.ids}


@dataclass(frozen=True)
class SolverResult:
    """Fixed point plus instrumentation.

    ``iterations`` counts passes of the do-while loop including the final
    confirming pass; ``max_front_size`` is the largest front cardinality
    observed anywhere during the run; ``history`` keeps the front map
    after every pass (index 0 is the all-empty start), which is what the
    invariant checks and strategy extraction consume.
    """

    fronts: FrontMap
    iterations: int
    max_front_size: int
    history: tuple[FrontMap, ...] = field(repr=False)

    def front(self, g: str) -> ParetoFront:
        try:
            return self.fronts[g]
        except KeyError:
            raise KeyError(f"unknown position {g!r}") from None


def compute_new_win(game: GameGraph, old_win: Mapping[str, ParetoFront], g: str) -> ParetoFront:
    """Budget front of defender position ``g`` from the previous front map.

    Accumulates, successor by successor, the minima of suprema of one
    pulled-back energy per successor; the attacker must afford every
    defender choice simultaneously.
    """
    if game.owner(g) is not Owner.DEFENDER:
        raise ValueError(f"{g!r} is not a defender position")
    engine = _Engine(game)
    old = {
        target: _front_to_rows(old_win[target], game.dimension)
        for target, _ in game.successors(g)
    }
    return _rows_to_front(engine.defender_rows(old, g))


def iterate_once(game: GameGraph, old_win: Mapping[str, ParetoFront]) -> FrontMap:
    """One full pass over all positions, reading only the old snapshot."""
    engine = _Engine(game)
    return engine.to_fronts(engine.pass_once(engine.from_fronts(old_win)))


def estimate_worst_energy(game: GameGraph) -> Energy:
    """Component-wise over-approximation of the largest energy the
    backward iteration can produce.

    Each inverse application can raise a component by at most the largest
    Add magnitude, and relevant inverse chains are shorter than the
    position count; Mul factors scale the bound once per potential
    application.  Used to size oracle clip bounds and the iteration cap,
    never for correctness of the fronts themselves.
    """
    count = len(game.positions)
    if count <= 1:
        return Energy.zero(game.dimension)
    bound = game.max_add_magnitude() * (count - 1)
    bound *= game.max_mul_factor() ** (count - 1)
    return Energy((bound,) * game.dimension)


def default_iteration_cap(game: GameGraph) -> int:
    count = len(game.positions)
    worst = estimate_worst_energy(game)
    max_comp = max(worst.components, default=0)
    return 2 * (count * (int(max_comp) + 1) + count + 1)


def _rows_equal(a: Mapping[str, np.ndarray], b: Mapping[str, np.ndarray]) -> bool:
    return all(np.array_equal(a[g], b[g]) for g in a)


def _solve_jacobi(engine: _Engine, cap: int) -> tuple[int, list[dict[str, np.ndarray]]]:
    win = engine.empty_map()
    history = [win]
    passes = 0
    while True:
        if passes > cap:
            raise IterationCapExceeded(cap, history[-2] if len(history) > 1 else {}, history[-1])
        new = engine.pass_once(win)
        passes += 1
        history.append(new)
        if _rows_equal(new, win):
            return passes, history
        win = new


def _solve_worklist(engine: _Engine, cap: int) -> tuple[int, list[dict[str, np.ndarray]]]:
    # Recomputes only positions with a changed successor; each pass still
    # reads the previous snapshot, so the iteration sequence matches the
    # plain pass exactly.
    preds: dict[str, set[str]] = {g: set() for g in engine.ids}
    for g in engine.ids:
        for target, _ in engine.moves[g]:
            preds[target].add(g)
    win = engine.empty_map()
    history = [win]
    dirty = set(engine.ids)
    passes = 0
    while dirty:
        if passes > cap:
            raise IterationCapExceeded(cap, history[-2] if len(history) > 1 else {}, history[-1])
        new = dict(win)
        changed = []
        for g in sorted(dirty):
            rows = engine.position_rows(win, g)
            if not np.array_equal(rows, win[g]):
                new[g] = rows
                changed.append(g)
        passes += 1
        history.append(new)
        dirty = set().union(*(preds[g] for g in changed)) if changed else set()
        win = new
    return passes, history


def compute_winning_budgets(
    game: GameGraph,
    *,
    mode: str = "jacobi",
    iteration_cap: int | None = None,
) -> SolverResult:
    """Iterate to the least fixed point and return all budget fronts.

    ``mode`` selects the plain pass ("jacobi") or the worklist variant
    ("worklist"); both produce identical fronts, though the worklist may
    need fewer passes when the last changes have no predecessors left to
    revisit.  The safety cap guards against broken inputs and is generous
    enough never to fire on valid games.
    """
    game.require_valid()
    cap = default_iteration_cap(game) if iteration_cap is None else iteration_cap
    engine = _Engine(game)
    if mode == "jacobi":
        passes, raw_history = _solve_jacobi(engine, cap)
    elif mode == "worklist":
        passes, raw_history = _solve_worklist(engine, cap)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    history = tuple(engine.to_fronts(m) for m in raw_history)
    max_front = max((len(f) for fm in history for f in fm.values()), default=0)
    return SolverResult(
        fronts=history[-1], iterations=passes, max_front_size=max_front, history=history
    )


def known_initial_credit(result: SolverResult, g: str, e: Energy) -> bool:
    """Does energy ``e`` suffice to win from ``g``?"""
    return member_upward(result.front(g), e)


def unknown_initial_credit(result: SolverResult, g: str) -> bool:
    """Does any energy suffice to win from ``g``?"""
    return not result.front(g).is_empty


@dataclass(frozen=True)
class AttackerStrategy:
    """Energy-positional winning strategy read off a solved game.

    ``choose`` picks, for an attacker position and an energy in the
    upward closure of its front, a successor whose updated energy is
    winning and entered the iteration as early as possible; the entry
    index drops strictly along every move inside the winning region, so
    following the strategy reaches a defender deadlock without the energy
    ever becoming undefined.  Ties break on successor id.
    """

    game: GameGraph
    result: SolverResult

    def _birth(self, g: str, e: Energy) -> int | None:
        for k, front_map in enumerate(self.result.history):
            if member_upward(front_map[g], e):
                return k
        return None

    def choose(self, g: str, e: Energy) -> str:
        if self.game.owner(g) is not Owner.ATTACKER:
            raise LookupError(f"{g!r} is not an attacker position")
        if not member_upward(self.result.front(g), e):
            raise LookupError(f"energy {e.render()} is not winning at {g!r}")
        if self.game.is_deadlock(g):
            raise LookupError(f"{g!r} has no successors")
        best: tuple[int, str] | None = None
        for target, update in self.game.successors(g):
            nxt = update.apply(e)
            if nxt is None or not member_upward(self.result.front(target), nxt):
                continue
            birth = self._birth(target, nxt)
            assert birth is not None
            if best is None or (birth, target) < best:
                best = (birth, target)
        if best is None:
            raise StrategyError(f"no winning move at {g!r} with {e.render()}")
        return best[1]


def extract_strategy(game: GameGraph, result: SolverResult) -> AttackerStrategy:
    game.require_valid()
    return AttackerStrategy(game=game, result=result)
