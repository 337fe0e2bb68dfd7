"""Shared fixtures: the espresso game, random game generators and the
independent check helpers used across the suite."""

from __future__ import annotations

import random
from collections import defaultdict, deque

import numpy as np
import pytest

from galois_energy import fileio, solver
from galois_energy.game import GameGraph, Owner
from galois_energy.instances import Vass
from galois_energy.lattice import Energy, ParetoFront, member_upward
from galois_energy.updates import Add, MinOf, Update, UpdateAtom


@pytest.fixture(scope="session")
def espresso() -> GameGraph:
    return fileio.load_game(fileio.bundled_game_path()).game


EXPECTED_CUPS_TIME = {(1, 20), (2, 10), (3, 6), (4, 4), (5, 2), (10, 1)}


def cups_time_projection(front: ParetoFront) -> set[tuple[int, int]]:
    """Front elements with zero shots and zero energization, as (cups, time)."""
    return {
        (e.components[0], e.components[1])
        for e in front
        if e.components[2] == 0 and e.components[3] == 0
    }


def random_update(
    rng: random.Random, n: int, max_abs: int, max_steps: int, declining: bool = False
) -> Update:
    steps = []
    for _ in range(rng.randint(1, max_steps)):
        specs = []
        for i in range(n):
            if rng.random() < 0.75:
                low = -max_abs
                high = 0 if declining else max_abs
                specs.append(Add(rng.randint(low, high)))
            else:
                pool = [k for k in range(n) if k != i]
                picks = rng.sample(pool, rng.randint(0, min(2, len(pool))))
                if declining:
                    # keeping the component itself in the set makes the
                    # minimum non-increasing in every component
                    specs.append(MinOf(tuple([i] + picks)))
                else:
                    specs.append(MinOf(tuple(picks or [i])))
        steps.append(UpdateAtom(tuple(specs)))
    return Update(tuple(steps))


def random_game(
    rng: random.Random,
    max_positions: int = 8,
    max_dim: int = 3,
    max_abs: int = 2,
    max_steps: int = 2,
    declining: bool = False,
) -> GameGraph:
    n = rng.randint(1, max_dim)
    count = rng.randint(2, max_positions)
    ids = [f"p{i}" for i in range(count)]
    positions = [
        (g, Owner.ATTACKER if rng.random() < 0.5 else Owner.DEFENDER) for g in ids
    ]
    edges = []
    for g in ids:
        for target in rng.sample(ids, rng.randint(0, min(3, count))):
            edges.append((g, target, random_update(rng, n, max_abs, max_steps, declining)))
    return GameGraph.build(n, positions, edges)


def _rows(front: ParetoFront) -> np.ndarray:
    return np.array([e.components for e in front], dtype=float)


def is_antichain(front: ParetoFront) -> bool:
    if len(front) <= 1:
        return True
    rows = _rows(front)
    dominates = (rows[:, None, :] <= rows[None, :, :]).all(2)
    np.fill_diagonal(dominates, False)
    return not dominates.any()


def closure_grew(prev: ParetoFront, nxt: ParetoFront) -> bool:
    """Upward closure of ``prev`` contained in the one of ``nxt``?"""
    if prev.is_empty:
        return True
    if nxt.is_empty:
        return False
    p, n = _rows(prev), _rows(nxt)
    return bool((n[None, :, :] <= p[:, None, :]).all(2).any(1).all())


def assert_solver_invariants(game: GameGraph, result: solver.SolverResult) -> None:
    for front_map in result.history:
        for front in front_map.values():
            assert is_antichain(front)
    for earlier, later in zip(result.history, result.history[1:]):
        for g in earlier:
            assert closure_grew(earlier[g], later[g])
    assert solver.iterate_once(game, result.fronts) == result.fronts
    for front in result.fronts.values():
        for e in front:
            assert e.is_finite


def solve_checked(game: GameGraph, **kwargs) -> solver.SolverResult:
    result = solver.compute_winning_budgets(game, **kwargs)
    assert_solver_invariants(game, result)
    return result


def bellman_ford_to_target(
    nodes: tuple[str, ...], edges: tuple[tuple[str, int, str], ...], target: str
) -> dict[str, float]:
    """Single-destination distances by plain edge relaxation.

    Nonnegative weights only; an unreachable node keeps distance inf.
    """
    dist: dict[str, float] = {v: float("inf") for v in nodes}
    dist[target] = 0.0
    for _ in range(max(len(nodes) - 1, 1)):
        changed = False
        for u, w, v in edges:
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            break
    return dist


def vass_coverable_bruteforce(vass: Vass, clip: int) -> bool:
    """Forward exploration of the vector addition system with clipping."""
    outgoing = defaultdict(list)
    for q, w, q2 in vass.transitions:
        outgoing[q].append((w, q2))
    target_state = vass.target[0]
    target_energy = tuple(int(c) for c in vass.target[1].components)
    start = (vass.initial[0], tuple(int(c) for c in vass.initial[1].components))
    seen = {start}
    queue = deque([start])
    while queue:
        state, energy = queue.popleft()
        if state == target_state and all(a >= b for a, b in zip(energy, target_energy)):
            return True
        for w, q2 in outgoing[state]:
            nxt = tuple(a + b for a, b in zip(energy, w))
            if any(c < 0 for c in nxt):
                continue
            nxt = tuple(min(c, clip) for c in nxt)
            if (q2, nxt) not in seen:
                seen.add((q2, nxt))
                queue.append((q2, nxt))
    return False


def attacker_wins_all_plays(
    game: GameGraph,
    result: solver.SolverResult,
    strategy: solver.AttackerStrategy,
    g: str,
    e: Energy,
    depth: int,
) -> bool:
    """Play the strategy against every defender choice, bounded in depth."""
    if depth < 0:
        return False
    owner = game.owner(g)
    if game.is_deadlock(g):
        return owner is Owner.DEFENDER
    if owner is Owner.ATTACKER:
        target = strategy.choose(g, e)
        update = game.update_between(g, target)
        assert update is not None
        nxt = update.apply(e)
        if nxt is None:
            return False
        return attacker_wins_all_plays(game, result, strategy, target, nxt, depth - 1)
    for target, update in game.successors(g):
        nxt = update.apply(e)
        if nxt is None:
            return False
        if not attacker_wins_all_plays(game, result, strategy, target, nxt, depth - 1):
            return False
    return True
