"""Command-line front end.

Commands: ``solve`` (print all budget fronts), ``query`` (decide one
initial credit), ``transform`` (reduce a classical problem to a game
file) and ``check`` (differentially test the solver against the
brute-force oracle on a small game).

Exit codes: 0 success / WIN / no mismatches, 1 LOSE or mismatches found,
2 parse or validation failure, 3 iteration cap exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from . import fileio, instances, oracle, solver
from .errors import GameFileError, InvalidGameError, IterationCapExceeded
from .lattice import INF, Energy, minimize

EXIT_OK = 0
EXIT_LOSE_OR_MISMATCH = 1
EXIT_PARSE = 2
EXIT_CAP = 3

CHECK_MAX_POSITIONS = 12
CHECK_MAX_DIMENSION = 4


def _print_fronts(result: solver.SolverResult, fmt: str, stats: bool, dimension: int) -> None:
    ids = sorted(result.fronts)
    if fmt == "csv":
        header = "position," + ",".join(f"component_{i}" for i in range(dimension))
        print(header)
        for g in ids:
            for e in result.fronts[g]:
                print(f"{g}," + ",".join("inf" if c == INF else str(c) for c in e.components))
        if stats:
            print(f"# iterations={result.iterations}")
            print(f"# max_front_size={result.max_front_size}")
    else:
        for g in ids:
            front = result.fronts[g]
            print(f"{g}:" + (" " + front.render() if not front.is_empty else ""))
        if stats:
            print(f"iterations: {result.iterations}")
            print(f"max_front_size: {result.max_front_size}")


def _cmd_solve(args: argparse.Namespace) -> int:
    try:
        loaded = fileio.load_game(args.file)
        result = solver.compute_winning_budgets(loaded.game)
    except (GameFileError, InvalidGameError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IterationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    _print_fronts(result, args.format, args.stats, loaded.game.dimension)
    return EXIT_OK


def _cmd_query(args: argparse.Namespace) -> int:
    try:
        loaded = fileio.load_game(args.file)
        energy = Energy.parse(args.energy)
        if not loaded.game.has_position(args.position):
            raise GameFileError(f"unknown position {args.position!r}")
        if energy.dimension != loaded.game.dimension:
            raise GameFileError(
                f"energy has {energy.dimension} components, game has {loaded.game.dimension}"
            )
        result = solver.compute_winning_budgets(loaded.game)
    except (GameFileError, InvalidGameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IterationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    if solver.known_initial_credit(result, args.position, energy):
        print("WIN")
        return EXIT_OK
    print("LOSE")
    return EXIT_LOSE_OR_MISMATCH


def _cmd_transform(args: argparse.Namespace) -> int:
    try:
        if args.kind == "shortest-path":
            graph = fileio.load_weighted_graph(args.file)
            game, source = instances.from_shortest_path(graph)
            annotations = {"query": {"position": source}}
        elif args.kind == "vass-coverability":
            vass = fileio.load_vass(args.file)
            game, state, energy = instances.from_vass_coverability(vass)
            annotations = {"query": {"position": state, "energy": energy.render()}}
        elif args.kind == "multi-reachability":
            instance = fileio.load_multi_reachability(args.file)
            game = instances.from_multi_reachability(instance)
            annotations = {"targets": sorted(instance.targets)}
        elif args.kind == "weak-bound":
            loaded, pairs = fileio.load_weak_bound(args.file)
            game = instances.add_weak_upper_bound(loaded.game, pairs)
            annotations = {"pairs": [list(p) for p in sorted(pairs)]}
        else:
            loaded, targets = fileio.load_generalized_reachability(args.file)
            game = instances.add_generalized_reachability(loaded.game, targets)
            suffix = Energy((0,) * len(targets) + (1,))
            annotations = {
                "tracking_sets": [sorted(f) for f in targets],
                "query_energy_suffix": suffix.render(),
            }
    except (GameFileError, InvalidGameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    fileio.save_game(game, args.output, annotations)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    try:
        loaded = fileio.load_game(args.file)
    except (GameFileError, InvalidGameError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    game = loaded.game
    if len(game.positions) > CHECK_MAX_POSITIONS or game.dimension > CHECK_MAX_DIMENSION:
        print(
            f"error: check handles at most {CHECK_MAX_POSITIONS} positions "
            f"and dimension {CHECK_MAX_DIMENSION}",
            file=sys.stderr,
        )
        return EXIT_PARSE
    if args.bound < 1:
        print("error: --bound must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    try:
        result = solver.compute_winning_budgets(game)
    except IterationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    fronts = dict(result.fronts)
    if args.corrupt:
        fronts = {g: minimize([Energy.zero(game.dimension)]) for g in fronts}
    rng = random.Random(args.seed)
    mismatches = 0
    checked = 0
    for g in sorted(fronts):
        for _ in range(args.samples):
            energy = Energy(tuple(rng.randrange(args.bound) for _ in range(game.dimension)))
            checked += 1
            claimed = any(m <= energy for m in fronts[g])
            actual = oracle.stable_decide(game, g, energy).attacker_wins
            if claimed != actual:
                mismatches += 1
                print(
                    f"MISMATCH {g} {energy.render()} "
                    f"solver={'WIN' if claimed else 'LOSE'} oracle={'WIN' if actual else 'LOSE'}"
                )
    print(f"checked {checked} samples, {mismatches} mismatches")
    return EXIT_OK if mismatches == 0 else EXIT_LOSE_OR_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galois-energy",
        description="Solve energy games over vectors of extended naturals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="print the budget front of every position")
    p_solve.add_argument("file")
    p_solve.add_argument("--format", choices=["text", "csv"], default="text")
    p_solve.add_argument("--stats", action="store_true")
    p_solve.set_defaults(handler=_cmd_solve)

    p_query = sub.add_parser("query", help="decide one known-initial-credit question")
    p_query.add_argument("file")
    p_query.add_argument("--position", required=True)
    p_query.add_argument("--energy", required=True, help='e.g. "0,2,0,10" or "inf,0"')
    p_query.set_defaults(handler=_cmd_query)

    p_transform = sub.add_parser("transform", help="reduce a problem instance to a game file")
    p_transform.add_argument(
        "kind",
        choices=[
            "shortest-path",
            "vass-coverability",
            "multi-reachability",
            "weak-bound",
            "generalized-reachability",
        ],
    )
    p_transform.add_argument("file")
    p_transform.add_argument("-o", "--output", required=True)
    p_transform.set_defaults(handler=_cmd_transform)

    p_check = sub.add_parser("check", help="compare solver answers against the oracle")
    p_check.add_argument("file")
    p_check.add_argument("--samples", type=int, default=50)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--bound", type=int, default=8)
    p_check.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p_check.set_defaults(handler=_cmd_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
