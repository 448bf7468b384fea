"""``straightpath`` command line: solve, oracle, profile and erode-dump."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager

from .export import report_dict, write_geojson, write_profile, write_report
from .geodesy import GreatCircle, parse_angle
from .morphology import DEFAULT_FACTOR, build_pyramid, check_mode, classify, write_pgm
from .oracle import DEFAULT_MAX_CIRCLES, CostCapExceeded, brute_force
from .relief import AGGREGATIONS, CELL_CENTERED, GridDataError, GridFormatError, downsample, load_grid
from .solver import solve

log = logging.getLogger("straightpath")


def _arcminutes(text: str) -> float:
    """Flag value in arcminutes, returned in degrees."""
    try:
        value = float(text.strip().rstrip("'′"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected arcminutes, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value / 60.0


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_angle(text: str) -> float:
    value = _angle(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _levels(text: str) -> list[int]:
    """``3-7``, ``3,5,7`` or a mix of both."""
    out = []
    for part in text.replace(" ", ",").split(","):
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            if sep:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError(f"level list {text!r} is empty or negative")
    return sorted(set(out))


def _grid_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("grid")
    g.add_argument("--grid", required=True, help="relief file")
    g.add_argument("--format", default="ascii-grid", choices=["raw-int16", "ascii-grid"])
    g.add_argument("--rows", type=int, help="rows of a raw-int16 file")
    g.add_argument("--cols", type=int, help="columns of a raw-int16 file")
    g.add_argument("--registration", default=CELL_CENTERED, help="gridline or cell-centered (raw-int16 only)")
    g.add_argument("--downsample", type=int, default=1, metavar="K")
    g.add_argument("--aggregate", default="nearest", choices=AGGREGATIONS)
    g.add_argument("--mode", default="water", choices=["water", "land", "water-search", "land-search"])
    g.add_argument("--step", type=_arcminutes, metavar="ARCMIN",
                   help="sampling step along each circle (default: one grid cell)")
    g.add_argument("--out", default=".", metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="straightpath",
                                     description="Longest straight-line paths over water or land.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="branch-and-bound search")
    _grid_flags(p)
    p.add_argument("--epsilon-threshold", type=_arcminutes, metavar="ARCMIN",
                   help="stop splitting boxes below this erosion distance (default: raw level)")
    p.add_argument("--factor", type=float, default=DEFAULT_FACTOR)
    p.add_argument("--gap-tolerance", type=float, default=0.0, metavar="KM")
    p.add_argument("--parallel", choices=["on", "off"], default="off")

    p = sub.add_parser("oracle", help="exhaustive lattice search")
    _grid_flags(p)
    p.add_argument("--delta-step", type=_positive_angle, required=True, metavar="DEG")
    p.add_argument("--alpha-step", type=_positive_angle, required=True, metavar="DEG")
    p.add_argument("--max-circles", type=int, default=DEFAULT_MAX_CIRCLES)
    p.add_argument("--parallel", choices=["on", "off"], default="off")

    p = sub.add_parser("profile", help="relief along one great circle")
    _grid_flags(p)
    p.add_argument("--origin", type=_angle, required=True, metavar="DEG")
    p.add_argument("--heading", type=_angle, required=True, metavar="DEG")

    p = sub.add_parser("erode-dump", help="write eroded masks as PGM images")
    _grid_flags(p)
    p.add_argument("--levels", type=_levels, required=True, help="e.g. 3-7 or 3,5,7")
    p.add_argument("--factor", type=float, default=DEFAULT_FACTOR)
    return parser


def _load(args):
    grid = load_grid(args.grid, args.format, args.rows, args.cols, args.registration)
    if args.downsample > 1:
        grid = downsample(grid, args.downsample, args.aggregate)
    mask = classify(grid, check_mode(args.mode))
    return grid, mask


@contextmanager
def _progress_log(out: str, verbose: bool = False):
    """Send solver progress to ``progress.log`` (and stderr when verbose) for the duration."""
    handlers = [logging.FileHandler(os.path.join(out, "progress.log"), mode="w")]
    if verbose:
        handlers.append(logging.StreamHandler(sys.stderr))
    saved = log.level, log.propagate
    log.setLevel(logging.DEBUG if verbose else logging.INFO)
    log.propagate = False
    for handler in handlers:
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
        log.addHandler(handler)
    try:
        yield
    finally:
        for handler in handlers:
            log.removeHandler(handler)
            handler.close()
        log.setLevel(saved[0])
        log.propagate = saved[1]


def cmd_solve(args) -> None:
    with _progress_log(args.out, args.verbose):
        grid, mask = _load(args)
        log.info("grid %dx%d, cell %.6g deg, mode %s", grid.rows, grid.cols, grid.cell_size, mask.mode)
        pyramid = build_pyramid(mask, factor=args.factor)
        log.info("pyramid of %d levels", len(pyramid))
        report = solve(pyramid, step=args.step, epsilon_threshold=args.epsilon_threshold,
                       gap_tolerance=args.gap_tolerance, parallel=args.parallel == "on")
        values = write_report(report, os.path.join(args.out, "report.json"))
        write_geojson(report.best, os.path.join(args.out, "result.geojson"),
                      {k: v for k, v in values.items() if k != "wall_time_s"})
        log.info("best %.1f km, upper bound %.1f km, %d nodes, %.1f s", report.best.length_km,
                 report.upper_bound, report.nodes_expanded, report.wall_time)
    print(f"{values['length_km']:.1f} km (gap {values['gap_km']:.1f} km) -> {args.out}")


def cmd_oracle(args) -> None:
    _, mask = _load(args)
    result = brute_force(mask, args.delta_step, args.alpha_step, args.step,
                         max_circles=args.max_circles, parallel=args.parallel == "on")
    values = report_dict(result)
    with open(os.path.join(args.out, "oracle.json"), "w") as fh:
        json.dump(values, fh, indent=2)
        fh.write("\n")
    print(f"{values['length_km']:.1f} km over {result.circles} circles -> {args.out}")


def cmd_profile(args) -> None:
    grid, mask = _load(args)
    circle = GreatCircle.canonical(args.origin, args.heading)
    count = write_profile(grid, mask, circle, os.path.join(args.out, "profile.csv"), args.step)
    print(f"{count} samples -> {os.path.join(args.out, 'profile.csv')}")


def cmd_erode_dump(args) -> None:
    _, mask = _load(args)
    pyramid = build_pyramid(mask, factor=args.factor)
    for k in args.levels:
        level = pyramid.level(min(k, pyramid.depth))
        name = os.path.join(args.out, f"level_{k:02d}.pgm")
        write_pgm(level.mask, name)
        print(f"level {k}: epsilon {level.epsilon:.6g} deg, radius {level.radius_cells:.3f} cells -> {name}")


COMMANDS = {"solve": cmd_solve, "oracle": cmd_oracle, "profile": cmd_profile, "erode-dump": cmd_erode_dump}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "raw-int16" and (args.rows is None or args.cols is None):
        parser.error("--format raw-int16 needs --rows and --cols")
    os.makedirs(args.out, exist_ok=True)
    try:
        COMMANDS[args.command](args)
    except CostCapExceeded as exc:
        print(f"straightpath: refusing: {exc}", file=sys.stderr)
        return 1
    except (GridFormatError, GridDataError, OSError, ValueError) as exc:
        print(f"straightpath: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
