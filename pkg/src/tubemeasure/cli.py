"""Command-line front end.

Subcommands: bounds, plank, cover, pack, refine, proof.  Every report
carries a config echo (seed, sample counts, tolerances) so results are
self-describing, and identical invocations with identical seeds print
byte-identical output.

Exit codes: 0 success, 1 invariant or step failure (the mathematics
went wrong), 2 input error (unparseable files, bad parameters, shapes
out of range).  The environment variable TUBEMEASURE_THREADS is read
and echoed for bookkeeping; it never affects numeric output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import compute_bounds, plank_value_2d
from .covers import (
    cover_check,
    cover_cost,
    cover_search,
    parallel_cover_from_projection,
)
from .errors import ParameterError, SchemaError, StepFailureError
from .geometry import regular_tetrahedron, unit_vector
from .projection import shadow_area_with_error
from .proof import ball_square_packing, common_refinement, run_proof_walkthrough
from .serialization import (
    bound_report_to_json,
    cover_from_json,
    cover_to_json,
    rational_to_json,
    shape_from_json,
)

_DEFAULT_TOLERANCES = {
    "contains": 1e-9,
    "frame_orthonormality": 1e-10,
    "algebraic_agreement": 1e-12,
}

_BUILTIN_SHAPES = ("tetrahedron",)


@dataclass(frozen=True)
class RunConfig:
    """One invocation's knobs, echoed verbatim into every report."""

    seed: int = 0
    mc_samples: int = 1_000_000
    grid_points: int = 2048
    tolerances: dict = field(default_factory=lambda: dict(_DEFAULT_TOLERANCES))
    output_format: str = "json"

    def __post_init__(self):
        if self.mc_samples < 1000:
            raise ParameterError("mc_samples must be at least 1000")
        if self.grid_points < 1:
            raise ParameterError("grid_points must be positive")
        if any(v <= 0 for v in self.tolerances.values()):
            raise ParameterError("all tolerances must be positive")
        if self.output_format not in ("json", "csv"):
            raise ParameterError("output format must be json or csv")

    def to_dict(self) -> dict:
        threads = os.environ.get("TUBEMEASURE_THREADS")
        return {
            "seed": self.seed,
            "mc_samples": self.mc_samples,
            "grid_points": self.grid_points,
            "tolerances": dict(self.tolerances),
            "output_format": self.output_format,
            "threads": int(threads) if threads and threads.isdigit() else None,
        }


# ---------------------------------------------------------------------------
# input loading


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _load_shape(spec: str):
    if spec == "tetrahedron":
        return regular_tetrahedron()
    return shape_from_json(_load_json_file(spec))


def _parse_direction(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise SchemaError(f"direction must be comma-separated numbers: {text!r}") from exc
    if len(parts) < 2:
        raise SchemaError("direction needs at least two components")
    return unit_vector(np.array(parts))


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a rational number: {text!r}") from exc


# ---------------------------------------------------------------------------
# output emission


def _flatten(obj, prefix: str = ""):
    rows = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            rows.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            rows.append((prefix, json.dumps(obj)))
        else:
            for i, v in enumerate(obj):
                rows.extend(_flatten(v, f"{prefix}[{i}]"))
    else:
        rows.append((prefix, obj if isinstance(obj, str) else json.dumps(obj)))
    return rows


def _emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(report):
        writer.writerow([key, value])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands


def _cmd_bounds(args, cfg: RunConfig) -> dict:
    shape = _load_shape(args.shape)
    report = compute_bounds(
        shape,
        mc_samples=cfg.mc_samples,
        grid_points=cfg.grid_points,
        seed=cfg.seed,
    )
    return bound_report_to_json(report)


def _cmd_plank(args, cfg: RunConfig) -> dict:
    shape = _load_shape(args.shape)
    width, direction = plank_value_2d(shape)
    return {
        "width": width,
        "witness_direction": [float(v) for v in direction],
        "method": "rotating calipers (exact for convex polygons)",
    }


def _cmd_cover(args, cfg: RunConfig) -> dict:
    shape = _load_shape(args.shape)
    result: dict = {}
    if args.cover is not None:
        cover = cover_from_json(_load_json_file(args.cover))
        result["source"] = "file"
    elif args.search:
        cover = cover_search(shape, budget=args.budget, seed=cfg.seed)
        result["source"] = "search"
    elif args.parallel is not None:
        direction = _parse_direction(args.parallel[0])
        grid_step = float(_parse_rational(args.parallel[1]))
        cover = parallel_cover_from_projection(shape, direction, grid_step)
        result["source"] = "parallel"
        area, std_error = shadow_area_with_error(
            shape, direction, samples=cfg.mc_samples, seed=cfg.seed
        )
        result["shadow_area"] = area
        result["shadow_std_error"] = std_error
    else:
        raise SchemaError("cover needs one of --cover FILE, --search, --parallel D H")

    cost = cover_cost(cover)
    covered, worst = cover_check(shape, cover, samples=cfg.mc_samples, seed=cfg.seed)
    result.update(
        {
            "tubes": len(cover),
            "cost": cost,
            "covered": covered,
            "worst_point": None if worst is None else [float(v) for v in worst],
        }
    )
    if "shadow_area" in result:
        result["slack"] = cost - result["shadow_area"]
    if result["source"] != "file":
        result["cover"] = cover_to_json(cover)
    return result


def _cmd_pack(args, cfg: RunConfig) -> dict:
    packing = ball_square_packing(args.dim, args.radius, args.depth)
    return packing.to_dict()


def _cmd_refine(args, cfg: RunConfig) -> dict:
    delta_a = _parse_rational(args.widths[0])
    delta_b = _parse_rational(args.widths[1])
    delta, count_a, count_b = common_refinement(delta_a, delta_b)
    return {
        "width_a": rational_to_json(delta_a),
        "width_b": rational_to_json(delta_b),
        "delta": rational_to_json(delta),
        "count_a": count_a,
        "count_b": count_b,
    }


def _cmd_proof(args, cfg: RunConfig) -> dict:
    report = run_proof_walkthrough(args.dim, args.depth, seed=cfg.seed)
    return report.to_dict()


# ---------------------------------------------------------------------------
# parser and entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubemeasure",
        description="Bounds, covers, and constructive checks for the tube measure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, samples_default=1_000_000):
        p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        p.add_argument(
            "--samples", type=int, default=samples_default, help="Monte-Carlo samples"
        )
        p.add_argument(
            "--format", choices=("json", "csv"), default="json", help="output format"
        )

    p = sub.add_parser("bounds", help="lower and upper tube-measure bounds of a shape")
    p.add_argument("--shape", required=True, help="shape JSON file or 'tetrahedron'")
    p.add_argument("--grid-points", type=int, default=2048, help="direction grid size")
    add_common(p)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("plank", help="exact minimal width of a planar convex body")
    p.add_argument("--shape", required=True, help="2-D shape JSON file")
    add_common(p)
    p.set_defaults(handler=_cmd_plank)

    p = sub.add_parser("cover", help="evaluate or construct a tube cover")
    p.add_argument("--shape", required=True, help="shape JSON file or 'tetrahedron'")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--cover", help="cover JSON file to evaluate")
    group.add_argument("--search", action="store_true", help="randomized cover search")
    group.add_argument(
        "--parallel",
        nargs=2,
        metavar=("DIRECTION", "STEP"),
        help="parallel grid cover: comma-separated direction and grid step",
    )
    p.add_argument("--budget", type=int, default=256, help="search iteration budget")
    add_common(p, samples_default=100_000)
    p.set_defaults(handler=_cmd_cover)

    p = sub.add_parser("pack", help="dyadic square packing of a ball")
    p.add_argument("--dim", type=int, required=True, help="cross-section dimension m")
    p.add_argument("--radius", type=float, default=1.0, help="ball radius")
    p.add_argument("--depth", type=int, required=True, help="maximum dyadic depth")
    add_common(p)
    p.set_defaults(handler=_cmd_pack)

    p = sub.add_parser("refine", help="exact common refinement of two rational widths")
    p.add_argument(
        "--widths",
        nargs=2,
        metavar=("A", "B"),
        required=True,
        help="two positive rationals, e.g. 3/4 5/6",
    )
    add_common(p)
    p.set_defaults(handler=_cmd_refine)

    p = sub.add_parser("proof", help="run the constructive proof walkthrough")
    p.add_argument("--dim", type=int, required=True, help="ambient dimension n (2..8)")
    p.add_argument("--depth", type=int, required=True, help="subdivision depth")
    add_common(p)
    p.set_defaults(handler=_cmd_proof)

    return parser


def _make_config(args) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        mc_samples=args.samples,
        grid_points=getattr(args, "grid_points", 2048),
        output_format=args.format,
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _make_config(args)
        result = args.handler(args, cfg)
        report = {"command": args.command, "config": cfg.to_dict(), "result": result}
        sys.stdout.write(_emit(report, cfg.output_format))
        return 0
    except StepFailureError as exc:
        if exc.report is not None:
            payload = {
                "command": args.command,
                "config": cfg.to_dict(),
                "result": exc.report.to_dict(),
            }
            sys.stdout.write(_emit(payload, cfg.output_format))
        sys.stderr.write(f"{exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except RuntimeError as exc:
        sys.stderr.write(f"failure: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
