"""Parameter scans behind the four figures, CSV/SVG output and the CLI."""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .landau import NATURAL, SI, FieldConfig, PacketSpec, PhysicalConstants
from .observables import (
    SpeedResult,
    antiparticle_optimal_momentum,
    antiparticle_speed_sharp,
    speed_nonrel,
    speed_rel,
    strong_field_speed_result,
)
from .qsl import Kind, SuperpositionSpec
from .specfun import DEFAULT_QUADRATURE, QuadratureConfig

CSV_COLUMNS = ("axis", "t_min_s", "displacement_m", "v_bar_over_c", "kind", "status")
FIGURES = ("fig1", "fig2", "fig3", "fig4", "custom")
AXES = ("B", "n", "p0")

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_IO = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class ScanRow:
    axis: float
    t_min: float
    displacement: float
    v_bar_over_c: float
    kind: str
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class ScanRequest:
    """One scan: axis values plus the parameters held fixed.

    ``fixed`` keys: B (field, in the chosen units), n, p0 (units of hbar beta,
    or None for the per-point optimum in fig3), d (units of 1/beta), kinds
    (sequence of kind names), fields (sequence of B for fig4 series).
    """

    figure: str
    axis: str
    grid: tuple[float, ...]
    fixed: dict = field(default_factory=dict)
    csv_path: str | None = None
    svg_path: str | None = None
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE
    units: str = "si"

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise UsageError(f"unknown figure {self.figure!r}")
        if self.axis not in AXES:
            raise UsageError(f"unknown axis {self.axis!r}")
        if self.units not in ("si", "natural"):
            raise UsageError(f"units must be 'si' or 'natural', got {self.units!r}")
        if len(self.grid) == 0:
            raise UsageError("scan grid is empty")
        diffs = np.diff(self.grid)
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise UsageError("scan grid must be strictly monotone")
        if self.axis == "n" and any(v != int(v) or int(v) % 2 or v < 0 for v in self.grid):
            raise UsageError("n grid must hold even non-negative integers")
        if self.axis == "B" and any(v <= 0 for v in self.grid):
            raise UsageError("B grid must be positive")

    @property
    def constants(self) -> PhysicalConstants:
        return SI if self.units == "si" else NATURAL

    def header_comment(self) -> list[str]:
        lines = [f"figure={self.figure}", f"axis={self.axis}", f"units={self.units}"]
        lines += [f"{key}={_describe(value)}" for key, value in sorted(self.fixed.items())]
        q = self.quadrature
        lines.append(f"quadrature=rtol:{q.relative_tolerance:g},subdiv:{q.max_subdivisions},"
                     f"momentum_nodes:{q.momentum_node_count},cutoff:{q.radial_cutoff_factor:g}")
        return lines


def _describe(value) -> str:
    if value is None:
        return "argmax"
    if isinstance(value, (list, tuple)):
        return ",".join(_describe(v) for v in value)
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def critical_field(constants: PhysicalConstants = SI) -> float:
    """m0^2 c^2 / (e hbar), about 4.4e9 T: the field where relativity matters."""
    return constants.m0**2 * constants.c**2 / (constants.e * constants.hbar)


def _tesla(b_si: float, units: str) -> float:
    # presets are written in tesla; natural units measure B in critical fields
    return b_si if units == "si" else b_si / critical_field(SI)


def make_grid(lo: float, hi: float, count: int, spacing: str) -> tuple[float, ...]:
    if count < 1:
        raise UsageError("grid count must be at least 1")
    if spacing == "lin":
        values = np.linspace(lo, hi, count)
    elif spacing == "log":
        if lo <= 0 or hi <= 0:
            raise UsageError("log grid needs positive bounds")
        values = np.logspace(math.log10(lo), math.log10(hi), count)
    else:
        raise UsageError(f"grid spacing must be lin or log, got {spacing!r}")
    return tuple(float(v) for v in values)


def parse_grid(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"grid must look like min:max:count:lin|log, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None
    return make_grid(lo, hi, count, parts[3])


def preset_request(figure: str, units: str = "si", quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
                   **overrides) -> ScanRequest:
    """Build the request for a figure preset; overrides replace fixed parameters or the grid."""
    grid = overrides.pop("grid", None)
    csv_path = overrides.pop("csv_path", None)
    svg_path = overrides.pop("svg_path", None)
    if figure == "fig1":
        axis = "B"
        fixed = {"n": 0, "p0": 0.0, "d": 50.0, "kinds": ("nonrelativistic", "particle_particle")}
        default_grid = make_grid(_tesla(1e8, units), _tesla(1e13, units), 60, "log")
    elif figure in ("fig2", "fig3"):
        axis = "n"
        fixed = {"B": _tesla(1e15, units)}
        fixed["kinds"] = ("particle_particle",) if figure == "fig2" else ("antiparticle_particle",)
        if figure == "fig3":
            fixed["p0"] = None
        default_grid = tuple(float(n) for n in range(0, 133, 2))
    elif figure == "fig4":
        axis = "p0"
        fixed = {"n": 0, "d": 50.0, "kinds": ("particle_particle", "antiparticle_particle"),
                 "fields": tuple(_tesla(b, units) for b in (1e10, 1e11, 1e12))}
        default_grid = make_grid(0.0, 10.0, 41, "lin")
    elif figure == "custom":
        axis = overrides.pop("axis", None)
        if axis is None:
            raise UsageError("custom scans need an axis")
        fixed = {"n": 0, "p0": 0.0, "d": 50.0, "B": _tesla(1e12, units), "kinds": ("particle_particle",)}
        default_grid = None
    else:
        raise UsageError(f"unknown figure {figure!r}")
    for key, value in overrides.items():
        if value is not None:
            fixed[key] = value
    if "B" in fixed and axis != "B" and figure != "fig4":
        fixed["B"] = float(fixed["B"])
    if figure == "fig4" and "B" in overrides and overrides["B"] is not None:
        fixed["fields"] = (float(overrides["B"]),)
        fixed.pop("B", None)
    grid = grid if grid is not None else default_grid
    if grid is None:
        raise UsageError("custom scans need --grid")
    return ScanRequest(figure, axis, tuple(grid), fixed, csv_path, svg_path, quadrature, units)


def _point_tasks(req: ScanRequest) -> list[tuple[float, str, Callable[[], SpeedResult]]]:
    """Expand a request into (axis value, series label, thunk) in output order."""
    fx = req.fixed
    k = req.constants
    cfg = req.quadrature
    tasks = []
    if req.figure == "fig4":
        for b in fx["fields"]:
            for kind in fx["kinds"]:
                label = f"{kind}@B={b:g}"
                for x in req.grid:
                    tasks.append((x, label, _speed_thunk(kind, fx["n"], b, x, fx["d"], k, cfg)))
        return tasks
    for kind in fx["kinds"]:
        for x in req.grid:
            if req.figure in ("fig2", "fig3"):
                thunk = _strong_field_thunk(kind, int(x), fx["B"], fx.get("p0"), k)
                label = f"{kind}_strong_field"
            else:
                b = x if req.axis == "B" else fx["B"]
                n = int(x) if req.axis == "n" else fx["n"]
                p0 = x if req.axis == "p0" else fx["p0"]
                thunk = _speed_thunk(kind, n, b, p0, fx["d"], k, cfg)
                label = kind
            tasks.append((x, label, thunk))
    return tasks


def _speed_thunk(kind, n, b, p0_over, d_over, k, cfg):
    def run():
        fld = FieldConfig(b, k)
        if kind == "nonrelativistic" and n == 0 and p0_over == 0:
            return speed_nonrel(fld)
        packet = PacketSpec(p0_over * fld.beta_hbar, d_over / fld.beta, k.hbar)
        return speed_rel(SuperpositionSpec(Kind(kind), n, packet, fld), cfg)
    return run


def _strong_field_thunk(kind, n, b, p0_over, k):
    def run():
        fld = FieldConfig(b, k)
        if kind == "particle_particle":
            return strong_field_speed_result(n, fld)
        if kind == "antiparticle_particle":
            p0 = antiparticle_optimal_momentum(n, fld) if p0_over is None else p0_over * fld.beta_hbar
            return antiparticle_speed_sharp(n, fld, p0)
        raise UsageError(f"strong-field scans support particle kinds only, got {kind!r}")
    return run


def _evaluate(task) -> ScanRow:
    x, label, thunk = task
    try:
        r = thunk()
    except UsageError:
        raise
    except (ArithmeticError, ValueError) as exc:
        nan = float("nan")
        return ScanRow(x, nan, nan, nan, label, f"failed:{type(exc).__name__}")
    return ScanRow(x, r.t_min, r.displacement, r.v_bar_over_c, label)


def run_scan(req: ScanRequest, workers: int = 1) -> list[ScanRow]:
    """Evaluate every grid point; rows follow grid order whatever the worker count."""
    tasks = _point_tasks(req)
    if workers <= 1:
        return [_evaluate(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate, tasks))


# -- output ---------------------------------------------------------------------

def _fmt(x: float) -> str:
    return "nan" if not math.isfinite(x) else format(x, ".11e")


def format_csv(rows: Sequence[ScanRow], comment: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comment]
    lines.append(",".join(CSV_COLUMNS))
    for r in rows:
        lines.append(",".join((_fmt(r.axis), _fmt(r.t_min), _fmt(r.displacement),
                               _fmt(r.v_bar_over_c), r.kind, r.status)))
    return "\n".join(lines) + "\n"


def emit_csv(rows: Sequence[ScanRow], path: str, comment: Sequence[str] = ()) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(rows, comment))


def read_csv(path: str) -> list[ScanRow]:
    rows = []
    with open(path) as fh:
        body = [line for line in fh if not line.startswith("#")]
    if not body or body[0].strip() != ",".join(CSV_COLUMNS):
        raise ValueError(f"{path}: missing or unexpected CSV header")
    for line in body[1:]:
        axis, t, disp, v, kind, status = line.rstrip("\n").split(",")
        rows.append(ScanRow(float(axis), float(t), float(disp), float(v), kind, status))
    return rows


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
_AXIS_LABELS = {"B": "B (field units)", "n": "n", "p0": "p0 / (hbar beta)"}


def _rounded(x: float) -> float:
    # plot exactly what the CSV stores so a reloaded CSV replots byte-identically
    return float(_fmt(x))


def format_svg(rows: Sequence[ScanRow], xlabel: str, title: str = "", log_x: bool = False) -> str:
    pts = [(_rounded(r.axis), _rounded(r.v_bar_over_c), r.kind) for r in rows if r.ok]
    if not pts:
        raise ValueError("no successful rows to plot")
    width, height, margin = 640, 420, 60
    xs = [math.log10(x) if log_x else x for x, _, _ in pts]
    ys = [y for _, y, _ in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def sx(x):
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle" font-size="14">'
        f'{"log10 " if log_x else ""}{xlabel}</text>',
        f'<text x="18" y="{height / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {height / 2:.1f})">v_bar / c</text>',
        f'<text x="{margin}" y="{height - margin + 16}" font-size="11">{x0:.4g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 16}" font-size="11" text-anchor="end">{x1:.4g}</text>',
        f'<text x="{margin - 4}" y="{height - margin}" font-size="11" text-anchor="end">{y0:.4g}</text>',
        f'<text x="{margin - 4}" y="{margin + 4}" font-size="11" text-anchor="end">{y1:.4g}</text>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16">{title}</text>')
    series: dict[str, list[tuple[float, float]]] = {}
    for (x, y, kind), xv in zip(pts, xs):
        series.setdefault(kind, []).append((xv, y))
    for idx, (kind, seq) in enumerate(series.items()):
        colour = _PALETTE[idx % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in seq)
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{coords}"/>')
        out.append(f'<text x="{width - margin - 4}" y="{margin + 16 * (idx + 1)}" font-size="11" '
                   f'text-anchor="end" fill="{colour}">{kind}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(rows: Sequence[ScanRow], path: str, xlabel: str = "axis", title: str = "",
             log_x: bool = False) -> None:
    text = format_svg(rows, xlabel, title, log_x)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def svg_style(req: ScanRequest) -> dict:
    label = _AXIS_LABELS[req.axis]
    if req.axis == "B" and req.units == "si":
        label = "B (T)"
    if req.axis == "B" and req.units == "natural":
        label = "B / B_c"
    return {"xlabel": label, "title": req.figure, "log_x": req.axis == "B"}


# -- command line ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="landau-qsl", description="Quantum speed limit scans for an electron in a magnetic field.")
    sub = parser.add_subparsers(dest="figure", required=True, parser_class=_Parser)
    for name in FIGURES:
        p = sub.add_parser(name)
        p.add_argument("--B", type=float, help="field strength (tesla, or critical-field units with --units natural)")
        p.add_argument("--n", type=int, help="lower radial quantum number (even)")
        p.add_argument("--p0-over-beta-hbar", type=float, dest="p0", help="mean axial momentum in units of hbar beta")
        p.add_argument("--d-over-inv-beta", type=float, dest="d", help="packet width d in units of 1/beta")
        p.add_argument("--grid", type=str, help="min:max:count:lin|log")
        p.add_argument("--csv", type=str, help="CSV output path (default: stdout)")
        p.add_argument("--svg", type=str, help="SVG plot output path")
        p.add_argument("--tol", type=float, default=DEFAULT_QUADRATURE.relative_tolerance)
        p.add_argument("--momentum-nodes", type=int, default=DEFAULT_QUADRATURE.momentum_node_count)
        p.add_argument("--units", choices=("si", "natural"), default="si")
        p.add_argument("--workers", type=int, default=1)
        if name == "custom":
            p.add_argument("--axis", choices=AXES, required=True)
            p.add_argument("--kind", choices=[k.value for k in Kind], default="particle_particle")
    return parser


def request_from_args(args: argparse.Namespace) -> ScanRequest:
    try:
        cfg = QuadratureConfig(relative_tolerance=args.tol, momentum_node_count=args.momentum_nodes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    overrides = {"B": args.B, "n": args.n, "p0": args.p0, "d": args.d,
                 "csv_path": args.csv, "svg_path": args.svg}
    if args.grid:
        overrides["grid"] = parse_grid(args.grid)
    if args.figure == "custom":
        overrides["axis"] = args.axis
        overrides["kinds"] = (args.kind,)
    if args.n is not None and (args.n < 0 or args.n % 2):
        raise UsageError("--n must be even and non-negative")
    return preset_request(args.figure, args.units, cfg, **overrides)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        req = request_from_args(args)
        rows = run_scan(req, workers=args.workers)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = format_csv(rows, req.header_comment())
    try:
        if req.csv_path:
            with open(req.csv_path, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if req.svg_path and any(r.ok for r in rows):
            emit_svg(rows, req.svg_path, **svg_style(req))
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    failed = sum(not r.ok for r in rows)
    if failed:
        print(f"{failed} of {len(rows)} rows failed", file=sys.stderr)
    return EXIT_COMPUTE if failed == len(rows) else EXIT_OK
