"""Parameter sweeps: config parsing, grid evaluation, CSV and SVG output.

Config files are UTF-8, line oriented ``key = value`` text; ``#`` starts a
comment. Recognised keys::

    nu1 nu2 v12 p tau hbar_tau      fixed parameter values
    preset                          ground_excited | single_excitation
    t_max steps                     uniform time grid, steps points from 0 to t_max
    vary.<name> = start:stop:count  linearly spaced axis (at most two)

Sweep concurrency is capped by the ``FRACDIMER_THREADS`` environment
variable (a positive integer).
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, field, fields
from xml.sax.saxutils import escape

import numpy as np

from .dimer_model import DimerParams, eigensystem
from .exceptions import FracDimerError, ParseError, SweepPointError, UnknownField, ValidationError
from .mlfunc import FractionalOrder
from .qmeasures import all_measures
from .tfse import InitialState, density_matrix, evolve

__all__ = [
    "PARAMETERS",
    "CSV_COLUMNS",
    "MEASURE_FIELDS",
    "DEFAULTS",
    "Axis",
    "SweepSpec",
    "ResourceRecord",
    "parse_config",
    "time_grid",
    "run_sweep",
    "worker_count",
    "write_csv",
    "read_csv",
    "format_csv",
    "render_svg",
]

PARAMETERS = ("nu1", "nu2", "v12", "p", "tau", "hbar_tau")
CSV_COLUMNS = (
    "t", "tau", "nu1", "nu2", "v12", "p", "norm_sq",
    "coherence", "negativity", "log_negativity", "concurrence", "chsh",
)
MEASURE_FIELDS = ("norm_sq", "coherence", "negativity", "log_negativity", "concurrence", "chsh")
GROUP_FIELDS = ("tau", "nu1", "nu2", "v12", "p")
MAX_AXES = 2
THREADS_ENV = "FRACDIMER_THREADS"

# documented defaults for parameters a config leaves unset
DEFAULTS = {
    "nu1": 1.0,
    "nu2": 2.0,
    "v12": 1.0,
    "p": 1.0 / math.sqrt(2.0),
    "tau": 1.0,
    "hbar_tau": 1.0,
}
DEFAULT_T_MAX = 10.0
DEFAULT_STEPS = 500
DEFAULT_PRESET = "single_excitation"


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def values(self):
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class SweepSpec:
    """A validated sweep: fixed parameters, up to two varied axes and a time grid."""

    fixed: dict = field(default_factory=lambda: dict(DEFAULTS))
    varied: tuple = ()
    t_max: float = DEFAULT_T_MAX
    steps: int = DEFAULT_STEPS
    preset: str = DEFAULT_PRESET

    def __post_init__(self):
        fixed = {k: float(v) for k, v in self.fixed.items()}
        varied = tuple(self.varied)
        for k in fixed:
            if k not in PARAMETERS:
                raise ValidationError(f"unknown parameter {k!r}")
        names = [ax.name for ax in varied]
        if len(varied) > MAX_AXES:
            raise ValidationError(f"at most {MAX_AXES} varied axes are supported, got {len(varied)}")
        if len(set(names)) != len(names):
            raise ValidationError("varied axes must reference distinct parameters")
        for ax in varied:
            if ax.name not in PARAMETERS:
                raise ValidationError(f"unknown parameter {ax.name!r} on a varied axis")
            if ax.name in fixed:
                raise ValidationError(f"parameter {ax.name!r} is both fixed and varied")
            if ax.count < 2:
                raise ValidationError(f"axis {ax.name!r} needs count >= 2, got {ax.count}")
        for k, v in DEFAULTS.items():
            if k not in fixed and k not in names:
                fixed[k] = v
        if not (self.t_max > 0.0 and math.isfinite(self.t_max)):
            raise ValidationError(f"t_max must be positive, got {self.t_max}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValidationError(f"steps must be an integer >= 2, got {self.steps}")
        InitialState(self.preset)  # rejects unknown presets
        if self.preset == "custom":
            raise ValidationError("the custom preset is not available in sweeps")
        object.__setattr__(self, "fixed", fixed)
        object.__setattr__(self, "varied", varied)
        object.__setattr__(self, "t_max", float(self.t_max))
        object.__setattr__(self, "steps", int(self.steps))
        # every value the grid will visit must be admissible
        for point in self.points():
            _check_point(point)

    def points(self):
        """Grid points in declaration order (first axis outermost)."""
        axes = [ax.values() for ax in self.varied]
        names = [ax.name for ax in self.varied]
        for combo in itertools.product(*axes):
            point = dict(self.fixed)
            point.update(zip(names, combo))
            yield point

    @property
    def n_records(self):
        return math.prod(ax.count for ax in self.varied) * self.steps


def _check_point(point):
    try:
        FractionalOrder(point["tau"])
        DimerParams(point["nu1"], point["nu2"], point["v12"], point["hbar_tau"])
        InitialState("single_excitation", point["p"])
    except (ValueError, FracDimerError) as exc:
        raise ValidationError(str(exc)) from exc


@dataclass(frozen=True)
class ResourceRecord:
    t: float
    tau: float
    nu1: float
    nu2: float
    v12: float
    p: float
    norm_sq: float
    coherence: float
    negativity: float
    log_negativity: float
    concurrence: float
    chsh: float


# --- config parsing -------------------------------------------------------


def _parse_float(text, key, lineno):
    try:
        val = float(text)
    except ValueError:
        raise ParseError(f"{key}: expected a number, got {text!r}", lineno) from None
    if not math.isfinite(val):
        raise ParseError(f"{key}: value must be finite", lineno)
    return val


def _parse_int(text, key, lineno):
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{key}: expected an integer, got {text!r}", lineno) from None


def parse_config(text, overrides=None):
    """Parse sweep configuration text into a :class:`SweepSpec`.

    Parameters
    ----------
    text : str
        Config file contents.
    overrides : dict, optional
        ``key -> value`` pairs applied after parsing (command-line flags).
        A fixed override removes a varied axis of the same name.

    Raises
    ------
    ParseError
        Malformed lines, unknown or duplicate keys; the message carries the
        line number.
    ValidationError
        A well-formed config that violates a sweep invariant.
    """
    fixed = {}
    axes = []
    other = {}
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        if key in seen:
            raise ParseError(f"duplicate key {key!r} (first set on line {seen[key]})", lineno)
        seen[key] = lineno
        if key in PARAMETERS:
            fixed[key] = _parse_float(value, key, lineno)
        elif key.startswith("vary."):
            name = key[len("vary."):]
            if name not in PARAMETERS:
                raise ParseError(f"cannot vary unknown parameter {name!r}", lineno)
            parts = value.split(":")
            if len(parts) != 3:
                raise ParseError(f"{key}: expected start:stop:count, got {value!r}", lineno)
            axes.append(Axis(
                name,
                _parse_float(parts[0], key, lineno),
                _parse_float(parts[1], key, lineno),
                _parse_int(parts[2], key, lineno),
            ))
        elif key == "t_max":
            other["t_max"] = _parse_float(value, key, lineno)
        elif key == "steps":
            other["steps"] = _parse_int(value, key, lineno)
        elif key == "preset":
            other["preset"] = value
        else:
            raise ParseError(f"unknown key {key!r}", lineno)

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in PARAMETERS:
            fixed[key] = float(value)
            axes = [ax for ax in axes if ax.name != key]
        elif key in ("t_max", "steps", "preset"):
            other[key] = value
        else:
            raise ValidationError(f"unknown override {key!r}")
    return SweepSpec(fixed=fixed, varied=tuple(axes), **other)


# --- evaluation -----------------------------------------------------------


def time_grid(t_max, steps):
    """``steps`` uniformly spaced times from 0 to ``t_max`` inclusive."""
    return [float(t) for t in np.linspace(0.0, t_max, steps)]


def worker_count(default=None):
    """Thread cap from ``FRACDIMER_THREADS`` (falls back to ``min(8, cpu_count)``)."""
    raw = os.environ.get(THREADS_ENV)
    if raw is not None and raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
        return n
    if default is not None:
        return default
    return min(8, os.cpu_count() or 1)


def _evaluate_point(point, times, preset):
    params = DimerParams(point["nu1"], point["nu2"], point["v12"], point["hbar_tau"])
    state = InitialState(preset, point["p"])
    tau = FractionalOrder(point["tau"])
    try:
        eig = eigensystem(params)
    except (FracDimerError, ArithmeticError, ValueError) as exc:
        raise SweepPointError(point, exc) from exc
    out = []
    for t in times:
        try:
            es = evolve(state, params, tau, t, eig=eig)
            vals = all_measures(density_matrix(es))
        except (FracDimerError, ArithmeticError, ValueError) as exc:
            raise SweepPointError({**point, "t": t}, exc) from exc
        out.append(ResourceRecord(
            t=t, tau=tau.tau, nu1=params.nu1, nu2=params.nu2, v12=params.v12, p=state.p,
            norm_sq=es.norm_sq, coherence=vals.coherence, negativity=vals.negativity,
            log_negativity=vals.log_negativity, concurrence=vals.concurrence, chsh=vals.chsh,
        ))
    return out


def run_sweep(spec, *, workers=None):
    """Evaluate every grid point of ``spec``.

    Records come out in declaration order (first varied axis outermost,
    time innermost) whatever the number of worker threads.

    Parameters
    ----------
    spec : SweepSpec
    workers : int, optional
        Thread count; defaults to :func:`worker_count`.

    Raises
    ------
    SweepPointError
        The first failing grid point (in declaration order) aborts the sweep.
    """
    times = time_grid(spec.t_max, spec.steps)
    points = list(spec.points())
    n = worker_count() if workers is None else int(workers)
    if n <= 1 or len(points) == 1:
        chunks = [_evaluate_point(pt, times, spec.preset) for pt in points]
    else:
        with ThreadPoolExecutor(max_workers=min(n, len(points))) as pool:
            futures = [pool.submit(_evaluate_point, pt, times, spec.preset) for pt in points]
            chunks = [f.result() for f in futures]
    return [rec for chunk in chunks for rec in chunk]


# --- CSV ------------------------------------------------------------------


def _fmt(x):
    return f"{x:.12g}"


def format_csv(records):
    """CSV text for ``records`` (header plus one row each, ``\\n`` line endings)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_fmt(v) for v in astuple(rec)])
    return buf.getvalue()


def write_csv(records, destination):
    """Write records to a path or a text stream.

    Reals are printed with 12 significant digits.
    """
    text = format_csv(records)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {destination}: {exc.strerror or exc}") from exc


def read_csv(source):
    """Read records written by :func:`write_csv` from a path or text stream."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        try:
            with open(source, encoding="utf-8", newline="") as fh:
                text = fh.read()
        except OSError as exc:
            raise OSError(f"cannot read CSV from {source}: {exc.strerror or exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ParseError("CSV header does not match the expected columns", 1)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise ParseError(f"expected {len(CSV_COLUMNS)} columns, got {len(row)}", lineno)
        out.append(ResourceRecord(*(_parse_float(v, CSV_COLUMNS[i], lineno) for i, v in enumerate(row))))
    return out


# --- SVG ------------------------------------------------------------------

SVG_WIDTH = 800
SVG_HEIGHT = 500
_MARGIN = dict(left=80, right=170, top=40, bottom=60)
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    k = 0
    while first + k * step <= hi + 1e-9 * step:
        ticks.append(first + k * step)
        k += 1
    return ticks


def _num(x):
    return f"{x:.2f}"


def render_svg(records, y_field, group_by=None, destination=None):
    """Render a line chart of ``y_field`` against ``t``.

    Parameters
    ----------
    records : sequence of ResourceRecord
        Non-empty.
    y_field : str
        One of :data:`MEASURE_FIELDS`.
    group_by : str, optional
        Record column (``tau``, ``nu1``, ``nu2``, ``v12`` or ``p``); one
        polyline per distinct value, in ascending order.
    destination : path or text stream, optional
        Where to write; the SVG text is returned in any case.

    Returns
    -------
    str
        A standalone SVG 1.1 document with an 800x500 viewBox.

    Raises
    ------
    UnknownField
        If ``y_field`` or ``group_by`` is not a recognised column.
    """
    if y_field not in MEASURE_FIELDS:
        raise UnknownField(f"unknown y field {y_field!r}; expected one of {', '.join(MEASURE_FIELDS)}")
    if group_by is not None and group_by not in GROUP_FIELDS:
        raise UnknownField(f"unknown group field {group_by!r}; expected one of {', '.join(GROUP_FIELDS)}")
    records = list(records)
    if not records:
        raise ValidationError("cannot plot an empty record list")

    groups = {}
    for rec in records:
        key = getattr(rec, group_by) if group_by else None
        groups.setdefault(key, []).append((rec.t, getattr(rec, y_field)))
    keys = sorted(groups, key=lambda k: (k is None, k))

    ts = [rec.t for rec in records]
    ys = [getattr(rec, y_field) for rec in records]
    x_lo, x_hi = min(ts), max(ts)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        pad = 0.5 if y_lo == 0 else abs(y_lo) * 0.1
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    left, right, top, bottom = _MARGIN["left"], _MARGIN["right"], _MARGIN["top"], _MARGIN["bottom"]
    pw = SVG_WIDTH - left - right
    ph = SVG_HEIGHT - top - bottom

    def sx(x):
        return left + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" '
        f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<g font-family="sans-serif" font-size="12" fill="black">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for xt in _ticks(x_lo, x_hi):
        px = _num(sx(xt))
        out.append(f'<line x1="{px}" y1="{top + ph}" x2="{px}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px}" y="{top + ph + 20}" text-anchor="middle">{xt:.4g}</text>')
    for yt in _ticks(y_lo, y_hi):
        py = _num(sy(yt))
        out.append(f'<line x1="{left - 5}" y1="{py}" x2="{left}" y2="{py}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py}" text-anchor="end" dominant-baseline="middle">{yt:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{SVG_HEIGHT - 15}" text-anchor="middle">t</text>')
    out.append(
        f'<text x="20" y="{top + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {top + ph / 2:.2f})">{escape(y_field)}</text>'
    )

    for i, key in enumerate(keys):
        color = PALETTE[i % len(PALETTE)]
        pts = groups[key]
        if len(pts) == 1:
            x, y = pts[0]
            out.append(f'<circle cx="{_num(sx(x))}" cy="{_num(sy(y))}" r="4" fill="{color}"/>')
        else:
            coords = " ".join(f"{_num(sx(x))},{_num(sy(y))}" for x, y in pts)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        label = y_field if key is None else f"{group_by} = {key:.6g}"
        ly = top + 15 + 20 * i
        lx = left + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly}" dominant-baseline="middle">{escape(label)}</text>')

    out.append("</g>")
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(text)
        else:
            with open(destination, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    return text
