"""Command-line front end.

Subcommands
-----------
curve         guessing-probability curve for one dimension (CSV)
fig3          curves for several dimensions (one CSV per d + combined SVG)
schmidt       best full-coherence state and its Schmidt coefficients
entropy       the four min-entropy curves (CSV + SVG)
discriminate  guessing probability for a state loaded from a JSON file
certify       closed form vs certificate vs solver for one (d, gamma, j, l)

Every file-producing run writes a manifest (command, parameters, seed,
version, timestamp) next to its outputs; stdout-only runs embed the
manifest in their JSON output.  Numbers in CSV files carry 9
significant digits.  Exit codes: 0 success, 2 usage or input error,
3 I/O error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, analytic, entropy, game, sdp_core
from .discrimination import (
    certificate_phi_jl,
    pguess_phi_jl_closed_form,
    pguess_sdp,
)
from .linalg import PureState
from .optimizer import OptimizerConfig, maximize_pguess, sweep_gamma

CERTIFY_ATOL = 1e-7
SLACK_TOL = 1e-9


class InputError(Exception):
    """Bad user input (exit code 2)."""


class VerificationError(Exception):
    """A cross-check failed (exit code 4)."""


@dataclass(frozen=True)
class RunManifest:
    """What produced an output: command, parameters, seed, version, when."""

    command: str
    parameters: dict
    seed: int
    tool_version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(
            timespec="seconds"
        )
    )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _fmt(x: float) -> str:
    """9 significant digits, locale-independent."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # avoid "-0"
    return format(x, ".9g")


def _manifest(args: argparse.Namespace) -> RunManifest:
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "command", "seed") and v is not None
    }
    return RunManifest(
        command=args.command, parameters=params, seed=getattr(args, "seed", 0)
    )


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _emit(out: str | None, csv_text: str, manifest: RunManifest) -> None:
    """CSV to a file (manifest sidecar) or to stdout (no manifest)."""
    if out is None:
        sys.stdout.write(csv_text)
    else:
        path = Path(out)
        _write_text(path, csv_text)
        _write_text(Path(str(path) + ".manifest.json"), manifest.to_json())


def _svg_line_chart(series, title: str, xlabel: str, ylabel: str) -> str:
    """A minimal polyline chart: axes, ticks, legend, no dependencies.

    ``series`` is a list of (label, xs, ys) triples.
    """
    width, height = 640, 480
    left, right, top, bottom = 70, 160, 40, 50
    plot_w = width - left - right
    plot_h = height - top - bottom
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

    all_x = np.concatenate([np.asarray(xs, dtype=float) for _, xs, _ in series])
    all_y = np.concatenate([np.asarray(ys, dtype=float) for _, _, ys in series])
    x_lo, x_hi = float(all_x.min()), float(all_x.max())
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if x_hi - x_lo < 1e-12:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x):
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return top + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + plot_w / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]
    axis = 'stroke="black" stroke-width="1"'
    parts.append(
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" '
        f'y2="{top + plot_h}" {axis}/>'
    )
    parts.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" {axis}/>')
    for i in range(5):
        frac = i / 4
        x = x_lo + frac * (x_hi - x_lo)
        px = sx(x)
        parts.append(
            f'<line x1="{px:.1f}" y1="{top + plot_h}" x2="{px:.1f}" '
            f'y2="{top + plot_h + 5}" {axis}/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{top + plot_h + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{x:.3g}</text>'
        )
        y = y_lo + frac * (y_hi - y_lo)
        py = sy(y)
        parts.append(f'<line x1="{left - 5}" y1="{py:.1f}" x2="{left}" y2="{py:.1f}" {axis}/>')
        parts.append(
            f'<text x="{left - 9}" y="{py + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{y:.3g}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{top + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {top + plot_h / 2:.1f})">{ylabel}</text>'
    )
    for i, (label, xs, ys) in enumerate(series):
        color = palette[i % len(palette)]
        points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = top + 16 + 18 * i
        lx = left + plot_w + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _gamma_grid(start: float, end: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise InputError(f"steps must be >= 1, got {steps}")
    if not 0.0 <= start <= end <= 1.0:
        raise InputError(f"need 0 <= gamma-start <= gamma-end <= 1, got {start}, {end}")
    return np.linspace(start, end, steps)


def _curve_rows(d, grid, mode, seed, restarts):
    if mode == "analytic":
        if d == 2:
            values = [analytic.pguess_max_d2(g) for g in grid]
        elif np.all(grid == 0.0):
            values = [analytic.pguess_max_gamma0(d)] * len(grid)
        else:
            raise InputError(
                "analytic mode covers d = 2 or a gamma = 0 grid only; "
                f"got d = {d} with nonzero gamma"
            )
    else:
        config = OptimizerConfig(restarts=restarts, seed=seed)
        values = [r.best_value for r in sweep_gamma(d, grid, config)]
    return [(float(g), v) for g, v in zip(grid, values)]


def cmd_curve(args) -> int:
    if args.d < 2:
        raise InputError(f"d must be >= 2, got {args.d}")
    grid = _gamma_grid(args.gamma_start, args.gamma_end, args.steps)
    rows = _curve_rows(args.d, grid, args.mode, args.seed, args.restarts)
    lines = ["gamma,p_guess,mode,d"]
    lines += [f"{_fmt(g)},{_fmt(p)},{args.mode},{args.d}" for g, p in rows]
    _emit(args.out, "\n".join(lines) + "\n", _manifest(args))
    return 0


def cmd_fig3(args) -> int:
    dims = _parse_dims(args.dims)
    grid = _gamma_grid(0.0, 1.0, args.steps)
    out_dir = Path(args.out_dir)
    series = []
    for d in dims:
        mode = "analytic" if d == 2 else "numeric"
        rows = _curve_rows(d, grid, mode, args.seed, args.restarts)
        lines = ["gamma,p_guess,mode,d"]
        lines += [f"{_fmt(g)},{_fmt(p)},{mode},{d}" for g, p in rows]
        _write_text(out_dir / f"curve_d{d}.csv", "\n".join(lines) + "\n")
        series.append((f"d={d}", [g for g, _ in rows], [p for _, p in rows]))
    svg = _svg_line_chart(
        series,
        title="Maximum guessing probability vs register coherence",
        xlabel="gamma",
        ylabel="p_guess",
    )
    _write_text(out_dir / "fig3.svg", svg)
    _write_text(out_dir / "manifest.json", _manifest(args).to_json())
    return 0


def cmd_schmidt(args) -> int:
    if args.d < 2:
        raise InputError(f"d must be >= 2, got {args.d}")
    config = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    result = maximize_pguess(args.d, 1.0, config)
    coeffs = game.joint_schmidt_t2(game.GameConfig(args.d, 1.0), result.best_state)
    print("d,p_guess,schmidt_1,schmidt_2")
    print(
        f"{args.d},{_fmt(result.best_value)},{_fmt(coeffs[0])},{_fmt(coeffs[1])}"
    )
    if args.out is not None:
        payload = {
            "d": args.d,
            "p_guess": result.best_value,
            "schmidt": [float(c) for c in coeffs],
            "amplitudes": [
                [float(a.real), float(a.imag)] for a in result.best_state.amplitudes
            ],
            "manifest": json.loads(_manifest(args).to_json()),
        }
        _write_text(Path(args.out), json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_entropy(args) -> int:
    if args.steps < 2:
        raise InputError(f"steps must be >= 2, got {args.steps}")
    grid = np.linspace(0.0, 1.0, args.steps)
    points = entropy.entropy_curve_d2(grid)
    lines = ["gamma,h_B_given_R,h_X_given_R,h_P_given_R_t1,h_P_given_R_t2"]
    for pt in points:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    pt.gamma,
                    pt.h_B_given_R,
                    pt.h_X_given_R,
                    pt.h_P_given_R_t1,
                    pt.h_P_given_R_t2,
                )
            )
        )
    csv_text = "\n".join(lines) + "\n"
    manifest = _manifest(args)
    if args.out is None:
        sys.stdout.write(csv_text)
        return 0
    path = Path(args.out)
    _write_text(path, csv_text)
    svg = _svg_line_chart(
        [
            ("H_min(B|R)", grid, [pt.h_B_given_R for pt in points]),
            ("H_min(X|R)", grid, [pt.h_X_given_R for pt in points]),
            ("H_min(P|R) t1", grid, [pt.h_P_given_R_t1 for pt in points]),
            ("H_min(P|R) t2", grid, [pt.h_P_given_R_t2 for pt in points]),
        ],
        title="Conditional min-entropies vs register coherence",
        xlabel="gamma",
        ylabel="min-entropy (bits)",
    )
    _write_text(path.with_suffix(".svg"), svg)
    _write_text(Path(str(path) + ".manifest.json"), manifest.to_json())
    return 0


def _load_state_file(path: str) -> tuple[int, PureState]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise InputError(f"{path}: top level must be an object")
    if "d" not in obj or "amplitudes" not in obj:
        raise InputError(f'{path}: required fields are "d" and "amplitudes"')
    d = obj["d"]
    if not isinstance(d, int) or d < 2:
        raise InputError(f'{path}: field "d" must be an integer >= 2, got {d!r}')
    raw = obj["amplitudes"]
    if not isinstance(raw, list) or len(raw) != d:
        raise InputError(f'{path}: field "amplitudes" must list {d} [re, im] pairs')
    amps = np.zeros(d, dtype=np.complex128)
    for i, pair in enumerate(raw):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) for v in pair)
        ):
            raise InputError(
                f'{path}: field "amplitudes[{i}]" must be a [re, im] number pair'
            )
        amps[i] = pair[0] + 1j * pair[1]
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise InputError(f'{path}: field "amplitudes" must not be all zero')
    if abs(norm - 1.0) > 1e-6:
        print(
            f"warning: state norm deviates from 1 by {abs(norm - 1.0):.3g}; "
            "normalizing",
            file=sys.stderr,
        )
    return d, PureState.normalized(amps)


def cmd_discriminate(args) -> int:
    d, state = _load_state_file(args.state_file)
    config = game.GameConfig(d, args.gamma)
    ens = game.ensemble(config, state)
    result = pguess_sdp(ens)
    probs = [float(p) for p in ens.probs]
    if args.format == "csv":
        header = ["p_guess", "dual_value", "primal_value", "gap"]
        header += [f"p_{x}" for x in range(d)]
        row = [result.p_guess, result.dual_value, result.primal_value, result.gap]
        row += probs
        print(",".join(header))
        print(",".join(_fmt(v) for v in row))
    else:
        payload = {
            "d": d,
            "gamma": args.gamma,
            "p_guess": result.p_guess,
            "dual_value": result.dual_value,
            "primal_value": result.primal_value,
            "gap": result.gap,
            "outcome_probabilities": probs,
            "manifest": json.loads(_manifest(args).to_json()),
        }
        print(json.dumps(payload, indent=2))
    return 0


def cmd_certify(args) -> int:
    if args.j == args.l:
        raise InputError("j and l must differ")
    q = certificate_phi_jl(args.d, args.gamma, args.j, args.l)
    trace_q = float(np.trace(q).real)
    closed = pguess_phi_jl_closed_form(args.d, args.gamma, args.j, args.l)
    ens = game.ensemble(
        game.GameConfig(args.d, args.gamma), game.phi_jl(args.d, args.j, args.l)
    )
    problem = sdp_core.TraceMinProblem.from_states(ens.states)
    report = sdp_core.is_feasible(q, problem, SLACK_TOL)
    sdp_value = sdp_core.solve_trace_min(problem).value
    agrees = (
        abs(trace_q - closed) <= CERTIFY_ATOL
        and abs(trace_q - sdp_value) <= CERTIFY_ATOL
        and abs(closed - sdp_value) <= CERTIFY_ATOL
        and report.feasible
    )
    payload = {
        "d": args.d,
        "gamma": args.gamma,
        "j": args.j,
        "l": args.l,
        "trace_certificate": trace_q,
        "closed_form": closed,
        "sdp_value": sdp_value,
        "min_slack": report.min_slack,
        "agrees": agrees,
        "manifest": json.loads(_manifest(args).to_json()),
    }
    print(json.dumps(payload, indent=2))
    if not agrees:
        raise VerificationError(
            f"certificate disagreement: trace {trace_q!r}, closed form {closed!r}, "
            f"solver {sdp_value!r}, min slack {report.min_slack!r}"
        )
    return 0


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise InputError(f"bad dims list {text!r}: {exc}") from exc
    if not dims or any(d < 2 for d in dims):
        raise InputError(f"dims must list integers >= 2, got {text!r}")
    return dims


def build_parser() -> argparse.ArgumentParser:
    try:
        default_seed = int(os.environ.get("UGAME_SEED", "0"))
    except ValueError:
        raise InputError(
            f"UGAME_SEED must be an integer, got {os.environ['UGAME_SEED']!r}"
        ) from None
    parser = argparse.ArgumentParser(
        prog="ugame",
        description="Guessing games against a coherently chosen measurement basis.",
    )
    parser.add_argument("--version", action="version", version=f"ugame {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="guessing-probability curve for one dimension")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--gamma-start", type=float, default=0.0)
    p.add_argument("--gamma-end", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--mode", choices=("analytic", "numeric"), default="numeric")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--restarts", type=int, default=64)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("fig3", help="curves for several dimensions + SVG chart")
    p.add_argument("--dims", default="2,3,4,5", help="comma-separated dimensions")
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--out-dir", default="fig3")
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--restarts", type=int, default=64)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("schmidt", help="best full-coherence state for one dimension")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--restarts", type=int, default=256)
    p.add_argument("--out", default=None, help="optional JSON report path")
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("entropy", help="min-entropy curves for the d=2 game")
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("discriminate", help="evaluate one state from a JSON file")
    p.add_argument("--state-file", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_discriminate)

    p = sub.add_parser("certify", help="check the phi_jl certificate chain")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 4
    except sdp_core.SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
