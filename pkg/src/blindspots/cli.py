"""Command line interface: batch evaluation to deterministic CSV.

    blindspots <subcommand> <config.json> [--out FILE] [--threads N]

Subcommands: grid, spots, decohere, invert, check.  Exit codes: 0 on success,
2 on configuration or validation errors, 3 on numerical errors (inadequate
window, failed convergence, ...).  All numbers are printed with 17 significant
digits so that CSV output is byte-identical across runs and round-trips to
the exact binary values.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from concurrent.futures import ThreadPoolExecutor
from typing import IO, Sequence

import numpy as np

from . import __version__
from .errors import (
    BlindspotsError,
    ConfigError,
    NoClosure,
    NumericalError,
    ValidationError,
)
from .chord import chord_values, normalize, chord_quadrature, chord_exact, wigner_values
from .fields import (
    correlation_grid,
    fourier_2d,
    grid_axes,
    require_adequate,
)
from .geometry import skew
from .spots import (
    DiffractionModel,
    hexagonal_lattice,
    find_spots_generic,
    newton_refine,
    triangle_close,
    recover_centers,
)
from .states import GaussianState, Superposition, translate_state
from .decoherence import (
    LindbladModel,
    dissipation_coeff,
    lifting_time,
    positivity_time,
    scan_line,
)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _require_keys(block: dict, allowed: set, where: str):
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")


def _load_config(path: str) -> dict:
    try:
        with open(path, "r") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    _require_keys(cfg, {"hbar", "states", "lindblad", "grid", "spots",
                        "decohere", "invert", "check"}, "config")
    if "hbar" not in cfg or "states" not in cfg:
        raise ConfigError("config needs at least 'hbar' and 'states'")
    return cfg


def _complex_amplitude(a) -> complex:
    if isinstance(a, (int, float)):
        return complex(a)
    if isinstance(a, (list, tuple)) and len(a) == 2:
        return complex(float(a[0]), float(a[1]))
    raise ConfigError(f"amplitude must be a number or [re, im], got {a!r}")


def _state_from_config(cfg: dict) -> Superposition:
    try:
        hbar = float(cfg["hbar"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad hbar: {cfg['hbar']!r}") from exc
    entries = cfg["states"]
    if not isinstance(entries, list) or not entries:
        raise ConfigError("'states' must be a non-empty list")
    terms = []
    for k, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ConfigError(f"states[{k}] must be an object")
        _require_keys(entry, {"amplitude", "center", "frame"}, f"states[{k}]")
        if "amplitude" not in entry or "center" not in entry:
            raise ConfigError(f"states[{k}] needs 'amplitude' and 'center'")
        amp = _complex_amplitude(entry["amplitude"])
        frame = entry.get("frame")
        g = GaussianState(entry["center"]) if frame is None else GaussianState(entry["center"], frame)
        terms.append((amp, g))
    return normalize(Superposition(hbar, tuple(terms)))


def _lindblad_from_config(cfg: dict) -> LindbladModel:
    block = cfg.get("lindblad")
    if block is None:
        raise ConfigError("this subcommand needs a 'lindblad' block")
    _require_keys(block, {"h", "couplings"}, "lindblad")
    h = block.get("h", [[0.0, 0.0], [0.0, 0.0]])
    couplings = []
    for k, c in enumerate(block.get("couplings", [])):
        _require_keys(c, {"re", "im"}, f"lindblad.couplings[{k}]")
        re = np.asarray(c.get("re", [0.0, 0.0]), dtype=float)
        im = np.asarray(c.get("im", [0.0, 0.0]), dtype=float)
        couplings.append(re + 1j * im)
    if not couplings:
        raise ConfigError("lindblad block needs at least one coupling")
    return LindbladModel(np.asarray(h, dtype=float), tuple(couplings))


def _window_from(block: dict, key: str = "window"):
    win = block.get(key)
    if win is None:
        raise ConfigError(f"missing '{key}'")
    try:
        (plo, phi), (qlo, qhi) = win
        return ((float(plo), float(phi)), (float(qlo), float(qhi)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {key}: {win!r}") from exc


def _meta_lines(cfg: dict, subcommand: str) -> list:
    return [
        f"# blindspots {__version__}",
        f"# subcommand = {subcommand}",
        f"# hbar = {_fmt(cfg['hbar'])}",
        "# convention: x = (p, q); skew(a, b) = a_p b_q - a_q b_p",
    ]


def _grid_rows_values(state, kind, window, shape, threads: int) -> np.ndarray:
    ap, aq = grid_axes(window, shape)

    def eval_rows(rows: slice) -> np.ndarray:
        block = ap[rows]
        if kind == "wigner":
            return wigner_values(state, block[:, None], aq[None, :])
        vals = chord_values(state, block[:, None], aq[None, :])
        return np.abs(vals) ** 2 if kind == "corr" else vals

    if threads <= 1:
        return eval_rows(slice(None))
    bounds = np.linspace(0, shape[0], threads + 1).astype(int)
    chunks = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(eval_rows, chunks))
    return np.vstack(parts)


def cmd_grid(cfg: dict, out: IO[str], threads: int) -> int:
    state = _state_from_config(cfg)
    block = cfg.get("grid")
    if block is None:
        raise ConfigError("grid subcommand needs a 'grid' block")
    _require_keys(block, {"kind", "window", "shape"}, "grid")
    kind = block.get("kind")
    if kind not in ("chord", "wigner", "corr"):
        raise ConfigError(f"grid.kind must be chord, wigner or corr, got {kind!r}")
    window = _window_from(block)
    shape = block.get("shape")
    try:
        rows, cols = int(shape[0]), int(shape[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"bad grid.shape: {shape!r}") from exc

    values = _grid_rows_values(state, kind, window, (rows, cols), threads)
    ap, aq = grid_axes(window, (rows, cols))

    lines = _meta_lines(cfg, "grid")
    lines.append(f"# kind = {kind}")
    lines.append(f"# window_p = {_fmt(window[0][0])} {_fmt(window[0][1])}")
    lines.append(f"# window_q = {_fmt(window[1][0])} {_fmt(window[1][1])}")
    lines.append(f"# shape = {rows} {cols}")
    axis_name = "x" if kind == "wigner" else "xi"
    if kind == "chord":
        lines.append(f"{axis_name}_p,{axis_name}_q,re,im")
        for i in range(rows):
            for j in range(cols):
                v = values[i, j]
                lines.append(f"{_fmt(ap[i])},{_fmt(aq[j])},{_fmt(v.real)},{_fmt(v.imag)}")
    else:
        lines.append(f"{axis_name}_p,{axis_name}_q,value")
        vr = values.real if np.iscomplexobj(values) else values
        for i in range(rows):
            for j in range(cols):
                lines.append(f"{_fmt(ap[i])},{_fmt(aq[j])},{_fmt(vr[i, j])}")
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_spots(cfg: dict, out: IO[str], threads: int) -> int:
    state = _state_from_config(cfg)
    block = cfg.get("spots", {})
    _require_keys(block, {"window", "grid_step", "tol", "k_range", "max_iter"}, "spots")
    tol = float(block.get("tol", 1e-12))
    max_iter = int(block.get("max_iter", 50))

    lines = _meta_lines(cfg, "spots")
    lines.append("# triangle sides = |a_n|^2 (closure contract)")
    header = "xi_p,xi_q,abs_chi,iterations,seed_p,seed_q,k1,k2,sublattice"
    rows = []
    note = None

    weights = np.abs(state.amplitudes) ** 2
    weights = weights / weights.sum()
    if len(state) == 3:
        try:
            model = DiffractionModel.from_superposition(state)
            kr = block.get("k_range", ((-2, 2), (-2, 2)))
            k_range = ((int(kr[0][0]), int(kr[0][1])), (int(kr[1][0]), int(kr[1][1])))
            lattice = hexagonal_lattice(model, k_range)
            plus, minus = lattice.angles
            lines.append(f"# theta_plus = {_fmt(plus.theta1)} {_fmt(plus.theta2)}")
            lines.append(f"# theta_minus = {_fmt(minus.theta1)} {_fmt(minus.theta2)}")
            for tag, vec in (("basis1", lattice.basis[0]), ("basis2", lattice.basis[1]),
                             ("offset_plus", lattice.offsets[0]),
                             ("offset_minus", lattice.offsets[1])):
                lines.append(f"# {tag} = {_fmt(vec[0])} {_fmt(vec[1])}")
            # lattice nodes are origin-independent: re-centering only rotates
            # all weight phasors together, so they seed the original state
            for node in lattice.nodes:
                try:
                    spot = newton_refine(state, node.xi, tol=tol, max_iter=max_iter)
                except (NumericalError,):
                    continue
                spot = replace(spot, lattice_index=(node.k1, node.k2, node.sublattice))
                rows.append((spot, node.k1, node.k2, node.sublattice))
        except NoClosure:
            note = "no closure: the weight phasors cannot form a triangle"
    else:
        if len(state) == 2 and abs(weights[0] - weights[1]) > 1e-12:
            note = "no closure: unequal cat weights leave no blind spots"
        win = _window_from(block) if "window" in block else None
        if win is None:
            r = 3.0 * np.sqrt(state.hbar)
            win = ((-r, r), (-r, r))
        step = float(block.get("grid_step", np.sqrt(state.hbar) / 15.0))
        for spot in find_spots_generic(state, win, step, tol=tol, max_iter=max_iter):
            rows.append((spot, None, None, ""))

    if note:
        lines.append(f"# note: {note}")
    lines.append(header)
    for spot, k1, k2, sub in rows:
        k1s = "" if k1 is None else str(k1)
        k2s = "" if k2 is None else str(k2)
        lines.append(f"{_fmt(spot.xi[0])},{_fmt(spot.xi[1])},{_fmt(spot.residual)},"
                     f"{spot.iterations},{_fmt(spot.seed[0])},{_fmt(spot.seed[1])},"
                     f"{k1s},{k2s},{sub}")
    out.write("\n".join(lines) + "\n")
    return 0


def _auto_line_spot(state, line_point, line_dir):
    """Newton-refined blind spot nearest the origin that lies on the scan line."""
    model = DiffractionModel.from_superposition(state)
    lattice = hexagonal_lattice(model)
    candidates = []
    for node in lattice.nodes:
        rel = node.xi - line_point
        perp = abs(skew(rel, line_dir))
        s = float(rel @ line_dir)
        if perp < 1e-8 and abs(s) > 1e-12:
            candidates.append((abs(s), node.xi))
    if not candidates:
        raise NumericalError("no lattice blind spot lies on the scan line; "
                             "pass decohere.spot explicitly")
    _, xi = min(candidates, key=lambda c: c[0])
    return newton_refine(state, xi).xi


def cmd_decohere(cfg: dict, out: IO[str], threads: int) -> int:
    state = _state_from_config(cfg)
    model = _lindblad_from_config(cfg)
    block = cfg.get("decohere")
    if block is None:
        raise ConfigError("decohere subcommand needs a 'decohere' block")
    _require_keys(block, {"line", "s_range", "n_samples", "times", "epsilon",
                          "spot", "summary", "t_max", "positivity_tol"}, "decohere")
    for key in ("line", "s_range", "n_samples", "times"):
        if key not in block:
            raise ConfigError(f"decohere block needs '{key}'")
    line_block = block["line"]
    _require_keys(line_block, {"point", "direction"}, "decohere.line")
    point = np.asarray(line_block["point"], dtype=float)
    direction = np.asarray(line_block["direction"], dtype=float)
    direction = direction / np.hypot(*direction)
    times = [float(t) for t in block["times"]]

    series = scan_line(state, model, (point, direction),
                       (float(block["s_range"][0]), float(block["s_range"][1])),
                       int(block["n_samples"]), times)

    lines = _meta_lines(cfg, "decohere")
    lines.append(f"# alpha = {_fmt(dissipation_coeff(model))}")
    lines.append(f"# line_point = {_fmt(point[0])} {_fmt(point[1])}")
    lines.append(f"# line_direction = {_fmt(direction[0])} {_fmt(direction[1])}")

    want_summary = block.get("summary", True) and len(state) == 3
    if want_summary and len(times) > 1 and times[0] == 0.0:
        spot_cfg = block.get("spot")
        spot = (np.asarray(spot_cfg, dtype=float) if spot_cfg is not None
                else _auto_line_spot(state, point, direction))
        lift = lifting_time(series, spot, float(block.get("epsilon", 1e-3)))
        t_p = positivity_time(state, model,
                              t_max=block.get("t_max"),
                              tol=float(block.get("positivity_tol", 1e-6)))
        centers = state.centers
        area = 0.5 * abs(skew(centers[1] - centers[0], centers[2] - centers[0]))
        ratio = lift.tau_l * area / (state.hbar * t_p)
        lines.append(f"# spot = {_fmt(spot[0])} {_fmt(spot[1])}")
        lines.append(f"# tau_l = {_fmt(lift.tau_l)}")
        lines.append(f"# t_p = {_fmt(t_p)}")
        lines.append(f"# area = {_fmt(area)}")
        lines.append(f"# ratio_tau_l_A_over_hbar_t_p = {_fmt(ratio)}")

    lines.append("t,s,xi_p,xi_q,value")
    pts = series.positions()
    for ti, t in enumerate(series.times):
        for si, s in enumerate(series.samples):
            lines.append(f"{_fmt(t)},{_fmt(s)},{_fmt(pts[si, 0])},{_fmt(pts[si, 1])},"
                         f"{_fmt(series.values[ti, si])}")
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_invert(cfg: dict, out: IO[str], threads: int) -> int:
    state = _state_from_config(cfg)
    block = cfg.get("invert")
    if block is None:
        raise ConfigError("invert subcommand needs an 'invert' block")
    _require_keys(block, {"branch", "spots"}, "invert")
    branch = block.get("branch", "plus")
    if branch not in ("plus", "minus"):
        raise ConfigError(f"invert.branch must be 'plus' or 'minus', got {branch!r}")
    spots_cfg = block.get("spots")
    if not isinstance(spots_cfg, list) or len(spots_cfg) != 2:
        raise ConfigError("invert.spots must list exactly two measured spots")
    if len(state) != 3:
        raise ConfigError("the inverse problem needs a three-state superposition")

    weights = np.abs(state.amplitudes) ** 2
    weights = weights / weights.sum()
    plus, minus = triangle_close(*weights)
    angles = plus if branch == "plus" else minus

    measured = []
    for k, sp in enumerate(spots_cfg):
        _require_keys(sp, {"xi", "k"}, f"invert.spots[{k}]")
        if "xi" not in sp or "k" not in sp:
            raise ConfigError(f"invert.spots[{k}] needs 'xi' and 'k'")
        measured.append((np.asarray(sp["xi"], dtype=float), int(sp["k"][0]), int(sp["k"][1])))

    eta1, eta2 = recover_centers(angles, measured[0], measured[1], float(cfg["hbar"]))
    lines = _meta_lines(cfg, "invert")
    lines.append(f"# branch = {branch}")
    lines.append(f"# theta = {_fmt(angles.theta1)} {_fmt(angles.theta2)}")
    lines.append("center_index,eta_p,eta_q")
    lines.append(f"1,{_fmt(eta1[0])},{_fmt(eta1[1])}")
    lines.append(f"2,{_fmt(eta2[0])},{_fmt(eta2[1])}")
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_check(cfg: dict, out: IO[str], threads: int) -> int:
    block = cfg.get("check", {})
    _require_keys(block, {"seed", "n_random", "window", "shape"}, "check")
    state = _state_from_config(cfg)
    rng = np.random.default_rng(int(block.get("seed", 20260808)))
    n_random = int(block.get("n_random", 50))
    results = []

    def record(name: str, ok: bool, detail: str):
        results.append((name, ok, detail))

    n2 = abs(complex(chord_values(state, 0.0, 0.0)))
    record("normalization chi(0) = 1", abs(n2 - 1.0) <= 1e-12, f"|chi(0)| - 1 = {n2 - 1:.3e}")

    xis = rng.normal(scale=np.sqrt(state.hbar) * 3, size=(n_random, 2))
    herm = max(abs(complex(chord_values(state, -x[0], -x[1]))
                   - np.conj(complex(chord_values(state, x[0], x[1])))) for x in xis)
    record("hermiticity chi(-xi) = chi*(xi)", herm <= 1e-12, f"max dev = {herm:.3e}")

    parity = 0.0
    for x in xis:
        a = complex(chord_values(state, x[0], x[1]))
        b = complex(chord_values(state, -x[0], -x[1]))
        parity = max(parity, abs(a.real - b.real), abs(a.imag + b.imag))
    record("parity: Re even, Im odd", parity <= 1e-12, f"max dev = {parity:.3e}")

    quad = max(abs(chord_exact(state, x) - chord_quadrature(state, x)) for x in xis[:3])
    record("oracle: quadrature matches", quad <= 1e-8, f"max dev = {quad:.3e}")

    trans = 0.0
    from .chord import overlap
    for x in xis[:3]:
        shifted = translate_state(state, x)
        trans = max(trans, abs(abs(overlap(state, shifted)) - abs(chord_exact(state, x))))
    record("translate: overlap modulus = |chi|", trans <= 1e-10, f"max dev = {trans:.3e}")

    if "window" in block:
        window = _window_from(block)
        shape = tuple(int(x) for x in block.get("shape", (201, 201)))
        grid = correlation_grid(state, window, shape)
        require_adequate(grid.values)  # raises WindowTooSmall -> exit 3
        ft = fourier_2d(grid, state.hbar)
        dev = float(np.max(np.abs(ft.values - grid.values)) / np.max(np.abs(grid.values)))
        record("Fourier invariance FT{C} = C", dev <= 1e-6, f"max rel dev = {dev:.3e}")

    lines = _meta_lines(cfg, "check")
    ok_all = True
    for name, ok, detail in results:
        ok_all = ok_all and ok
        lines.append(f"{'PASS' if ok else 'FAIL'}: {name} ({detail})")
    out.write("\n".join(lines) + "\n")
    if not ok_all:
        raise NumericalError("one or more invariant checks failed")
    return 0


_COMMANDS = {
    "grid": cmd_grid,
    "spots": cmd_spots,
    "decohere": cmd_decohere,
    "invert": cmd_invert,
    "check": cmd_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="blindspots",
        description="Phase-space correlations and blind spots of coherent-state superpositions")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", help="path to the JSON run configuration")
        p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
        p.add_argument("--threads", type=int, default=1, help="grid evaluation threads")

    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.out is None:
            return _COMMANDS[args.subcommand](cfg, sys.stdout, args.threads)
        with open(args.out, "w", newline="\n") as fh:
            return _COMMANDS[args.subcommand](cfg, fh, args.threads)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BlindspotsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
