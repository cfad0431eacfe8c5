"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -rA` to see every line.  The
lifting/positivity sweep over the three triplet sizes is shared by the four
sub-criteria of the time-scale test.
"""

import time

import numpy as np
import pytest

from blindspots import (
    DiffractionModel,
    LindbladModel,
    MixedEnsemble,
    NoClosure,
    Superposition,
    chord_exact,
    chord_quadrature,
    chord_values,
    correlation_evolved_points,
    correlation_mixture,
    correlation_pure,
    evolved_chord,
    find_spots_generic,
    fourier_2d,
    correlation_grid,
    grid_value_at,
    hexagonal_lattice,
    lifting_ratio,
    lifting_time,
    newton_refine,
    normalize,
    recover_centers,
    scan_line,
    shift_origin,
    triangle_close,
)
from blindspots.decoherence import evolved_chord_gradient
from blindspots.geometry import J
from conftest import HBAR, OBLIQUE_CENTERS, corner_triplet_state, random_identity_state, triplet


def report(tag, ok, detail=""):
    print(f"[acceptance {tag}] {'PASS' if ok else 'FAIL'} {detail}")
    return ok


def test_criterion_01_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(12345)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 5))
        hbar = float(rng.uniform(0.05, 0.5))
        state = random_identity_state(rng, n, hbar)
        r = 3.0 * np.sqrt(rng.uniform(0, 1))
        ang = rng.uniform(0, 2 * np.pi)
        xi = r * np.array([np.cos(ang), np.sin(ang)])
        worst = max(worst, abs(chord_exact(state, xi) - chord_quadrature(state, xi)))
    elapsed = time.time() - t0
    ok = worst < 1e-8 and elapsed < 60
    assert report("01 oracle equivalence", ok,
                  f"max |exact - quadrature| = {worst:.2e}, {elapsed:.1f}s")


def test_criterion_02_fourier_invariance(compact_triplet):
    t0 = time.time()
    grid = correlation_grid(compact_triplet, ((-4.8, 4.8), (-4.8, 4.8)), (385, 385))
    ft = fourier_2d(grid, HBAR)
    dev = float(np.max(np.abs(ft.values - grid.values)) / np.max(np.abs(grid.values)))
    elapsed = time.time() - t0
    ok = dev < 1e-6 and elapsed < 120
    assert report("02 Fourier invariance", ok, f"max rel dev = {dev:.2e}, {elapsed:.1f}s")


def test_criterion_03_parity_invariants():
    rng = np.random.default_rng(777)
    worst = 0.0
    for _ in range(40):
        state = random_identity_state(rng, int(rng.integers(1, 5)),
                                      float(rng.uniform(0.05, 0.5)))
        xi = rng.normal(scale=1.0, size=(25, 2))
        a = chord_values(state, xi[:, 0], xi[:, 1])
        b = chord_values(state, -xi[:, 0], -xi[:, 1])
        worst = max(worst, float(np.max(np.abs(a.real - b.real))),
                    float(np.max(np.abs(a.imag + b.imag))))
        v0 = complex(chord_values(state, 0.0, 0.0))
        worst = max(worst, abs(v0.imag), abs(v0.real - 1.0))
    cat = shift_origin(normalize(Superposition.from_centers(
        HBAR, [1.0, 1.0], [(0, 0), (0, 4)])), (0, 2))
    xs = np.linspace(-0.6, 0.6, 101)
    vals = chord_values(cat, xs[:, None], xs[None, :])
    cat_ok = np.max(np.abs(vals.imag)) < 1e-10 * np.max(np.abs(vals.real))
    ok = worst < 1e-12 and cat_ok
    assert report("03 parity invariants", ok,
                  f"max parity dev = {worst:.2e}, centred cat real = {cat_ok}")


def test_criterion_04_hexagonal_lattice(oblique_triplet):
    t0 = time.time()
    lattice = hexagonal_lattice(DiffractionModel.from_superposition(oblique_triplet))
    shell = lattice.first_shell(6)
    spacing = lattice.nearest_spacing()
    ok = {n.sublattice for n in shell} == {"plus", "minus"} and len(shell) >= 6
    worst_res, worst_disp = 0.0, 0.0
    refined = []
    for node in shell:
        spot = newton_refine(oblique_triplet, node.xi)
        refined.append(spot.xi)
        worst_res = max(worst_res, spot.residual)
        worst_disp = max(worst_disp, float(np.hypot(*(spot.xi - node.xi))))
    ok = ok and worst_res < 1e-12 and worst_disp < 0.05 * spacing
    found = find_spots_generic(oblique_triplet, ((-0.25, 0.25), (-0.25, 0.25)), 0.015)
    for r in refined:
        ok = ok and min(np.hypot(*(f.xi - r)) for f in found) < 1e-9
    elapsed = time.time() - t0
    ok = ok and elapsed < 60
    assert report("04 hexagonal lattice", ok,
                  f"residual {worst_res:.1e}, displacement {100 * worst_disp / spacing:.2f}% "
                  f"of spacing, generic scan agrees, {elapsed:.1f}s")


def test_criterion_05_cat_pathology():
    uneq = normalize(Superposition.from_centers(
        HBAR, [np.sqrt(0.6), np.sqrt(0.4)], [(0, 0), (0, 4)]))
    xs = np.linspace(-0.12, 0.12, 161)
    floor = float(np.min(np.abs(chord_values(uneq, xs[:, None], xs[None, :])) ** 2))
    ok = floor >= 0.5 * 0.2 ** 2

    cat = shift_origin(normalize(Superposition.from_centers(
        HBAR, [1.0, 1.0], [(0, 0), (0, 4)])), (0, 2))
    rng = np.random.default_rng(3)
    pts = []
    for _ in range(14):
        seed = np.array([-np.pi * HBAR / 4, rng.uniform(-0.25, 0.25)])
        seed += rng.normal(scale=0.01, size=2)
        pts.append(newton_refine(cat, seed).xi)
    pts = np.array(pts)
    distinct = len(np.unique(np.round(pts[:, 1], 8)))
    svals = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    line_ok = distinct >= 10 and svals[1] < 1e-6 * svals[0] \
        and pts[:, 1].max() - pts[:, 1].min() > 0.2
    ok = ok and line_ok
    assert report("05 cat pathology", ok,
                  f"unequal floor = {floor:.3f} >= 0.02, balanced zeros: "
                  f"{distinct} distinct points on a line")


def test_criterion_06_triangle_closure():
    rng = np.random.default_rng(2024)
    checked = failed = 0
    worst = 0.0
    while checked + failed < 1000:
        w = rng.uniform(0.02, 1.0, 3)
        w = w / w.sum()
        passes = max(w) <= (w.sum() - max(w)) - 1e-9
        try:
            plus, minus = triangle_close(*w)
            if passes:
                checked += 1
                worst = max(worst, plus.closure_residual(), minus.closure_residual())
        except NoClosure:
            if not passes:
                failed += 1
            else:
                assert report("06 triangle closure", False,
                              f"NoClosure raised for valid triple {w}")
    ok = worst < 1e-12 and checked > 0 and failed > 0
    assert report("06 triangle closure", ok,
                  f"{checked} closures (worst {worst:.1e}), {failed} NoClosure")


def test_criterion_07_master_equation_anchor(corner_triplet):
    worst = 0.0
    for model in (LindbladModel.position_momentum(),
                  LindbladModel.position_momentum(np.eye(2) / 2)):
        for (xi, t) in (((0.1, 0.2), 0.05), ((0.4, -0.3), 0.15), ((-0.2, 0.6), 0.3),
                        ((0.35, 0.25), 0.08)):
            xi = np.asarray(xi)
            dt = 3e-4
            vals = [evolved_chord(corner_triplet, model, xi, t + k * dt) for k in (-2, -1, 1, 2)]
            dchi = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * dt)
            grad = evolved_chord_gradient(corner_triplet, model, xi, t)
            xdot = 2 * (J @ model.hamiltonian) @ xi
            chi = evolved_chord(corner_triplet, model, xi, t)
            damp = sum((c.real @ xi) ** 2 + (c.imag @ xi) ** 2 for c in model.couplings)
            rhs = -(xdot[0] * grad[0] + xdot[1] * grad[1]) - damp / (2 * HBAR) * chi
            worst = max(worst, abs(dchi - rhs) / max(abs(rhs), 1e-30))
    ok = worst < 1e-6
    assert report("07 master-equation anchor", ok, f"max rel residual = {worst:.2e}")


def _line_spot(state):
    lattice = hexagonal_lattice(DiffractionModel.from_superposition(state))
    for node in lattice.nodes:
        if abs(node.xi[0] + node.xi[1] / 2) < 1e-12 and node.xi[1] > 1e-6:
            return newton_refine(state, node.xi).xi
    raise AssertionError("no node on the line xi_p = -xi_q/2")


def test_criterion_08_zero_lifting(corner_triplet, pq_model):
    t0 = time.time()
    spot = _line_spot(corner_triplet)
    c_zero = correlation_pure(corner_triplet, spot)
    early = [2e-4, 5e-4, 1e-3, 2e-3, 4e-3]
    cs = [correlation_evolved_points(corner_triplet, pq_model, spot, t)[0] for t in early]
    increasing = c_zero < cs[0] and all(b > a for a, b in zip(cs, cs[1:]))

    direction = spot / np.hypot(*spot)
    sr = 2.6 * np.hypot(*spot)
    times = [0.0] + early + [8e-3, 1.6e-2, 3.2e-2]
    series = scan_line(corner_triplet, pq_model, ((0, 0), direction), (-sr, sr), 1201, times)
    lift = lifting_time(series, spot)
    deltas = [d for _, d in lift.delta_series]
    nonincreasing = all(b <= a + 1e-12 for a, b in zip(deltas, deltas[1:]))
    elapsed = time.time() - t0
    ok = c_zero < 1e-10 and increasing and nonincreasing and elapsed < 300
    assert report("08 zero lifting", ok,
                  f"C(spot,0) = {c_zero:.1e}, C rising over {len(early)} early times, "
                  f"Delta nonincreasing, tau_l = {lift.tau_l:.4g}, {elapsed:.1f}s")


@pytest.fixture(scope="module")
def timescale_sweep(pq_model):
    t0 = time.time()
    out = {}
    for d in (3.0, 5.0, 8.0):
        out[d] = lifting_ratio(corner_triplet_state(d), pq_model)
    doubled = LindbladModel.position_momentum(strength=2.0)
    out["doubled"] = lifting_ratio(corner_triplet_state(5.0), doubled)
    out["elapsed"] = time.time() - t0
    return out


def test_criterion_09a_timescale_ordering(timescale_sweep):
    s = timescale_sweep
    ok = all(s[d].tau_l < s[d].t_p for d in (3.0, 5.0, 8.0)) and s["elapsed"] < 900
    ok = ok and all(s[d].area == pytest.approx(d * d / 2) for d in (3.0, 5.0, 8.0))
    assert report("09a tau_l < t_p", ok,
                  ", ".join(f"d={d:g}: tau_l={s[d].tau_l:.2e} < t_p={s[d].t_p:.2e}"
                            for d in (3.0, 5.0, 8.0)) + f", {s['elapsed']:.0f}s total")


def test_criterion_09b_lifting_time_monotone(timescale_sweep):
    s = timescale_sweep
    ok = s[3.0].tau_l > s[5.0].tau_l > s[8.0].tau_l
    assert report("09b tau_l decreasing in A", ok,
                  f"tau_l = {s[3.0].tau_l:.2e}, {s[5.0].tau_l:.2e}, {s[8.0].tau_l:.2e}")


def test_criterion_09c_ratio_spread(timescale_sweep):
    # Known red: both measured times scale like hbar/A, so the dimensional
    # ratio tau_l A / (hbar t_p) grows linearly with the triplet area instead
    # of staying fixed; no threshold choice can compress the spread below
    # (8/3)^2. Kept as stated rather than loosened.
    s = timescale_sweep
    ratios = [s[d].ratio for d in (3.0, 5.0, 8.0)]
    spread = max(ratios) / min(ratios)
    ok = spread < 3.0
    assert report("09c ratio spread < 3", ok,
                  f"ratios = {[f'{r:.3g}' for r in ratios]}, spread = {spread:.2f}")


def test_criterion_09d_coupling_invariance(timescale_sweep):
    s = timescale_sweep
    change = abs(s["doubled"].ratio - s[5.0].ratio) / s[5.0].ratio
    ok = change < 0.2
    assert report("09d coupling doubling", ok,
                  f"ratio {s[5.0].ratio:.4g} -> {s['doubled'].ratio:.4g} "
                  f"({100 * change:.2g}% change)")


def test_criterion_10_inverse_round_trip(oblique_triplet, corner_triplet):
    worst = 0.0
    for state, expected in ((corner_triplet, ((0.0, 5.0), (5.0, 0.0))),
                            (oblique_triplet, (OBLIQUE_CENTERS[1], OBLIQUE_CENTERS[2]))):
        lattice = hexagonal_lattice(DiffractionModel.from_superposition(state))
        for branch, angles in zip(("plus", "minus"), lattice.angles):
            nodes = {(n.k1, n.k2): n for n in lattice.nodes if n.sublattice == branch}
            eta1, eta2 = recover_centers(angles, nodes[(0, 0)], nodes[(1, 0)], HBAR)
            worst = max(worst, float(np.max(np.abs(eta1 - expected[0]))),
                        float(np.max(np.abs(eta2 - expected[1]))))
    ok = worst < 1e-9
    assert report("10 inverse round trip", ok, f"max center error = {worst:.1e}")


def test_criterion_11_mixture_washout(compact_triplet):
    lattice = hexagonal_lattice(DiffractionModel.from_superposition(compact_triplet))
    spot = newton_refine(compact_triplet, lattice.first_shell(1)[0].xi).xi
    pure = correlation_pure(compact_triplet, spot)
    ens = MixedEnsemble.from_superposition(compact_triplet)
    grid = correlation_mixture(ens, ((-2.5, 2.5), (-2.5, 2.5)), (401, 401))
    mixed = float(np.real(grid_value_at(grid, spot)))
    ok = pure < 1e-12 and mixed > 1e-3
    assert report("11 mixture washout", ok,
                  f"pure C = {pure:.1e}, mixture C = {mixed:.3f}")
