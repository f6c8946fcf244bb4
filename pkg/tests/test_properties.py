"""Algebraic invariants checked over seeded randomized parameter ranges."""

import math

import numpy as np

from darboux_lab.ermakov import make_coeffs
from darboux_lab.fields import interior_grid
from darboux_lab.potentials import energy, make_morse, make_pt


def test_discriminant_identity_everywhere():
    rng = np.random.default_rng(20240817)
    for _ in range(300):
        lam = rng.uniform(-10.0, 10.0)
        big_j = rng.uniform(0.05, 50.0)
        i0 = rng.uniform(-10.0, 10.0)
        omega0 = rng.uniform(0.1, 20.0) * rng.choice([-1.0, 1.0])
        co = make_coeffs(lam, big_j, i0, omega0)
        lhs = 4.0 * co.a * co.c - co.b * co.b
        rhs = 4.0 * (lam / omega0) ** 2
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
    # exact cancellation case: huge terms, zero result, must not be rejected
    make_coeffs(0.0, 1.0, 7.0, 7.0 / 64.0)


def test_interior_grid_shape():
    rng = np.random.default_rng(7)
    for _ in range(200):
        lo = rng.uniform(-20.0, 19.0)
        hi = lo + rng.uniform(0.1, 30.0)
        n = int(rng.integers(2, 400))
        grid = interior_grid(lo, hi, n)
        assert grid.size == n
        assert lo < grid[0] and grid[-1] < hi
        h = (hi - lo) / (n + 1)
        steps = grid[1:] - grid[:-1]
        assert float(np.max(np.abs(steps - h))) <= 1e-12 * (abs(lo) + abs(hi) + 1.0)
        assert math.isclose(grid[0] - lo, h, rel_tol=1e-9)


def test_morse_ladder_increasing_below_continuum():
    rng = np.random.default_rng(11)
    for _ in range(200):
        gamma = rng.uniform(0.3, 2.0)
        delta = rng.uniform(0.05, 0.95)
        n_max = int(rng.integers(1, 7))
        spec = make_morse(gamma, delta, n_max)
        levels = [energy(spec, n) for n in range(n_max + 1)]
        assert all(b > a for a, b in zip(levels, levels[1:]))
        assert levels[-1] < spec.params["gamma0"]


def test_pt_ladder_exact_squares():
    rng = np.random.default_rng(13)
    for _ in range(200):
        u0 = rng.uniform(0.5, 2.0)
        r = rng.uniform(1.1, 6.0)
        n = int(rng.integers(0, 9))
        spec = make_pt(u0, r)
        assert energy(spec, n) == u0 * u0 * (n + r) ** 2
