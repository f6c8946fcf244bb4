"""Shared fixtures.

The four reference constructions (two Morse, two trigonometric wells) are
expensive to verify, so constructions and their verification reports are
built lazily and cached for the whole session. Individual test modules ask
for them by name through the get_case / get_report factories.
"""

import math

import pytest

from darboux_lab.pipeline import Construction, build_construction, verification_suite
from darboux_lab.potentials import make_morse, make_pt

# family spec factory, epsilon, lambda, J, I0, n_fine, n_coarse, n_states
CASES = {
    "case1": (lambda: make_morse(1.0, 0.4, 2), 0.0, 1.0, 1.0, 1.0, 1200, 600, 3),
    "case2": (lambda: make_morse(1.0, 0.4, 4), 0.0, 1.0, 1.0, 1.0, 1500, 750, 5),
    "case3": (lambda: make_pt(1.0, 3.0), 0.25, math.sqrt(math.pi / 4.0),
              math.pi / 4.0, 0.0, 1200, 600, 3),
    "case4": (lambda: make_pt(1.0, 3.0), 8.075, math.sqrt(1.34),
              1.34, -2.13, 1200, 600, 3),
}


@pytest.fixture(scope="session")
def get_case():
    cache = {}

    def _get(name: str) -> Construction:
        if name not in cache:
            make_spec, eps, lam, big_j, i0, *_ = CASES[name]
            cache[name] = build_construction(make_spec(), eps, lam, big_j, i0)
        return cache[name]

    return _get


@pytest.fixture(scope="session")
def get_report(get_case):
    cache = {}

    def _get(name: str) -> dict:
        if name not in cache:
            *_, n_fine, n_coarse, n_states = CASES[name]
            cache[name] = verification_suite(
                get_case(name), n_states, n_fine, n_coarse)
        return cache[name]

    return _get
