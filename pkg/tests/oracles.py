"""
Independent reference computations used to freeze expected values.

Nothing here imports the package's matrix code: walkers are simulated as
dictionaries of amplitudes keyed by (coin, position) labels.
"""

import math
from collections import defaultdict

import numpy as np

H = 1 / math.sqrt(2)


def hadamard_coin_action(c):
    # H|0> = (|0> + |1>)/√2,  H|1> = (|0> - |1>)/√2
    return [(0, H), (1, H if c == 0 else -H)]


def grover_coin_action(c, d_c):
    return [(k, 2 / d_c - (1 if k == c else 0)) for k in range(d_c)]


def cycle_shift(c, x, lo, hi):
    span = hi - lo + 1
    return c, (x - lo + (1 if c == 0 else -1)) % span + lo


def line_shift(c, x, lo, hi):
    if c == 0:
        return (1, x) if x == hi else (0, x + 1)
    return (0, x) if x == lo else (1, x - 1)


def hypercube_shift(c, x):
    return c, x ^ (1 << c)


def simulate(state, steps, coin_action, shift):
    """Brute-force coined walk on a dict {(c, x): amplitude}."""
    for _ in range(steps):
        tossed = defaultdict(complex)
        for (c, x), a in state.items():
            for c2, w in coin_action(c):
                tossed[(c2, x)] += w * a
        moved = defaultdict(complex)
        for (c, x), a in tossed.items():
            moved[shift(c, x)] += a
        state = dict(moved)
    return state


def position_probs(state):
    P = defaultdict(float)
    for (c, x), a in state.items():
        P[x] += abs(a) ** 2
    return dict(P)


def orbit(start, shift):
    """Orbit of a basis label under a permutation given as a function."""
    seen = [start]
    nxt = shift(*start)
    while nxt != start:
        seen.append(nxt)
        nxt = shift(*nxt)
    return seen


def after_steps(start, n, shift):
    orb = orbit(start, shift)
    return orb[n % len(orb)]


def random_unitary(d, rng):
    """Haar unitary from QR of a complex Gaussian matrix, R diagonal phase-fixed."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_state(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
