"""Kauffman bracket state sum, Jones normalization and closed forms.

All Jones polynomials here live in the Khovanov variable: the unreduced
polynomial of a knot equals its Khovanov polynomial at ``t = -1``.  The
reduced polynomial is the unreduced one divided by ``q + q^-1``; it has only
even exponents, and in terms of the classical variable, ``t_classical = q^2``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from math import gcd

import numpy as np

from .errors import InvalidParameters
from .polynomial import LaurentPoly

__all__ = [
    "UNKNOT",
    "bracket",
    "state_histogram",
    "jones_unreduced",
    "jones_reduced",
    "jones_torus",
    "jones_torus_literal",
    "jones_twist",
    "jones_degree_bound",
    "enumerate_torus_candidates",
]

UNKNOT = LaurentPoly({1: 1, -1: 1})

_BATCH = 1 << 14


def state_histogram(D, start=0, stop=None):
    """Counts of states in ``[start, stop)`` keyed by (Hamming weight, cycle count)."""
    total = 1 << D.n
    stop = total if stop is None else min(stop, total)
    hist = np.zeros((D.n + 1, D.n + 2), dtype=np.int64)
    for lo in range(start, stop, _BATCH):
        states = np.arange(lo, min(lo + _BATCH, stop), dtype=np.int64)
        cycles = D.state_cycle_counts(states)
        weights = np.zeros(states.shape, dtype=np.int64)
        for i in range(D.n):
            weights += (states >> i) & 1
        np.add.at(hist, (weights, cycles), 1)
    return hist


def _bracket_from_histogram(hist):
    loop = UNKNOT
    powers = [LaurentPoly.constant(1)]
    for _ in range(hist.shape[1] - 1):
        powers.append(powers[-1] * loop)
    out = LaurentPoly()
    for w, c in zip(*np.nonzero(hist)):
        count = int(hist[w, c])
        out = out + powers[c].shift(int(w)) * (count if w % 2 == 0 else -count)
    return out


def bracket(D, workers=1):
    """Sum of ``(-q)^w(s) (q + q^-1)^c(s)`` over all ``2^N`` smoothing states.

    With ``workers > 1`` the state space is split into contiguous ranges that
    are counted concurrently; the partial histograms add up exactly.
    """
    total = 1 << D.n
    if workers is None or workers <= 1 or total < 2 * _BATCH:
        return _bracket_from_histogram(state_histogram(D))
    step = -(-total // workers)
    ranges = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda r: state_histogram(D, *r), ranges))
    return _bracket_from_histogram(sum(parts))


def jones_unreduced(D, workers=1):
    """``(-1)^n_minus q^(n_plus - 2 n_minus) <D>``."""
    _, n_plus, n_minus = D.writhe()
    b = bracket(D, workers=workers).shift(n_plus - 2 * n_minus)
    return -b if n_minus % 2 else b


def jones_reduced(D, workers=1):
    return jones_unreduced(D, workers=workers).divexact(UNKNOT)


def _check_torus(m, n):
    if not (isinstance(m, int) and isinstance(n, int)):
        raise InvalidParameters("torus parameters must be integers")
    if not 1 < m < n:
        raise InvalidParameters(f"torus parameters must satisfy 1 < m < n, got ({m}, {n})")
    if gcd(m, n) != 1:
        raise InvalidParameters(f"torus parameters ({m}, {n}) are not coprime")


def jones_torus_literal(m, n):
    """``q^((m-1)(n-1)/2) (1 - q^(m+1) - q^(n+1) + q^(m+n)) / (1 - q^2)``, classical variable."""
    _check_torus(m, n)
    num = LaurentPoly({0: 1, m + 1: -1, n + 1: -1, m + n: 1})
    quotient = num.divexact(LaurentPoly({0: 1, 2: -1}))
    return quotient.shift((m - 1) * (n - 1) // 2)


def jones_torus(m, n):
    """Reduced Jones polynomial of T(m, n) in the Khovanov variable."""
    return jones_torus_literal(m, n).substitute_power(2)


def jones_twist(n):
    """Reduced Jones polynomial of the twist knot with ``n`` half twists.

    ``n = 1`` is the trefoil, ``n = 2`` the figure-eight.  With ``s = q^2``::

        (1 + s) J = s + s^3 + s^(n+1) - s^(n+4)        n odd
        (1 + s) J = s^-2 + 1 - s^(n-2) + s^(n+1)        n even

    In the odd case this is the q -> 1/q image of
    ``(1 + s^-2 + s^-n - s^(-n-3)) / (1 + s)``.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidParameters(f"twist index must be a positive integer, got {n!r}")
    if n % 2:
        num = {1: 1, 3: 1, n + 1: 1, n + 4: -1}
    else:
        num = {}
        for e, c in ((-2, 1), (0, 1), (n - 2, -1), (n + 1, 1)):
            num[e] = num.get(e, 0) + c
    quotient = LaurentPoly(num).divexact(LaurentPoly({0: 1, 1: 1}))
    return quotient.substitute_power(2)


def jones_degree_bound(n):
    if n < 0:
        raise InvalidParameters("crossing count must be non-negative")
    return 5 * n


def enumerate_torus_candidates(max_crossings):
    """Coprime ``(m, n)``, ``1 < m < n``, whose literal torus Jones degree is below ``5 * max_crossings``."""
    if max_crossings < 3:
        raise InvalidParameters("max_crossings must be at least 3")
    bound = jones_degree_bound(max_crossings)
    out = []
    m = 2
    while (m - 1) * m // 2 + 2 * m - 1 < bound:
        n = m + 1
        while True:
            top = (m - 1) * (n - 1) // 2 + m + n - 2
            if top >= bound:
                break
            if gcd(m, n) == 1:
                out.append((m, n))
            n += 1
        m += 1
    return out

