"""Standard diagrams for torus and twist knots, produced as DT codes."""

from __future__ import annotations

from math import gcd

from .errors import InvalidParameters
from .knotcodes import DTCode, GaussCode, gauss_to_dt

__all__ = ["torus_dt", "twist_dt", "braid_closure_gauss"]


def braid_closure_gauss(strands, word):
    """Gauss code of the closure of a positive braid ``word`` (generator indices 1..strands-1).

    For ``sigma_i`` the strand entering at position ``i`` (1-based, left)
    passes over the one at ``i + 1``.  The closure must be a knot.
    """
    for g in word:
        if not 1 <= g < strands:
            raise InvalidParameters(f"generator {g} out of range for {strands} strands")
    ids = {}
    tokens = []
    pos, step = 0, 0
    total = 2 * len(word)
    while len(tokens) < total:
        g = word[step] - 1
        if pos == g or pos == g + 1:
            c = ids.setdefault(step, len(ids) + 1)
            tokens.append((c, pos == g))
            pos = g + 1 if pos == g else g
        step += 1
        if step == len(word):
            step = 0
            if pos == 0 and len(tokens) < total:
                raise InvalidParameters("braid closure has more than one component")
    return GaussCode(tuple(tokens))


def torus_dt(m, n):
    """DT code of T(m, n) as the closure of ``(sigma_1 ... sigma_(m-1))^n``."""
    if not (isinstance(m, int) and isinstance(n, int)) or m < 2 or n < 2:
        raise InvalidParameters(f"torus parameters must be integers >= 2, got ({m}, {n})")
    if gcd(m, n) != 1:
        raise InvalidParameters(f"T({m}, {n}) is a link, not a knot")
    if m > n:
        m, n = n, m
    return gauss_to_dt(braid_closure_gauss(m, list(range(1, m)) * n))


def twist_dt(n):
    """DT code of the twist knot with ``n`` half twists (``N = n + 2`` crossings)."""
    if not isinstance(n, int) or n < 1:
        raise InvalidParameters(f"twist index must be a positive integer, got {n!r}")
    N = n + 2
    k = N // 2
    if N % 2 == 0:
        entries = [4, 2 * k + 2] + list(range(4 * k, 2 * k + 2, -2)) + [2] + list(range(2 * k, 4, -2))
    else:
        entries = [4, 2 * k + 4] + list(range(4 * k + 2, 2 * k + 4, -2)) + [2] + list(range(2 * k + 2, 4, -2))
    return DTCode(tuple(entries))
