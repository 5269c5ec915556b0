"""Dowker-Thistlethwaite and unsigned Gauss codes.

Sign convention: a negative DT entry means the knot passes *over* the
crossing at the even-labelled visit (so the odd-labelled visit is under).
Other sources flip this; the convention only changes the result by a
global mirror.

Compressed DT strings divide each entry by two and write it as a letter,
lower case for positive and upper case for negative, so ``[4, 6, 2]``
becomes ``"bca"``.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass

from .errors import InvalidCharacter, InvalidDT, InvalidGauss, ParseError, TooManyCrossings

__all__ = [
    "DTCode",
    "GaussCode",
    "parse_dt",
    "parse_dt_compressed",
    "parse_dt_numeric",
    "encode_dt_compressed",
    "dt_to_gauss",
    "gauss_to_dt",
    "parse_gauss",
    "dt_relabelings",
    "dt_canonical",
]

MAX_COMPRESSED = len(string.ascii_lowercase)


@dataclass(frozen=True)
class DTCode:
    entries: tuple

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        n = len(entries)
        for i, e in enumerate(entries):
            if e % 2:
                raise InvalidDT(f"entry {i + 1} ({e}) is odd")
            if not 2 <= abs(e) <= 2 * n:
                raise InvalidDT(f"entry {i + 1} ({e}) is outside [2, {2 * n}]")
        if len({abs(e) for e in entries}) != n:
            raise InvalidDT("absolute values are not a permutation of 2..2N")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def crossings(self):
        return len(self.entries)

    def partner(self):
        """Involution on labels 1..2N pairing the two visits of each crossing."""
        inv = [0] * (2 * len(self.entries) + 1)
        for i, e in enumerate(self.entries):
            odd = 2 * i + 1
            inv[odd] = abs(e)
            inv[abs(e)] = odd
        return inv

    def numeric(self):
        return ",".join(str(e) for e in self.entries)

    def compressed(self):
        return encode_dt_compressed(self)

    def __str__(self):
        return self.numeric()


@dataclass(frozen=True)
class GaussCode:
    """Traversal sequence of ``(crossing_id, over)`` tokens, ids in 1..N."""

    tokens: tuple

    def __post_init__(self):
        tokens = tuple((int(c), bool(o)) for c, o in self.tokens)
        object.__setattr__(self, "tokens", tokens)
        if len(tokens) % 2:
            raise InvalidGauss("a Gauss code has an even number of tokens")
        n = len(tokens) // 2
        seen = {}
        for c, over in tokens:
            if not 1 <= c <= n:
                raise InvalidGauss(f"crossing id {c} outside 1..{n}")
            seen.setdefault(c, []).append(over)
        for c, passes in seen.items():
            if sorted(passes) != [False, True]:
                raise InvalidGauss(f"crossing {c} must appear once over and once under")

    def __len__(self):
        return len(self.tokens)

    def __str__(self):
        return " ".join(f"{'O' if o else 'U'}{c}" for c, o in self.tokens)


def parse_dt_compressed(s):
    s = s.strip()
    if len(s) > MAX_COMPRESSED:
        raise TooManyCrossings(f"compressed DT codes hold at most {MAX_COMPRESSED} crossings")
    entries = []
    for pos, ch in enumerate(s):
        if ch in string.ascii_lowercase:
            entries.append(2 * (ord(ch) - ord("a") + 1))
        elif ch in string.ascii_uppercase:
            entries.append(-2 * (ord(ch) - ord("A") + 1))
        else:
            raise InvalidCharacter(f"invalid character {ch!r} in compressed DT code", pos)
    return DTCode(tuple(entries))


def encode_dt_compressed(d):
    if len(d) > MAX_COMPRESSED:
        raise TooManyCrossings(f"{len(d)} crossings do not fit the letter encoding")
    out = []
    for e in d.entries:
        k = abs(e) // 2 - 1
        out.append((string.ascii_lowercase if e > 0 else string.ascii_uppercase)[k])
    return "".join(out)


_NUMERIC_TOKEN = re.compile(r"[+-]?[0-9]+")


def parse_dt_numeric(s):
    """Parse ``"4,6,2"``, ``"4 6 2"`` or ``"[4, 6, 2]"``."""
    body = s.strip()
    offset = len(s) - len(s.lstrip())
    if body.startswith("[") or body.startswith("("):
        close = "]" if body[0] == "[" else ")"
        if not body.endswith(close):
            raise ParseError(f"unterminated {body[0]!r}", offset + len(body))
        body = body[1:-1]
        offset += 1
    entries = []
    pos = 0
    expect_value = True
    while pos < len(body):
        ch = body[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == ",":
            if expect_value:
                raise ParseError("empty entry", offset + pos)
            expect_value = True
            pos += 1
            continue
        m = _NUMERIC_TOKEN.match(body, pos)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", offset + pos)
        if not expect_value and body[pos - 1] != " " and not body[pos - 1].isspace():
            raise ParseError("missing separator", offset + pos)
        entries.append(int(m.group()))
        expect_value = False
        pos = m.end()
    if entries and expect_value:
        raise ParseError("trailing separator", offset + len(body))
    return DTCode(tuple(entries))


def parse_dt(s):
    """Accept either notation: letters are compressed, anything else numeric."""
    t = s.strip()
    if t and all(ch.isalpha() for ch in t):
        return parse_dt_compressed(t)
    if t and t[0].isalpha():
        # Letters mixed with other characters: report as a compressed-code error.
        return parse_dt_compressed(t)
    return parse_dt_numeric(t)


def dt_to_gauss(d):
    """Unsigned Gauss code, crossings numbered in order of first visit.

    The DT pair ``(2i-1, |entries[i]|)`` gives the two visits of one crossing.
    """
    n = len(d)
    slots = [None] * (2 * n)
    for i, e in enumerate(d.entries):
        even_over = e < 0
        slots[2 * i] = (i, not even_over)
        slots[abs(e) - 1] = (i, even_over)
    number = {}
    tokens = []
    for i, over in slots:
        tokens.append((number.setdefault(i, len(number) + 1), over))
    return GaussCode(tuple(tokens))


def gauss_to_dt(g):
    positions = {}
    for pos, (c, over) in enumerate(g.tokens, start=1):
        positions.setdefault(c, []).append((pos, over))
    pairs = []
    for c, visits in positions.items():
        (p1, o1), (p2, o2) = visits
        if (p1 + p2) % 2 == 0:
            raise InvalidGauss(f"crossing {c} is visited twice at positions of the same parity")
        (odd, _), (even, even_over) = sorted(visits, key=lambda v: v[0] % 2 == 0)
        pairs.append((odd, -even if even_over else even))
    pairs.sort()
    return DTCode(tuple(e for _, e in pairs))


_GAUSS_TOKEN = re.compile(r"([OUou])([0-9]+)")


def parse_gauss(s):
    """Parse space-separated ``O<k>``/``U<k>`` tokens."""
    tokens = []
    pos = 0
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _GAUSS_TOKEN.match(s, pos)
        if m is None:
            raise ParseError("expected O<k> or U<k>", pos)
        tokens.append((int(m.group(2)), m.group(1).upper() == "O"))
        pos = m.end()
    return GaussCode(tuple(tokens))


def dt_relabelings(d, mirror=True):
    """Every DT code of the same diagram under a change of base point or direction.

    With ``mirror`` the codes of the mirror diagram are included too.
    """
    if len(d) == 0:
        return {d}
    tokens = dt_to_gauss(d).tokens
    variants = [tokens, tokens[::-1]]
    if mirror:
        variants += [tuple((c, not o) for c, o in t) for t in variants]
    out = set()
    for t in variants:
        for k in range(len(t)):
            out.add(gauss_to_dt(GaussCode(t[k:] + t[:k])))
    return out


def dt_canonical(d, mirror=True):
    """Smallest relabeling of ``d``, comparing entry tuples."""
    return min(dt_relabelings(d, mirror=mirror), key=lambda x: x.entries)
