"""Ideal-length bookkeeping for the conventional one-dimensional coder.

Columns of the source block become super-symbols of a circular sequence,
and the classic single-axis scheme is costed over it: every super-symbol
count but one is charged up front, then longer windows go through the
same interval logic the 2D coder uses along its column axis.  Nothing is
emitted; this exists to measure the transmitted-count blow-up against
the 2D walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .bits import elias_delta_length
from .blocks import Block
from .codec import CodewordStats, stats
from .errors import CapExceededError

_M_CAP = 8


@dataclass(frozen=True)
class ExtendedSequence:
    """A block read column by column as one circular super-symbol string."""

    source: Block
    symbols: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def super_alphabet(self) -> int:
        return self.source.alphabet ** self.source.m


def extend(p: Block) -> ExtendedSequence:
    cols = tuple(tuple(p.cells[r * p.n + j] for r in range(p.m))
                 for j in range(p.n))
    return ExtendedSequence(p, cols)


@dataclass(frozen=True)
class BaselineStats:
    """Ideal section lengths of the conventional coder, in bits."""

    n: int
    super_alphabet: int
    l0: float
    l1: float
    l2: float
    l3: float
    transmitted: dict[str, int]
    middle_regime_empty: bool

    @property
    def total(self) -> float:
        return self.l0 + self.l1 + self.l2 + self.l3


def _window(x: ExtendedSequence, i: int, length: int) -> tuple:
    n = x.n
    return tuple(x.symbols[(i + t) % n] for t in range(length))


def _length_census(x: ExtendedSequence, length: int) -> dict[tuple, int]:
    out: dict[tuple, int] = {}
    for i in range(x.n):
        w = _window(x, i, length)
        out[w] = out.get(w, 0) + 1
    return out


def conv_lengths(p: Block, m_cap: int = _M_CAP) -> BaselineStats:
    """Cost the single-axis scheme on p's column sequence.

    Capped at m <= m_cap and a binary cell alphabet: the super-alphabet
    is J^m and the up-front section alone is (J^m - 1) counts, so
    anything taller stops being a desk-scale measurement.
    """
    if p.m > m_cap:
        raise CapExceededError(f"height {p.m} exceeds the baseline cap {m_cap}")
    if p.alphabet != 2:
        raise CapExceededError("baseline measurements are binary only")
    x = extend(p)
    n = x.n
    big_a = x.super_alphabet
    logn = math.log2(n) if n > 1 else 0.0
    l0 = elias_delta_length(n) + math.ceil(logn)
    l1 = (big_a - 1) * logn

    # middle regime: window lengths from 2 up to floor(log2 log2 n)
    cap = 0
    if n >= 4:
        cap = math.floor(math.log2(math.log2(n)) + 1e-9)
    middle_empty = cap < 2

    l2 = l3 = 0.0
    c2 = c3 = 0
    prev = _length_census(x, 1)
    for length in range(2, n + 1):
        cur = _length_census(x, length)
        overlap: Optional[dict[tuple, int]] = (
            _length_census(x, length - 2) if length > 2 else None)
        by_prefix: dict[tuple, list[tuple]] = {}
        for w in prev:
            by_prefix.setdefault(w[:-1], []).append(w)
        seen = set()
        for a in sorted(prev):
            for b in by_prefix.get(a[1:], ()):
                u = a + (b[-1],)
                if u in seen:
                    continue
                seen.add(u)
                f, s = prev[a], prev[b]
                o = overlap[u[1:-1]] if overlap is not None else n
                if min(f, s, o - f, o - s) < 1:
                    continue
                width = min(f, s) - max(0, f + s - o) + 1
                if 2 <= length <= cap:
                    l2 += math.log2(width)
                    c2 += 1
                else:
                    l3 += math.log2(width)
                    c3 += 1
        prev = cur
    return BaselineStats(n, big_a, l0, l1, l2, l3,
                         {"C1": big_a - 1, "C2": c2, "C3": c3}, middle_empty)


@dataclass(frozen=True)
class Comparison:
    """Side by side: conventional single-axis coder vs the 2D walk."""

    baseline: BaselineStats
    codec: CodewordStats

    @property
    def singles_baseline(self) -> int:
        return self.baseline.transmitted["C1"]

    @property
    def singles_codec(self) -> int:
        return self.codec.transmitted["B1"]

    @property
    def total_ratio(self) -> float:
        return self.baseline.total / self.codec.total


def compare(p: Block, m_cap: int = _M_CAP) -> Comparison:
    """Both pipelines on one block; raises like either side would."""
    base = conv_lengths(p, m_cap)
    return Comparison(base, stats(p))
