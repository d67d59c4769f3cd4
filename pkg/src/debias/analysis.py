"""Closed-form efficiency analysis and seeded empirical measurement.

The tree extractor's expected output per input symbol obeys a recursion
over depth.  Write ``q = 1 - p`` and ``s = p^2 + q^2`` (the chance a pair
is concordant; note ``s >= 1/2``).  The root releases ``pq`` bits per
symbol in expectation.  Its left child sees one symbol per completed pair
(half the parent's traffic) with concordance-parity bias, which by the
H/T symmetry of the rules extracts like a coin of bias ``s``; the right
child sees ``s/2`` symbols per parent symbol with bias ``p^2 / s``:

    rate(p, 0) = p*q
    rate(p, d) = p*q + rate(s, d-1)/2 + s * rate(p^2/s, d-1)/2

The same accounting with every delivery charged 1 instead of ``pq`` gives
the expected number of node deliveries per input symbol:

    time(p, 0) = 1
    time(p, d) = 1 + time(s, d-1)/2 + s * time(p^2/s, d-1)/2

As depth grows, ``rate`` increases monotonically to the binary entropy
``H(p)``, i.e. the extractor is asymptotically lossless; at ``p = 1/2``
the recursions collapse to ``rate = (1 - (3/4)^(d+1))`` and
``time = 4 - 3*(3/4)^d``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .coin import HEADS, TAILS, CoinExtractor, take_bits

TABLE_DEPTHS = (0, 1, 2, 3, 4, 5, 7, 10, 15)
TABLE_BIASES = (0.1, 0.2, 0.3, 0.4, 0.5)


class DomainError(ValueError):
    """Argument outside the mathematical domain of an analysis function."""


def _check_bias(p: float, open_interval: bool = False) -> float:
    p = float(p)
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise DomainError(f"bias must lie in [0, 1], got {p!r}")
    if open_interval and p in (0.0, 1.0):
        raise DomainError(f"bias must lie strictly inside (0, 1), got {p!r}")
    return p


def _check_depth(depth: int | None) -> int | None:
    if depth is None:
        return None
    if isinstance(depth, bool) or not isinstance(depth, int) or depth < 0:
        raise DomainError(f"depth must be None or a nonnegative int, got {depth!r}")
    return depth


def entropy(p: float) -> float:
    """Binary entropy in bits; 0 at the endpoints."""
    p = _check_bias(p)
    if p in (0.0, 1.0):
        return 0.0
    q = 1.0 - p
    return -p * math.log2(p) - q * math.log2(q)


def _rate(p: float, d: int, cache: dict) -> float:
    key = (d, p)
    v = cache.get(key)
    if v is None:
        q = 1.0 - p
        if d == 0:
            v = p * q
        else:
            s = p * p + q * q  # never below 1/2, so the division is safe
            v = p * q + 0.5 * _rate(s, d - 1, cache) + 0.5 * s * _rate(p * p / s, d - 1, cache)
        cache[key] = v
    return v


def extraction_rate(p: float, depth: int | None) -> float:
    """Expected output bits per input symbol at the given depth limit.

    ``depth=None`` returns the unlimited-depth limit, which is the binary
    entropy of the source.
    """
    p = _check_bias(p)
    depth = _check_depth(depth)
    if depth is None:
        return entropy(p)
    return _rate(p, depth, {})


def tosses_per_bit(p: float, depth: int | None) -> float:
    """Expected input symbols per output bit (``inf`` for a constant source)."""
    r = extraction_rate(p, depth)
    return math.inf if r == 0.0 else 1.0 / r


def _time(p: float, d: int, cache: dict) -> float:
    key = (d, p)
    v = cache.get(key)
    if v is None:
        if d == 0:
            v = 1.0
        else:
            q = 1.0 - p
            s = p * p + q * q
            v = 1.0 + 0.5 * _time(s, d - 1, cache) + 0.5 * s * _time(p * p / s, d - 1, cache)
        cache[key] = v
    return v


def processing_time(p: float, depth: int) -> float:
    """Expected node deliveries per input symbol at the given depth limit.

    Always in ``[1, depth + 1]``.  Unlike the rate, this has no finite
    unlimited-depth value for every ``p``, so ``depth`` must be an int.
    """
    p = _check_bias(p)
    depth = _check_depth(depth)
    if depth is None:
        raise DomainError("processing time needs a finite depth")
    return _time(p, depth, {})


class TableRow(NamedTuple):
    """One table row: a depth (None = unlimited-depth limit) and its cells."""

    depth: int | None
    values: tuple[float, ...]


def tosses_table(
    depths: Sequence[int] = TABLE_DEPTHS,
    biases: Sequence[float] = TABLE_BIASES,
    include_limit: bool = True,
) -> list[TableRow]:
    """Expected tosses per output bit, one row per depth, one column per
    bias; optionally ends with the unlimited-depth row ``1/H(p)``."""
    rows = [TableRow(d, tuple(tosses_per_bit(p, d) for p in biases)) for d in depths]
    if include_limit:
        rows.append(TableRow(None, tuple(tosses_per_bit(p, None) for p in biases)))
    return rows


def time_table(
    depths: Sequence[int] = TABLE_DEPTHS,
    biases: Sequence[float] = TABLE_BIASES,
) -> list[TableRow]:
    """Expected node deliveries per input symbol, same layout as
    :func:`tosses_table` (no limit row)."""
    return [TableRow(d, tuple(processing_time(p, d) for p in biases)) for d in depths]


def _depth_label(depth: int | None) -> str:
    return "limit" if depth is None else str(depth)


def format_table(rows: Sequence[TableRow], biases: Sequence[float]) -> str:
    """Human-readable aligned table, 4 decimals per cell."""
    header = ["depth"] + [f"p={p:g}" for p in biases]
    body = [[_depth_label(r.depth)] + [f"{v:.4f}" for v in r.values] for r in rows]
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    return "\n".join(fmt.format(*line) for line in [header] + body)


def table_csv(rows: Sequence[TableRow], biases: Sequence[float], value_column: str) -> str:
    """Machine-readable long form: header ``depth,p,<value_column>``, one
    line per cell, 4 decimals."""
    lines = [f"depth,p,{value_column}"]
    for r in rows:
        for p, v in zip(biases, r.values):
            lines.append(f"{_depth_label(r.depth)},{p:g},{v:.4f}")
    return "\n".join(lines)


@dataclass(frozen=True)
class EfficiencyReport:
    """Analytic summary for one (bias, depth) configuration."""

    bias: float
    depth: int | None
    rate: float
    tosses_per_bit: float
    entropy_bits: float
    efficiency: float  # rate / entropy, in [0, 1]


def efficiency_report(p: float, depth: int | None) -> EfficiencyReport:
    rate = extraction_rate(p, depth)
    h = entropy(p)
    return EfficiencyReport(
        bias=float(p),
        depth=depth,
        rate=rate,
        tosses_per_bit=math.inf if rate == 0.0 else 1.0 / rate,
        entropy_bits=h,
        efficiency=0.0 if h == 0.0 else rate / h,
    )


def bernoulli_symbols(p: float, rng: random.Random) -> Iterator[str]:
    """Infinite i.i.d. H/T stream with ``P(H) = p`` drawn from ``rng``."""
    while True:
        yield HEADS if rng.random() < p else TAILS


@dataclass(frozen=True)
class SimulationResult:
    """Outcome of one seeded extraction run against its predictions."""

    bias: float
    depth: int | None
    bits_requested: int
    seed: int
    symbols_consumed: int
    messages_total: int
    tosses_per_bit: float
    messages_per_symbol: float
    expected_tosses_per_bit: float
    expected_messages_per_symbol: float | None


def simulate_efficiency(p: float, depth: int | None, k: int, seed: int = 0) -> SimulationResult:
    """Extract ``k`` bits from a seeded Bernoulli(p) stream and compare
    the observed symbol and delivery counts with the analytic values.

    Reproducible by construction: the stream comes from
    ``random.Random(seed)``, whose Mersenne Twister sequence is stable
    across platforms and Python versions.
    """
    p = _check_bias(p, open_interval=True)
    depth = _check_depth(depth)
    if not isinstance(k, int) or k <= 0:
        raise DomainError(f"k must be a positive int, got {k!r}")
    session = CoinExtractor(depth)
    _, n = take_bits(session, bernoulli_symbols(p, random.Random(seed)), k)
    return SimulationResult(
        bias=p,
        depth=depth,
        bits_requested=k,
        seed=seed,
        symbols_consumed=n,
        messages_total=session.messages_total,
        tosses_per_bit=n / k,
        messages_per_symbol=session.messages_total / n,
        expected_tosses_per_bit=tosses_per_bit(p, depth),
        expected_messages_per_symbol=None if depth is None else processing_time(p, depth),
    )
