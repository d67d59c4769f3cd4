"""Exact finite-horizon uniformity verification by full enumeration.

For a given source model this walks every possible input sequence up to a
horizon, carrying each branch's exact probability as a
:class:`fractions.Fraction`, and stops a branch the moment the extractor
has released ``k`` bits, attributing the branch's whole mass to the first
``k`` bits released (the branch's continuations all share that prefix, so
the attribution is exact).  Branches that reach the horizon without ``k``
bits are pooled as ``incomplete`` mass.  Arithmetic is exact rational
throughout, so the verdict is a proof for the finite configuration rather
than a statistical test: the extractor output is uniform iff every k-bit
pattern carries identical mass, and total mass must come back as exactly
1 or the accounting itself is broken.

The stopping prefixes explored this way are mutually prefix-free: once a
branch stops, none of its extensions are walked.

Enumeration is exponential in the horizon, so each verifier has a small
cap; pass ``force=True`` to exceed it deliberately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .coin import HEADS, TAILS, CoinExtractor
from .dice import DiceExtractor
from .markov import MarkovExtractor

# Enumeration size guards: leaves explored are bounded by branching^horizon.
MAX_COIN_LEAVES = 2**14
MAX_DICE_LEAVES = 2**14
MAX_MARKOV_LEAVES = 2**10


class HorizonTooLarge(ValueError):
    """The requested enumeration exceeds the size guard (see ``force``)."""

    def __init__(self, leaves: int, cap: int) -> None:
        self.leaves = leaves
        self.cap = cap
        super().__init__(
            f"enumeration would walk about {leaves} branches (cap {cap}); "
            f"pass force=True to run it anyway"
        )


@dataclass(frozen=True)
class UniformityReport:
    """Exact output-mass accounting for one finite configuration.

    ``masses`` has an entry for every k-bit pattern (keys like ``'010'``),
    ``incomplete`` is the probability that the horizon was hit first.
    """

    kind: str
    params: str
    k: int
    n_max: int
    depth_limit: int | None
    masses: dict[str, Fraction] = field(compare=True)
    incomplete: Fraction = Fraction(0)

    @property
    def captured(self) -> Fraction:
        """Probability that ``k`` bits appeared within the horizon."""
        return sum(self.masses.values(), Fraction(0))

    @property
    def total(self) -> Fraction:
        """Must be exactly 1 for any correct run."""
        return self.captured + self.incomplete

    @property
    def uniform(self) -> bool:
        """True iff every k-bit pattern carries identical mass."""
        return len(set(self.masses.values())) == 1

    def _depth_text(self) -> str:
        return "unlimited" if self.depth_limit is None else str(self.depth_limit)

    def to_text(self) -> str:
        lines = [
            f"{self.kind} source, {self.params}",
            f"first k={self.k} bits, horizon n_max={self.n_max}, depth={self._depth_text()}",
        ]
        for pattern in sorted(self.masses):
            lines.append(f"  {pattern}  {self.masses[pattern]}")
        lines.append(f"  incomplete  {self.incomplete}")
        lines.append(f"total mass: {self.total}")
        if self.uniform:
            lines.append(f"uniform: yes (each pattern {next(iter(self.masses.values()))})")
        else:
            lines.append("uniform: NO")
        return "\n".join(lines)

    def to_csv(self) -> str:
        lines = ["outcome,probability"]
        for pattern in sorted(self.masses):
            lines.append(f"{pattern},{self.masses[pattern]}")
        lines.append(f"incomplete,{self.incomplete}")
        return "\n".join(lines)


def _as_probability(x, what: str) -> Fraction:
    try:
        f = Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"{what} is not a valid probability: {x!r}") from exc
    if not 0 <= f <= 1:
        raise ValueError(f"{what} must lie in [0, 1], got {f}")
    return f


def _check_counts(k: int, n_max: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive int, got {k!r}")
    if not isinstance(n_max, int) or n_max < 1:
        raise ValueError(f"n_max must be a positive int, got {n_max!r}")


def _enumerate(
    make_session: Callable[[], object],
    first_moves: Sequence[tuple[object, Fraction]],
    next_moves: Callable[[object], Sequence[tuple[object, Fraction]]],
    horizon: int,
    k: int,
) -> tuple[dict[str, Fraction], Fraction]:
    masses = {format(i, f"0{k}b"): Fraction(0) for i in range(2**k)}
    incomplete = Fraction(0)

    # Depth-first with clone-on-branch; the last branch reuses the parent
    # session, so a straight-line walk allocates nothing extra.
    def walk(session, weight: Fraction, moves, steps_left: int) -> None:
        nonlocal incomplete
        live = [(x, pr) for x, pr in moves if pr != 0]
        for i, (x, pr) in enumerate(live):
            child = session.clone() if i < len(live) - 1 else session
            child.process(x)
            w = weight * pr
            if len(child.output) >= k:
                masses["".join(map(str, child.output[:k]))] += w
            elif steps_left == 1:
                incomplete += w
            else:
                walk(child, w, next_moves(x), steps_left - 1)

    walk(make_session(), Fraction(1), first_moves, horizon)
    return masses, incomplete


def verify_coin(
    p,
    n_max: int,
    k: int,
    depth_limit: int | None = None,
    force: bool = False,
) -> UniformityReport:
    """Enumerate every H/T sequence of length ``n_max`` for a coin with
    exact ``P(H) = p`` (int, str like ``"1/3"``, or Fraction)."""
    p = _as_probability(p, "p")
    _check_counts(k, n_max)
    if 2**n_max > MAX_COIN_LEAVES and not force:
        raise HorizonTooLarge(2**n_max, MAX_COIN_LEAVES)
    dist = ((HEADS, p), (TAILS, 1 - p))
    masses, incomplete = _enumerate(
        lambda: CoinExtractor(depth_limit), dist, lambda _: dist, n_max, k
    )
    return UniformityReport("coin", f"P(H)={p}", k, n_max, depth_limit, masses, incomplete)


def verify_dice(
    dist,
    n_max: int,
    k: int,
    depth_limit: int | None = None,
    force: bool = False,
) -> UniformityReport:
    """Enumerate every face sequence of length ``n_max`` for an m-sided
    die with the given exact face probabilities (must sum to 1)."""
    probs = [_as_probability(x, f"dist[{i}]") for i, x in enumerate(dist)]
    m = len(probs)
    if m < 2:
        raise ValueError("dist needs at least two faces")
    if sum(probs) != 1:
        raise ValueError(f"face probabilities must sum to 1, got {sum(probs)}")
    _check_counts(k, n_max)
    if m**n_max > MAX_DICE_LEAVES and not force:
        raise HorizonTooLarge(m**n_max, MAX_DICE_LEAVES)
    moves = tuple((f, pr) for f, pr in enumerate(probs))
    masses, incomplete = _enumerate(
        lambda: DiceExtractor(m, depth_limit), moves, lambda _: moves, n_max, k
    )
    params = "dist=(" + ", ".join(str(pr) for pr in probs) + ")"
    return UniformityReport("dice", params, k, n_max, depth_limit, masses, incomplete)


def verify_markov(
    matrix,
    start: int,
    n_max: int,
    k: int,
    depth_limit: int | None = None,
    force: bool = False,
) -> UniformityReport:
    """Enumerate every walk of ``n_max`` transitions from ``start`` under
    the given exact row-stochastic transition matrix."""
    rows = [[_as_probability(x, f"matrix[{i}][{j}]") for j, x in enumerate(row)]
            for i, row in enumerate(matrix)]
    m = len(rows)
    if m < 2:
        raise ValueError("matrix needs at least two states")
    for i, row in enumerate(rows):
        if len(row) != m:
            raise ValueError(f"matrix row {i} has {len(row)} entries, expected {m}")
        if sum(row) != 1:
            raise ValueError(f"matrix row {i} must sum to 1, got {sum(row)}")
    if not isinstance(start, int) or not 0 <= start < m:
        raise ValueError(f"start must be a state in 0..{m - 1}, got {start!r}")
    _check_counts(k, n_max)
    if m**n_max > MAX_MARKOV_LEAVES and not force:
        raise HorizonTooLarge(m**n_max, MAX_MARKOV_LEAVES)
    moves_from = [tuple((j, pr) for j, pr in enumerate(row)) for row in rows]
    masses, incomplete = _enumerate(
        lambda: MarkovExtractor(m, depth_limit),
        ((start, Fraction(1)),),
        lambda prev: moves_from[prev],
        n_max + 1,  # the start state plus n_max transitions
        k,
    )
    params = (
        "matrix=(" + "; ".join(", ".join(str(x) for x in row) for row in rows)
        + f"), start={start}"
    )
    return UniformityReport("markov", params, k, n_max, depth_limit, masses, incomplete)
