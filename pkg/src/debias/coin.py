"""Streaming extraction of unbiased bits from a biased two-symbol source.

The extractor maintains a binary tree of tiny von Neumann units.  The root
consumes the raw ``H``/``T`` stream two symbols at a time.  A classic von
Neumann debiaser outputs one bit per discordant pair and discards
everything else; here nothing is discarded.  Every completed pair forwards
its parity to the node's left child (equal pair -> ``T``, unequal pair ->
``H``) and every equal pair additionally forwards the repeated symbol to
the right child.  Each child applies the same rules to the stream it
receives, so the recycled sub-streams are themselves debiased and almost
no entropy is lost.

One twist makes the output a faithful stream: a node that completes an
unequal pair does not emit its bit immediately.  It holds the bit in its
label and releases it when the node receives its next symbol.  Output
produced this way is uniform for every prefix length, not just in the
limit, and processing a prefix of the input always yields a prefix of the
eventual output.

``depth_limit`` caps the recycling depth: a node at the cap applies the
label rules (so it still converts held bits) but drops the messages that
would go to its children.  ``depth_limit=0`` reduces the tree to the root,
i.e. plain von Neumann extraction with the one-symbol release delay.
Memory grows with the tree, which unlimited depth lets grow roughly
logarithmically with the input length.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

HEADS = "H"
TAILS = "T"
EMPTY = "-"  # waiting for the first symbol of a pair
HOLD_ZERO = "0"  # holding an output bit, released on the next delivery
HOLD_ONE = "1"

SYMBOLS = (HEADS, TAILS)
LABELS = (EMPTY, HEADS, TAILS, HOLD_ZERO, HOLD_ONE)


class NodeUpdate(NamedTuple):
    """Effect of delivering one symbol to a node in a given label state."""

    label: str  # label the node takes after the delivery
    bit: int | None  # output bit released, if any
    to_left: str | None  # symbol forwarded to the left child (pair parity)
    to_right: str | None  # symbol forwarded to the right child (repeated value)


# The complete transition table.  A node label is either EMPTY (no symbol
# pending), a held first symbol (H/T), or a held output bit (0/1).
#
#   (EMPTY, y)        -> hold y, forward nothing
#   (held bit b, y)   -> release b, then hold y
#   (H, H) / (T, T)   -> equal pair: parity T left, repeated symbol right
#   (H, T)            -> unequal pair: hold bit 1, parity H left
#   (T, H)            -> unequal pair: hold bit 0, parity H left
_RULES: dict[tuple[str, str], NodeUpdate] = {
    (EMPTY, HEADS): NodeUpdate(HEADS, None, None, None),
    (EMPTY, TAILS): NodeUpdate(TAILS, None, None, None),
    (HOLD_ZERO, HEADS): NodeUpdate(HEADS, 0, None, None),
    (HOLD_ZERO, TAILS): NodeUpdate(TAILS, 0, None, None),
    (HOLD_ONE, HEADS): NodeUpdate(HEADS, 1, None, None),
    (HOLD_ONE, TAILS): NodeUpdate(TAILS, 1, None, None),
    (HEADS, HEADS): NodeUpdate(EMPTY, None, TAILS, HEADS),
    (TAILS, TAILS): NodeUpdate(EMPTY, None, TAILS, TAILS),
    (HEADS, TAILS): NodeUpdate(HOLD_ONE, None, HEADS, None),
    (TAILS, HEADS): NodeUpdate(HOLD_ZERO, None, HEADS, None),
}


def node_update(label: str, symbol: str) -> NodeUpdate:
    """Pure single-node transition: what one delivery does to one node.

    Returns the node's next label, the bit released (if the node was
    holding one), and the symbols forwarded to the children (if the
    delivery completed a pair).  Raises ``ValueError`` for anything
    outside the five labels and two symbols.
    """
    try:
        return _RULES[label, symbol]
    except KeyError:
        raise ValueError(f"no rule for label {label!r} receiving symbol {symbol!r}") from None


class StepResult(NamedTuple):
    """Per-symbol outcome: bits released and node deliveries performed."""

    bits: list[int]
    messages: int


@dataclass(frozen=True)
class TraceNode:
    """Immutable snapshot of one node: label, its released bits, children.

    ``bit_log`` records, in order, every bit this node has released.  The
    concatenation of all logs (in release order) equals the extractor's
    output, and together with the labels it determines the node's entire
    input history; see :mod:`debias.inversion`.
    """

    label: str
    bit_log: tuple[int, ...]
    left: TraceNode | None = None
    right: TraceNode | None = None

    def walk(self, path: str = "") -> Iterator[tuple[str, TraceNode]]:
        """Yield ``(path, node)`` preorder; paths are 'L'/'R' strings."""
        yield path, self
        if self.left is not None:
            yield from self.left.walk(path + "L")
        if self.right is not None:
            yield from self.right.walk(path + "R")

    @property
    def depth(self) -> int:
        """Height of this subtree (a lone node has depth 0)."""
        kids = [c for c in (self.left, self.right) if c is not None]
        return 1 + max(k.depth for k in kids) if kids else 0


class Node:
    """Mutable tree node.  Children are created in pairs, lazily."""

    __slots__ = ("label", "depth", "left", "right", "bit_log")

    def __init__(self, depth: int) -> None:
        self.label = EMPTY
        self.depth = depth
        self.left: Node | None = None
        self.right: Node | None = None
        self.bit_log: list[int] = []

    def clone(self) -> Node:
        dup = Node(self.depth)
        dup.label = self.label
        dup.bit_log = self.bit_log.copy()
        if self.left is not None:
            dup.left = self.left.clone()
            dup.right = self.right.clone()  # children exist in pairs
        return dup

    def snapshot(self) -> TraceNode:
        return TraceNode(
            label=self.label,
            bit_log=tuple(self.bit_log),
            left=self.left.snapshot() if self.left is not None else None,
            right=self.right.snapshot() if self.right is not None else None,
        )


class CoinExtractor:
    """Incremental debiasing session over an ``H``/``T`` symbol stream.

    Feed symbols with :meth:`process`; released bits accumulate in
    ``output``.  The session is deterministic: the same symbol sequence
    always yields the same output, tree, and message count.

    ``depth_limit=None`` means unlimited recycling depth.
    """

    def __init__(self, depth_limit: int | None = None) -> None:
        if depth_limit is not None and (not isinstance(depth_limit, int) or depth_limit < 0):
            raise ValueError(f"depth_limit must be None or a nonnegative int, got {depth_limit!r}")
        self.depth_limit = depth_limit
        self.output: list[int] = []
        self.symbols_consumed = 0
        self.messages_total = 0
        self._root = Node(0)

    def process(self, symbol: str) -> StepResult:
        """Consume one symbol; return the bits it released and the number
        of node deliveries it triggered (always at least 1)."""
        if symbol not in (HEADS, TAILS):
            raise ValueError(f"symbol must be {HEADS!r} or {TAILS!r}, got {symbol!r}")
        n0 = len(self.output)
        m0 = self.messages_total
        self._deliver(self._root, symbol)
        self.symbols_consumed += 1
        return StepResult(self.output[n0:], self.messages_total - m0)

    def process_all(self, symbols: Iterable[str]) -> list[int]:
        """Consume a whole sequence; return the bits it released."""
        n0 = len(self.output)
        for s in symbols:
            self.process(s)
        return self.output[n0:]

    def _deliver(self, node: Node, symbol: str) -> None:
        # Depth-first: a delivery updates the node, releases any held bit,
        # then fully processes the left child's message before the right's.
        self.messages_total += 1
        upd = _RULES[node.label, symbol]
        node.label = upd.label
        if upd.bit is not None:
            node.bit_log.append(upd.bit)
            self.output.append(upd.bit)
        if upd.to_left is None:
            return
        limit = self.depth_limit
        if limit is not None and node.depth >= limit:
            return  # at the cap: label rules still apply, messages stop here
        if node.left is None:
            node.left = Node(node.depth + 1)
            node.right = Node(node.depth + 1)
        self._deliver(node.left, upd.to_left)
        if upd.to_right is not None:
            self._deliver(node.right, upd.to_right)

    def snapshot(self) -> TraceNode:
        """Immutable copy of the current tree (labels plus bit logs)."""
        return self._root.snapshot()

    def clone(self) -> CoinExtractor:
        """Independent deep copy; processing one never affects the other."""
        dup = CoinExtractor(self.depth_limit)
        dup.output = self.output.copy()
        dup.symbols_consumed = self.symbols_consumed
        dup.messages_total = self.messages_total
        dup._root = self._root.clone()
        return dup


class SourceExhausted(Exception):
    """The symbol source ended before the requested bits were produced.

    Carries the partial result: ``bits`` released so far, the number of
    ``symbols_consumed``, and the ``requested`` count.
    """

    def __init__(self, bits: list[int], symbols_consumed: int, requested: int) -> None:
        self.bits = bits
        self.symbols_consumed = symbols_consumed
        self.requested = requested
        super().__init__(
            f"source exhausted after {symbols_consumed} symbols "
            f"with {len(bits)} of {requested} requested bits"
        )


def take_bits(session, source: Iterable[str], k: int | None) -> tuple[list[int], int]:
    """Drive any extractor session until ``k`` new bits are available.

    Works with every session type in this package (coin, dice, Markov):
    anything with ``process(item)`` and an ``output`` list.  Consumes items
    from ``source`` lazily and stops as soon as the target is reached; the
    final item may release more than one bit, in which case the surplus
    stays in the session but is not returned.  ``k=None`` drains the whole
    source and returns everything it released.

    Returns ``(bits, items_consumed)``.  Raises :class:`SourceExhausted`
    if the source ends first (partial bits attached).
    """
    if k is not None and k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    base = len(session.output)
    if k == 0:
        return [], 0
    consumed = 0
    for item in source:
        session.process(item)
        consumed += 1
        if k is not None and len(session.output) - base >= k:
            return session.output[base : base + k], consumed
    if k is None:
        return session.output[base:], consumed
    raise SourceExhausted(session.output[base:], consumed, k)


def extract_bits(
    source: Iterable[str] | Sequence[str],
    k: int,
    depth_limit: int | None = None,
) -> tuple[list[int], int]:
    """Extract ``k`` unbiased bits from an ``H``/``T`` source.

    Convenience wrapper around a fresh :class:`CoinExtractor`.  Returns
    ``(bits, symbols_consumed)``; consumes no more symbols than needed.

    >>> extract_bits("HTTTHT", 2)
    ([1, 1], 6)
    """
    return take_bits(CoinExtractor(depth_limit), source, k)
