"""Streaming extraction from a biased coin, step by step.

Run:  python3 demos/01_biased_coin.py
"""

import random

from debias import CoinExtractor, VonNeumannExtractor, entropy, extraction_rate

# --- a tiny stream, narrated -------------------------------------------------

print("Feeding H T T T H T one symbol at a time:\n")
session = CoinExtractor()
for i, sym in enumerate("HTTTHT", start=1):
    step = session.process(sym)
    note = f" -> released {step.bits}" if step.bits else ""
    print(f"  symbol {i}: {sym}  ({step.messages} node deliveries){note}")
print(f"\noutput so far: {session.output}")

# The tree remembers how it got here: labels plus per-node released bits.
print("\ntree snapshot (path: label, released bits):")
for path, node in session.snapshot().walk():
    print(f"  {path or '<root>':6s} label={node.label!r} bits={list(node.bit_log)}")

# --- why recycle at all? -----------------------------------------------------
# Plain von Neumann debiasing throws away every concordant pair.  The tree
# reuses them, and the deeper it may grow, the less entropy it wastes.

p = 0.3
print(f"\nbits per toss at bias p={p} (entropy {entropy(p):.4f}):")
for depth in (0, 1, 3, 7, 15, None):
    label = "unlimited" if depth is None else f"depth {depth:2d}"
    print(f"  {label:10s} {extraction_rate(p, depth):.4f}")

# --- a longer, measured run --------------------------------------------------

rng = random.Random(1)
n = 50_000
tree = CoinExtractor(depth_limit=7)
vn = VonNeumannExtractor()
for _ in range(n):
    sym = "H" if rng.random() < p else "T"
    tree.process(sym)
    vn.process(sym)

print(f"\n{n} tosses at p={p}:")
print(f"  von Neumann : {len(vn.output):6d} bits")
print(f"  depth 7 tree: {len(tree.output):6d} bits "
      f"({len(tree.output) / len(vn.output):.2f}x as many)")
print(f"  ones fraction in tree output: {sum(tree.output) / len(tree.output):.4f}")
