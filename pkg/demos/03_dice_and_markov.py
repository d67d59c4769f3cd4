"""Beyond coins: loaded dice and Markov chains.

Run:  python3 demos/03_dice_and_markov.py
CLI equivalents:
  echo "0 1 2 1 1 2 2 1 0" | debias extract --mode dice --m 3 --depth unlimited
  debias extract --mode markov --input walk.txt
"""

import random

from debias import DiceExtractor, MarkovExtractor, binarize, exit_stream

# --- a three-sided loaded die ------------------------------------------------
# Faces are binarized (here 0=TT, 1=TH, 2=HT) and each bit position feeds
# its own coin extractor, conditioned on the bits before it.

print("face words for m=3:", {f: binarize(f, 3) for f in range(3)})

faces = [0, 1, 2, 1, 1, 2, 2, 1, 0]
die = DiceExtractor(3)
print(f"\nfeeding faces {faces}:")
for i, face in enumerate(faces, start=1):
    step = die.process(face)
    if step.bits:
        print(f"  face {i} ({face}) released {step.bits}")
print(f"output: {''.join(map(str, die.output))}")
print(f"forest slots used: {sorted(die.trees) }")

# --- a two-state Markov chain ------------------------------------------------
# Every exit from a state is an i.i.d. draw from that state's row, so each
# state gets its own die extractor; deliveries lag one visit behind.

rng = random.Random(7)
matrix = [[0.2, 0.8], [0.6, 0.4]]
walk = [0]
for _ in range(20_000):
    walk.append(0 if rng.random() < matrix[walk[-1]][0] else 1)

chain = MarkovExtractor(2)
chain.process_all(walk)
print(f"\nmarkov walk of {len(walk)} steps on 2 states:")
print(f"  exits recorded per state: "
      f"{[len(exit_stream(walk, q)) for q in range(2)]}")
print(f"  parked (undelivered) exits: {chain.pending}")
print(f"  output bits: {len(chain.output)}")
print(f"  ones fraction: {sum(chain.output) / len(chain.output):.4f}")
