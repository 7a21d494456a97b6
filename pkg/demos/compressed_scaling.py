"""Timing normal forms of compressed and plain words.

Straight-line programs of size M describe words of length exponential in M, yet
collection works on the program directly. Plain words should scale about
linearly in their length.
"""
import math
import random
import statistics

from nilkit.cli import HEISENBERG, doubling_slp, time_normal_form
from nilkit.words import slp_length

rng = random.Random(1)

print("SLP size M, seconds")
slp = []
for M in range(10, 26, 2):
    t = time_normal_form(HEISENBERG, "slp", M, rng)
    slp.append((M, t))
    print(f"  {M:3d}  {t:.2e}   word length {slp_length(doubling_slp(M))}")

print("\nplain length L, seconds")
plain = []
for k in range(10, 17):
    t = time_normal_form(HEISENBERG, "plain", 2 ** k, rng)
    plain.append((2 ** k, t))
    print(f"  {2 ** k:6d}  {t:.2e}")
fit = statistics.linear_regression([math.log(L) for L, _ in plain], [math.log(t) for _, t in plain])
print(f"\nlog-log slope for plain words: {fit.slope:.2f}")
