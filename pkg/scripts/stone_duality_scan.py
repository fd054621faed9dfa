#!/usr/bin/env python3
"""Count two-valued homomorphisms on powerset algebras and time the search.

Each subset algebra of an n-point set should have exactly n homomorphisms
into {0, 1}, one evaluation per point; this scans n = 0..4 by brute force.
"""

import time

from effectlogic.classical import stone_states

if __name__ == "__main__":
    for n in range(5):
        t0 = time.perf_counter()
        points = stone_states(n)
        dt = time.perf_counter() - t0
        print(f"|X| = {n}: {len(points)} states {points} in {dt * 1000:.1f} ms")
