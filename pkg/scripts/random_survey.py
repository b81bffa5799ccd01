"""Sample valid maps on flat manifolds and tabulate the three Nielsen routes."""

import argparse
import random
import time

from nvnielsen.nielsen import fixpoint_enumerate, nielsen_averaging, nielsen_via_classes
from nvnielsen.nmap import analyze
from nvnielsen.zoo import random_flat_map


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"{'group':16s} {'n':>2s} {'orbits':10s} {'avg':>5s} {'cls':>5s} {'fix':>5s} {'sec':>6s}")
    mismatches = 0
    for _ in range(args.count):
        t0 = time.perf_counter()
        name, G, f = random_flat_map(rng)
        ind, sig = analyze(G, f)
        a = nielsen_averaging(G, f).value
        c = nielsen_via_classes(G, f, ind, sig).value
        x = fixpoint_enumerate(G, f).isolated_count
        mismatches += not (a == c == x)
        dt = time.perf_counter() - t0
        print(f"{name:16s} {f.n:2d} {str(sig.orbit_size):10s} {a:5d} {c:5d} {x:5d} {dt:6.2f}")
    print("mismatches:", mismatches)


if __name__ == "__main__":
    main()
