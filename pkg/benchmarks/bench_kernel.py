"""Compare the compiled and pure-Python event kernels on adder transactions.

    python benchmarks/bench_kernel.py [--width 32] [--vectors 200] [--seed 0]
"""

import argparse
import time

from qdi_adders.adders import ALL_ARCHS, AdderConfig, build_adder
from qdi_adders.metrics import random_vectors
from qdi_adders.sim import KERNELS, Simulator


def time_kernel(netlist, vectors, kernel):
    sim = Simulator(netlist, kernel=kernel)
    start = time.perf_counter()
    results = [sim.run_transaction(*v) for v in vectors]
    return time.perf_counter() - start, results


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--width", type=int, default=32)
    p.add_argument("--vectors", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    vectors = random_vectors(args.width, args.vectors, args.seed)
    print(f"kernels available: {', '.join(sorted(KERNELS))}")
    print(f"{'arch':<12}{'kernel':<10}{'ms/txn':>10}{'speedup':>10}")
    for arch in ALL_ARCHS:
        span = 4 if arch.hybrid else None
        nl = build_adder(AdderConfig(arch, args.width, 4, span))
        base, ref = time_kernel(nl, vectors, "python")
        print(f"{arch.name:<12}{'python':<10}{1e3 * base / len(vectors):>10.3f}{1.0:>10.1f}")
        if "compiled" in KERNELS:
            t, res = time_kernel(nl, vectors, "compiled")
            assert res == ref, "kernels disagree"
            print(f"{arch.name:<12}{'compiled':<10}{1e3 * t / len(vectors):>10.3f}{base / t:>10.1f}")


if __name__ == "__main__":
    main()
