#!/usr/bin/env python3
"""Writes a synthetic 32-core digital SOC in the ITC'02 subset format.

The published p93791 benchmark file is not redistributed here. This generator
produces an instance of the same size and a similar mix (a dozen large scan
cores, the rest small logic/memory-wrapper cores) so that the sweep tooling
can be exercised end to end. Output is deterministic for a given seed.
"""

import argparse
import random


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=93791)
    ap.add_argument("-o", "--output", default="data/p93791m_like.soc")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    lines = [
        "# Synthetic stand-in for p93791 (32 cores); generated by tools/gen_p93791_like.py",
        f"# seed {args.seed}",
        "SocName p93791m_like",
        "TotalModules 33",
        "Options Power 0",
        "",
        "Module 0 Level 0 Inputs 417 Outputs 324 Bidirs 0 ScanChains 0 TotalTests 0",
    ]
    for m in range(1, 33):
        large = m % 3 == 0 or m in (1, 20)
        if large:
            n_chains = rng.randint(11, 46)
            base = rng.randint(120, 520)
            chains = [max(1, base - rng.randint(0, base // 3)) for _ in range(n_chains)]
            patterns = rng.randint(150, 900)
            inputs, outputs, bidirs = rng.randint(40, 300), rng.randint(30, 320), rng.randint(0, 72)
        else:
            n_chains = rng.choice([0, 0, 1, 2, 4])
            chains = [rng.randint(8, 80) for _ in range(n_chains)]
            patterns = rng.randint(12, 400)
            inputs, outputs, bidirs = rng.randint(10, 200), rng.randint(8, 180), rng.randint(0, 16)
        lines.append(f"Module {m} Level 1 Inputs {inputs} Outputs {outputs} Bidirs {bidirs} TotalTests 1")
        lines.append(f"  ScanChains {n_chains}" + (" : " + " ".join(map(str, chains)) if chains else ""))
        lines.append(f"  Test 1 ScanUse 1 TamUse 1 Patterns {patterns}")
    with open(args.output, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
