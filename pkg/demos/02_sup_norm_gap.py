#!/usr/bin/env python3
"""A two-dimensional subspace of sup-norm C^4 where stability degrades.

The span of u = (1,1,1,0) and w = (1,i,0,1) does phase retrieval, yet
the pair (u, v) with v proportional to iu + delta*w has phase distance
on the order of delta while its perpendicularity defect only shrinks
like sqrt(delta).  No uniform stability constant survives delta -> 0.

The sweep below prints both quantities against their analytic values,
then runs the phase retrieval checker to confirm the subspace itself
still passes.
"""

import math

import numpy as np

from phaselat import (
    Ambient,
    NormSpec,
    SearchBudget,
    Subspace,
    check_pr,
    perp_profile,
    unimodular_distance,
)

DELTAS = (0.5, 0.2, 0.1, 1.0 / 99.0, 0.002)


def main():
    norm = NormSpec(p=np.inf)
    u = np.array([1, 1, 1, 0], dtype=complex)
    w = np.array([1, 1j, 0, 1], dtype=complex)

    print(f"{'delta':>10} {'perp':>12} {'sqrt(A d)':>12} {'distance':>12} {'2 A d':>12}")
    for delta in DELTAS:
        A = 1.0 / (1.0 + delta)
        v = A * (1j * u + delta * w)
        un, vn = u / norm(u), v / norm(v)
        perp = norm(perp_profile(un, vn))
        dist = unimodular_distance(un, vn, norm).distance
        print(
            f"{delta:>10.6f} {perp:>12.8f} {math.sqrt(A * delta):>12.8f}"
            f" {dist:>12.8f} {2.0 * A * delta:>12.8f}"
        )

    print("\ndistance/perp collapses like sqrt(delta); the subspace still")
    print("passes retrieval under search:")
    E = Subspace(Ambient(4, "complex", norm), np.stack([u, w]))
    verdict = check_pr(E, budget=SearchBudget(restarts=12), seed=0)
    print(f"  verdict: {verdict.verdict}")
    for m, val in sorted(verdict.min_perp_per_m.items()):
        print(f"  least perp found at separation >= {m}: {val:.4f}")


if __name__ == "__main__":
    main()
