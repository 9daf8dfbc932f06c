#!/usr/bin/env python3
"""Both constructive directions of the complex characterization, chained.

Failure of stable retrieval and existence of separated nearly
perpendicular pairs are two faces of the same phenomenon, and each
construction here is effective:

  leg 1: an almost-disjoint pair certifies a stability violation
         (constant above C_required for the target m, epsilon);
  leg 2: any violation that strong yields a normalized pair at
         separation >= m with perpendicularity defect < epsilon;
  leg 3: any pair that perpendicular forces a violation at constant C,
         closing the circle at a smaller scale.

Thresholds printed along the way show how much room each leg leaves.
"""

import numpy as np

from phaselat import (
    NormSpec,
    adp_to_spr_violation,
    perp_pair_to_spr_failure,
    perp_profile,
    spr_failure_to_perp_pair,
    spr_ratio,
)
from phaselat.builders import BuilderParams, delta_of_m

M, EPSILON = 0.1, 0.2


def overlap_pair(eps, norm):
    # matching bridge phases keep every ratio finite, so each threshold
    # comparison below is a real number against a real number
    u = np.array([1.0, eps, 0.0, 0.0], dtype=complex)
    v = np.array([0.0, eps, 0.0, 1.0], dtype=complex)
    return u / norm(u), v / norm(v)


def main():
    norm = NormSpec(p=np.inf)
    params = BuilderParams.from_m_eps(M, EPSILON)
    print(f"target separation m = {M}, defect epsilon = {EPSILON}")
    print(f"leg 2 needs a violation above C_required = {params.C_required:.2f}\n")

    # leg 1: overlap small enough that the certificate clears C_required
    u, v = overlap_pair(0.004, norm)
    cert = adp_to_spr_violation(u, v, norm)
    print(f"leg 1: eps' = 0.004 certifies ratio {cert.certified_ratio:.2f}")

    # leg 2: harvest the perpendicular pair from that violation
    wit = spr_failure_to_perp_pair(cert.f_prime, cert.g_prime, norm, M, EPSILON)
    print(
        f"leg 2: witness separation {wit.separation:.4f} >= {M},"
        f" perp {wit.perp:.6f} < {EPSILON}"
    )

    # leg 3: a pair below the perpendicularity threshold breaks constant C
    C = 10.0
    thr = delta_of_m(M) * M / (2.0 * C)
    u3, v3 = overlap_pair(0.5 * thr, norm)
    perp3 = norm(perp_profile(u3, v3))
    res = perp_pair_to_spr_failure(u3, v3, norm, M, C)
    rep = spr_ratio(res.f, res.g, norm)
    flag = "infinite" if rep.flag == "infinite" else f"{rep.ratio:.2f}"
    print(
        f"leg 3: perp {perp3:.6f} < threshold {thr:.6f}"
        f" forces ratio {flag} > C = {C}"
    )


if __name__ == "__main__":
    main()
