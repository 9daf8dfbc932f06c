#!/usr/bin/env python3
"""Pointwise functional calculus on a coordinate lattice, by example.

One fixed complex pair, and every quantity the rest of the package is
built from: moduli, meet and join, the split square root of |fg|, the
perpendicularity profile, and the sum/difference identity that computes
the profile from moduli alone.
"""

import numpy as np

from phaselat import NormSpec, abs_prod_sqrt, join, meet, modulus, perp_profile


def show(label, arr):
    vals = ", ".join(f"{x:8.5f}" for x in np.asarray(arr, dtype=float))
    print(f"  {label:<22s} [{vals}]")


def main():
    f = np.array([1.0 + 1.0j, 0.3 - 0.4j, 0.0, 2.0j])
    g = np.array([1.0 - 1.0j, 0.5j, 1.0, 0.5])
    print("pair in C^4")
    show("|f|", modulus(f))
    show("|g|", modulus(g))
    show("|f| ^ |g| (meet)", meet(modulus(f), modulus(g)))
    show("|f| v |g| (join)", join(modulus(f), modulus(g)))

    print("\nsplit square root of the modulus product")
    show("|fg|^(1/2)", abs_prod_sqrt(f, g))
    show("sqrt(join)*sqrt(meet)", np.sqrt(join(modulus(f), modulus(g)))
         * np.sqrt(meet(modulus(f), modulus(g))))

    print("\nperpendicularity profile and its modulus-only form")
    prof = perp_profile(f, g)
    s, d = modulus(f + g), modulus(f - g)
    show("perp profile", prof)
    show("sqrt(|s^2 - d^2|)/2", 0.5 * np.sqrt(np.abs(s * s - d * d)))
    resid = float(np.max(np.abs(2.0 * prof - np.sqrt(s + d) * np.sqrt(np.abs(s - d)))))
    print(f"  factored-form residual {resid:.2e}")

    print("\nlattice norms of the overlap |f| ^ |g|")
    overlap = meet(modulus(f), modulus(g))
    for p in (1.0, 2.0, 3.0, np.inf):
        print(f"  p = {p!s:>4}: {NormSpec(p=p)(overlap):.6f}")


if __name__ == "__main__":
    main()
